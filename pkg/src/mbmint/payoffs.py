"""Convex payoffs and the two sides of the discretization identity.

A convex Psi with left derivative psi satisfies, for Hoelder paths of
order > 1/2 started at zero, the pathwise chain rule

    int_0^1 psi(X_s) dX_s = Psi(X_1) - Psi(X_0),

so the exact integral is computable from the endpoints alone, while the
left-endpoint Riemann sum sum_k psi(X_{t_{k-1}}) (X_{t_k} - X_{t_{k-1}})
is what a discrete scheme produces.  Their difference, the discretization
gap, is a sum over steps of convexity increments

    Psi(x) - Psi(y) - psi(y)(x - y)
        = 2 int [ (x-a)^+ - (y-a)^+ - 1_{y>a} (x-y) ] mu(da)  >=  0,

where mu is the curvature measure of Psi (atoms and/or a density) with the
factor-1/2 convention: the call (x-a0)^+ carries mu = (1/2) delta_{a0} and
|x-a0| carries mu = delta_{a0}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss

from .drivers import SamplePath
from .errors import InvariantError

__all__ = [
    "ConvexPayoff",
    "make_call_payoff",
    "make_abs_payoff",
    "make_quadratic_payoff",
    "payoff_from_params",
    "riemann_sum",
    "exact_integral",
    "discretization_gap",
    "gaps_for_paths",
    "convexity_identity_sides",
]

#: a gap below this threshold signals a non-convex payoff or a bug
GAP_HARD_FLOOR = -1e-9

_XG32, _WG32 = leggauss(32)


@dataclass(frozen=True)
class ConvexPayoff:
    """A convex function with its left derivative and curvature measure.

    ``psi`` and ``psi_left`` are vectorized; ``mu_atoms`` lists (location,
    weight) pairs with weight >= 0; ``mu_density`` (if any) is a vectorized
    nonnegative density supported on ``mu_support``.
    """

    psi: Callable[[np.ndarray], np.ndarray]
    psi_left: Callable[[np.ndarray], np.ndarray]
    mu_atoms: tuple[tuple[float, float], ...]
    mu_density: Callable[[np.ndarray], np.ndarray] | None
    mu_support: tuple[float, float] | None
    name: str

    def __post_init__(self):
        for a, w in self.mu_atoms:
            if w < 0.0:
                raise ValueError(f"atom weight must be nonnegative, got {w} at {a}")
        if (self.mu_density is None) != (self.mu_support is None):
            raise ValueError("mu_density and mu_support must be given together")


def make_call_payoff(a0: float = 0.0) -> ConvexPayoff:
    """Psi(x) = (x - a0)^+ with left derivative 1_{x > a0} and curvature
    measure (1/2) delta_{a0}.  At the kink psi(a0) = 0 (left-sidedness)."""
    return ConvexPayoff(
        psi=lambda x, a=a0: np.maximum(np.asarray(x, dtype=float) - a, 0.0),
        psi_left=lambda x, a=a0: (np.asarray(x, dtype=float) > a).astype(float),
        mu_atoms=((float(a0), 0.5),),
        mu_density=None,
        mu_support=None,
        name=f"call(a={a0:g})",
    )


def make_abs_payoff(a0: float = 0.0) -> ConvexPayoff:
    """Psi(x) = |x - a0| with left-continuous sign as derivative
    (psi(a0) = -1) and curvature measure delta_{a0}."""
    return ConvexPayoff(
        psi=lambda x, a=a0: np.abs(np.asarray(x, dtype=float) - a),
        psi_left=lambda x, a=a0: np.where(np.asarray(x, dtype=float) > a, 1.0, -1.0),
        mu_atoms=((float(a0), 1.0),),
        mu_density=None,
        mu_support=None,
        name=f"abs(a={a0:g})",
    )


def make_quadratic_payoff(support: tuple[float, float] = (-8.0, 8.0)) -> ConvexPayoff:
    """Smooth control case Psi(x) = x^2 / 2, psi(x) = x, with curvature
    density identically 1/2 on the declared support.

    The support must be wide enough for the paths at hand; values of a
    beyond +-8 contribute less than 1e-15 to Gaussian-weighted integrals.
    """
    lo, hi = support
    if not lo < hi:
        raise ValueError(f"support must be a nonempty interval, got {support}")
    return ConvexPayoff(
        psi=lambda x: 0.5 * np.asarray(x, dtype=float) ** 2,
        psi_left=lambda x: np.asarray(x, dtype=float),
        mu_atoms=(),
        mu_density=lambda a: np.full_like(np.asarray(a, dtype=float), 0.5),
        mu_support=(float(lo), float(hi)),
        name="quadratic",
    )


_PAYOFF_KINDS = {"call", "abs", "quadratic"}


def payoff_from_params(kind: str, a: float = 0.0, support=(-8.0, 8.0)) -> ConvexPayoff:
    """Build a payoff by name; used by the config layer."""
    if kind == "call":
        return make_call_payoff(a)
    if kind == "abs":
        return make_abs_payoff(a)
    if kind == "quadratic":
        return make_quadratic_payoff(tuple(support))
    raise ValueError(f"unknown payoff kind {kind!r}; choose from {sorted(_PAYOFF_KINDS)}")


# ---------------------------------------------------------------------------
# Riemann sum, exact value, gap
# ---------------------------------------------------------------------------


def riemann_sum(path: SamplePath, payoff: ConvexPayoff) -> float:
    """Left-endpoint Riemann-Stieltjes sum
    sum_{k=1}^n psi(X_{t_{k-1}}) (X_{t_k} - X_{t_{k-1}}),
    accumulated with compensated (exact) summation."""
    x = path.values
    terms = payoff.psi_left(x[:-1]) * np.diff(x)
    return math.fsum(terms.tolist())


def exact_integral(path: SamplePath, payoff: ConvexPayoff) -> float:
    """Chain-rule value Psi(X_{t_n}) - Psi(X_{t_0}) of the pathwise integral."""
    x = path.values
    return float(payoff.psi(x[-1]) - payoff.psi(x[0]))


def discretization_gap(path: SamplePath, payoff: ConvexPayoff) -> float:
    """exact_integral minus riemann_sum; almost surely nonnegative for convex
    payoffs, with floating slack no worse than -1e-12.  A value below -1e-9
    raises InvariantError (non-convexity or a bug)."""
    gap = exact_integral(path, payoff) - riemann_sum(path, payoff)
    if gap < GAP_HARD_FLOOR:
        raise InvariantError(
            f"discretization gap {gap:.6e} < {GAP_HARD_FLOOR}; "
            f"payoff {payoff.name} is not convex or the inputs are corrupted"
        )
    return gap


def gaps_for_paths(values: np.ndarray, payoff: ConvexPayoff) -> np.ndarray:
    """Vectorized gaps for a batch of paths (rows of ``values``; column 0 is
    X_0).  Uses fixed-order pairwise summation along each row, so results do
    not depend on how the batch was scheduled."""
    x = np.asarray(values, dtype=float)
    riemann = np.sum(payoff.psi_left(x[:, :-1]) * np.diff(x, axis=1), axis=1)
    exact = payoff.psi(x[:, -1]) - payoff.psi(x[:, 0])
    gaps = exact - riemann
    worst = float(gaps.min())
    if worst < GAP_HARD_FLOOR:
        raise InvariantError(
            f"discretization gap {worst:.6e} < {GAP_HARD_FLOOR} in batch; "
            f"payoff {payoff.name} is not convex or the inputs are corrupted"
        )
    return gaps


# ---------------------------------------------------------------------------
# Convexity identity
# ---------------------------------------------------------------------------


def convexity_identity_sides(payoff: ConvexPayoff, x: float, y: float) -> tuple[float, float]:
    """Both sides of the convexity identity at (x, y):

    left:   Psi(x) - Psi(y) - psi(y) (x - y)
    right:  2 int [ (x-a)^+ - (y-a)^+ - 1_{y>a} (x-y) ] mu(da)

    The atomic part is summed exactly; the density part is integrated by
    Gauss-Legendre on panels split at x and y (the integrand is piecewise
    linear in a and vanishes outside [min(x,y), max(x,y)])."""
    left = float(payoff.psi(x) - payoff.psi(y) - payoff.psi_left(y) * (x - y))

    def increment(a):
        a = np.asarray(a, dtype=float)
        return (
            np.maximum(x - a, 0.0)
            - np.maximum(y - a, 0.0)
            - (y > a) * (x - y)
        )

    right = 0.0
    for a, w in payoff.mu_atoms:
        right += w * float(increment(a))
    if payoff.mu_density is not None:
        lo = max(payoff.mu_support[0], min(x, y))
        hi = min(payoff.mu_support[1], max(x, y))
        cuts = sorted({lo, hi, min(max(y, lo), hi)})
        for a, b in zip(cuts[:-1], cuts[1:]):
            if b <= a:
                continue
            mid, half = 0.5 * (a + b), 0.5 * (b - a)
            nodes = mid + half * _XG32
            right += half * float(
                np.sum(_WG32 * payoff.mu_density(nodes) * increment(nodes))
            )
    return left, 2.0 * right
