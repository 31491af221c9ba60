"""Time-varying Hurst exponents H: [0,1] -> (1/2, 1) and their validation.

A Hurst function carries, next to its evaluator, declared regularity data:
a Hoelder exponent ``alpha`` with constant ``holder_constant`` such that
|H_t - H_s| <= holder_constant * |t-s|^alpha, and certified extremes
``h_min``/``h_max``.  Two standing assumptions are checked on grids:

  (A1)  1/2 < min H <= max H < 1,
  (A2)  |H_t - H_s| <= holder_constant * |t-s|^alpha  with alpha in (1/2, 1].

Grid checks cannot certify Hoelder continuity of arbitrary evaluators, so
validation is a report, not an exception: downstream consumers decide
whether to refuse a failing function.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError

__all__ = [
    "HurstFunction",
    "ValidationReport",
    "constant_hurst",
    "affine_hurst",
    "sin_hurst",
    "logistic_hurst",
    "custom_hurst",
    "hurst_from_params",
    "evaluate",
    "validate_assumptions",
]

#: tolerance used by grid validation, and the dyadic resolutions at which
#: adjacent-pair Hoelder quotients are measured
VALIDATION_TOL = 1e-6
DYADIC_RESOLUTIONS = tuple(2 ** k for k in range(7, 13))
DEFAULT_GRID_SIZE = 10_000


@dataclass(frozen=True)
class HurstFunction:
    """A Hurst exponent path with declared regularity data.

    Fields
    ------
    evaluator : callable
        Vectorized map t -> H_t for t in [0, 1], values in (0, 1).
    alpha : float
        Declared Hoelder exponent, in (1/2, 1].
    holder_constant : float
        Declared constant C >= 0 with |H_t - H_s| <= C |t-s|^alpha.
    h_min, h_max : float
        Certified extremes of H over [0, 1].
    name : str
        Human-readable identifier (used in reports and path metadata).
    key : tuple or None
        Hashable identity for built-in families; enables caching of
        kernel-weight matrices and covariance factors.  None for
        user-supplied evaluators.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    alpha: float
    holder_constant: float
    h_min: float
    h_max: float
    name: str
    key: tuple | None = field(default=None)

    def __post_init__(self):
        for name in ("alpha", "holder_constant", "h_min", "h_max"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not 0.5 < self.alpha <= 1.0:
            raise DomainError(f"alpha must lie in (1/2, 1], got {self.alpha}")
        if self.holder_constant < 0.0:
            raise DomainError("holder_constant must be nonnegative")
        if not 0.0 < self.h_min <= self.h_max < 1.0:
            raise DomainError(
                f"need 0 < h_min <= h_max < 1, got [{self.h_min}, {self.h_max}]"
            )

    def __call__(self, t):
        return evaluate(self, t)

    @property
    def is_constant(self) -> bool:
        return self.h_min == self.h_max


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of grid-based checking of (A1)/(A2)."""

    a1_pass: bool
    a2_pass: bool
    declaration_consistent: bool
    h_min_measured: float
    h_max_measured: float
    holder_quotient: float
    h_min_declared: float
    h_max_declared: float
    holder_constant_declared: float
    alpha: float
    messages: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.a1_pass and self.a2_pass and self.declaration_consistent

    def to_dict(self) -> dict:
        return {
            "a1_pass": self.a1_pass,
            "a2_pass": self.a2_pass,
            "declaration_consistent": self.declaration_consistent,
            "h_min_measured": self.h_min_measured,
            "h_max_measured": self.h_max_measured,
            "holder_quotient": self.holder_quotient,
            "h_min_declared": self.h_min_declared,
            "h_max_declared": self.h_max_declared,
            "holder_constant_declared": self.holder_constant_declared,
            "alpha": self.alpha,
            "messages": list(self.messages),
        }


def evaluate(h: HurstFunction, t):
    """Evaluate H_t for scalar or array t in [0, 1]."""
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError(f"time must lie in [0, 1], got {t!r}")
    out = np.asarray(h.evaluator(arr), dtype=float)
    if np.ndim(t) == 0:
        return float(out)
    return out


# ---------------------------------------------------------------------------
# Built-in families.  Each constructor derives h_min/h_max/holder_constant
# analytically, so declared and measured values agree to grid resolution.
# ---------------------------------------------------------------------------


def constant_hurst(h: float) -> HurstFunction:
    """H_t = h.  Values h <= 1/2 are constructible (the validator flags them)
    so that degenerate test regimes, e.g. the Wiener case h = 1/2, remain
    expressible."""
    if not 0.0 < h < 1.0:
        raise DomainError(f"constant Hurst value must lie in (0, 1), got {h}")
    return HurstFunction(
        evaluator=lambda t, _h=h: np.full_like(np.asarray(t, dtype=float), _h),
        alpha=1.0,
        holder_constant=0.0,
        h_min=h,
        h_max=h,
        name=f"constant(h={h:g})",
        key=("constant", float(h)),
    )


def affine_hurst(h0: float, h1: float) -> HurstFunction:
    """H_t = h0 + h1 * t.  Extremes at the endpoints, Lipschitz constant |h1|."""
    lo, hi = sorted((h0, h0 + h1))
    if not 0.0 < lo <= hi < 1.0:
        raise DomainError(f"affine range [{lo}, {hi}] not inside (0, 1)")
    return HurstFunction(
        evaluator=lambda t, a=h0, b=h1: a + b * np.asarray(t, dtype=float),
        alpha=1.0,
        holder_constant=abs(h1),
        h_min=lo,
        h_max=hi,
        name=f"affine(h0={h0:g}, h1={h1:g})",
        key=("affine", float(h0), float(h1)),
    )


def sin_hurst(h0: float, h1: float, phase: float = 0.0) -> HurstFunction:
    """H_t = h0 + h1 * sin(2 pi t + phase).

    The argument sweeps a full period on [0, 1], so the extremes are
    h0 -+ |h1| regardless of the phase; the Lipschitz constant is 2 pi |h1|.
    """
    lo, hi = h0 - abs(h1), h0 + abs(h1)
    if not 0.0 < lo <= hi < 1.0:
        raise DomainError(f"sinusoid range [{lo}, {hi}] not inside (0, 1)")
    return HurstFunction(
        evaluator=lambda t, a=h0, b=h1, p=phase: a
        + b * np.sin(2.0 * np.pi * np.asarray(t, dtype=float) + p),
        alpha=1.0,
        holder_constant=2.0 * np.pi * abs(h1),
        h_min=lo,
        h_max=hi,
        name=f"sin(h0={h0:g}, h1={h1:g}, phase={phase:g})",
        key=("sin", float(h0), float(h1), float(phase)),
    )


def logistic_hurst(h0: float, h1: float, rate: float, midpoint: float = 0.5) -> HurstFunction:
    """Monotone ramp H_t = h0 + h1 / (1 + exp(-rate (t - midpoint))).

    Extremes at the endpoints; the steepest slope of the logistic is
    rate / 4, giving Lipschitz constant |h1| * rate / 4.
    """
    if rate <= 0.0:
        raise DomainError("logistic rate must be positive")

    def ev(t, a=h0, b=h1, r=rate, m=midpoint):
        x = np.asarray(t, dtype=float)
        return a + b / (1.0 + np.exp(-r * (x - m)))

    ends = (float(ev(0.0)), float(ev(1.0)))
    lo, hi = min(ends), max(ends)
    if not 0.0 < lo <= hi < 1.0:
        raise DomainError(f"logistic range [{lo}, {hi}] not inside (0, 1)")
    return HurstFunction(
        evaluator=ev,
        alpha=1.0,
        holder_constant=abs(h1) * rate / 4.0,
        h_min=lo,
        h_max=hi,
        name=f"logistic(h0={h0:g}, h1={h1:g}, rate={rate:g}, midpoint={midpoint:g})",
        key=("logistic", float(h0), float(h1), float(rate), float(midpoint)),
    )


def custom_hurst(
    evaluator: Callable,
    alpha: float,
    holder_constant: float,
    h_min: float,
    h_max: float,
    name: str = "custom",
) -> HurstFunction:
    """Wrap a user-supplied evaluator with declared regularity data.

    The declarations are taken on trust here; run ``validate_assumptions``
    to check them on a grid.
    """
    return HurstFunction(
        evaluator=lambda t, f=evaluator: np.asarray(f(np.asarray(t, dtype=float)), dtype=float),
        alpha=alpha,
        holder_constant=holder_constant,
        h_min=h_min,
        h_max=h_max,
        name=name,
        key=None,
    )


_FAMILIES = {
    "constant": (constant_hurst, ("h",)),
    "affine": (affine_hurst, ("h0", "h1")),
    "sin": (sin_hurst, ("h0", "h1", "phase")),
    "logistic": (logistic_hurst, ("h0", "h1", "rate", "midpoint")),
}

_FAMILY_REQUIRED = {
    "constant": ("h",),
    "affine": ("h0", "h1"),
    "sin": ("h0", "h1"),
    "logistic": ("h0", "h1", "rate"),
}


def hurst_from_params(family: str, **params) -> HurstFunction:
    """Build a built-in family by name; used by the config layer.

    Unknown families and unknown or missing parameters raise DomainError.
    """
    if family not in _FAMILIES:
        raise DomainError(
            f"unknown Hurst family {family!r}; choose from {sorted(_FAMILIES)}"
        )
    ctor, allowed = _FAMILIES[family]
    unknown = set(params) - set(allowed)
    if unknown:
        raise DomainError(
            f"unknown parameter(s) {sorted(unknown)} for Hurst family {family!r}"
        )
    missing = set(_FAMILY_REQUIRED[family]) - set(params)
    if missing:
        raise DomainError(
            f"missing parameter(s) {sorted(missing)} for Hurst family {family!r}"
        )
    return ctor(**params)


# ---------------------------------------------------------------------------
# Assumption validation
# ---------------------------------------------------------------------------


def validate_assumptions(
    h: HurstFunction,
    grid_size: int = DEFAULT_GRID_SIZE,
    tol: float = VALIDATION_TOL,
) -> ValidationReport:
    """Check (A1)/(A2) on a uniform grid plus dyadic refinements.

    Measures min/max of H on a uniform grid of ``grid_size`` points and the
    maximal empirical Hoelder quotient |H_t - H_s| / |t-s|^alpha over
    adjacent pairs at the uniform grid and at resolutions 2^7 .. 2^12.
    Failures are reported, never raised.
    """
    if grid_size < 2:
        raise DomainError("grid_size must be at least 2")

    grid = np.linspace(0.0, 1.0, grid_size)
    values = evaluate(h, grid)
    h_min_m = float(values.min())
    h_max_m = float(values.max())

    quotient = 0.0
    for res in DYADIC_RESOLUTIONS + (grid_size - 1,):
        ts = np.linspace(0.0, 1.0, res + 1)
        hv = evaluate(h, ts)
        dh = np.abs(np.diff(hv))
        dt = 1.0 / res
        quotient = max(quotient, float(dh.max()) / dt ** h.alpha)

    messages = []
    a1_pass = h.h_min > 0.5 and h.h_max < 1.0 and h_min_m > 0.5 and h_max_m < 1.0
    if not a1_pass:
        messages.append(
            "(A1) fails: need 1/2 < min H <= max H < 1, "
            f"declared [{h.h_min:g}, {h.h_max:g}], "
            f"measured [{h_min_m:g}, {h_max_m:g}]"
        )

    a2_pass = quotient <= h.holder_constant * (1.0 + tol) + 1e-15
    if not a2_pass:
        messages.append(
            "(A2) fails: empirical Hoelder quotient "
            f"{quotient:g} exceeds declared constant {h.holder_constant:g} "
            f"at exponent alpha={h.alpha:g}"
        )

    declaration_consistent = (
        h_min_m >= h.h_min - tol and h_max_m <= h.h_max + tol
    )
    if not declaration_consistent:
        messages.append(
            f"measured range [{h_min_m:g}, {h_max_m:g}] escapes declared "
            f"[{h.h_min:g}, {h.h_max:g}] beyond tolerance {tol:g}"
        )

    return ValidationReport(
        a1_pass=a1_pass,
        a2_pass=a2_pass,
        declaration_consistent=declaration_consistent,
        h_min_measured=h_min_m,
        h_max_measured=h_max_m,
        holder_quotient=quotient,
        h_min_declared=h.h_min,
        h_max_declared=h.h_max,
        holder_constant_declared=h.holder_constant,
        alpha=h.alpha,
        messages=tuple(messages),
    )
