"""Monte Carlo estimation of the L^1 discretization error and rate fitting.

The gap between the pathwise integral and its left-endpoint Riemann sum is
almost surely nonnegative for convex payoffs, so the L^1 error equals the
plain Monte Carlo mean of per-path gaps; an assertion guards that
substitution on every path.

Reproducibility: path p of grid size n draws from an independent generator
seeded by (master_seed, n, p), batches use a fixed chunk size, and all
reductions are fixed-order pairwise sums, so results are bit-identical no
matter how many workers run the per-n tasks.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import drivers, theory
from .errors import AssumptionError
from .hurst import HurstFunction, validate_assumptions
from .payoffs import ConvexPayoff, gaps_for_paths

__all__ = [
    "ExperimentConfig",
    "PerGridResult",
    "Verdicts",
    "RateReport",
    "estimate_l1_error",
    "fit_rate",
    "run_convergence",
]

SIMULATORS = ("volterra", "cholesky", "moving_average")

#: paths per batch; fixed so that the issued matrix products (and hence the
#: floating-point results) do not depend on scheduling or worker count
CHUNK = 1024


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one convergence experiment."""

    hurst: HurstFunction
    payoff: ConvexPayoff
    simulator: str
    n_grid: tuple[int, ...]
    replications: int
    master_seed: int
    oversample: int = 8
    truncation: float = 10.0
    delta_htilde: float = 1e-3
    slope_tol: float = 0.10
    const_tol: float = 0.25
    force_assumptions: bool = False

    def __post_init__(self):
        if self.simulator not in SIMULATORS:
            raise ValueError(
                f"unknown simulator {self.simulator!r}; choose from {SIMULATORS}"
            )
        grid = tuple(self.n_grid)
        if len(grid) == 0 or any(n < 2 for n in grid):
            raise ValueError("n_grid entries must all be >= 2")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("n_grid must be strictly ascending")
        object.__setattr__(self, "n_grid", grid)
        if self.replications < 100:
            raise ValueError("replications must be >= 100")

    def summary(self) -> dict:
        return {
            "hurst": self.hurst.name,
            "payoff": self.payoff.name,
            "simulator": self.simulator,
            "n_grid": list(self.n_grid),
            "replications": self.replications,
            "master_seed": self.master_seed,
            "oversample": self.oversample,
            "truncation": self.truncation,
            "delta_htilde": self.delta_htilde,
            "slope_tol": self.slope_tol,
            "const_tol": self.const_tol,
        }


def _sampler(config: ExperimentConfig, n: int):
    """Return (number of normals per path, batch map Z -> path values)."""
    if config.simulator == "volterra":
        w = drivers.build_kernel_weights(config.hurst, n, config.oversample)
        return w.m, lambda z: drivers.volterra_paths(w, z)
    if config.simulator == "cholesky":
        L = drivers.cholesky_factor_for(config.hurst, n)
        return n, lambda z: drivers.cholesky_paths(L, z)
    w = drivers.build_moving_average_weights(
        config.hurst, n, config.truncation, config.oversample
    )
    return w.m, lambda z: drivers.moving_average_paths(w, z)


def _path_gaps(config: ExperimentConfig, n: int) -> np.ndarray:
    """Per-path discretization gaps, in path-index order."""
    m, paths = _sampler(config, n)
    M = config.replications
    gaps = np.empty(M)
    for start in range(0, M, CHUNK):
        stop = min(start + CHUNK, M)
        z = np.empty((stop - start, m))
        for p in range(start, stop):
            rng = np.random.default_rng(
                np.random.SeedSequence(entropy=(config.master_seed, n, p))
            )
            z[p - start] = rng.standard_normal(m)
        x = paths(z)
        gaps[start:stop] = gaps_for_paths(x, config.payoff)
    return gaps


def estimate_l1_error(config: ExperimentConfig, n: int) -> tuple[float, float]:
    """Monte Carlo mean and standard error of the gap at grid size n.

    Deterministic given (config, master_seed); nonnegativity of every gap is
    asserted inside the batch evaluation.
    """
    if n not in config.n_grid:
        raise ValueError(f"n={n} is not in the configured grid {config.n_grid}")
    gaps = _path_gaps(config, n)
    mean = float(np.sum(gaps) / len(gaps))
    var = float(np.sum((gaps - mean) ** 2) / (len(gaps) - 1))
    return mean, float(np.sqrt(var / len(gaps)))


def fit_rate(per_n) -> float:
    """Ordinary least-squares slope of log(mean) against log(n).

    ``per_n`` is a sequence of (n, mean) pairs; needs at least three points
    with strictly positive means.
    """
    pairs = [(int(n), float(m)) for n, m in per_n]
    if len(pairs) < 3:
        raise ValueError("need at least 3 grid sizes to fit a rate")
    if any(m <= 0.0 for _, m in pairs):
        raise ValueError("all means must be positive to fit a log-log slope")
    logn = np.log([n for n, _ in pairs])
    logm = np.log([m for _, m in pairs])
    return float(np.polyfit(logn, logm, 1)[0])


@dataclass(frozen=True)
class PerGridResult:
    n: int
    mean: float
    stderr: float
    normalized: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "mean": self.mean,
            "stderr": self.stderr,
            "normalized": self.normalized,
        }


@dataclass(frozen=True)
class Verdicts:
    slope_pass: bool
    slope_two_sided: bool
    constant_pass: bool | None
    gaps_nonnegative: bool
    slope_tol: float
    const_tol: float

    @property
    def all_pass(self) -> bool:
        checks = [self.slope_pass, self.gaps_nonnegative]
        if self.constant_pass is not None:
            checks.append(self.constant_pass)
        return all(checks)

    def to_dict(self) -> dict:
        return {
            "slope_pass": self.slope_pass,
            "slope_two_sided": self.slope_two_sided,
            "constant_pass": self.constant_pass,
            "gaps_nonnegative": self.gaps_nonnegative,
            "slope_tol": self.slope_tol,
            "const_tol": self.const_tol,
            "all_pass": self.all_pass,
        }


@dataclass(frozen=True)
class RateReport:
    """Estimated errors per grid size with fitted and theoretical rates."""

    per_n: tuple[PerGridResult, ...]
    fitted_slope: float
    theoretical_slope: float
    leading_constant_theory: float
    exponents: theory.RateExponents
    verdicts: Verdicts
    min_gap: float
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "per_n": [r.to_dict() for r in self.per_n],
            "fitted_slope": self.fitted_slope,
            "theoretical_slope": self.theoretical_slope,
            "leading_constant_theory": self.leading_constant_theory,
            "exponents": self.exponents.to_dict(),
            "verdicts": self.verdicts.to_dict(),
            "min_gap": self.min_gap,
            "config": self.config,
        }


def run_convergence(config: ExperimentConfig, threads: int = 1) -> RateReport:
    """Estimate the L^1 error on every grid size, fit the empirical rate and
    compare against the predicted exponents and leading constant.

    Verdicts: (i) the fitted slope matches -leading_exponent within
    slope_tol, two-sided when the lower-bound conditions hold and one-sided
    (at least as fast) otherwise; (ii) when two-sided, the normalized error
    n^{leading_exponent} * mean at the largest n is within const_tol relative
    of the leading constant; (iii) no path produced a gap below -1e-12.

    ``threads`` caps workers across grid sizes; it cannot change any number
    in the report.
    """
    if not config.force_assumptions:
        report = validate_assumptions(config.hurst)
        if not report.ok:
            raise AssumptionError(
                "Hurst function fails validation: " + "; ".join(report.messages)
            )
    exps = theory.rate_exponents(
        config.hurst, config.delta_htilde, force=config.force_assumptions
    )
    lead = theory.leading_constant(config.payoff, config.hurst)

    def one(n: int):
        gaps = _path_gaps(config, n)
        mean = float(np.sum(gaps) / len(gaps))
        var = float(np.sum((gaps - mean) ** 2) / (len(gaps) - 1))
        return n, mean, float(np.sqrt(var / len(gaps))), float(gaps.min())

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one, config.n_grid))
    else:
        rows = [one(n) for n in config.n_grid]

    per_n = tuple(
        PerGridResult(
            n=n,
            mean=mean,
            stderr=stderr,
            normalized=mean * n ** exps.leading_exponent,
        )
        for n, mean, stderr, _ in rows
    )
    min_gap = min(r[3] for r in rows)
    fitted = fit_rate([(r.n, r.mean) for r in per_n])
    theoretical = -exps.leading_exponent

    if exps.lower_bound_applicable:
        slope_pass = abs(fitted - theoretical) <= config.slope_tol
        rel = abs(per_n[-1].normalized - lead) / lead
        constant_pass = bool(rel <= config.const_tol)
    else:
        slope_pass = fitted <= theoretical + config.slope_tol
        constant_pass = None

    verdicts = Verdicts(
        slope_pass=bool(slope_pass),
        slope_two_sided=bool(exps.lower_bound_applicable),
        constant_pass=constant_pass,
        gaps_nonnegative=bool(min_gap >= -1e-12),
        slope_tol=config.slope_tol,
        const_tol=config.const_tol,
    )
    return RateReport(
        per_n=per_n,
        fitted_slope=fitted,
        theoretical_slope=theoretical,
        leading_constant_theory=lead,
        exponents=exps,
        verdicts=verdicts,
        min_gap=min_gap,
        config=config.summary(),
    )
