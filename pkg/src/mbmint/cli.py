"""Command-line front end.

Subcommands: validate | simulate | converge | constant | lemmas.
Exit codes: 0 success, 1 domain or verdict failure, 2 usage/parse error.
All numeric output uses %.17g so runs are byte-reproducible.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import drivers, experiments, theory
from .config import load_config
from .errors import ConfigError, MbmintError
from .hurst import validate_assumptions

__all__ = ["main"]


def _g(x: float) -> str:
    return format(float(x), ".17g")


def cmd_validate(args) -> int:
    app = load_config(args.config)
    h = app.experiment.hurst
    report = validate_assumptions(h, grid_size=args.grid_size)
    print(f"hurst: {h.name}")
    print(f"measured H_min = {_g(report.h_min_measured)}")
    print(f"measured H_max = {_g(report.h_max_measured)}")
    print(
        f"Hoelder quotient = {_g(report.holder_quotient)} "
        f"(declared constant {_g(report.holder_constant_declared)} "
        f"at alpha = {_g(report.alpha)})"
    )
    print(f"(A1) {'pass' if report.a1_pass else 'FAIL'}")
    print(f"(A2) {'pass' if report.a2_pass else 'FAIL'}")
    print(f"declaration consistent: {'yes' if report.declaration_consistent else 'NO'}")
    for msg in report.messages:
        print(f"  - {msg}")
    return 0 if report.ok else 1


def cmd_simulate(args) -> int:
    app = load_config(args.config)
    cfg = app.experiment
    n = args.n if args.n is not None else cfg.n_grid[0]
    seed = args.seed if args.seed is not None else cfg.master_seed
    rng = np.random.default_rng(np.random.SeedSequence(entropy=(seed, n, 0)))

    if cfg.simulator == "volterra":
        weights = drivers.build_kernel_weights(cfg.hurst, n, cfg.oversample)
        path = drivers.simulate_volterra(weights, rng)
    elif cfg.simulator == "cholesky":
        path = drivers.simulate_cholesky(cfg.hurst, n, rng)
    else:
        path = drivers.simulate_moving_average(
            cfg.hurst, n, cfg.truncation, rng, cfg.oversample
        )

    out = Path(args.out) if args.out else Path(app.output.dir) / app.output.path
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("t,x\n")
        for t, x in zip(path.times, path.values):
            fh.write(f"{_g(t)},{_g(x)}\n")
    print(f"wrote {n + 1} rows to {out}")
    if "isometry_max_rel_dev" in path.info:
        print(
            "isometry check: max relative deviation "
            f"{_g(path.info['isometry_max_rel_dev'])}"
        )
    else:
        print("exact-covariance sampler: diagonal matches t^{2H_t} by construction")
    if "truncation_deficit_at_1" in path.info:
        print(
            f"truncation {_g(path.info['truncation'])}: variance deficit at t=1 "
            f"= {_g(path.info['truncation_deficit_at_1'])}"
        )
    return 0


def cmd_converge(args) -> int:
    app = load_config(args.config)
    cfg = app.experiment
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, master_seed=args.seed)
    report = experiments.run_convergence(cfg, threads=args.threads)

    out_dir = Path(args.out) if args.out else Path(app.output.dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report_path = out_dir / app.output.report
    with open(report_path, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    errors_path = out_dir / app.output.errors
    with open(errors_path, "w", encoding="utf-8") as fh:
        fh.write("n,mean,stderr,normalized\n")
        for row in report.per_n:
            fh.write(
                f"{row.n},{_g(row.mean)},{_g(row.stderr)},{_g(row.normalized)}\n"
            )

    for row in report.per_n:
        print(
            f"n={row.n}: mean={_g(row.mean)} stderr={_g(row.stderr)} "
            f"normalized={_g(row.normalized)}"
        )
    print(
        f"fitted slope {_g(report.fitted_slope)} vs theoretical "
        f"{_g(report.theoretical_slope)} "
        f"({'two-sided' if report.verdicts.slope_two_sided else 'one-sided'})"
    )
    print(f"leading constant (theory) = {_g(report.leading_constant_theory)}")
    v = report.verdicts
    print(f"verdict slope: {'pass' if v.slope_pass else 'FAIL'}")
    if v.constant_pass is not None:
        print(f"verdict constant: {'pass' if v.constant_pass else 'FAIL'}")
    print(f"verdict gaps nonnegative: {'pass' if v.gaps_nonnegative else 'FAIL'}")
    print(f"wrote {report_path} and {errors_path}")
    return 0 if v.all_pass else 1


def cmd_constant(args) -> int:
    app = load_config(args.config)
    cfg = app.experiment
    exps = theory.rate_exponents(
        cfg.hurst, cfg.delta_htilde, force=cfg.force_assumptions
    )
    points = [a for a, _ in cfg.payoff.mu_atoms]
    if args.a is not None:
        points.append(args.a)
    if not points:
        points = [0.0]
    inner = {
        _g(a): theory.leading_constant_inner(cfg.hurst, a) for a in points
    }
    payload = {
        "hurst": cfg.hurst.name,
        "payoff": cfg.payoff.name,
        "inner": inner,
        "leading_constant": theory.leading_constant(cfg.payoff, cfg.hurst),
        "exponents": exps.to_dict(),
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def _parse_floats(text: str, what: str) -> tuple[float, ...]:
    items = [piece for piece in text.split(",") if piece.strip()]
    if not items:
        raise ConfigError(f"empty {what} grid")
    try:
        return tuple(float(x) for x in items)
    except ValueError as exc:
        raise ConfigError(f"bad {what} grid {text!r}: {exc}") from exc


def cmd_lemmas(args) -> int:
    grid_a = _parse_floats(args.a_grid, "a") if args.a_grid is not None else None
    grid_s = _parse_floats(args.s_grid, "s") if args.s_grid is not None else None
    big_a = _parse_floats(args.big_a_grid, "a") if args.big_a_grid is not None else None

    bound = args.bound if args.bound is not None else theory.GAUSSIAN_SCALING_BOUND
    scaling = theory.verify_gaussian_scaling_bound(
        args.mu, grid_a=grid_a, grid_s=grid_s, bound=bound
    )
    print(
        f"gaussian scaling bound (mu={_g(args.mu)}): max ratio "
        f"{_g(scaling.max_ratio)} vs bound {_g(scaling.bound)} over "
        f"{scaling.n_checked} points -> {'pass' if scaling.passed else 'VIOLATION'}"
    )

    integral = theory.verify_power_exponential_integral_bound(
        args.lam, args.mu, grid_a=big_a
    )
    print(
        f"power-exponential integral (lam={_g(args.lam)}, mu={_g(args.mu)}): "
        f"sup ratio {_g(integral.sup_ratio)} over |a| in "
        f"[{_g(min(integral.grid_a))}, {_g(max(integral.grid_a))}] -> "
        f"{'bounded' if integral.passed else 'VIOLATION'}"
    )
    print(
        f"  ratio at largest |a| = {_g(integral.limit_empirical)}; "
        f"analytic large-a limit = {_g(integral.limit_analytic)}"
    )
    return 0 if scaling.passed and integral.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mbmint",
        description=(
            "Simulate multifractional Brownian motion and measure the L1 "
            "convergence rate of left-endpoint Riemann sums for convex payoffs."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the Hurst assumptions (A1)/(A2)")
    p.add_argument("config")
    p.add_argument("--grid-size", type=int, default=10_000)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("simulate", help="write one sample path as CSV")
    p.add_argument("config")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("converge", help="run the Monte Carlo convergence study")
    p.add_argument("config")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("constant", help="print the leading constant and exponents")
    p.add_argument("config")
    p.add_argument("--a", type=float, default=None)
    p.set_defaults(func=cmd_constant)

    p = sub.add_parser("lemmas", help="run the numeric inequality verifiers")
    p.add_argument("--mu", type=float, default=0.75)
    p.add_argument("--lam", type=float, default=-2.26)
    p.add_argument("--a-grid", default=None, help="comma-separated |a| <= 1 grid")
    p.add_argument("--s-grid", default=None, help="comma-separated s > 0 grid")
    p.add_argument(
        "--big-a-grid", default=None, help="comma-separated |a| >= 1 grid"
    )
    p.add_argument("--bound", type=float, default=None)
    p.set_defaults(func=cmd_lemmas)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MbmintError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
