"""Monte Carlo error estimation, rate fitting, and convergence reports."""

import numpy as np
import pytest

import mbmint as mb
from mbmint.experiments import ExperimentConfig, estimate_l1_error, fit_rate, run_convergence


def call_config(**kw) -> ExperimentConfig:
    base = dict(
        hurst=mb.constant_hurst(0.75),
        payoff=mb.make_call_payoff(0.0),
        simulator="cholesky",
        n_grid=(64, 128, 256),
        replications=1000,
        master_seed=20250809,
    )
    base.update(kw)
    return ExperimentConfig(**base)


class TestConfigValidation:
    def test_descending_grid_rejected(self):
        with pytest.raises(ValueError):
            call_config(n_grid=(128, 64))

    def test_tiny_grid_rejected(self):
        with pytest.raises(ValueError):
            call_config(n_grid=(1, 64))

    def test_few_replications_rejected(self):
        with pytest.raises(ValueError):
            call_config(replications=99)

    def test_unknown_simulator_rejected(self):
        with pytest.raises(ValueError):
            call_config(simulator="euler")


class TestFitRate:
    def test_exact_power_law(self):
        per_n = [(n, 3.7 * n ** -0.5) for n in (64, 128, 256, 512)]
        assert fit_rate(per_n) == pytest.approx(-0.5, abs=1e-12)

    def test_constant_data(self):
        per_n = [(n, 2.0) for n in (64, 128, 256, 512)]
        assert fit_rate(per_n) == pytest.approx(0.0, abs=1e-12)

    def test_alternating_perturbation(self):
        per_n = [
            (n, 1.3 * n ** -0.5 * (1.0 + 0.1 * (-1.0) ** k))
            for k, n in enumerate((64, 128, 256, 512))
        ]
        assert fit_rate(per_n) == pytest.approx(-0.5, abs=0.08)

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            fit_rate([(64, 1.0), (128, 0.5)])

    def test_nonpositive_mean(self):
        with pytest.raises(ValueError):
            fit_rate([(64, 1.0), (128, 0.5), (256, 0.0)])


class TestEstimate:
    def test_deterministic(self):
        cfg = call_config()
        assert estimate_l1_error(cfg, 128) == estimate_l1_error(cfg, 128)

    def test_n_must_be_configured(self):
        with pytest.raises(ValueError):
            estimate_l1_error(call_config(), 77)

    def test_stderr_scaling(self):
        """Quadrupling the replications halves the standard error (within
        20% tolerance on the ratio)."""
        small = call_config(replications=1000)
        large = call_config(replications=4000)
        _, se_small = estimate_l1_error(small, 128)
        _, se_large = estimate_l1_error(large, 128)
        assert se_small / se_large == pytest.approx(2.0, rel=0.2)

    def test_relative_error_under_five_percent(self):
        cfg = call_config(n_grid=(64, 128, 256), replications=5000)
        mean, se = estimate_l1_error(cfg, 256)
        assert mean > 0.0
        assert se / mean < 0.05

    def test_sanity_envelope(self):
        """Mean gap stays inside [0, 3 phi(0)] (leading constant with slack)."""
        cfg = call_config(replications=5000, n_grid=(64, 128, 256))
        mean, _ = estimate_l1_error(cfg, 256)
        assert 0.0 <= mean <= 3.0 * mb.gaussian_partial_expectation(0.0)


class TestQuadraticExactRate:
    """For constant H and psi(x) = x, the gap is (1/2) sum (dX)^2 with mean
    exactly (1/2) n^{1-2H}: the smooth-integrand rate with zero remainder."""

    def test_mean_matches_closed_form(self):
        cfg = call_config(
            payoff=mb.make_quadratic_payoff(), replications=2000, n_grid=(64, 128, 256)
        )
        mean, se = estimate_l1_error(cfg, 256)
        expected = 0.5 * 256.0 ** -0.5
        assert abs(mean - expected) <= 3.0 * se

    def test_fitted_slope(self):
        cfg = call_config(
            payoff=mb.make_quadratic_payoff(), replications=2000, n_grid=(64, 128, 256)
        )
        rows = [(n, estimate_l1_error(cfg, n)[0]) for n in cfg.n_grid]
        assert fit_rate(rows) == pytest.approx(-0.5, abs=0.05)


class TestRunConvergence:
    def test_constant_h_report(self):
        cfg = call_config(n_grid=(64, 128, 256), replications=2000)
        report = run_convergence(cfg)
        assert report.theoretical_slope == pytest.approx(-0.5)
        assert report.verdicts.slope_two_sided
        assert report.verdicts.gaps_nonnegative
        assert report.min_gap >= -1e-12
        assert [r.n for r in report.per_n] == [64, 128, 256]
        for row in report.per_n:
            assert row.stderr > 0.0
            assert row.normalized == pytest.approx(row.mean * row.n ** 0.5)

    def test_refinement_monotonicity(self):
        """Mean gaps decrease in n up to two joint standard errors."""
        cfg = call_config(n_grid=(64, 128, 256, 512), replications=3000)
        report = run_convergence(cfg)
        for a, b in zip(report.per_n[:-1], report.per_n[1:]):
            joint = np.hypot(a.stderr, b.stderr)
            assert b.mean <= a.mean + 2.0 * joint

    def test_time_varying_one_sided(self, h_sin):
        cfg = call_config(
            hurst=h_sin,
            simulator="volterra",
            n_grid=(16, 32, 64),
            replications=500,
        )
        report = run_convergence(cfg)
        assert not report.verdicts.slope_two_sided
        assert report.verdicts.constant_pass is None
        assert report.theoretical_slope == pytest.approx(-0.2)

    def test_assumption_gate(self):
        cfg = call_config(hurst=mb.constant_hurst(0.52))
        bad = call_config(hurst=mb.affine_hurst(0.45, 0.2))
        report = run_convergence(cfg)  # valid, just slow decay
        assert report.per_n
        with pytest.raises(mb.AssumptionError):
            run_convergence(bad)

    def test_thread_count_does_not_change_results(self):
        cfg = call_config(n_grid=(64, 128, 256), replications=1000)
        r1 = run_convergence(cfg, threads=1)
        r3 = run_convergence(cfg, threads=3)
        assert r1.to_dict() == r3.to_dict()

    def test_moving_average_route(self, h_const_075):
        cfg = call_config(
            simulator="moving_average",
            n_grid=(16, 32, 64),
            replications=500,
            truncation=10.0,
        )
        report = run_convergence(cfg)
        assert report.min_gap >= -1e-12
