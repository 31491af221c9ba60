"""Convex payoffs, the Riemann/exact split, and gap nonnegativity."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

import mbmint as mb
from mbmint.errors import InvariantError
from mbmint.payoffs import gaps_for_paths


def make_path(values) -> mb.SamplePath:
    vals = np.asarray(values, dtype=float)
    return mb.SamplePath(n=len(vals) - 1, values=vals, hurst_id="test", simulator_id="test")


class TestCallPayoff:
    def test_values(self):
        p = mb.make_call_payoff(1.5)
        assert p.psi(1.5) == 0.0
        assert p.psi(2.5) == 1.0

    def test_left_derivative_at_kink(self):
        p = mb.make_call_payoff(1.5)
        assert p.psi_left(1.5) == 0.0
        assert p.psi_left(1.5 + 1e-12) == 1.0

    def test_curvature_measure(self):
        p = mb.make_call_payoff(0.0)
        assert p.mu_atoms == ((0.0, 0.5),)

    @pytest.mark.parametrize("x,y", [(1.0, -1.0), (0.3, 0.7), (2.0, 0.0), (-1.0, -2.0)])
    def test_convexity_identity_exact(self, x, y):
        p = mb.make_call_payoff(0.0)
        left, right = mb.convexity_identity_sides(p, x, y)
        assert left == pytest.approx(right, abs=1e-14)
        assert left >= 0.0


class TestAbsPayoff:
    def test_left_derivative_left_continuous(self):
        p = mb.make_abs_payoff(0.0)
        assert p.psi(0.0) == 0.0
        assert p.psi_left(0.0) == -1.0
        assert p.psi_left(1e-12) == 1.0

    def test_hand_identity(self):
        # x=1, y=-1, a0=0: 1 - 1 - (-1)(2) = 2 and 2[1 - 0 - 0] = 2
        p = mb.make_abs_payoff(0.0)
        left, right = mb.convexity_identity_sides(p, 1.0, -1.0)
        assert left == 2.0
        assert right == 2.0

    def test_total_mass_one(self):
        p = mb.make_abs_payoff(3.0)
        assert sum(w for _, w in p.mu_atoms) == 1.0


class TestQuadraticPayoff:
    def test_values(self):
        p = mb.make_quadratic_payoff()
        assert p.psi(2.0) == 2.0
        assert p.psi_left(2.0) == 2.0

    def test_hand_identity(self):
        # (x, y) = (1, 0): 1/2 = 2 * int_0^1 (1-a)/2 da
        p = mb.make_quadratic_payoff()
        left, right = mb.convexity_identity_sides(p, 1.0, 0.0)
        assert left == pytest.approx(0.5, abs=1e-14)
        assert right == pytest.approx(0.5, abs=1e-12)

    def test_gaussian_weighted_mass(self):
        """int phi(a) d mu(a) over the default support equals 1/2 to 1e-8
        (the density is 1/2 and phi integrates to one)."""
        p = mb.make_quadratic_payoff()
        lo, hi = p.mu_support
        val, err = quad(
            lambda a: float(p.mu_density(a)) * mb.gaussian_partial_expectation(a),
            lo,
            hi,
        )
        assert err < 1e-10
        assert val == pytest.approx(0.5, abs=1e-8)


class TestRiemannAndExact:
    def test_constant_path(self):
        p = make_path([0.0, 0.0, 0.0])
        call = mb.make_call_payoff(0.0)
        assert mb.riemann_sum(p, call) == 0.0
        assert mb.discretization_gap(p, call) == 0.0

    def test_hand_example(self):
        # psi(0)*(1-0) + psi(1)*(0.5-1) = -0.5; exact = 0.5; gap = 1.0
        p = make_path([0.0, 1.0, 0.5])
        call = mb.make_call_payoff(0.0)
        assert mb.riemann_sum(p, call) == -0.5
        assert mb.exact_integral(p, call) == 0.5
        assert mb.discretization_gap(p, call) == 1.0

    def test_exact_endpoint_cases(self):
        call = mb.make_call_payoff(0.0)
        assert mb.exact_integral(make_path([0.0, 1.0, 2.0]), call) == 2.0
        assert mb.exact_integral(make_path([0.0, 0.5, -1.0]), call) == 0.0

    def test_quadratic_riemann_against_loop(self):
        rng = np.random.default_rng(123)
        x = np.concatenate([[0.0], np.cumsum(rng.standard_normal(200)) * 0.1])
        p = make_path(x)
        quad_payoff = mb.make_quadratic_payoff()
        direct = 0.0
        for k in range(1, len(x)):
            direct += x[k - 1] * (x[k] - x[k - 1])
        assert mb.riemann_sum(p, quad_payoff) == pytest.approx(direct, abs=1e-12)

    def test_telescoping(self):
        rng = np.random.default_rng(5)
        x = np.concatenate([[0.0], np.cumsum(rng.standard_normal(300)) * 0.05])
        p = make_path(x)
        for payoff in (mb.make_call_payoff(0.1), mb.make_abs_payoff(-0.2),
                       mb.make_quadratic_payoff()):
            r = mb.riemann_sum(p, payoff)
            e = mb.exact_integral(p, payoff)
            g = mb.discretization_gap(p, payoff)
            assert r + g == pytest.approx(e, abs=1e-12)

    def test_batch_matches_scalar(self):
        rng = np.random.default_rng(8)
        xs = np.cumsum(rng.standard_normal((50, 33)) * 0.2, axis=1)
        xs[:, 0] = 0.0
        call = mb.make_call_payoff(0.0)
        batch = gaps_for_paths(xs, call)
        for row, g in zip(xs, batch):
            assert mb.discretization_gap(make_path(row), call) == pytest.approx(g, abs=1e-12)


class TestGapNonnegativity:
    def test_monte_carlo_sweep(self):
        """1e5 random-walk paths, all payoffs: min gap >= -1e-12."""
        rng = np.random.default_rng(20240809)
        xs = np.cumsum(rng.standard_normal((100_000, 33)) * 32 ** -0.75, axis=1)
        xs[:, 0] = 0.0
        worst = np.inf
        for payoff in (
            mb.make_call_payoff(0.0),
            mb.make_call_payoff(0.3),
            mb.make_abs_payoff(-0.1),
            mb.make_quadratic_payoff(),
        ):
            worst = min(worst, float(gaps_for_paths(xs, payoff).min()))
        assert worst >= -1e-12

    def test_nonconvex_payoff_detected(self):
        concave = mb.ConvexPayoff(
            psi=lambda x: -0.5 * np.asarray(x, dtype=float) ** 2,
            psi_left=lambda x: -np.asarray(x, dtype=float),
            mu_atoms=(),
            mu_density=None,
            mu_support=None,
            name="concave",
        )
        p = make_path([0.0, 1.0, 2.0, 0.5])
        with pytest.raises(InvariantError):
            mb.discretization_gap(p, concave)

    @given(
        steps=st.lists(st.floats(-3.0, 3.0), min_size=2, max_size=40),
        a0=st.floats(-2.0, 2.0),
    )
    @settings(max_examples=200, deadline=None)
    def test_property_any_path_any_kink(self, steps, a0):
        x = np.concatenate([[0.0], np.cumsum(steps)])
        p = make_path(x)
        for payoff in (mb.make_call_payoff(a0), mb.make_abs_payoff(a0)):
            assert mb.discretization_gap(p, payoff) >= -1e-12

    @given(x=st.floats(-5.0, 5.0), y=st.floats(-5.0, 5.0), a0=st.floats(-4.0, 4.0))
    @settings(max_examples=300, deadline=None)
    def test_property_identity_and_sign(self, x, y, a0):
        payoff = mb.make_abs_payoff(a0)
        left, right = mb.convexity_identity_sides(payoff, x, y)
        assert left == pytest.approx(right, abs=1e-10)
        assert left >= -1e-12


class TestDerivativeMonotonicity:
    @pytest.mark.parametrize(
        "payoff",
        [mb.make_call_payoff(0.4), mb.make_abs_payoff(-1.0), mb.make_quadratic_payoff()],
        ids=lambda p: p.name,
    )
    def test_psi_left_nondecreasing(self, payoff):
        grid = np.linspace(-6.0, 6.0, 1000)
        vals = payoff.psi_left(grid)
        assert np.all(np.diff(vals) >= 0.0)
