"""Kernel-product covariance of the Volterra process."""

import numpy as np
import pytest

import mbmint as mb
from mbmint.drivers import cholesky_factor, covariance_matrix, covariance_volterra
from mbmint.errors import DomainError


class TestCovarianceVolterra:
    def test_zero_time_gives_zero(self, h_const_075):
        assert covariance_volterra(h_const_075, 0.0, 0.5) == 0.0
        assert covariance_volterra(h_const_075, 0.5, 0.0) == 0.0

    def test_diagonal_matches_variance_law(self, h_const_075):
        val = covariance_volterra(h_const_075, 0.5, 0.5)
        assert val == pytest.approx(0.5 ** 1.5, rel=1e-4)

    def test_cross_matches_constant_h_closed_form(self, h_const_075):
        """Cov(X_1, X_{1/2}) = (1 + 0.5^{1.5} - 0.5^{1.5})/2 = 1/2."""
        val = covariance_volterra(h_const_075, 1.0, 0.5)
        assert val == pytest.approx(0.5, rel=1e-4)
        assert covariance_volterra(h_const_075, 0.25, 0.75) == pytest.approx(
            mb.constant_h_covariance(0.75, 0.25, 0.75), rel=1e-4
        )

    def test_time_varying_diagonal(self, h_sin):
        for t in (0.25, 0.5, 0.9):
            H = float(h_sin(t))
            assert covariance_volterra(h_sin, t, t) == pytest.approx(
                t ** (2 * H), rel=1e-4
            )

    def test_symmetry(self, h_sin):
        a = covariance_volterra(h_sin, 0.75, 0.25)
        b = covariance_volterra(h_sin, 0.25, 0.75)
        assert a == pytest.approx(b, rel=1e-12)

    @pytest.mark.parametrize("t,u", [(-0.1, 0.5), (0.5, 1.2)])
    def test_domain(self, h_const_075, t, u):
        with pytest.raises(DomainError):
            covariance_volterra(h_const_075, t, u)


class TestCovarianceMatrix:
    def test_constant_h_uses_closed_form(self, h_const_075):
        cov = covariance_matrix(h_const_075, 16)
        t = np.arange(1, 17) / 16
        expected = mb.constant_h_covariance(0.75, t[:, None], t[None, :])
        assert np.allclose(cov, expected, rtol=1e-14)

    def test_time_varying_symmetric_positive_definite(self, h_sin):
        cov = covariance_matrix(h_sin, 8)
        assert np.array_equal(cov, cov.T)
        L = cholesky_factor(cov)
        assert np.all(np.isfinite(L))
        # marginal variances on the diagonal
        t = np.arange(1, 9) / 8
        target = t ** (2 * h_sin(t))
        assert np.allclose(np.diag(cov), target, rtol=1e-4)
