import numpy as np
import pytest

from strip_helmholtz.errors import EtaZero, OnBranchCut
from strip_helmholtz.kernel import (KernelContext, TransformedForcing, dispersion_even, dispersion_full,
                                    dispersion_tilde, fundamental_pair, green_function, h_terms,
                                    lambda_coefficients, zeta_branch)
from strip_helmholtz.oracle import dispersion_tilde_mp
from tests.helpers.configs import case_i_membrane, membrane, plate

# sixth-order central stencils
D1 = (np.array([-1, 9, -45, 0, 45, -9, 1]) / 60, np.arange(-3, 4))
D2 = (np.array([2, -27, 270, -490, 270, -27, 2]) / 180, np.arange(-3, 4))


def derivative(func, y, h=1e-3, stencil=D1, order=1):
    weights, offsets = stencil
    return sum(w * func(y + o * h) for w, o in zip(weights, offsets)) / h ** order


class TestZetaBranch:

    def test_value_at_zero(self):
        k = 1 + 0.1j
        assert zeta_branch(0, k) == pytest.approx(-1j * k)

    @pytest.mark.parametrize("eta", [0.3, -2.0 + 0.5j, 10.0, 1e3j])
    def test_square(self, eta):
        k = 1 + 0.1j
        assert zeta_branch(eta, k) ** 2 == pytest.approx(eta ** 2 - k ** 2, rel=1e-12)

    def test_continuous_along_real_axis(self):
        """
            沿实轴从 0 到 10 逐步追踪，没有跳跃
        """
        k = 1 + 0.1j
        eta = np.arange(0, 10 + 1e-3, 1e-3)
        zeta = zeta_branch(eta, k)
        assert np.max(np.abs(np.diff(zeta))) < 1e-2
        assert zeta[-1] == pytest.approx(zeta_branch(10.0, k))

    def test_on_cut(self):
        k = 1 + 0.1j
        with pytest.raises(OnBranchCut):
            zeta_branch(2 * k, k)


class TestDispersion:

    def test_tilde_matches_extended_precision(self):
        config = case_i_membrane()
        ctx = KernelContext(config)
        zeta = 0.3 + 0.2j
        expected = complex(dispersion_tilde_mp(zeta, config))
        assert abs(dispersion_tilde(zeta, ctx) - expected) < 1e-12 * abs(expected)

    @pytest.mark.parametrize("factory", [case_i_membrane, plate])
    def test_full_equals_scaled_tilde(self, factory):
        ctx = KernelContext(factory())
        eta = 0.7 + 0.3j
        zeta = ctx.zeta(eta)
        d0, d1 = ctx.wall_denominator(0, eta), ctx.wall_denominator(1, eta)
        full = dispersion_full(eta, ctx)
        assert abs(full - d0 * d1 * dispersion_tilde(zeta, ctx)) < 1e-11 * abs(full)

    def test_even_function(self):
        ctx = KernelContext(case_i_membrane())
        eta = np.array([0.4 + 0.2j, 3.0 - 1.0j, 1e-6 + 0j])
        assert np.allclose(dispersion_even(eta, ctx), dispersion_even(-eta, ctx), rtol=1e-12)
        assert dispersion_even(eta[0], ctx) == pytest.approx(dispersion_full(eta[0], ctx) / ctx.zeta(eta[0]),
                                                             rel=1e-12)

    def test_scaled_form(self):
        ctx = KernelContext(membrane())
        mantissa, exponent = dispersion_tilde(2.0 + 0.5j, ctx, scaled=True)
        assert mantissa * np.exp(exponent) == pytest.approx(dispersion_tilde(2.0 + 0.5j, ctx), rel=1e-13)


class TestGreenFunction:

    @pytest.mark.parametrize("s", [0.2, 0.55, 0.9])
    def test_wall_functionals(self, s):
        ctx = KernelContext(case_i_membrane())
        eta = 0.8 + 0.1j
        m0, m1 = ctx.mu_tilde(0, eta), ctx.mu_tilde(1, eta)
        g = lambda y: green_function(y, s, eta, ctx)
        u0 = -derivative(g, 0.0) + m0 * g(0.0)
        u1 = derivative(g, ctx.a) + m1 * g(ctx.a)
        scale = abs(g(0.0)) + abs(g(ctx.a)) + 1
        assert abs(u0) < 1e-8 * scale
        assert abs(u1) < 1e-8 * scale

    def test_ode_residual(self):
        ctx = KernelContext(case_i_membrane())
        eta, s = 1.5 - 0.2j, 0.4
        zeta = ctx.zeta(eta)
        g = lambda y: green_function(y, s, eta, ctx)
        for y in (0.1, 0.7, 0.95):
            residual = derivative(g, y, stencil=D2, order=2) - zeta ** 2 * g(y)
            assert abs(residual) < 1e-6 * (1 + abs(zeta ** 2 * g(y)))

    def test_fundamental_pair(self):
        ctx = KernelContext(case_i_membrane())
        eta = 0.5 + 0.5j
        m0, m1 = ctx.mu_tilde(0, eta), ctx.mu_tilde(1, eta)
        for j in (0, 1):
            phi = lambda y: fundamental_pair(y, eta, ctx)[j]
            u0 = -derivative(phi, 0.0) + m0 * phi(0.0)
            u1 = derivative(phi, ctx.a) + m1 * phi(ctx.a)
            assert abs(u0 - (j == 0)) < 1e-8
            assert abs(u1 - (j == 1)) < 1e-8


class TestLambda:

    def test_eta_zero(self):
        with pytest.raises(EtaZero):
            lambda_coefficients(0.0, KernelContext(membrane()))

    def test_wall_forcing_only(self):
        ctx = KernelContext(membrane())
        eta = 0.6 + 0.2j
        phi0, phi1 = fundamental_pair(np.array([0.0, ctx.a]), eta, ctx)
        h0, h1 = h_terms(eta, TransformedForcing(g0=2.0, g1=-1.0), ctx)
        assert h0 == pytest.approx(-2.0 * phi0[0] + phi1[0])
        assert h1 == pytest.approx(-2.0 * phi0[1] + phi1[1])

    def test_point_source_uses_lambda(self):
        ctx = KernelContext(membrane())
        eta = 0.6 + 0.2j
        table = lambda_coefficients(eta, ctx)
        forcing = TransformedForcing.point_source(eta, table.zeta, 1.0, 0.3)
        h0, h1 = h_terms(eta, forcing, ctx)
        assert h0 == pytest.approx(table.l00 * forcing.g_hat_plus + table.l01 * forcing.g_hat_minus)
        assert h1 == pytest.approx(table.l10 * forcing.g_hat_plus + table.l11 * forcing.g_hat_minus)

    def test_branch_with_decaying_exponential(self):
        """
            第一象限的大 η 上主值分支给出 Re ζ<0，系数仍须有限
        """
        ctx = KernelContext(case_i_membrane())
        eta = 300 + 300j
        assert ctx.zeta(eta).real < 0
        table = lambda_coefficients(eta, ctx)
        assert table.zeta.real > 0
        assert table.zeta ** 2 == pytest.approx(eta ** 2 - ctx.k ** 2, rel=1e-12)
        values = np.array([table.l00, table.l01, table.l10, table.l11])
        assert np.all(np.isfinite(values))
        assert np.all(np.isfinite(table.matrix))
        assert abs(table.l01) < 1e-100

    @pytest.mark.parametrize("eta", [0.6 + 0.2j, 0.6 - 0.2j, -2.0 + 0.5j, 300 + 300j])
    def test_point_source_matches_green_function(self, eta):
        """
            点源下 h_j = e^{iηx°} G(y_j, y°)，G 对 ζ 为偶函数，与分支选择无关
        """
        ctx = KernelContext(case_i_membrane())
        x0, y0 = 1.0, 0.3
        table = lambda_coefficients(eta, ctx)
        h0, h1 = h_terms(eta, TransformedForcing.point_source(eta, table.zeta, x0, y0), ctx)
        phase = np.exp(1j * eta * x0)
        assert h0 == pytest.approx(phase * green_function(0.0, y0, eta, ctx), rel=1e-9)
        assert h1 == pytest.approx(phase * green_function(ctx.a, y0, eta, ctx), rel=1e-9)
