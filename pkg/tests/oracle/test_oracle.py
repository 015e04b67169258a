import numpy as np
import pytest
from scipy import integrate

from strip_helmholtz.errors import InvalidParameter, UnsupportedCase
from strip_helmholtz.kernel import KernelContext, fundamental_pair, green_function
from strip_helmholtz.oracle import FDForcing, GridSpec, cross_validate, fd_solve, ode_solve_1d
from tests.helpers.configs import case_i_membrane, case_ii_membrane, plate


class TestODEOracle:

    def test_fundamental_pair(self):
        """
        U₀ 条件取 1、U₁ 条件取 0 时，直接求解给出 φ₀。
        """
        config = case_i_membrane()
        ctx = KernelContext(config)
        eta = 0.3 + 0.7j
        y = np.linspace(0, 1, 9)
        solution = ode_solve_1d(eta, config, g0=1.0)
        phi0, _ = fundamental_pair(y, eta, ctx)
        assert np.allclose(solution(y), phi0, rtol=1e-9, atol=1e-11)

    def test_green_function(self):
        """
        常数外力下的解等于 Green 函数对源点的积分。
        """
        config = case_i_membrane()
        ctx = KernelContext(config)
        eta = 0.3 + 0.7j
        solution = ode_solve_1d(eta, config, forcing=lambda y: np.ones_like(y, dtype=complex))
        for y in (0.0, 0.4, 1.0):
            def part(s, take):
                return take(complex(green_function(y, s, eta, ctx)))
            kw = {"points": [y]} if 0 < y < 1 else {}
            real = integrate.quad(part, 0, 1, args=(np.real,), epsabs=1e-13, **kw)[0]
            imag = integrate.quad(part, 0, 1, args=(np.imag,), epsabs=1e-13, **kw)[0]
            assert abs(complex(solution(y)) - (real + 1j * imag)) < 1e-8

    def test_zero_forcing(self):
        solution = ode_solve_1d(1 + 0.5j, case_i_membrane())
        assert np.allclose(solution(np.linspace(0, 1, 5)), 0)


class TestGridSpec:

    def test_parse(self):
        assert GridSpec.parse("64,16") == GridSpec(64, 16)
        with pytest.raises(InvalidParameter):
            GridSpec.parse("64x16")
        with pytest.raises(InvalidParameter):
            GridSpec(2, 16)

    def test_truncation(self):
        config = case_ii_membrane()
        length = GridSpec().truncation(config)
        assert length == pytest.approx(1 + np.log(1e6) / 1.0)
        assert GridSpec(length=3.0).truncation(config) == 3.0


def _manufactured(config, beta=1.0):
    """:math:`u^*=e^{i\\beta x}\\cos(\\pi y/a)` 及其对应的外力。"""
    a = config.a
    lam = np.pi / a
    alpha2, mu = config.alpha ** 2, config.mu
    k2 = config.k ** 2

    def exact(x, y):
        return np.exp(1j * beta * x) * np.cos(lam * y)

    forcing = FDForcing(
        interior=lambda x, y: (k2 - beta ** 2 - lam ** 2) * exact(x, y),
        walls=(lambda x: -mu[0] * np.exp(1j * beta * x), lambda x: -mu[1] * np.exp(1j * beta * x)),
        vertical=lambda y: (1j * beta * (alpha2[2] - lam ** 2) - mu[2]) * np.cos(lam * y),
        edges=(0j, 0j, 1j * beta, -1j * beta),
        far=lambda y: exact(3.0, y),
    )
    return exact, forcing


class TestFiniteDifference:

    def test_manufactured_solution_converges(self):
        """
        构造解的误差随网格加密按二阶减小。
        """
        config = case_i_membrane()
        exact, forcing = _manufactured(config)
        errors = []
        for nx, ny in ((24, 8), (48, 16)):
            fd = fd_solve(config, GridSpec(nx, ny, 3.0), forcing)
            xx, yy = np.meshgrid(fd.x, fd.y, indexing="ij")
            errors.append(np.max(np.abs(fd.solution - exact(xx, yy))))
        assert errors[1] < 0.05
        assert errors[0] / errors[1] > 3

    def test_zero_forcing(self):
        forcing = FDForcing(interior=lambda x, y: np.zeros_like(x, dtype=complex))
        fd = fd_solve(case_i_membrane(), GridSpec(16, 8, 3.0), forcing)
        assert fd.solution.shape == (17, 9)
        assert np.allclose(fd.solution, 0)

    def test_point_source(self):
        fd = fd_solve(case_ii_membrane(), GridSpec(64, 16))
        assert np.all(np.isfinite(fd.solution))
        assert np.allclose(fd.solution[-1], 0)
        assert abs(fd.at(1.0, 0.5)) > abs(fd.at(10.0, 0.5))

    def test_plate_rejected(self):
        with pytest.raises(UnsupportedCase):
            fd_solve(plate(), GridSpec(16, 8, 3.0))


    def test_corner_mismatch_vanishes_for_smooth_field(self):
        """
        构造解在角点处连续，有限差分的角点差随网格加密减小。
        """
        config = case_i_membrane()
        _, forcing = _manufactured(config)
        mismatch = [np.max(np.abs(fd_solve(config, GridSpec(nx, ny, 3.0), forcing).corner_mismatch()))
                    for nx, ny in ((24, 8), (48, 16))]
        assert mismatch[1] < 0.05
        assert mismatch[1] < mismatch[0]


@pytest.mark.slow
class TestCrossValidation:

    def test_default_grid(self):
        """
        缺省网格 512×128、截断长度 8a，在 16×16 个节点上相对 L2 差异低于 5%。
        """
        report = cross_validate(case_ii_membrane())
        assert report.error is None
        assert report.case == "II"
        assert report.grid == (512, 128)
        assert report.length == pytest.approx(8.0)
        assert report.points > 200
        assert report.passed, report.to_dict()
        payload = report.to_dict()
        assert len(payload["fd_corner_mismatch"]) == 2
        assert all(np.isfinite(v).all() for v in payload["fd_corner_mismatch"])

    def test_refinement_reduces_discrepancy(self):
        """
        网格步长减半后差异减小。
        """
        coarse = cross_validate(case_ii_membrane(), GridSpec(128, 32, 8.0))
        fine = cross_validate(case_ii_membrane(), GridSpec(256, 64, 8.0))
        assert coarse.error is None and fine.error is None
        assert fine.discrepancy < coarse.discrepancy
