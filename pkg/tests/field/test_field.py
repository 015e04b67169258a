import numpy as np
import pytest

from strip_helmholtz import field as field_module
from strip_helmholtz.constants import cosine_modes, solve_waveguide
from strip_helmholtz.errors import InvalidParameter, SourceSingularity
from strip_helmholtz.field import (SECTOR_HALF_PLANE, ContinuationAtlas, FieldGrid, continuation_atlas,
                                   corner_mismatch, interior_field, trace_horizontal, trace_vertical,
                                   vertical_deflection, wall_deflection)
from tests.helpers.configs import case_i_membrane, case_iii_membrane


@pytest.fixture(scope="module")
def case_i_constants():
    return solve_waveguide(case_i_membrane())


class TestContinuationAtlas:

    def test_far_sectors(self):
        """
        |ξ| 远大于 |k| 时，各扇形中 η 所在的半平面与表一致。
        """
        atlas = ContinuationAtlas(1 + 0.1j)
        alpha = atlas.angle
        middles = {"D1+": alpha / 2, "D2+": (alpha + np.pi / 2) / 2, "D3+": 0.75 * np.pi,
                   "D1-": np.pi + alpha / 2, "D2-": (np.pi + alpha + 1.5 * np.pi) / 2, "D3-": 1.75 * np.pi}
        for label, phase in middles.items():
            xi = 100 * np.exp(1j * phase)
            assert atlas.sector(xi) == label
            assert atlas.half_plane(xi) == SECTOR_HALF_PLANE[label]

    def test_eta_squares_back(self):
        atlas = ContinuationAtlas(1 + 0.1j)
        xi = np.array([0.3 + 2j, -4 + 0.5j, 1 - 3j])
        eta = atlas.eta(xi)
        assert np.allclose(eta ** 2, atlas.k ** 2 - xi ** 2, rtol=1e-12)

    def test_membrane_poles(self, case_i_constants):
        atlas = continuation_atlas(case_i_constants)
        assert {"xi_hat0", "xi_hat1", "+alpha2", "-alpha2"} <= set(atlas.poles)
        assert atlas.poles["-alpha2"] == -atlas.poles["+alpha2"]


class TestTraces:

    def test_vertical_residue_matches_cosine(self, case_i_constants):
        y = np.linspace(0.1, 0.9, 5)
        residue = trace_vertical(case_i_constants, y, method="residue").values
        cosine = trace_vertical(case_i_constants, y, method="cosine", modes=256).values
        assert np.max(np.abs(residue - cosine)) < 1e-3 * np.max(np.abs(residue))

    def test_horizontal_layout(self, case_i_constants):
        grid = trace_horizontal(case_i_constants, [0.5, 1.5, 3.0])
        assert grid.kind == "horizontal"
        assert len(grid) == 6
        assert np.allclose(grid.y, [0, 1, 0, 1, 0, 1])
        assert np.all(np.isfinite(grid.values))

    def test_horizontal_independent_of_tail_start(self, case_i_constants, monkeypatch):
        """
        有限区间与 Fourier 尾项的分界点不影响水平壁迹线。
        """
        x = [0.5, 1.5, 3.0]
        base = trace_horizontal(case_i_constants, x).values
        original = field_module._tail_start
        monkeypatch.setattr(field_module, "_tail_start", lambda constants, points: 1.7 * original(constants, points))
        moved = trace_horizontal(case_i_constants, x).values
        assert np.max(np.abs(moved - base)) < 1e-6 * np.max(np.abs(base))

    def test_vertical_trace_symmetric(self, case_i_constants):
        """
        对称配置下竖直壁迹线满足 u(0,y)=u(0,a-y)。
        """
        y = np.array([0.1, 0.3, 0.45])
        lower = trace_vertical(case_i_constants, y).values
        upper = trace_vertical(case_i_constants, 1.0 - y).values
        assert np.max(np.abs(lower - upper)) < 1e-8 * np.max(np.abs(lower))

    def test_horizontal_rejects_negative_x(self, case_i_constants):
        with pytest.raises(InvalidParameter):
            trace_horizontal(case_i_constants, [-0.1])

    def test_vertical_rejects_bad_method(self, case_i_constants):
        with pytest.raises(InvalidParameter):
            trace_vertical(case_i_constants, [0.5], method="spline")

    @pytest.mark.slow
    def test_case_iii_corners(self):
        """
        情形 (iii) 中相容性条件使两条迹线在角点处相接；去掉这两个条件后不再相接。
        """
        config = case_iii_membrane()
        assert np.max(np.abs(corner_mismatch(solve_waveguide(config)))) < 1e-6
        ablated = solve_waveguide(config, compatibility=False)
        assert np.max(np.abs(corner_mismatch(ablated))) > 1e-4


class TestInteriorField:

    def test_wall_matches_horizontal_trace(self, case_i_constants):
        """
        在 y=0 上，内部场的 Fourier 逆变换与水平壁迹线一致。
        """
        x = np.array([2.0, 3.0])
        interior = interior_field(case_i_constants, x, 0.0, modes=128).values
        trace = trace_horizontal(case_i_constants, x, walls=(0,)).values
        assert np.max(np.abs(interior - trace)) < 1e-3 * np.max(np.abs(trace))

    def test_pressure(self, case_i_constants):
        grid = interior_field(case_i_constants, [0.5, 2.0], [0.25, 0.75])
        config = case_i_constants.solution.rhs.ctx.config
        omega = config.omega if config.omega is not None else config.k * config.c_sound
        assert np.allclose(grid.pressure, 1j * omega * config.rho * grid.values)

    def test_near_vertical_wall(self, case_i_constants):
        """
        λ₀=0 的余弦模式对应 τ=±k，内部场在靠近竖直壁处可以求值。
        """
        grid = interior_field(case_i_constants, [0.5], [0.25])
        assert np.all(np.isfinite(grid.values))
        table = cosine_modes(case_i_constants.solution, 32)
        assert np.all(np.isfinite(table.C[0]))

    def test_helmholtz_residual(self, case_i_constants):
        """
        内部场的五点差分满足 Helmholtz 方程，误差为 O(h²)。
        """
        h, x0, y0 = 0.05, 2.0, 0.5
        x = np.array([x0, x0 + h, x0 - h, x0, x0])
        y = np.array([y0, y0, y0, y0 + h, y0 - h])
        u = interior_field(case_i_constants, x, y, modes=128).values
        k2 = case_i_constants.solution.rhs.ctx.k ** 2
        laplacian = (u[1] + u[2] + u[3] + u[4] - 4 * u[0]) / h ** 2
        assert abs(laplacian + k2 * u[0]) < 5e-3 * abs(k2 * u[0])

    def test_source_singularity(self, case_i_constants):
        with pytest.raises(SourceSingularity):
            interior_field(case_i_constants, [1.0], [0.5])

    def test_frame(self, case_i_constants):
        frame = interior_field(case_i_constants, [2.0], [0.5]).to_frame()
        assert list(frame.columns) == ["x", "y", "re_u", "im_u", "err_est", "re_p", "im_p"]
        assert len(frame) == 1


class TestDeflections:

    def test_wall_index(self, case_i_constants):
        with pytest.raises(InvalidParameter):
            wall_deflection(case_i_constants, [1.0], 2)

    def test_wall_deflection(self, case_i_constants):
        grid = wall_deflection(case_i_constants, [0.5, 2.5], 1, modes=64)
        assert grid.kind == "wall1"
        assert np.allclose(grid.y, 1.0)
        assert np.all(np.isfinite(grid.values))

    def test_vertical_deflection(self, case_i_constants):
        grid = vertical_deflection(case_i_constants, np.linspace(0, 1, 5))
        assert grid.kind == "vertical_deflection"
        assert np.allclose(grid.x, 0)
        assert np.all(np.isfinite(grid.values))
        with pytest.raises(InvalidParameter):
            vertical_deflection(case_i_constants, [1.5])


def test_field_grid_checks_pressure_length():
    with pytest.raises(ValueError):
        FieldGrid("interior", [0.0, 1.0], [0.0, 0.0], np.zeros(2, dtype=complex), 0.0,
                  pressure=np.zeros(3, dtype=complex))
