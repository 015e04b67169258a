import numpy as np
import pytest

from strip_helmholtz.constants import (assemble_edge_equations, assemble_system, cosine_modes,
                                       horizontal_edge_form, prepare_solution, psi_quadrature, psi_series,
                                       regularity_poles, solve_constants, solve_waveguide)
from strip_helmholtz.errors import SingularSystem, UnsupportedCase
from strip_helmholtz.spectra import CaseLabel
from tests.helpers.configs import case_i_membrane, case_ii_membrane, case_ii_plate, case_iii_membrane, plate


@pytest.fixture(scope="module")
def case_i():
    return prepare_solution(case_i_membrane())


@pytest.fixture(scope="module")
def case_i_constants():
    return solve_waveguide(case_i_membrane())


def _regular_near(constants, pole, radii=(1e-2, 1e-4)):
    """在 ``pole`` 附近沿不同半径求 Phi+ 的延拓值。"""
    return [constants.solution.phi_plus_value(np.array([pole + r * np.exp(0.3j)]))[0] for r in radii]


class TestPsiTables:

    def test_series_matches_quadrature(self, case_i):
        """
        常数列的留数级数与自适应求积一致。
        """
        ctx, _, solution = case_i
        points = np.array([ctx.alpha[0], 1 + 0.5j, -0.3 - 0.8j])
        n_c = solution.rhs.n_constants
        series = psi_series(solution.rhs, points)
        quadrature = psi_quadrature(solution.rhs, points)
        scale = np.max(np.abs(quadrature.values[..., :n_c]))
        assert np.max(np.abs(series.values[..., :n_c] - quadrature.values[..., :n_c])) < 1e-6 * scale
        assert series.terms is not None and series.terms <= ctx.config.solver.series_cap

    @pytest.mark.parametrize("factory", [case_ii_membrane, case_iii_membrane])
    def test_series_at_root_images(self, factory):
        """
        在 η₁ 与 -η₀ 处，留数级数与自适应求积一致。
        """
        _, classification, solution = prepare_solution(factory())
        points = np.array([classification.eta[1], -classification.eta[0]])
        n_c = solution.rhs.n_constants
        series = psi_series(solution.rhs, points).values[..., :n_c]
        quadrature = psi_quadrature(solution.rhs, points, side=1).values[..., :n_c]
        assert np.max(np.abs(series - quadrature)) < 1e-6 * np.max(np.abs(quadrature))

    def test_series_leaves_source_column_empty(self, case_i):
        _, _, solution = case_i
        table = psi_series(solution.rhs, [0.5 + 0.5j])
        assert np.all(np.isnan(table(0, solution.rhs.n_constants)))
        assert len(table) == 1


class TestSolveConstants:

    def test_residuals(self, case_i_constants):
        assert case_i_constants.case_label is CaseLabel.I
        assert case_i_constants.residual < 1e-9
        assert case_i_constants.wall_residual < 1e-7
        assert np.allclose(case_i_constants.b, 0)

    def test_row_scaling_is_irrelevant(self, case_i, case_i_constants):
        """
        整体缩放某一行不改变解。
        """
        _, _, solution = case_i
        rows = assemble_system(solution)
        rows.matrix[0] *= 1e4
        rows.rhs[0] *= 1e4
        scaled = solve_constants(rows, solution)
        assert np.allclose(scaled.c, case_i_constants.c, rtol=1e-9, atol=1e-12)

    def test_inaccurate_solve_raises(self, case_i, monkeypatch):
        """
        解出的向量不满足方程组时报错，而不是只给出警告。
        """
        _, _, solution = case_i
        rows = assemble_system(solution)
        exact = np.linalg.solve
        monkeypatch.setattr("strip_helmholtz.constants.linalg.solve", lambda m, r: exact(m, r) * (1 + 1e-5))
        with pytest.raises(SingularSystem):
            solve_constants(rows, solution)

    def test_symmetric_configuration(self, case_i_constants):
        """
        上下壁相同且点源位于中线时，c₁=-c₀，c₃=-c₂。
        """
        c = case_i_constants.c
        scale = np.max(np.abs(c))
        assert abs(c[1] + c[0]) < 1e-8 * scale
        assert abs(c[3] + c[2]) < 1e-8 * scale

    def test_far_source_gives_small_constants(self):
        """
        点源远离竖直壁时，常数随距离按最慢的非传播模式指数衰减。
        """
        sizes = [np.max(np.abs(solve_waveguide(case_iii_membrane(source=(x, 0.5))).c)) for x in (4.0, 6.0, 8.0)]
        assert sizes[0] > sizes[1] > sizes[2]
        ratios = [sizes[1] / sizes[0], sizes[2] / sizes[1]]
        assert ratios[0] < 0.5
        assert ratios[1] == pytest.approx(ratios[0], rel=0.3)

    def test_to_dict(self, case_i_constants):
        payload = case_i_constants.to_dict()
        assert payload["case"] == "I"
        assert len(payload["c"]) == 4
        assert all(len(pair) == 2 for pair in payload["c"])
        assert "wall0" in payload["equations"]


class TestEdgeEquations:

    def test_forms_agree(self, case_i_constants):
        """
        竖直壁条件的极点可去形式与留数形式给出相同的常数。
        """
        residue = solve_waveguide(case_i_membrane(), edge_form="residue")
        scale = np.max(np.abs(case_i_constants.c))
        assert np.max(np.abs(residue.c - case_i_constants.c)) < 1e-7 * scale

    def test_residue_rows_hold(self, case_i, case_i_constants):
        """
        留数形式的角点条件在极点可去形式解出的常数下成立。
        """
        _, _, solution = case_i
        rows = assemble_edge_equations(solution, "residue")
        assert rows.labels == ["edge0", "edge1"]
        scale = np.max(np.abs(rows.matrix)) * np.max(np.abs(case_i_constants.unknowns))
        assert np.max(np.abs(rows.residual(case_i_constants.unknowns[:-1]))) < 1e-7 * scale

    @pytest.mark.parametrize("factory,count", [(case_i_membrane, 2), (case_ii_membrane, 2),
                                               (case_iii_membrane, 2), (lambda: plate(5, 2), 4)])
    def test_row_count(self, factory, count):
        _, _, solution = prepare_solution(factory())
        rows = assemble_edge_equations(solution, "transform")
        assert len(rows) == count
        assert all(label.startswith("edge") for label in rows.labels)
        assert len(regularity_poles(solution)) == count // 2
        assert np.all(regularity_poles(solution).imag < 0)

    @pytest.mark.parametrize("factory", [case_i_membrane, case_iii_membrane, lambda: plate(5, 2)])
    def test_continuation_regular_at_poles(self, factory):
        """
        代入常数后，Phi+ 的延拓在 H+ 的各个极点附近有界。
        """
        constants = solve_waveguide(factory())
        fac = constants.solution.rhs.factorization
        for pole in -fac.upper:
            near, nearer = _regular_near(constants, pole)
            assert np.max(np.abs(nearer)) < 1.5 * np.max(np.abs(near)) + 1e-12
            assert np.max(np.abs(nearer - near)) < 0.05 * np.max(np.abs(near)) + 1e-12

    def test_unsupported_residue_for_plate(self):
        _, _, solution = prepare_solution(plate(5, 2))
        with pytest.raises(UnsupportedCase):
            assemble_edge_equations(solution, "residue")


class TestCaseDependentSystems:

    def test_case_ii_has_bound_b(self):
        constants = solve_waveguide(case_ii_membrane())
        assert constants.case_label is CaseLabel.II
        assert constants.solution.n_free_b == 0
        assert not np.allclose(constants.b, 0)

    @pytest.mark.parametrize("factory", [case_ii_membrane, case_ii_plate])
    def test_case_ii_continuous_at_real_pole(self, factory):
        """
        情形 (ii) 中 Phi+ 在 -η₀ 处连续：从实轴上下两侧趋近得到相同的有界值。
        """
        constants = solve_waveguide(factory())
        assert constants.case_label is CaseLabel.II
        assert not np.allclose(constants.b, 0)
        eta0 = constants.solution.rhs.factorization.classification.real_root.real
        value = constants.solution.phi_plus_value
        above = [value(np.array([-eta0 + 1j * e]))[0] for e in (1e-2, 1e-3)]
        below = value(np.array([-eta0 - 1e-3j]))[0]
        scale = np.max(np.abs(above[0]))
        assert np.max(np.abs(above[1])) < 1.5 * scale
        assert np.max(np.abs(above[1] - below)) < 0.05 * scale

    def test_case_ii_horizontal_limit_rejected(self):
        _, _, solution = prepare_solution(case_ii_membrane())
        with pytest.raises(UnsupportedCase):
            horizontal_edge_form(solution)

    def test_case_iii_adds_compatibility_rows(self):
        _, _, solution = prepare_solution(case_iii_membrane())
        rows = assemble_system(solution)
        assert len(rows) == 6
        assert rows.select("corner").labels == ["corner0", "corner1"]
        ablated = assemble_system(solution, compatibility=False)
        assert ablated.select("b").labels == ["b0=0", "b1=0"]

    def test_case_iii_regular_at_remaining_pole(self):
        """
        相容性条件确定 b_j 后，Phi+ 的延拓在 -η₀ 处同样没有极点。
        """
        constants = solve_waveguide(case_iii_membrane())
        z0 = constants.solution.rhs.factorization.classification.roots[0]
        near, nearer = _regular_near(constants, -z0)
        assert np.max(np.abs(nearer)) < 1.5 * np.max(np.abs(near))


class TestPlate:

    def test_plate_symmetric_constants(self):
        """
        板模型：对称配置下 c₁ₘ=-c₀ₘ，c₃ₘ=-c₂ₘ。
        """
        constants = solve_waveguide(plate(5, 2))
        c = constants.c
        assert len(c) == 8
        scale = np.max(np.abs(c))
        assert np.max(np.abs(c[2:4] + c[0:2])) < 1e-8 * scale
        assert np.max(np.abs(c[6:8] + c[4:6])) < 1e-8 * scale

    def test_case_ii_plate_system(self):
        constants = solve_waveguide(case_ii_plate())
        assert constants.case_label is CaseLabel.II
        assert len(constants.rows) == 8
        assert constants.residual < 1e-9

    def test_cosine_modes_decay(self):
        constants = solve_waveguide(plate(5, 2))
        table = cosine_modes(constants.solution, 64)
        coef = np.abs(table.C @ constants.unknowns)
        assert np.max(coef[48:]) < np.max(coef[:8])
