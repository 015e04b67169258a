import numpy as np
import pytest

from strip_helmholtz.errors import ContourPole, DegenerateRoots
from strip_helmholtz.kernel import KernelContext, dispersion_even
from strip_helmholtz.spectra import (CaseLabel, classify, classify_membrane, classify_plate,
                                     dispersion_zero_search, extend_dispersion_zeros, polynomial_roots,
                                     winding_index)
from tests.helpers.configs import MEMBRANE_TABLE, PLATE_TABLE, case_i_membrane, case_ii_membrane, match_roots, membrane, plate


class TestPolynomialRoots:

    def test_against_companion_matrix(self):
        rng = np.random.default_rng(0)
        coeffs = rng.normal(size=6) + 1j * rng.normal(size=6)
        assert match_roots(polynomial_roots(coeffs), np.roots(coeffs), rtol=1e-10, atol=1e-12)


class TestMembraneRoots:

    @pytest.mark.parametrize("gamma0,gamma1,k,roots,case", MEMBRANE_TABLE)
    def test_table(self, gamma0, gamma1, k, roots, case):
        result = classify(KernelContext(membrane(gamma0, gamma1, k)))
        print(result.roots)
        assert result.case_label is CaseLabel(case)
        assert match_roots(result.roots, roots)
        # the distinguished root comes first
        assert abs(result.roots[0] - roots[0]) < 2e-4 + 1e-3 * abs(roots[0])

    def test_case_ii_root_is_real(self):
        result = classify(KernelContext(case_ii_membrane()))
        assert result.roots[0].imag == 0
        assert result.real_root == pytest.approx(0.5848, abs=1e-4)

    def test_conjugate_pattern_for_imaginary_k(self):
        """
            k 为纯虚数时根的形式为 {-conj(z), z} 与一个纯虚根
        """
        roots = classify(KernelContext(membrane(1, 0.1, 1j))).roots
        imaginary = [z for z in roots if abs(z.real) < 1e-12]
        assert len(imaginary) == 1
        rest = [z for z in roots if abs(z.real) >= 1e-12]
        assert rest[0] == pytest.approx(-np.conj(rest[1]), abs=1e-12)

    def test_wrong_model(self):
        with pytest.raises(DegenerateRoots):
            classify_plate(KernelContext(membrane()))


class TestPlateRoots:

    @pytest.mark.parametrize("gamma0,gamma1,roots", PLATE_TABLE)
    def test_table(self, gamma0, gamma1, roots):
        result = classify_plate(KernelContext(plate(gamma0, gamma1)))
        assert match_roots(result.roots, roots)
        assert result.roots[0] == pytest.approx(roots[0], abs=2e-4 + 1e-3 * abs(roots[0]))
        others = result.roots[1:]
        assert np.sum(others.imag > 0) == 2
        assert np.sum(others.imag < 0) == 2

    def test_wrong_model(self):
        with pytest.raises(DegenerateRoots):
            classify_membrane(KernelContext(plate()))


class TestWinding:

    @pytest.mark.parametrize("row,expected", [(0, -1), (1, -1), (3, 1), (4, 1)])
    def test_index(self, row, expected):
        gamma0, gamma1, k, _, _ = MEMBRANE_TABLE[row]
        ctx = KernelContext(membrane(gamma0, gamma1, k))
        assert winding_index(ctx, classify(ctx)) == expected

    def test_case_ii_indented(self):
        """
            路径从 -z₀ 上方、z₀ 下方绕过，实根按上半平面的根计入
        """
        ctx = KernelContext(case_ii_membrane())
        classification = classify(ctx)
        assert classification.kappa == 1
        assert winding_index(ctx, classification, indent=True) == 1

    def test_case_ii_matches_root_moved_up(self):
        """
            k 微调使实根移入上半平面（情形 (iii)），实轴上的卷绕数与情形 (ii) 相同
        """
        ctx = KernelContext(membrane(1, 0.1, 0.9985 + 1.0015j))
        classification = classify(ctx)
        assert classification.case_label is CaseLabel.III
        assert classification.roots[0].imag > 0
        assert winding_index(ctx, classification) == 1

    def test_case_ii_without_indent(self):
        ctx = KernelContext(case_ii_membrane())
        with pytest.raises(ContourPole):
            winding_index(ctx, classify(ctx), indent=False)

    @pytest.mark.parametrize("column", range(4))
    def test_plate_index(self, column):
        gamma0, gamma1, _ = PLATE_TABLE[column]
        ctx = KernelContext(plate(gamma0, gamma1))
        classification = classify(ctx)
        assert winding_index(ctx, classification) == classification.kappa


class TestDispersionZeros:

    def test_zeros_are_roots(self):
        ctx = KernelContext(membrane(zero_count=12))
        zeros = dispersion_zero_search(ctx)
        assert len(zeros) == zeros.count_verified > 0
        assert np.all(zeros.tau.imag > 0)
        for tau in zeros.tau:
            value = abs(dispersion_even(tau, ctx))
            nearby = abs(dispersion_even(tau * 1.001 + 1e-3j, ctx))
            assert value < 1e-8 * nearby

    def test_asymptotic_spacing(self):
        ctx = KernelContext(membrane(zero_count=12))
        zeros = extend_dispersion_zeros(ctx, dispersion_zero_search(ctx), 40)
        assert len(zeros) == 40
        gaps = np.diff(np.abs(zeros.tau[20:]))
        assert np.all(np.abs(gaps - np.pi / ctx.a) < 0.02 * np.pi / ctx.a)

    def test_default_box_near_imaginary_axis(self):
        """
            情形 (i) 的零点几乎落在虚轴上，默认矩形内的零点须全部分离出来
        """
        ctx = KernelContext(case_i_membrane())
        zeros = dispersion_zero_search(ctx)
        assert len(zeros) == zeros.count_verified > 0
        index = np.round(np.abs(zeros.tau[-6:]) * ctx.a / np.pi)
        assert np.all(np.diff(index) == 1)

    @pytest.mark.parametrize("factory", [membrane, case_i_membrane])
    def test_extension_has_no_gaps(self, factory):
        """
            扩充出的零点与渐近初值一一对应，序号连续
        """
        ctx = KernelContext(factory(zero_count=12))
        zeros = dispersion_zero_search(ctx)
        extended = extend_dispersion_zeros(ctx, zeros, 60)
        assert len(extended) == 60
        tail = extended.tau[zeros.count_verified:]
        index = np.round(np.abs(tail) * ctx.a / np.pi)
        assert np.all(np.diff(index) == 1)
        guesses = np.sqrt(ctx.k ** 2 - (np.pi * index / ctx.a) ** 2 + 0j)
        guesses = np.where(guesses.imag > 0, guesses, -guesses)
        assert np.all(np.abs(tail - guesses) < np.pi / (2 * ctx.a))
