import numpy as np
import pytest

from conftest import random_array
from oracles import staircase_matrix
from popuc.cmv import (ParameterArray, build_cmv, build_factors, cmv, gauge_matrices, partition,
                       staircase_mask, theta_block)
from popuc.errors import DomainError

P3 = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=complex)
P6 = np.array([
    [0, 0, 1, 0, 0, 0],
    [1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0],
    [0, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1],
    [0, 0, 0, 1, 0, 0],
], dtype=complex)


class TestThetaBlock:
    def test_zero_is_swap(self):
        np.testing.assert_array_equal(theta_block(0), [[0, 1], [1, 0]])

    def test_entries(self):
        a = 0.3 + 0.4j
        t = theta_block(a)
        np.testing.assert_allclose(t, [[0.3 - 0.4j, np.sqrt(0.75)], [np.sqrt(0.75), -a]], atol=0)
        assert t[0, 1].imag == 0 and t[0, 1].real > 0

    def test_half_is_unitary(self):
        t = theta_block(0.5)
        assert np.max(np.abs(t @ t.conj().T - np.eye(2))) <= 1e-15

    @pytest.mark.parametrize("a", [1.0, 1j, 0.6 + 0.8j, 2.0])
    def test_rejects_closed_disk(self, a):
        with pytest.raises(DomainError):
            theta_block(a)


class TestParameterArray:
    def test_alpha_validation_message(self):
        with pytest.raises(DomainError, match=r"alpha\[1\] outside open unit disk"):
            ParameterArray([0.1, 1.0], 1)

    def test_b_validation(self):
        with pytest.raises(DomainError):
            ParameterArray([0.1], 1.01)
        ParameterArray([0.1], 1 + 5e-11)

    def test_head_tail(self):
        p = ParameterArray([0.1, 0.2j, -0.3], 1j)
        assert p.head(1, -1) == ParameterArray([0.1], -1)
        assert p.tail(1) == ParameterArray([0.2j, -0.3], 1j)
        assert p.n == 3 and p.size == 4


class TestFactors:
    def test_n0(self):
        L, M = build_factors(ParameterArray([], 1j))
        np.testing.assert_array_equal(L, [[-1j]])
        np.testing.assert_array_equal(M, [[1]])
        np.testing.assert_array_equal(cmv([], 1j), [[-1j]])

    def test_n1(self):
        L, M = build_factors(ParameterArray([0], 1))
        np.testing.assert_array_equal(L, [[0, 1], [1, 0]])
        np.testing.assert_array_equal(M, np.eye(2))
        np.testing.assert_array_equal(cmv([0], 1), [[0, 1], [1, 0]])

    def test_n7_block_layout(self):
        rng = np.random.default_rng(7)
        p = random_array(rng, 7)
        L, M = build_factors(p)
        a = p.alphas
        for k, j in enumerate((0, 2, 4, 6)):
            np.testing.assert_array_equal(L[2 * k:2 * k + 2, 2 * k:2 * k + 2], theta_block(a[j]))
        assert M[0, 0] == 1
        for k, j in enumerate((1, 3, 5)):
            s = 1 + 2 * k
            np.testing.assert_array_equal(M[s:s + 2, s:s + 2], theta_block(a[j]))
        assert M[7, 7] == p.b.conjugate()
        # nothing outside the blocks
        assert np.count_nonzero(L) <= 16 and np.count_nonzero(M) <= 1 + 12 + 1

    def test_n_even_places_b_in_L(self):
        p = ParameterArray([0.2, 0.3j], np.exp(0.4j))
        L, M = build_factors(p)
        assert L[2, 2] == p.b.conjugate()
        assert M[0, 0] == 1


class TestBuildCmv:
    def test_example_permutations(self):
        np.testing.assert_array_equal(cmv([0, 0], 1), P3)
        np.testing.assert_array_equal(cmv([0] * 5, 1), P6)

    @pytest.mark.parametrize("n", range(2, 9))
    def test_matches_hand_assembled_staircase(self, n):
        rng = np.random.default_rng(100 + n)
        p = random_array(rng, n)
        np.testing.assert_allclose(cmv(p.alphas, p.b), staircase_matrix(p.alphas, p.b), atol=1e-15)

    def test_n7_figure_entries(self):
        rng = np.random.default_rng(3)
        p = random_array(rng, 7)
        a, r = p.alpha_array(), p.rho()
        c = cmv(p.alphas, p.b)
        # first two rows and a middle pair of rows of the staircase
        assert c[0, 0] == pytest.approx(a[0].conjugate(), abs=1e-15)
        assert c[0, 1] == pytest.approx(r[0] * a[1].conjugate(), abs=1e-15)
        assert c[0, 2] == pytest.approx(r[0] * r[1], abs=1e-15)
        assert c[1, 0] == pytest.approx(r[0], abs=1e-15)
        assert c[1, 1] == pytest.approx(-a[0] * a[1].conjugate(), abs=1e-15)
        assert c[1, 2] == pytest.approx(-a[0] * r[1], abs=1e-15)
        assert c[2, 1] == pytest.approx(r[1] * a[2].conjugate(), abs=1e-15)
        assert c[2, 2] == pytest.approx(-a[1] * a[2].conjugate(), abs=1e-15)
        assert c[2, 3] == pytest.approx(r[2] * a[3].conjugate(), abs=1e-15)
        assert c[2, 4] == pytest.approx(r[2] * r[3], abs=1e-15)
        assert c[3, 1] == pytest.approx(r[1] * r[2], abs=1e-15)
        assert c[3, 2] == pytest.approx(-a[1] * r[2], abs=1e-15)
        # n odd: the bottom-right corner comes from Theta_6 times conj(b)
        assert c[7, 6] == pytest.approx(-r[6] * a[5], abs=1e-15)
        assert c[6, 7] == pytest.approx(r[6] * p.b.conjugate(), abs=1e-15)
        assert c[7, 7] == pytest.approx(-a[6] * p.b.conjugate(), abs=1e-15)

    def test_sparsity_is_exact(self):
        rng = np.random.default_rng(11)
        for n in range(0, 12):
            p = random_array(rng, n)
            c = cmv(p.alphas, p.b)
            assert np.all(c[~staircase_mask(n)] == 0)

    def test_unitary(self):
        rng = np.random.default_rng(12)
        for n in (0, 1, 5, 16, 64):
            m = build_cmv(random_array(rng, n))
            assert m.unitarity_defect() <= 1e-13


class TestPartition:
    def test_m0_2x2(self):
        b = partition(cmv([0.5], 1), 0)
        assert b.c11.shape == (1, 1) and b.c11[0, 0] == 0.5

    def test_example_m2(self):
        b = partition(P6, 2)
        np.testing.assert_array_equal(b.c11, [[0, 0, 1], [1, 0, 0], [0, 0, 0]])

    def test_lossless(self):
        rng = np.random.default_rng(5)
        c = cmv(random_array(rng, 6).alphas, 1)
        for m in range(6):
            np.testing.assert_array_equal(partition(c, m).reassemble(), c)

    @pytest.mark.parametrize("m", [-1, 6])
    def test_range(self, m):
        with pytest.raises(IndexError):
            partition(np.eye(7), m)


class TestGauge:
    def test_beta_one(self):
        for g in gauge_matrices(5, 2, 1):
            np.testing.assert_array_equal(g, np.eye(6))

    def test_small_case(self):
        S, D, V = gauge_matrices(2, 0, 1j)
        np.testing.assert_allclose(np.diag(S), [-1j, 1, 1])
        np.testing.assert_allclose(np.diag(D), [1j, 1, 1j])
        np.testing.assert_allclose(np.diag(V), [1, 1j, 1])

    def test_rejects_non_unit(self):
        with pytest.raises(DomainError):
            gauge_matrices(3, 1, 0.5)
