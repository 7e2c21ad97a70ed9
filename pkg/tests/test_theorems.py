import math

import numpy as np
import pytest

from conftest import random_array, unit
from oracles import circular_error, roots_of
from popuc.cmv import ParameterArray
from popuc.engine import dense_angles, terminal_for, zero_angles
from popuc.errors import DomainError
from popuc.interlace import (Verdict, build_N, common_eigen_set_C, corollary_verify, rotate_tail,
                             theorem_i_verify, theorem_ii_verify)


def resonant(rng, n, m):
    """Random array with a prescribed eigenvalue shared by C_n and C_m."""
    alphas = [complex(*rng.uniform(-0.6, 0.6, 2)) for _ in range(n)]
    zeta = unit(rng)
    # zeta is an eigenvalue of C(alpha_0..alpha_{m-1}, b_m) exactly when b_0(zeta) = conj(zeta)
    b_m = terminal_for(alphas[:m], 0, zeta.conjugate(), zeta)
    b = terminal_for(alphas, m, b_m, zeta)
    return ParameterArray(alphas, b), b_m, zeta


class TestRotateTail:
    def test_values(self):
        p = ParameterArray([0.1, 0.2, 0.3], 1)
        r = rotate_tail(p, 1, 1j)
        assert r.alphas == (0.1, 0.2j, 0.3j) and r.b == 1j

    def test_beta_one_excluded(self):
        with pytest.raises(DomainError):
            rotate_tail(ParameterArray([0.1], 1), 0, 1)
        with pytest.raises(DomainError):
            rotate_tail(ParameterArray([0.1], 1), 0, 0.5)


class TestRotatedTailInterlacing:
    def test_cube_roots(self):
        # rotating the whole all-zero array by -1 turns z^3 = 1 into z^3 = -1
        p = ParameterArray([0, 0], 1)
        assert circular_error(zero_angles(rotate_tail(p, 0, -1)), roots_of(-1, 3)) <= 1e-12
        v = theorem_i_verify(p, 0, -1)
        assert v.verdict is Verdict.STRICT

    @pytest.mark.parametrize("m", [0, 1, 2, 3])
    def test_all_zero_tail_rotation(self, m):
        p = ParameterArray([0] * 3, 1)
        assert theorem_i_verify(p, m, np.exp(2.0j)).verdict is Verdict.STRICT

    def test_random(self):
        rng = np.random.default_rng(31)
        for _ in range(40):
            n = int(rng.integers(1, 15))
            p = random_array(rng, n)
            m = int(rng.integers(0, n + 1))
            beta = np.exp(1j * rng.uniform(0.01, 2 * np.pi - 0.01))
            assert theorem_i_verify(p, m, beta).verdict is Verdict.STRICT


class TestBuildN:
    def test_spectrum_is_level_set(self):
        rng = np.random.default_rng(32)
        for _ in range(10):
            p = random_array(rng, 7)
            m, bm = int(rng.integers(0, 7)), unit(rng)
            c = common_eigen_set_C(p, m, bm)
            assert len(c) == 7 - m
            assert circular_error(dense_angles(build_N(p, m, bm)), c.angles) <= 1e-9


class TestCommonEigenvalues:
    def test_worked_example(self):
        rep = theorem_ii_verify(ParameterArray([0] * 5, 1), 2, 1)
        assert rep.ok
        assert circular_error(rep.setA.angles, roots_of(1, 3)) <= 1e-12
        assert len(rep.setB) == 0
        assert rep.interlace.verdict is Verdict.STRICT

    @pytest.mark.parametrize("n,m", [(3, 1), (5, 2), (5, 1), (7, 3), (8, 2), (6, 0), (9, 4)])
    def test_all_zero_family(self, n, m):
        # A is the set of gcd(n-m, m+1)-th roots of unity
        rep = theorem_ii_verify(ParameterArray([0] * n, 1), m, 1)
        g = math.gcd(n - m, m + 1)
        assert rep.ok
        assert circular_error(rep.setA.angles, roots_of(1, g)) <= 1e-12
        if (n - m) % (m + 1) == 0 or (m + 1) % (n - m) == 0:
            assert len(rep.setA) == min(m + 1, n - m)

    def test_generic_random(self):
        rng = np.random.default_rng(33)
        for _ in range(40):
            n = int(rng.integers(1, 14))
            p = random_array(rng, n)
            m = int(rng.integers(0, n))
            rep = theorem_ii_verify(p, m, unit(rng))
            assert rep.ok, rep.to_dict()
            assert len(rep.setA) == 0

    def test_resonant(self):
        rng = np.random.default_rng(34)
        for _ in range(40):
            n = int(rng.integers(2, 12))
            m = int(rng.integers(0, n))
            p, bm, zeta = resonant(rng, n, m)
            rep = theorem_ii_verify(p, m, bm)
            assert rep.ok, rep.to_dict()
            assert rep.setA.contains(np.angle(zeta) % (2 * np.pi))

    def test_to_dict(self):
        d = theorem_ii_verify(ParameterArray([0] * 5, 1), 2, 1).to_dict()
        assert d["ok"] and len(d["A"]) == 3 and d["interlace"]["verdict"] == "STRICT"

    def test_m_range(self):
        with pytest.raises(IndexError):
            theorem_ii_verify(ParameterArray([0.1], 1), 1, 1)


class TestLastStepTruncation:
    def test_fifth_and_sixth_roots(self):
        rep = corollary_verify(ParameterArray([0] * 5, 1), 1)
        assert rep.branch == 1 and rep.ok
        # reported after snapping onto the computed root at angle 0
        assert rep.zeta_star == pytest.approx(0.0, abs=1e-12)

    def test_branch_two(self):
        # zeta* = conj(b_prev) here, which is neither a fifth nor a sixth root
        rep = corollary_verify(ParameterArray([0] * 5, 1), np.exp(0.3j))
        assert rep.branch == 2 and rep.ok and len(rep.common) == 0

    def test_star_formula(self):
        rng = np.random.default_rng(35)
        p = random_array(rng, 5)
        bp = unit(rng)
        rep = corollary_verify(p, bp)
        expected = np.conj(p.b) * (p.alphas[-1] - bp) / (np.conj(p.alphas[-1]) * bp - 1)
        assert abs(np.exp(1j * rep.zeta_star) - expected) <= 1e-14

    def test_agrees_with_theorem_ii(self):
        rng = np.random.default_rng(36)
        for _ in range(20):
            n = int(rng.integers(1, 10))
            if rng.random() < 0.5:
                p, bp, _ = resonant(rng, n, n - 1)
            else:
                p, bp = random_array(rng, n), unit(rng)
            cor = corollary_verify(p, bp)
            rep = theorem_ii_verify(p, n - 1, bp)
            assert cor.ok and rep.ok
            assert cor.common.same_as(rep.setA, max(cor.eps, rep.eps))

    def test_needs_n_positive(self):
        with pytest.raises(DomainError):
            corollary_verify(ParameterArray([], 1), 1)
