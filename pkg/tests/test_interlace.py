import math

import numpy as np
import pytest

from oracles import brute_interlace, lattice_angles
from popuc.circle import (CircularPointSet, has_marginal_pair, match_eps, snap_coincidences)
from popuc.errors import DomainError
from popuc.interlace import Verdict, interlace_check

TAU = 2 * math.pi


def _verdict(small, large, period):
    return interlace_check(lattice_angles(small, period), lattice_angles(large, period)).verdict


class TestExamples:
    def test_rotated_triangles_strict(self):
        small = [0, TAU / 3, 2 * TAU / 3]
        large = [t + TAU / 6 for t in small]
        v = interlace_check(small, large)
        assert v.verdict is Verdict.STRICT and v.holds
        assert v.padding.size == 0

    def test_clustered_pair_fails(self):
        v = interlace_check([0.0, 0.1], [1.0, 2.0, 3.0, 4.0])
        assert v.verdict is Verdict.FAIL and not v.holds
        assert v.violation == (0.0, 0.1)

    def test_padding_fills_empty_gaps(self):
        v = interlace_check([0.5], [0.0, 1.0, 3.0])
        assert v.verdict is Verdict.STRICT
        np.testing.assert_allclose(v.padding, [2.0, (3.0 + TAU) / 2])

    def test_shared_point_is_weak(self):
        v = interlace_check([1.0], [1.0, 2.0], strict=False)
        assert v.verdict is Verdict.WEAK and v.holds
        assert v.violation == (1.0, 1.0)
        assert not interlace_check([1.0], [1.0, 2.0], strict=True).holds

    def test_two_small_in_one_open_gap_with_shared_neighbours(self):
        # closed arcs reach the shared endpoints, so this is weak but not strict
        v = interlace_check([0.0, 0.5, 1.0], [0.0, 1.0, 4.0])
        assert v.verdict is Verdict.WEAK

    def test_single_large_point(self):
        assert interlace_check([1.0], [2.0]).verdict is Verdict.STRICT
        assert interlace_check([2.0], [2.0]).verdict is Verdict.WEAK

    def test_wraparound(self):
        v = interlace_check([TAU - 0.05, 1.0], [0.05, 2.0])
        assert v.verdict is Verdict.STRICT
        assert interlace_check([TAU - 0.05, 3.0], [0.05, 2.0]).verdict is Verdict.FAIL

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            interlace_check([], [1.0])
        with pytest.raises(DomainError):
            interlace_check([1.0, 2.0], [1.5])

    def test_min_separation(self):
        v = interlace_check([0.5], [0.0, 2.0])
        assert v.min_separation == pytest.approx(0.5)


class TestAgainstBruteForce:
    def test_exhaustive_small_lattice(self):
        # every pair of subsets of an 8-point lattice (positions doubled)
        period = 16
        pts = range(0, period, 2)
        import itertools
        count = 0
        for k in range(1, 4):
            for large in itertools.combinations(pts, k):
                for j in range(1, k + 1):
                    for small in itertools.combinations(pts, j):
                        v = _verdict(small, large, period)
                        assert (v is Verdict.STRICT) == brute_interlace(set(small), set(large), period, False)
                        assert (v is not Verdict.FAIL) == brute_interlace(set(small), set(large), period, True)
                        count += 1
        assert count > 1000

    def test_random_configurations(self):
        rng = np.random.default_rng(21)
        period = 40
        for _ in range(300):
            k = int(rng.integers(1, 7))
            j = int(rng.integers(1, k + 1))
            large = set((2 * rng.choice(period // 2, k, replace=False)).tolist())
            small = set((2 * rng.choice(period // 2, j, replace=False)).tolist())
            v = _verdict(small, large, period)
            assert (v is Verdict.STRICT) == brute_interlace(small, large, period, False)
            assert (v is not Verdict.FAIL) == brute_interlace(small, large, period, True)

    def test_padding_is_a_witness(self):
        rng = np.random.default_rng(22)
        for _ in range(200):
            large = np.sort(rng.uniform(0, TAU, int(rng.integers(2, 8))))
            small = rng.uniform(0, TAU, int(rng.integers(1, large.size + 1)))
            v = interlace_check(small, large)
            if v.verdict is not Verdict.STRICT:
                continue
            z = np.sort(np.concatenate([small, v.padding]))
            assert z.size == large.size
            merged = sorted([(t, 0) for t in z] + [(t, 1) for t in large])
            kinds = [k for _, k in merged]
            assert all(kinds[i] != kinds[(i + 1) % len(kinds)] for i in range(len(kinds)))


class TestPointSets:
    def test_collapse(self):
        s = CircularPointSet.from_angles([0.0, 1e-12, 1.0, TAU - 1e-12])
        assert len(s) == 2 and s.collapsed

    def test_operations(self):
        a = CircularPointSet.from_angles([0.0, 1.0, 2.0])
        b = CircularPointSet.from_angles([1.0 + 1e-10, 3.0])
        assert a.intersect(b).angles.tolist() == [1.0]
        assert a.minus(b).angles.tolist() == [0.0, 2.0]
        assert len(a.union(b)) == 4
        assert a.same_as(CircularPointSet.from_angles([2.0, 1.0 - 1e-9, 0.0]))
        assert not a.same_as(b)

    def test_marginal_band(self):
        assert has_marginal_pair([[0.0], [5e-9]], 1e-11, 1e-7)
        assert not has_marginal_pair([[0.0], [1e-13]], 1e-11, 1e-7)
        assert match_eps([[0.0, 1.0], [1.0 + 3e-9]]) == pytest.approx(1e-11)
        assert match_eps([[0.0, 1.0], [2.0]]) == pytest.approx(1e-8)


class TestSnap:
    def test_tight_seed_pulls_partner(self):
        sets, n, notes = snap_coincidences([[1.0], [1.0 + 5e-13], [1.0 + 4e-9]])
        assert n == 1
        assert [s[0] for s in sets] == [1.0, 1.0, 1.0]
        assert any("merged cluster" in x for x in notes)

    def test_close_without_seed_stays_apart(self):
        sets, n, _ = snap_coincidences([[1.0], [1.0 + 4e-9]])
        assert n == 0 and sets[1][0] == 1.0 + 4e-9

    def test_ambiguous_partner(self):
        sets, n, notes = snap_coincidences([[1.0], [1.0 + 1e-13], [1.0 + 3e-9, 1.0 + 5e-9]])
        assert n == 1
        assert sets[2].tolist() == [1.0 + 3e-9, 1.0 + 5e-9]
        assert any("ambiguous" in x for x in notes)

    def test_far_points_untouched(self):
        sets, n, notes = snap_coincidences([[0.0, 2.0], [1.0]])
        assert n == 0 and not notes
