"""Exit criteria for the package, one test per criterion.

Each test prints a single PASS/FAIL line; the lines are repeated in an
"acceptance" section at the end of the pytest run.
"""
import time

import numpy as np
import pytest

from oracles import brute_interlace, lattice_angles
from popuc.campaign import JobSpec, run_campaign
from popuc.circle import angular_distance
from popuc.cmv import ParameterArray
from popuc.demo import run_demo
from popuc.engine import popuc_eval
from popuc.interlace import Verdict, corollary_verify, interlace_check

pytestmark = pytest.mark.acceptance


def _failures(summary, limit=3):
    bad = [r for r in summary.records if not r.ok][:limit]
    return [{"index": r.index, "checks": r.checks, "error": r.error} for r in bad]


def test_worked_example_reproduction(verdict_line):
    run_demo()  # warm-up: imports and first-call overheads are not part of the run
    start = time.perf_counter()
    res = run_demo()
    elapsed = time.perf_counter() - start
    d = res.data
    ok = (res.ok and elapsed < 1.0 and d["angle_error_C3"] <= 1e-10 and d["angle_error_C6"] <= 1e-10
          and d["pseudo_reflection_deviation"] <= 1e-12 and d["theorem_ii"]["B"] == []
          and len(d["theorem_ii"]["A"]) == 3 and d["theorem_ii"]["interlace"]["verdict"] == "STRICT")
    verdict_line(1, ok, f"demo in {elapsed * 1e3:.1f} ms, angle errors "
                        f"{d['angle_error_C3']:.1e}/{d['angle_error_C6']:.1e}")
    assert ok, res.report


def test_monic_special_case(verdict_line):
    rng = np.random.default_rng(2)
    worst = 0.0
    for n in range(1, 11):
        p = ParameterArray([0] * n, 1)
        z = 2.0 * np.sqrt(rng.random(50)) * np.exp(2j * np.pi * rng.random(50))
        ref = z ** (n + 1) - 1
        worst = max(worst, float(np.max(np.abs(popuc_eval(p, z) - ref) / np.abs(ref))))
    ok = worst <= 1e-10
    verdict_line(2, ok, f"max relative error {worst:.2e} over n = 1..10, 50 points each")
    assert ok


def test_rotated_tail_campaign(verdict_line):
    start = time.perf_counter()
    s = run_campaign(JobSpec("theorem1", seed=1, trials=200, n_max=16))
    elapsed = time.perf_counter() - start
    ok = s.ok and len(s.records) == 200 and elapsed < 60.0
    verdict_line(3, ok, f"{s.passed}/200 STRICT in {elapsed:.1f} s")
    assert ok, _failures(s)


def test_common_eigenvalue_campaign(verdict_line):
    # half the trials are built to share an eigenvalue, so A is nonempty there
    s = run_campaign(JobSpec("theorem2", seed=2, trials=200, n_max=16, resonant=0.5))
    four = all(r.checks["bound"] and r.checks["alt_expression"] and r.checks["balance"]
               and r.checks["verdict"] == "STRICT" for r in s.records)
    nonempty = sum(r.checks["size_A"] > 0 for r in s.records)
    ok = s.ok and four and len(s.records) == 200
    verdict_line(4, ok, f"{s.passed}/200 trials, {nonempty} with nonempty A")
    assert ok, _failures(s)


def test_last_step_campaign(verdict_line):
    s = run_campaign(JobSpec("corollary", seed=3, trials=100, n_max=16, resonant=0.5))
    branches = [r.checks["branch"] for r in s.records]
    fixture = corollary_verify(ParameterArray([0] * 5, 1), 1)
    fixture_ok = (fixture.ok and fixture.branch == 1 and len(fixture.common) == 1
                  and angular_distance(fixture.common.angles[0], 0.0) <= 1e-8)
    ok = s.ok and fixture_ok and all(b in (1, 2) for b in branches)
    verdict_line(5, ok, f"{s.passed}/100 trials (branch 1: {branches.count(1)}, "
                        f"branch 2: {branches.count(2)}), fixture branch {fixture.branch}")
    assert ok, _failures(s)


def test_oracle_equivalence(verdict_line):
    s = run_campaign(JobSpec("oracle", seed=4, trials=200, n_max=32))
    err = s.max_of("oracle_error")
    ok = s.ok and err <= 1e-9
    verdict_line(6, ok, f"{s.passed}/200 arrays, max angle error {err:.1e}")
    assert ok, _failures(s)


def test_rank_one_lemmas(verdict_line):
    s = run_campaign(JobSpec("lemmas", seed=5, trials=100, n_max=11))
    claim = all(r.checks.get("claim", True) for r in s.records)
    tm, de, eq = s.max_of("tm_residual"), s.max_of("det_update_residual"), s.max_of("phase_value_residual")
    ok = s.ok and claim and tm <= 1e-8 and de <= 1e-10 and eq <= 1e-7
    verdict_line(7, ok, f"{s.passed}/100; TM {tm:.1e}, det-update {de:.1e}, phase-value {eq:.1e}, claim {claim}")
    assert ok, _failures(s)


def test_structural_identities(verdict_line):
    s = run_campaign(JobSpec("structure", seed=6, trials=100, n_min=2, n_max=16))
    parities = {r.checks["m"] % 2 for r in s.records}
    worst = max(s.max_of(k) for k in ("theta_gauge_deviation", "gauge_deviation",
                                      "factor-gauge_deviation", "direct-sum_deviation"))
    ok = s.ok and parities == {0, 1} and worst <= 1e-12
    verdict_line(8, ok, f"{s.passed}/100, max deviation {worst:.1e}, parities {sorted(parities)}")
    assert ok, _failures(s)


def test_interlacing_against_brute_force(verdict_line):
    rng = np.random.default_rng(9)
    period = 2 * 10
    counts = {v: 0 for v in Verdict}
    mismatches = []
    for trial in range(1000):
        k = int(rng.integers(1, 8))
        j = int(rng.integers(1, k + 1))
        large = set((2 * rng.choice(period // 2, k, replace=False)).tolist())
        if rng.random() < 0.5:
            # force at least one shared point
            shared = int(rng.integers(1, j + 1))
            keep = rng.choice(sorted(large), shared, replace=False).tolist()
            rest = sorted(set(range(0, period, 2)) - set(keep))
            small = set(keep) | set(rng.choice(rest, j - shared, replace=False).tolist())
        else:
            small = set((2 * rng.choice(period // 2, j, replace=False)).tolist())
        v = interlace_check(lattice_angles(small, period), lattice_angles(large, period)).verdict
        counts[v] += 1
        if (v is Verdict.STRICT) != brute_interlace(small, large, period, False) or \
                (v is not Verdict.FAIL) != brute_interlace(small, large, period, True):
            mismatches.append((sorted(small), sorted(large), v.value))
    ok = not mismatches and all(counts.values())
    verdict_line(9, ok, f"1000 configurations, {len(mismatches)} mismatches; "
                        + ", ".join(f"{v.value} {c}" for v, c in counts.items()))
    assert ok, mismatches[:5]
