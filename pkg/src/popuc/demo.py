"""Worked example: the all-zero arrays of length 2 and 5 with b = 1.

Both CMV matrices are permutation matrices, their spectra are the cube and
sixth roots of unity, and with m = 2, b_2 = 1 the three cube roots are
exactly the common eigenvalues.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from popuc.circle import CircularPointSet, angular_distance, canonical_angle
from popuc.cmv import ParameterArray, cmv
from popuc.engine import pseudo_reflections, zeros
from popuc.formats import complex_to_json, dump_json
from popuc.interlace import Verdict, theorem_ii_verify
from popuc.svg import render_svg
from popuc.tolerances import DEFAULT, Tolerances

ANGLE_TOL = 1e-10


@dataclass
class DemoResult:
    ok: bool
    lines: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    svg: str = ""

    @property
    def report(self) -> str:
        return "\n".join(self.lines) + "\n"


def _roots_of_unity(k: int) -> np.ndarray:
    return canonical_angle(2.0 * np.pi * np.arange(k) / k)


def _angle_error(found: np.ndarray, expected: np.ndarray) -> float:
    if found.size != expected.size:
        return float("inf")
    return float(max(np.min(angular_distance(expected, t)) for t in found))


def _matrix_lines(name: str, c: np.ndarray) -> list[str]:
    rows = [" ".join(f"{int(round(x.real)):2d}" for x in row) for row in c]
    return [f"{name} ="] + ["  " + r for r in rows]


def run_demo(out_dir: str | Path | None = None, tol: Tolerances = DEFAULT) -> DemoResult:
    small = ParameterArray([0, 0], 1)
    big = ParameterArray([0] * 5, 1)
    res = DemoResult(ok=True)
    say = res.lines.append

    def check(ok: bool, what: str) -> None:
        say(f"[{'ok' if ok else 'MISMATCH'}] {what}")
        res.ok &= bool(ok)

    c3, c6 = cmv(small.alphas, small.b), cmv(big.alphas, big.b)
    for name, c in (("C(0,0,1)", c3), ("C(0,0,0,0,0,1)", c6)):
        say("")
        res.lines.extend(_matrix_lines(name, c))
        is_perm = np.allclose(c.imag, 0) and np.all(np.isin(np.round(c.real, 12), (0.0, 1.0))) \
            and np.all(np.round(c.real).sum(axis=0) == 1) and np.all(np.round(c.real).sum(axis=1) == 1)
        check(is_perm, f"{name} is a permutation matrix")
    say("")

    z3, z6 = zeros(small, tol), zeros(big, tol)
    e3 = _angle_error(z3.angles, _roots_of_unity(3))
    e6 = _angle_error(z6.angles, _roots_of_unity(6))
    say("sigma(C(0,0,1)) angles / (2 pi):       " + ", ".join(f"{t / (2 * np.pi):.12f}" for t in z3.angles))
    say("sigma(C(0,0,0,0,0,1)) angles / (2 pi): " + ", ".join(f"{t / (2 * np.pi):.12f}" for t in z6.angles))
    check(e3 <= ANGLE_TOL, f"sigma(C(0,0,1)) = {{1, exp(+-2 pi i/3)}} (angle error {e3:.2e})")
    check(e6 <= ANGLE_TOL, f"sigma(C(0,0,0,0,0,1)) = sixth roots of unity (angle error {e6:.2e})")

    rng = np.random.default_rng(0)
    worst = 0.0
    for t in rng.uniform(0, 2 * np.pi, 8):
        zeta = np.exp(1j * t)
        bs = pseudo_reflections(big, zeta)
        worst = max(worst, float(np.max(np.abs(bs - zeta ** (5 - np.arange(6))))))
    check(worst <= 1e-12, f"b_j(zeta) = zeta^(5 - j) for j = 0..5 (max deviation {worst:.2e})")

    rep = theorem_ii_verify(big, 2, 1.0, tol)
    check(rep.setA.same_as(rep.setC) and rep.setC.same_as(z3.point_set()),
          "A = C = sigma(C(0,0,1))")
    check(len(rep.setA) == 3 == min(2 + 1, 5 - 2), f"|A| = {len(rep.setA)} = min(m+1, n-m) = 3")
    check(len(rep.setB) == 0, "B is empty")
    check(rep.interlace.verdict is Verdict.STRICT,
          f"sigma(C_6) minus A versus sigma(C_3): {rep.interlace.verdict.value}")
    check(rep.ok, "all set relations hold")

    res.data = {
        "C3": complex_to_json(c3), "C6": complex_to_json(c6),
        "sigma_C3": [float(t) for t in z3.angles], "sigma_C6": [float(t) for t in z6.angles],
        "angle_error_C3": e3, "angle_error_C6": e6, "pseudo_reflection_deviation": worst,
        "theorem_ii": rep.to_dict(), "ok": res.ok,
    }
    res.svg = render_svg(
        [CircularPointSet(z6.angles, "sigma(C(0,0,0,0,0,1))"),
         CircularPointSet(z3.angles, "sigma(C(0,0,1))")],
        common=rep.setA, title="common eigenvalues A (double rings)")
    say("")
    say("all checks passed" if res.ok else "some checks FAILED")
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "demo_report.txt").write_text(res.report)
        (out / "demo.json").write_text(dump_json(res.data))
        (out / "demo.svg").write_text(res.svg)
    return res
