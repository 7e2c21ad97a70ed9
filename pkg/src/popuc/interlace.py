"""Circular interlacing and the refined interlacing theorems for CMV spectra.

Two finite point sets on the circle interlace when the smaller one can be
padded up to the size of the larger so that the two alternate. The decision
procedure here works on gaps: sort the large set, and count how many points
of the small set fall in each open arc between circularly consecutive large
points.

* strict (open arcs): no point is shared and every gap holds at most one
  small point; the padding witness is the midpoint of every empty gap;
* weak (closed arcs): a shared point meets both sets at once, so the only
  obstructions are two small-only points with no large point between them,
  or more consecutive large-only points than the padding can break up. The
  witness pads sit on large-only points.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from popuc.circle import (TWO_PI, CircularPointSet, angle_of, angular_distance, canonical_angle,
                          has_marginal_pair, match_eps, snap_coincidences)
from popuc.cmv import ParameterArray, cmv
from popuc.engine import dense_angles, gamma, level_set, zero_angles
from popuc.errors import DomainError
from popuc.tolerances import DEFAULT, Tolerances


class Verdict(str, enum.Enum):
    STRICT = "STRICT"
    WEAK = "WEAK"
    FAIL = "FAIL"


@dataclass(frozen=True, eq=False)
class InterlacingVerdict:
    verdict: Verdict
    padding: np.ndarray
    violation: tuple[float, float] | None = None
    reason: str = ""
    strict: bool = True
    # smallest angular distance between a small and a large point
    min_separation: float = float("nan")

    @property
    def holds(self) -> bool:
        if self.strict:
            return self.verdict is Verdict.STRICT
        return self.verdict is not Verdict.FAIL

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "padding": [float(t) for t in self.padding],
            "violation": None if self.violation is None else [float(t) for t in self.violation],
            "reason": self.reason,
            "min_separation": float(self.min_separation),
        }


def _as_set(points, eps: float) -> CircularPointSet:
    if isinstance(points, CircularPointSet):
        return points
    return CircularPointSet.from_angles(points, eps=eps)


def _gap_end(large: np.ndarray, i: int) -> float:
    nxt = large[(i + 1) % large.size]
    return nxt + TWO_PI if nxt <= large[i] else nxt


def _midpoint(large: np.ndarray, i: int) -> float:
    return canonical_angle(0.5 * (large[i] + _gap_end(large, i)))


def _weak_padding(seq: list[tuple[float, str]], pads: int):
    """Padding for the closed-arc (weak) reading, or a reason it cannot exist.

    ``seq`` is the merged circular sequence of positions labelled ``"s"``
    (small only), ``"l"`` (large only) or ``"b"`` (both). A closed arc
    between consecutive points of one set must meet the other set, so the
    only obstructions are two adjacent ``"s"`` positions, or two adjacent
    ``"l"`` positions left unpadded. Padding a large-only point turns it
    into ``"b"``; a run of r consecutive ``"l"`` needs floor(r/2) of those.
    """
    size = len(seq)
    for i in range(size):
        j = (i + 1) % size
        if i != j and seq[i][1] == "s" and seq[j][1] == "s":
            return None, (seq[i][0], seq[j][0]), "closed arc between two small points misses the large set"
    start = next(i for i in range(size) if seq[i][1] != "l")
    order = seq[start:] + seq[:start]
    chosen: list[float] = []
    spare: list[float] = []
    run: list[float] = []
    worst: list[float] = []
    for t, kind in order + [(None, "end")]:
        if kind == "l":
            run.append(t)
            continue
        if len(run) > max(1, len(worst)):
            worst = run
        chosen.extend(run[1::2])
        spare.extend(run[0::2])
        run = []
    if len(chosen) > pads:
        return None, (worst[0], worst[-1]), f"large-only runs need {len(chosen)} padding points, only {pads} available"
    chosen.extend(spare[:pads - len(chosen)])
    return np.sort(np.array(chosen, dtype=float)), None, ""


def interlace_check(small, large, strict: bool = True,
                    eps: float = DEFAULT.eps_match) -> InterlacingVerdict:
    """Decide whether ``small`` and ``large`` (strictly) interlace on the circle.

    The verdict is the strongest class that holds; ``strict`` only selects
    what :attr:`InterlacingVerdict.holds` reports. A single large point
    interlaces weakly with anything and strictly with any other point.
    """
    small = _as_set(small, eps)
    large = _as_set(large, eps)
    if not len(small) or not len(large):
        raise DomainError("interlacing needs two nonempty point sets")
    if len(small) > len(large):
        raise DomainError(f"small set has {len(small)} points, large set only {len(large)}")
    L = large.angles
    S = small.angles
    size = L.size
    sep = float(min(np.min(angular_distance(L, t)) for t in S))

    shared = np.zeros(size, dtype=bool)
    counts = np.zeros(size, dtype=int)
    seq: list[tuple[float, str]] = []
    for t in S:
        d = angular_distance(L, t)
        k = int(np.argmin(d))
        if d[k] <= eps:
            shared[k] = True
            continue
        g = int(np.searchsorted(L, t, side="right")) - 1
        counts[g % size] += 1
        seq.append((float(t), "s"))
    seq.extend((float(t), "b" if shared[k] else "l") for k, t in enumerate(L))
    seq.sort()

    if not shared.any() and np.all(counts <= 1):
        pad = np.array([_midpoint(L, i) for i in range(size) if not counts[i]])
        return InterlacingVerdict(Verdict.STRICT, pad, None, "", strict, sep)
    pad, arc, why = _weak_padding(seq, size - S.size)
    if pad is None:
        return InterlacingVerdict(Verdict.FAIL, np.zeros(0), arc, why, strict, sep)
    if shared.any():
        t = float(L[np.flatnonzero(shared)[0]])
        arc, why = (t, t), f"point {t:.17g} is shared by both sets"
    else:
        g = int(np.flatnonzero(counts > 1)[0])
        arc, why = (float(L[g]), float(L[(g + 1) % size])), "open arc holds two small points"
    return InterlacingVerdict(Verdict.WEAK, pad, arc, why, strict, sep)


def rotate_tail(p: ParameterArray, m: int, beta: complex,
                tol: Tolerances = DEFAULT) -> ParameterArray:
    """``(alpha_0, ..., alpha_{m-1}, beta alpha_m, ..., beta alpha_{n-1}, beta b)``."""
    beta = complex(beta)
    if abs(abs(beta) - 1.0) > tol.eps_unit:
        raise DomainError(f"beta not on the unit circle: {beta!r}")
    if angular_distance(angle_of(beta), 0.0) <= tol.eps_match:
        raise DomainError("beta = 1 is excluded")
    if not 0 <= m <= p.n:
        raise IndexError(f"m={m} out of range [0, {p.n}]")
    alphas = list(p.alphas[:m]) + [beta * a for a in p.alphas[m:]]
    return ParameterArray(alphas, beta * p.b, tol.eps_unit)


def theorem_i_verify(p: ParameterArray, m: int, beta: complex,
                     tol: Tolerances = DEFAULT) -> InterlacingVerdict:
    """Strict interlacing of the spectra of ``C(p)`` and its rotated tail."""
    rotated = rotate_tail(p, m, beta, tol)
    a = zero_angles(p, tol)
    b = zero_angles(rotated, tol)
    eps = match_eps([a, b], tol.eps_match, tol.eps_tight)
    if eps < tol.eps_match:
        a = zero_angles(p, tol, tol.xtol_tight)
        b = zero_angles(rotated, tol, tol.xtol_tight)
    return interlace_check(CircularPointSet.from_angles(a, eps=eps),
                           CircularPointSet.from_angles(b, eps=eps), strict=True, eps=eps)


def build_N(p: ParameterArray, m: int, b_m: complex, tol: Tolerances = DEFAULT) -> np.ndarray:
    """``C(alpha_{m+1}, ..., alpha_{n-1}, b) @ diag(gamma_m, I)``."""
    if not 0 <= m < p.n:
        raise IndexError(f"m={m} out of range [0, {p.n})")
    g = gamma(p.alphas[m], b_m, tol.eps_unit)
    tail = cmv(p.alphas[m + 1:], p.b)
    d = np.ones(tail.shape[0], dtype=complex)
    d[0] = g
    return tail * d[None, :]


def common_eigen_set_C(p: ParameterArray, m: int, b_m: complex,
                       tol: Tolerances = DEFAULT, xtol: float | None = None) -> CircularPointSet:
    """All circle points with ``b_m(zeta) == b_m``; there are n - m of them."""
    return CircularPointSet.from_angles(level_set(p, m, b_m, tol, xtol), "C", tol.eps_match)


@dataclass(frozen=True, eq=False)
class TheoremIIReport:
    setA: CircularPointSet
    setB: CircularPointSet
    setC: CircularPointSet
    spectrum_n: CircularPointSet
    spectrum_m: CircularPointSet
    spectrum_N: CircularPointSet
    common_ok: bool
    bound_ok: bool
    alt_expr_ok: bool
    balance_ok: bool
    interlace: InterlacingVerdict
    m: int
    n: int
    retightened: bool = False
    notes: tuple[str, ...] = field(default_factory=tuple)
    eps: float = DEFAULT.eps_match

    @property
    def ok(self) -> bool:
        return (self.common_ok and self.bound_ok and self.alt_expr_ok
                and self.balance_ok and self.interlace.verdict is Verdict.STRICT)

    def to_dict(self) -> dict:
        return {
            "n": self.n, "m": self.m,
            "A": self.setA.angles.tolist(), "B": self.setB.angles.tolist(),
            "C": self.setC.angles.tolist(),
            "common_ok": self.common_ok, "bound_ok": self.bound_ok,
            "alt_expr_ok": self.alt_expr_ok, "balance_ok": self.balance_ok,
            "interlace": self.interlace.to_dict(), "retightened": self.retightened,
            "eps": self.eps,
            "ok": self.ok,
        }


def _snap_twin(twin: np.ndarray, ref: np.ndarray, eps: float) -> np.ndarray:
    """Move each point of ``twin`` onto its nearest ``ref`` point within ``eps``."""
    out = np.array(twin, dtype=float)
    if ref.size:
        for i, t in enumerate(out):
            d = angular_distance(ref, t)
            j = int(np.argmin(d))
            if d[j] <= eps:
                out[i] = ref[j]
    return out


def _coincidence_policy(compute, tol: Tolerances):
    """Compute angle sets, retighten when marginal, then snap coincidences.

    ``compute(xtol)`` returns the sets whose common points are to be
    identified. Returns the snapped sets, the matching threshold, and notes.
    """
    sets = compute(None)
    notes: list[str] = []
    marginal = has_marginal_pair(sets, tol.eps_tight, 10.0 * tol.eps_match)
    if marginal:
        sets = compute(tol.xtol_tight)
        notes.append("marginal pair; roots recomputed at the tight width")
    snapped, _, snap_notes = snap_coincidences(sets, tol.eps_match, tol.eps_tight)
    notes.extend(snap_notes)
    eps = match_eps(snapped, tol.eps_match, tol.eps_tight)
    return snapped, eps, notes


def theorem_ii_verify(p: ParameterArray, m: int, b_m: complex,
                      tol: Tolerances = DEFAULT) -> TheoremIIReport:
    """Check the common-eigenvalue set, its bound, and the refined interlacing.

    A point common to the three sets sigma(C_n), sigma(C_m) and C is
    ill-conditioned in sigma(C_m) and can sit well away from its copies in
    the other two. Such triples are identified first (a tight pair plus a
    partner within ``eps_match``), then every set operation runs at the
    threshold chosen by :func:`popuc.circle.match_eps`.
    """
    b_m = complex(b_m)
    n = p.n
    head = p.head(m, b_m)

    def compute(xtol):
        return [zero_angles(p, tol, xtol), zero_angles(head, tol, xtol),
                level_set(p, m, b_m, tol, xtol)]

    (ang_n, ang_m, ang_c), eps, notes = _coincidence_policy(compute, tol)
    ang_N = _snap_twin(dense_angles(build_N(p, m, b_m, tol)), ang_c, tol.eps_match)

    def pts(a, label):
        return CircularPointSet.from_angles(a, label, eps)

    sig_n, sig_m, set_c, sig_N = (pts(ang_n, "sigma(C_n)"), pts(ang_m, "sigma(C_m)"),
                                  pts(ang_c, "C"), pts(ang_N, "sigma(N)"))
    set_a = set_c.intersect(sig_m, "A", eps)
    set_b = sig_N.minus(set_a, "B", eps)
    common = sig_n.intersect(sig_m, "common", eps)
    alt = sig_N.intersect(sig_m, "A'", eps)
    left = sig_n.minus(set_a, "sigma(C_n) minus A", eps)
    right = sig_m.union(set_b, "sigma(C_m) with B", eps)
    balance = len(left) == n + 1 - len(set_a) == len(right)
    verdict = interlace_check(right, left, strict=True, eps=eps) if balance and len(left) \
        else InterlacingVerdict(Verdict.FAIL, np.zeros(0), None, "cardinality imbalance")
    return TheoremIIReport(
        setA=set_a, setB=set_b, setC=set_c, spectrum_n=sig_n, spectrum_m=sig_m,
        spectrum_N=sig_N,
        common_ok=set_a.same_as(common, eps),
        bound_ok=len(set_a) <= min(m + 1, n - m),
        alt_expr_ok=set_a.same_as(alt, eps),
        balance_ok=balance,
        interlace=verdict, m=m, n=n, retightened=bool(notes), notes=tuple(notes),
        eps=eps,
    )


@dataclass(frozen=True, eq=False)
class CorollaryReport:
    zeta_star: float
    branch: int
    in_big: bool
    in_small: bool
    common: CircularPointSet
    common_ok: bool
    interlace: InterlacingVerdict
    eps: float = DEFAULT.eps_match

    @property
    def ok(self) -> bool:
        return self.branch in (1, 2) and self.common_ok and self.interlace.verdict is Verdict.STRICT

    def to_dict(self) -> dict:
        return {
            "zeta_star": self.zeta_star, "branch": self.branch,
            "in_big": self.in_big, "in_small": self.in_small,
            "common": self.common.angles.tolist(), "common_ok": self.common_ok,
            "interlace": self.interlace.to_dict(), "eps": self.eps, "ok": self.ok,
        }


def corollary_verify(p: ParameterArray, b_prev: complex,
                     tol: Tolerances = DEFAULT) -> CorollaryReport:
    """The m = n-1 case: at most one common eigenvalue, namely conj(b) gamma_{n-1}."""
    if p.n < 1:
        raise DomainError("corollary needs n >= 1")
    star = p.b.conjugate() * gamma(p.alphas[-1], b_prev, tol.eps_unit)
    head = p.head(p.n - 1, b_prev)

    def compute(xtol):
        return [zero_angles(p, tol, xtol), zero_angles(head, tol, xtol), [angle_of(star)]]

    (ang_big, ang_small, (t_star,)), eps, _ = _coincidence_policy(compute, tol)
    t_star = float(t_star)
    star_set = CircularPointSet(np.array([t_star]), "zeta*")
    big = CircularPointSet.from_angles(ang_big, "sigma(C_n)", eps)
    small = CircularPointSet.from_angles(ang_small, "sigma(C_{n-1})", eps)
    in_big, in_small = big.contains(t_star, eps), small.contains(t_star, eps)
    common = big.intersect(small, "common", eps)
    if in_big and in_small:
        branch = 1
        common_ok = len(common) == 1 and angular_distance(common.angles[0], t_star) <= eps
        verdict = interlace_check(small, big.minus(star_set, eps=eps), True, eps)
    elif not in_big and not in_small:
        branch = 2
        common_ok = len(common) == 0
        verdict = interlace_check(big, small.union(star_set, eps=eps), True, eps)
    else:
        branch = 0
        common_ok = False
        verdict = InterlacingVerdict(Verdict.FAIL, np.zeros(0), (t_star, t_star),
                                     "zeta* lies in exactly one spectrum")
    return CorollaryReport(t_star, branch, in_big, in_small, common, common_ok, verdict, eps)
