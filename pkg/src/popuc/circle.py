"""Points on the unit circle stored as principal angles in [0, 2*pi)."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from popuc.tolerances import DEFAULT

TWO_PI = 2.0 * np.pi


def canonical_angle(theta):
    """Reduce angle(s) modulo 2*pi into [0, 2*pi)."""
    t = np.mod(np.asarray(theta, dtype=float), TWO_PI)
    # np.mod can return exactly 2*pi for tiny negative inputs
    t = np.where(t >= TWO_PI, 0.0, t)
    return float(t) if t.ndim == 0 else t


def angle_of(z):
    """Principal angle of complex number(s), mapped into [0, 2*pi)."""
    z = np.asarray(z, dtype=complex)
    return canonical_angle(np.arctan2(z.imag, z.real))


def angular_distance(a, b):
    """Length of the shorter arc between angles ``a`` and ``b``."""
    d = np.abs(np.mod(np.asarray(a, float) - np.asarray(b, float), TWO_PI))
    d = np.minimum(d, TWO_PI - d)
    return float(d) if d.ndim == 0 else d


def on_circle(theta) -> np.ndarray:
    return np.exp(1j * np.asarray(theta, dtype=float))


@dataclass(frozen=True, eq=False)
class CircularPointSet:
    """A sorted set of circle points.

    Points closer than ``eps`` (angular distance) are collapsed to the first
    representative; ``collapsed`` records that this happened.
    """

    angles: np.ndarray
    label: str = ""
    collapsed: bool = field(default=False, compare=False)

    @classmethod
    def from_angles(cls, angles: Iterable[float], label: str = "",
                    eps: float = DEFAULT.eps_match) -> "CircularPointSet":
        a = np.sort(canonical_angle(np.atleast_1d(np.asarray(list(angles), dtype=float))))
        if a.size == 0:
            return cls(np.zeros(0), label)
        keep = [a[0]]
        for t in a[1:]:
            if angular_distance(t, keep[-1]) > eps:
                keep.append(t)
        # wrap-around duplicate (e.g. 1e-12 and 2*pi - 1e-12)
        if len(keep) > 1 and angular_distance(keep[-1], keep[0]) <= eps:
            keep.pop()
        out = np.array(keep)
        return cls(out, label, collapsed=out.size != a.size)

    @classmethod
    def from_complex(cls, points: Iterable[complex], label: str = "",
                     eps: float = DEFAULT.eps_match) -> "CircularPointSet":
        return cls.from_angles(angle_of(np.asarray(list(points), dtype=complex)), label, eps)

    def __len__(self) -> int:
        return int(self.angles.size)

    def __iter__(self):
        return iter(self.angles.tolist())

    @property
    def points(self) -> np.ndarray:
        return on_circle(self.angles)

    def contains(self, theta: float, eps: float = DEFAULT.eps_match) -> bool:
        if not len(self):
            return False
        return bool(np.min(angular_distance(self.angles, theta)) <= eps)

    def union(self, other: "CircularPointSet", label: str = "",
              eps: float = DEFAULT.eps_match) -> "CircularPointSet":
        return CircularPointSet.from_angles(
            np.concatenate([self.angles, other.angles]), label, eps)

    def minus(self, other: "CircularPointSet", label: str = "",
              eps: float = DEFAULT.eps_match) -> "CircularPointSet":
        keep = [t for t in self.angles if not other.contains(t, eps)]
        return CircularPointSet(np.array(keep, dtype=float), label)

    def intersect(self, other: "CircularPointSet", label: str = "",
                  eps: float = DEFAULT.eps_match) -> "CircularPointSet":
        keep = [t for t in self.angles if other.contains(t, eps)]
        return CircularPointSet(np.array(keep, dtype=float), label)

    def same_as(self, other: "CircularPointSet", eps: float = DEFAULT.eps_match) -> bool:
        if len(self) != len(other):
            return False
        return all(other.contains(t, eps) for t in self.angles) and \
            all(self.contains(t, eps) for t in other.angles)


def has_marginal_pair(angle_sets: Sequence[Sequence[float]], lo: float, hi: float) -> bool:
    """True when two points (from any of the sets) lie at distance in ``(lo, hi]``."""
    pts = np.concatenate([np.asarray(a, dtype=float).ravel() for a in angle_sets]) \
        if angle_sets else np.zeros(0)
    if pts.size < 2:
        return False
    d = angular_distance(pts[:, None], pts[None, :])
    iu = np.triu_indices(pts.size, 1)
    d = d[iu]
    return bool(np.any((d > lo) & (d <= hi)))


def match_eps(angle_sets: Sequence[Sequence[float]], eps_match: float = DEFAULT.eps_match,
              eps_tight: float = DEFAULT.eps_tight, guard: float = 10.0) -> float:
    """Set-equality threshold for a group of computed point sets.

    Normally ``eps_match``; when any pair of points falls in the marginal
    band ``(eps_tight, guard * eps_match]`` the coarse threshold cannot
    separate "equal" from "merely close", and ``eps_tight`` is used.
    """
    if has_marginal_pair(angle_sets, eps_tight, guard * eps_match):
        return eps_tight
    return eps_match


def snap_coincidences(angle_sets: Sequence[Sequence[float]],
                      eps_match: float = DEFAULT.eps_match,
                      eps_tight: float = DEFAULT.eps_tight,
                      guard: float = 10.0) -> tuple[list[np.ndarray], int, list[str]]:
    """Identify near-coincident points across sets and move them onto one angle.

    A cluster is seeded by two points from different sets within
    ``eps_tight``. Each other set then joins with its nearest point if that
    point is within ``eps_match`` of every member and its runner-up is at
    least ``guard`` times farther. Every member is replaced by the seed's
    angle. Pairs that are merely close, without a tight seed, are left apart.

    Returns the snapped sets, the number of clusters and diagnostic notes.
    """
    sets = [canonical_angle(np.atleast_1d(np.asarray(a, dtype=float))).astype(float).copy()
            for a in angle_sets]
    notes: list[str] = []
    used = [np.zeros(a.size, dtype=bool) for a in sets]
    clusters = 0
    for s, a in enumerate(sets):
        for i in range(a.size):
            if used[s][i]:
                continue
            seed = a[i]
            members = {s: i}
            for t in range(s + 1, len(sets)):
                b = sets[t]
                if not b.size:
                    continue
                d = angular_distance(b, seed)
                j = int(np.argmin(d))
                if d[j] <= eps_tight and not used[t][j]:
                    members[t] = j
                    break
            if len(members) < 2:
                continue
            for t, b in enumerate(sets):
                if t in members or not b.size:
                    continue
                d = angular_distance(b, seed)
                order = np.argsort(d)
                j = int(order[0])
                if used[t][j] or d[j] > eps_match:
                    continue
                if any(angular_distance(b[j], sets[u][k]) > eps_match for u, k in members.items()):
                    continue
                if order.size > 1 and d[order[1]] < guard * d[j]:
                    notes.append(f"ambiguous partner near {seed:.17g}; not merged")
                    continue
                members[t] = j
            spread = max(angular_distance(sets[t][k], seed) for t, k in members.items())
            if spread > eps_tight:
                notes.append(f"merged cluster at {seed:.17g} spanning {spread:.3e}")
            for t, k in members.items():
                sets[t][k] = seed
                used[t][k] = True
            clusters += 1
    return sets, clusters, notes
