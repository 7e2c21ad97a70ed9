"""Paraorthogonal polynomials: evaluation, pseudo-reflection recursion, zeros.

The zero finder never forms a characteristic polynomial. It uses the
backward recursion

    b_n(z) = b,   b_j(z) = (conj(z) a_j + b_{j+1}(z)) / (conj(a_j) b_{j+1}(z) + conj(z))

and the fact that ``z`` on the circle is an eigenvalue of ``C`` exactly when
``z * b_0(z) == 1``. Multiplying through by ``z`` shows every step is the
disk automorphism ``w -> (w + a) / (1 + conj(a) w)`` applied to
``w = z b_{j+1}(z)``; on the circle that map equals
``w * exp(2i arg(1 + a conj(w)))`` and the argument there never leaves
(-pi/2, pi/2). Summing those arguments gives a continuous, strictly
increasing lift of ``arg(z b_0(z))`` which winds n+1 times, so each eigenvalue
is the unique crossing of one multiple of 2*pi and plain bisection finds it.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from popuc.circle import TWO_PI, CircularPointSet, angle_of, canonical_angle
from popuc.cmv import ParameterArray, build_cmv, cmv, partition
from popuc.errors import ConvergenceError, DomainError, VerificationError
from popuc.tolerances import DEFAULT, Tolerances

log = logging.getLogger(__name__)

_MAX_BISECT = 200


def _check_unit(z: complex, name: str, eps: float) -> complex:
    z = complex(z)
    if abs(abs(z) - 1.0) > eps:
        raise DomainError(f"{name} not on the unit circle: {z!r} (|{name}| = {abs(z)!r})")
    return z


def popuc_eval(p: ParameterArray, z):
    """``det(z I - C(p))`` by LU with partial pivoting.

    Accepts a scalar or an array of evaluation points.
    """
    c = build_cmv(p).entries
    eye = np.eye(c.shape[0])
    zs = np.asarray(z, dtype=complex)
    vals = np.array([np.linalg.det(zz * eye - c) for zz in zs.ravel()], dtype=complex)
    return complex(vals[0]) if zs.ndim == 0 else vals.reshape(zs.shape)


def pseudo_reflection(p: ParameterArray, zeta: complex, m: int,
                      eps_unit: float = DEFAULT.eps_unit) -> complex:
    """``b_m(zeta)`` from the backward recursion, for ``0 <= m <= n``."""
    zeta = _check_unit(zeta, "zeta", eps_unit)
    if not 0 <= m <= p.n:
        raise IndexError(f"m={m} out of range [0, {p.n}]")
    zc = zeta.conjugate()
    b = p.b
    for a in reversed(p.alphas[m:]):
        b = (zc * a + b) / (a.conjugate() * b + zc)
    return b


def pseudo_reflections(p: ParameterArray, zeta: complex,
                       eps_unit: float = DEFAULT.eps_unit) -> np.ndarray:
    """All of ``b_0(zeta), ..., b_n(zeta)`` in one backward sweep."""
    zeta = _check_unit(zeta, "zeta", eps_unit)
    zc = zeta.conjugate()
    out = np.empty(p.n + 1, dtype=complex)
    out[p.n] = p.b
    for j in range(p.n - 1, -1, -1):
        a = p.alphas[j]
        out[j] = (zc * a + out[j + 1]) / (a.conjugate() * out[j + 1] + zc)
    return out


def gamma(alpha: complex, b: complex, eps_unit: float = DEFAULT.eps_unit) -> complex:
    """``(alpha - b) / (conj(alpha) b - 1)``; unimodular for alpha in the disk."""
    alpha = complex(alpha)
    if not abs(alpha) < 1.0:
        raise DomainError(f"alpha outside open unit disk: {alpha!r}")
    b = _check_unit(b, "b", eps_unit)
    return (alpha - b) / (alpha.conjugate() * b - 1.0)


def terminal_for(alphas, m: int, b_m: complex, zeta: complex,
                 eps_unit: float = DEFAULT.eps_unit) -> complex:
    """The ``b`` for which ``b_m(zeta) == b_m``, by running the recursion forwards.

    Inverting one backward step gives ``b_{j+1} = conj(zeta) gamma(alpha_j, b_j)``.
    Used to build parameter arrays with a prescribed common eigenvalue.
    """
    zeta = _check_unit(zeta, "zeta", eps_unit)
    b = _check_unit(b_m, "b_m", eps_unit)
    for a in list(alphas)[m:]:
        b = zeta.conjugate() * gamma(a, b, eps_unit)
    return b / abs(b)


def lifted_phase(p: ParameterArray, theta, m: int = 0) -> np.ndarray:
    """Continuous lift of ``arg b_m(exp(i theta))``.

    Starts from ``arg(b)`` at level n and is strictly increasing in theta
    whenever m < n, gaining 2*pi*(n - m) over one turn.
    """
    theta = np.asarray(theta, dtype=float)
    psi = np.full(theta.shape, np.angle(p.b))
    for a in reversed(p.alphas[m:]):
        w = theta + psi
        psi = w + 2.0 * np.angle(1.0 + a * np.exp(-1j * w))
    return psi


def eigen_phase(p: ParameterArray, theta) -> np.ndarray:
    """Lift of ``arg(z b_0(z))``; eigenvalues sit where it hits 2*pi*k."""
    theta = np.asarray(theta, dtype=float)
    return theta + lifted_phase(p, theta, 0)


class _Bracketing:
    """Grid bracketing plus vectorised bisection for a monotone lift."""

    def __init__(self, phase: Callable[[np.ndarray], np.ndarray], winding: int,
                 target: float, grid: int):
        self.phase = phase
        self.winding = winding
        self.target = target
        self.grid = grid
        self.diagnostics: list[str] = []

    def brackets(self):
        theta = np.linspace(0.0, TWO_PI, self.grid + 1)
        f = self.phase(theta)
        steps = np.diff(f)
        if np.any(steps < -1e-12):
            k = int(np.argmin(steps))
            self.diagnostics.append(
                f"non-monotone phase on [{theta[k]:.17g}, {theta[k + 1]:.17g}]")
            return None
        total = f[-1] - f[0]
        if abs(total - TWO_PI * self.winding) > 1e-6:
            self.diagnostics.append(
                f"phase winds {total / TWO_PI:.6f} turns, expected {self.winding}")
            return None
        k0 = np.ceil((f[0] - self.target) / TWO_PI)
        targets = self.target + TWO_PI * (k0 + np.arange(self.winding))
        idx = np.searchsorted(f, targets, side="right") - 1
        idx = np.clip(idx, 0, self.grid - 1)
        return theta[idx], theta[idx + 1], targets

    def solve(self, xtol: float) -> np.ndarray:
        found = None
        grid = self.grid
        for _ in range(4):
            found = self.brackets()
            if found is not None:
                break
            self.grid *= 4
        self.grid = grid
        if found is None:
            return None
        lo, hi, targets = found
        for _ in range(_MAX_BISECT):
            width = hi - lo
            if np.max(width) <= xtol:
                break
            mid = 0.5 * (lo + hi)
            below = self.phase(mid) <= targets
            if np.all((mid == lo) | (mid == hi)):
                break
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        else:
            k = int(np.argmax(hi - lo))
            raise ConvergenceError(
                f"bisection did not reach width {xtol:g}; bracket [{lo[k]!r}, {hi[k]!r}]")
        return canonical_angle(0.5 * (lo + hi))


def solve_phase_equation(phase, winding: int, target: float, xtol: float,
                         grid: int | None = None):
    """Angles in [0, 2*pi) where a monotone lifted phase equals target mod 2*pi.

    Returns ``(angles, diagnostics)``; ``angles`` is ``None`` when the
    bracketing could not certify monotone winding.
    """
    if winding <= 0:
        return np.zeros(0), []
    br = _Bracketing(phase, winding, target, grid or 8 * winding)
    roots = br.solve(xtol)
    return (None if roots is None else np.sort(roots)), br.diagnostics


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenpairs of a unitary matrix, sorted by angle in [0, 2*pi)."""

    angles: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray
    method: str = "phase-winding"
    diagnostics: tuple[str, ...] = field(default_factory=tuple)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.exp(1j * self.angles)

    def point_set(self, label: str = "", eps: float = DEFAULT.eps_match) -> CircularPointSet:
        return CircularPointSet.from_angles(self.angles, label, eps)

    def min_gap(self) -> float:
        a = self.angles
        if a.size < 2:
            return TWO_PI
        gaps = np.diff(np.concatenate([a, [a[0] + TWO_PI]]))
        return float(np.min(gaps))

    def min_component(self) -> float:
        return float(np.min(np.abs(self.vectors)))

    def derivative_at(self, j: int) -> complex:
        """``chi'(lambda_j)`` as the product over the other eigenvalues."""
        lam = self.eigenvalues
        return complex(np.prod(lam[j] - np.delete(lam, j)))

    def check(self, tol: Tolerances = DEFAULT, components: bool = True) -> None:
        if np.any(self.residuals > tol.eps_eig):
            raise VerificationError(f"eigen residual {np.max(self.residuals):.3e} > {tol.eps_eig}")
        if self.min_gap() <= tol.eps_sep:
            raise VerificationError(f"spectrum not simple: gap {self.min_gap():.3e}")
        if components and self.min_component() <= tol.eps_comp:
            raise VerificationError(f"eigenvector component {self.min_component():.3e} vanishes")


def fix_phase(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive."""
    v = np.array(vectors, dtype=complex)
    k = np.argmax(np.abs(v), axis=0)
    ph = v[k, np.arange(v.shape[1])]
    return v * (np.abs(ph) / ph)[None, :]


def inverse_iteration(c: np.ndarray, eigenvalues: np.ndarray, steps: int = 2,
                      seed: int = 0, eps_eig: float = DEFAULT.eps_eig) -> tuple[np.ndarray, np.ndarray]:
    """Unit eigenvectors for known simple eigenvalues of a normal matrix."""
    size = c.shape[0]
    rng = np.random.default_rng(seed)
    eye = np.eye(size)
    vecs = np.zeros((size, len(eigenvalues)), dtype=complex)
    res = np.zeros(len(eigenvalues))
    for j, lam in enumerate(eigenvalues):
        shifted = c - lam * eye
        x = rng.standard_normal(size) + 1j * rng.standard_normal(size)
        x /= np.linalg.norm(x)
        for it in range(steps + 3):
            try:
                y = np.linalg.solve(shifted, x)
            except np.linalg.LinAlgError:
                # exactly singular: nudge the shift off the circle
                shifted = c - lam * (1.0 + 8 * np.finfo(float).eps * size) * eye
                y = np.linalg.solve(shifted, x)
            if j:
                prev = vecs[:, :j]
                y = y - prev @ (prev.conj().T @ y)
            x = y / np.linalg.norm(y)
            r = np.linalg.norm(c @ x - lam * x)
            if it + 1 >= steps and r <= eps_eig:
                break
        vecs[:, j] = x
        res[j] = r
    return fix_phase(vecs), res


def dense_spectral(u: np.ndarray, label: str = "dense") -> SpectralDecomposition:
    """Eigen-decomposition of a unitary matrix with LAPACK, sorted by angle."""
    u = np.asarray(u, dtype=complex)
    w, v = np.linalg.eig(u)
    ang = angle_of(w)
    order = np.argsort(ang)
    v = v[:, order]
    v = v / np.linalg.norm(v, axis=0)[None, :]
    lam = np.exp(1j * ang[order])
    res = np.linalg.norm(u @ v - v * lam[None, :], axis=0)
    return SpectralDecomposition(ang[order], fix_phase(v), res, method=label)


def dense_angles(u: np.ndarray) -> np.ndarray:
    """Sorted eigen-angles of a unitary matrix via ``numpy.linalg.eigvals``."""
    return np.sort(angle_of(np.linalg.eigvals(np.asarray(u, dtype=complex))))


def zeros(p: ParameterArray, tol: Tolerances = DEFAULT, xtol: float | None = None,
          vectors: bool = True, seed: int = 0) -> SpectralDecomposition:
    """All n+1 zeros of the paraorthogonal polynomial of ``p``, with eigenvectors."""
    xtol = tol.xtol if xtol is None else xtol
    c = build_cmv(p).entries
    roots, diagnostics = solve_phase_equation(
        lambda t: eigen_phase(p, t), p.n + 1, 0.0, xtol)
    method = "phase-winding"
    if roots is None:
        log.warning("phase-winding failed (%s); using dense eigensolver", "; ".join(diagnostics))
        roots = dense_angles(c)
        method = "dense-fallback"
    roots = np.sort(roots)
    gaps = np.diff(np.concatenate([roots, [roots[0] + TWO_PI]]))
    if roots.size > 1 and np.min(gaps) <= tol.eps_sep:
        k = int(np.argmin(gaps))
        raise ConvergenceError(
            f"zeros not separated: angles {roots[k]!r} and {roots[(k + 1) % roots.size]!r}")
    if vectors:
        vecs, res = inverse_iteration(c, np.exp(1j * roots), seed=seed, eps_eig=tol.eps_eig)
    else:
        vecs = np.zeros((c.shape[0], 0), dtype=complex)
        res = np.zeros(0)
    return SpectralDecomposition(roots, vecs, res, method, tuple(diagnostics))


def zero_angles(p: ParameterArray, tol: Tolerances = DEFAULT, xtol: float | None = None) -> np.ndarray:
    return zeros(p, tol, xtol, vectors=False).angles


def level_set(p: ParameterArray, m: int, b_m: complex, tol: Tolerances = DEFAULT,
              xtol: float | None = None) -> np.ndarray:
    """Sorted angles of all ``zeta`` on the circle with ``b_m(zeta) == b_m``.

    ``b_m(.)`` winds n - m times, so there are exactly n - m solutions.
    """
    b_m = _check_unit(b_m, "b_m", tol.eps_unit)
    if not 0 <= m < p.n:
        raise IndexError(f"m={m} out of range [0, {p.n})")
    xtol = tol.xtol if xtol is None else xtol
    roots, diagnostics = solve_phase_equation(
        lambda t: lifted_phase(p, t, m), p.n - m, float(np.angle(b_m)), xtol)
    if roots is None:
        raise ConvergenceError("level set bracketing failed: " + "; ".join(diagnostics))
    return roots


def schur_complement_reduce(p: ParameterArray, m: int, zeta: complex,
                            tol: Tolerances = DEFAULT, check: bool = True,
                            max_cond: float = 1e12) -> np.ndarray:
    """``C11 - C12 (C22 - zeta I)^{-1} C21`` for the (m+1)-leading partition.

    With ``check`` the result is compared entrywise with
    ``C(alpha_0, ..., alpha_{m-1}, b_m(zeta))``.
    """
    zeta = _check_unit(zeta, "zeta", tol.eps_unit)
    blocks = partition(build_cmv(p).entries, m)
    shifted = blocks.c22 - zeta * np.eye(blocks.c22.shape[0])
    cond = np.linalg.cond(shifted)
    if not cond < max_cond:
        raise DomainError(f"C22 - zeta I nearly singular (cond {cond:.3e}); zeta off the circle?")
    red = blocks.c11 - blocks.c12 @ np.linalg.solve(shifted, blocks.c21)
    if check:
        ref = cmv(p.alphas[:m], pseudo_reflection(p, zeta, m, tol.eps_unit))
        dev = float(np.max(np.abs(red - ref)))
        if dev > tol.eps_schur * max(1.0, cond):
            raise VerificationError(f"Schur reduction deviates by {dev:.3e}")
    return red
