"""Rank-one multiplicative perturbations ``U -> U S`` of unitary matrices.

When ``rank(I - S) == 1`` the difference ``U S - U`` is a rank-one matrix
``u v^T`` (plain transpose). The checks below evaluate the determinant
identity for rank-one updates, the Thompson-McEnteggert adjugate formula,
and the interlacing consequences on arbitrary unitary inputs.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from popuc.circle import CircularPointSet, angle_of, match_eps, snap_coincidences
from popuc.engine import SpectralDecomposition, dense_spectral
from popuc.errors import DomainError
from popuc.interlace import InterlacingVerdict, Verdict, interlace_check
from popuc.tolerances import DEFAULT, Tolerances


@dataclass(frozen=True, eq=False)
class UnitaryPair:
    U: np.ndarray
    S: np.ndarray

    @property
    def US(self) -> np.ndarray:
        return self.U @ self.S

    @property
    def order(self) -> int:
        return self.U.shape[0]

    def perturbation_singular_values(self) -> np.ndarray:
        return np.linalg.svd(np.eye(self.order) - self.S, compute_uv=False)

    def perturbation_rank(self, eps_rank: float = DEFAULT.eps_rank) -> int:
        return int(np.sum(self.perturbation_singular_values() > eps_rank))


@dataclass(frozen=True, eq=False)
class RankOneFactors:
    u: np.ndarray
    v: np.ndarray
    residual: float


def extract_rank_one(pair: UnitaryPair, tol: Tolerances = DEFAULT) -> RankOneFactors:
    """Vectors with ``u @ v.T == U S - U`` from the leading singular triple."""
    rank = pair.perturbation_rank(tol.eps_rank)
    if rank == 0:
        raise DomainError("rank zero: S is the identity")
    if rank > 1:
        raise DomainError(f"rank(I - S) = {rank}, expected 1")
    diff = pair.US - pair.U
    w, s, xh = np.linalg.svd(diff)
    u = s[0] * w[:, 0]
    # u v^T = s w x^*, so v^T is the first row of X^*
    v = xh[0, :]
    residual = float(np.max(np.abs(np.outer(u, v) - diff)))
    return RankOneFactors(u, v, residual)


def charpoly(a: np.ndarray, z: complex) -> complex:
    """``det(z I - a)`` by pivoted LU."""
    a = np.asarray(a, dtype=complex)
    return complex(np.linalg.det(z * np.eye(a.shape[0]) - a))


def poly_from_roots(roots: np.ndarray, z: complex) -> tuple[complex, complex]:
    """Value and derivative of ``prod(z - r)`` without expanding coefficients."""
    d = z - np.asarray(roots, dtype=complex)
    if d.size == 0:
        return 1.0 + 0j, 0j
    value = complex(np.prod(d))
    deriv = sum(complex(np.prod(np.delete(d, i))) for i in range(d.size))
    return value, deriv


def adjugate_svd(a: np.ndarray) -> np.ndarray:
    """Adjugate through ``A = W diag(s) X^*``; stays finite when A is singular."""
    w, s, xh = np.linalg.svd(np.asarray(a, dtype=complex))
    n = s.size
    cof = np.array([np.prod(np.delete(s, i)) for i in range(n)])
    # adj(A) = adj(X^*) adj(Sigma) adj(W) = det(X^*) X diag(cof) det(W) W^*
    scale = np.linalg.det(xh) * np.linalg.det(w)
    return scale * (xh.conj().T * cof[None, :]) @ w.conj().T


def adjugate_cofactor(a: np.ndarray) -> np.ndarray:
    """Adjugate from (n-1)x(n-1) minors."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    if n == 1:
        return np.ones((1, 1), dtype=complex)
    adj = np.empty_like(a)
    for i in range(n):
        rows = np.delete(a, i, axis=0)
        for j in range(n):
            adj[j, i] = (-1) ** (i + j) * np.linalg.det(np.delete(rows, j, axis=1))
    return adj


def adjugate(a: np.ndarray, cofactor_limit: int = 8) -> np.ndarray:
    a = np.asarray(a)
    return adjugate_cofactor(a) if a.shape[0] <= cofactor_limit else adjugate_svd(a)


def _spectrum(m: np.ndarray, tol: Tolerances, spectrum: SpectralDecomposition | None):
    spec = spectrum if spectrum is not None else dense_spectral(m)
    if spec.angles.size > 1 and spec.min_gap() <= tol.eps_sep:
        raise DomainError(f"non-simple spectrum: gap {spec.min_gap():.3e}")
    return spec


def thompson_mcenteggert_check(m: np.ndarray, j: int, tol: Tolerances = DEFAULT,
                               spectrum: SpectralDecomposition | None = None) -> float:
    """Max-abs gap between ``Adj(lambda_j I - M)`` and ``chi'(lambda_j) z_j z_j^*``."""
    m = np.asarray(m, dtype=complex)
    spec = _spectrum(m, tol, spectrum)
    lam = spec.eigenvalues[j]
    z = spec.vectors[:, j]
    adj = adjugate(lam * np.eye(m.shape[0]) - m)
    expected = spec.derivative_at(j) * np.outer(z, z.conj())
    return float(np.max(np.abs(adj - expected)))


def charpoly_identity_check(pair: UnitaryPair, zeta: complex, tol: Tolerances = DEFAULT,
                            near: float = 1e-8) -> float:
    """Relative residual of ``chi_U(z) = chi_US(z) + v^T Adj(z I - U S) u``.

    Off the spectrum of ``U S`` the adjugate is ``det * inverse``; within
    ``near`` of an eigenvalue the Thompson-McEnteggert form is used instead.
    """
    f = extract_rank_one(pair, tol)
    us = pair.US
    zeta = complex(zeta)
    lhs = charpoly(pair.U, zeta)
    chi = charpoly(us, zeta)
    lam = np.linalg.eigvals(us)
    k = int(np.argmin(np.abs(lam - zeta)))
    if abs(lam[k] - zeta) > near:
        x = np.linalg.solve(zeta * np.eye(pair.order) - us, f.u)
        correction = chi * complex(f.v @ x)
    else:
        spec = dense_spectral(us)
        j = int(np.argmin(np.abs(spec.eigenvalues - zeta)))
        z = spec.vectors[:, j]
        correction = spec.derivative_at(j) * complex(f.v @ z) * complex(z.conj() @ f.u)
    rhs = chi + correction
    scale = max(abs(lhs), abs(chi), abs(correction), np.finfo(float).tiny)
    return float(abs(lhs - rhs) / scale)


def _relative(a: complex, b: complex, floor: float = 1e-12) -> float:
    return float(abs(a - b) / max(abs(a), abs(b), floor))


@dataclass(frozen=True, eq=False)
class IdeaFinalReport:
    residuals: np.ndarray
    interlace: InterlacingVerdict
    violations: tuple[str, ...] = field(default_factory=tuple)
    # min |lambda - nu| over lambda in sigma(U), nu in sigma(US); the value
    # identity cannot be resolved to better than about n * 1e-16 / gap
    gap: float = float("nan")

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals)) if self.residuals.size else 0.0

    def ok(self, tol: Tolerances = DEFAULT) -> bool:
        return (not self.violations and self.max_residual <= tol.eps_lemma
                and self.interlace.verdict is Verdict.STRICT)


def diagonal_phase(order: int, k: int, beta: complex) -> np.ndarray:
    s = np.ones(order, dtype=complex)
    s[k] = beta
    return np.diag(s)


def lemma_ideafinal_check(u: np.ndarray, k: int, beta: complex, tol: Tolerances = DEFAULT,
                          spectrum: SpectralDecomposition | None = None) -> IdeaFinalReport:
    """``U`` versus ``U diag(.., beta at k, ..)``: the value identity and strict interlacing.

    Checks ``chi_US(lambda_j) = chi'_U(lambda_j) lambda_j (1 - beta) |z_j[k]|^2``
    at every eigenpair of ``U``. ``k`` is a 0-based position.
    """
    u = np.asarray(u, dtype=complex)
    beta = complex(beta)
    violations = []
    if abs(abs(beta) - 1.0) > tol.eps_unit:
        raise DomainError(f"beta not on the unit circle: {beta!r}")
    if abs(beta - 1.0) <= tol.eps_match:
        raise DomainError("beta = 1 is excluded")
    spec = _spectrum(u, tol, spectrum)
    us = u @ diagonal_phase(u.shape[0], k, beta)
    res = np.zeros(spec.angles.size)
    for j, lam in enumerate(spec.eigenvalues):
        a = spec.vectors[k, j]
        if abs(a) <= tol.eps_comp:
            violations.append(f"eigenvector {j} has component {abs(a):.3e} at position {k}")
        rhs = spec.derivative_at(j) * lam * (1.0 - beta) * abs(a) ** 2
        res[j] = _relative(charpoly(us, lam), rhs)
    nu = np.linalg.eigvals(us)
    gap = float(np.min(np.abs(spec.eigenvalues[:, None] - nu[None, :])))
    ang_us = angle_of(nu)
    eps = match_eps([spec.angles, ang_us], tol.eps_match, tol.eps_tight)
    verdict = interlace_check(CircularPointSet.from_angles(spec.angles, eps=eps),
                              CircularPointSet.from_angles(ang_us, eps=eps), True, eps)
    return IdeaFinalReport(res, verdict, tuple(violations), gap)


@dataclass(frozen=True, eq=False)
class AGReport:
    U1: CircularPointSet
    U2: CircularPointSet
    U: CircularPointSet
    claim_ok: bool
    weak: InterlacingVerdict
    interlace: InterlacingVerdict
    equal_residual: float
    violations: tuple[str, ...] = field(default_factory=tuple)
    eps: float = DEFAULT.eps_match
    # distance from the points used in equal_residual to sigma(U)
    equal_gap: float = float("nan")

    @property
    def common(self) -> CircularPointSet:
        return self.U1.intersect(self.U2, "U1 & U2", self.eps)

    def ok(self, tol: Tolerances = DEFAULT) -> bool:
        # equal_residual is reported with equal_gap, not gated: its accuracy
        # is limited to roughly 1e-16 / equal_gap
        return (not self.violations and self.claim_ok and self.weak.holds
                and self.interlace.verdict is Verdict.STRICT)


def _block_spectral(us: np.ndarray, split: int):
    """Eigenpairs of a block-diagonal matrix, computed block by block."""
    size = us.shape[0]
    pairs = []
    for lo, hi in ((0, split), (split, size)):
        spec = dense_spectral(us[lo:hi, lo:hi])
        for j, lam in enumerate(spec.eigenvalues):
            z = np.zeros(size, dtype=complex)
            z[lo:hi] = spec.vectors[:, j]
            pairs.append((lam, z))
    return pairs


def lemma_ag_refined_check(pair: UnitaryPair, split: int, tol: Tolerances = DEFAULT) -> AGReport:
    """Refined interlacing when ``U S = U1 + U2`` is block diagonal.

    ``split`` is the order of ``U1``. Hypotheses that fail are listed in
    ``violations`` rather than raised.
    """
    us = pair.US
    u = np.asarray(pair.U, dtype=complex)
    size = pair.order
    violations = []
    if not 0 < split < size:
        raise DomainError(f"split {split} must lie strictly between 0 and {size}")
    if pair.perturbation_rank(tol.eps_rank) != 1:
        violations.append("rank(I - S) != 1")
    off = max(np.max(np.abs(us[:split, split:])), np.max(np.abs(us[split:, :split])))
    if off > tol.eps_schur:
        violations.append(f"US not block diagonal (off-block {off:.3e})")
    u1, u2 = us[:split, :split], us[split:, split:]
    s1, s2 = dense_spectral(u1), dense_spectral(u2)
    for name, s in (("U1", s1), ("U2", s2)):
        if s.angles.size > 1 and s.min_gap() <= tol.eps_sep:
            violations.append(f"{name} spectrum not simple")
    sig_u = dense_spectral(u)
    (a1, a2, au), _, notes = snap_coincidences([s1.angles, s2.angles, sig_u.angles],
                                               tol.eps_match, tol.eps_tight)
    eps = match_eps([a1, a2, au], tol.eps_match, tol.eps_tight)
    for name, block, s in (("U11", u[:split, :split], s1), ("U22", u[split:, split:], s2)):
        mu = np.linalg.eigvals(block)
        if np.min(np.abs(mu[:, None] - s.eigenvalues[None, :])) <= eps:
            violations.append(f"sigma({name}) meets the spectrum of its diagonal block of US")

    set1 = CircularPointSet.from_angles(a1, "U1", eps)
    set2 = CircularPointSet.from_angles(a2, "U2", eps)
    set_u = CircularPointSet.from_angles(au, "U", eps)
    i12 = set1.intersect(set2, eps=eps)
    claim_ok = i12.same_as(set1.intersect(set_u, eps=eps), eps) and \
        i12.same_as(set2.intersect(set_u, eps=eps), eps)
    left = set_u.minus(i12, eps=eps)
    right = set1.union(set2.minus(i12, eps=eps), eps=eps)
    if len(left) and len(right) and len(left) == len(right):
        verdict = interlace_check(right, left, True, eps)
    else:
        verdict = InterlacingVerdict(Verdict.FAIL, np.zeros(0), None,
                                     f"sizes {len(left)} and {len(right)} differ")
    sig_us = CircularPointSet.from_angles(np.concatenate([a1, a2]), "US", eps)
    weak = interlace_check(sig_us, set_u, False, eps)

    f = extract_rank_one(pair, tol) if "rank(I - S) != 1" not in violations else None
    worst = 0.0
    gap = float("inf")
    if f is not None:
        for lam, z in _block_spectral(us, split):
            # at shared points both sides vanish to rounding; the claim above covers them
            if i12.contains(float(angle_of(lam)), eps):
                continue
            v1, d1 = poly_from_roots(s1.eigenvalues, lam)
            v2, d2 = poly_from_roots(s2.eigenvalues, lam)
            rhs = (d1 * v2 + v1 * d2) * complex(z.conj() @ f.u) * complex(f.v @ z)
            worst = max(worst, _relative(charpoly(u, lam), rhs))
            gap = min(gap, float(np.min(np.abs(sig_u.eigenvalues - lam))))
    violations.extend(n for n in notes if n.startswith("ambiguous"))
    return AGReport(set1, set2, set_u, claim_ok, weak, verdict, worst, tuple(violations), eps, gap)
