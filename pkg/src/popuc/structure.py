"""Entrywise checks of the matrix identities behind the interlacing theorems."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from popuc.cmv import ParameterArray, cmv, direct_sum, gauge_matrices, theta_block
from popuc.engine import gamma
from popuc.interlace import build_N, rotate_tail
from popuc.tolerances import DEFAULT, Tolerances


def _max_dev(a: np.ndarray, b: np.ndarray):
    d = np.abs(a - b)
    k = np.unravel_index(int(np.argmax(d)), d.shape)
    return float(d[k]), tuple(int(i) for i in k)


def theta_gauge_defect(alpha: complex, beta: complex) -> float:
    """``diag(conj(beta), 1) Theta(alpha) diag(1, beta)`` against ``Theta(alpha beta)``."""
    beta = complex(beta)
    lhs = np.diag([beta.conjugate(), 1.0]) @ theta_block(alpha) @ np.diag([1.0, beta])
    return float(np.max(np.abs(lhs - theta_block(alpha * beta))))


@dataclass(frozen=True, eq=False)
class IdentityReport:
    name: str
    deviation: float
    worst_entry: tuple[int, ...]
    ok: bool
    rank_ok: bool = True
    singular_values: tuple[float, ...] = ()

    def to_dict(self) -> dict:
        return {"name": self.name, "deviation": self.deviation,
                "worst_entry": list(self.worst_entry), "ok": self.ok,
                "rank_ok": self.rank_ok, "singular_values": list(self.singular_values)}


def gauge_identity_verify(p: ParameterArray, m: int, beta: complex,
                          tol: Tolerances = DEFAULT) -> IdentityReport:
    """Diagonal conjugation of ``C(p)`` reproduces the rotated-tail matrix.

    ``D* C D S`` for even m and ``S D C D*`` for odd m.
    """
    S, D, _ = gauge_matrices(p.n, m, beta, tol.eps_unit)
    c = cmv(p.alphas, p.b)
    if m % 2 == 0:
        lhs = D.conj().T @ c @ D @ S
    else:
        lhs = S @ D @ c @ D.conj().T
    rot = rotate_tail(p, m, beta, tol)
    dev, at = _max_dev(lhs, cmv(rot.alphas, rot.b))
    return IdentityReport("gauge", dev, at, dev <= tol.eps_schur)


def factor_gauge_verify(p: ParameterArray, m: int, beta: complex,
                        tol: Tolerances = DEFAULT) -> IdentityReport:
    """The same rotation, factor by factor: ``D* L V`` and ``V* M D S`` (m even)."""
    from popuc.cmv import build_factors

    S, D, V = gauge_matrices(p.n, m, beta, tol.eps_unit)
    L, M = build_factors(p)
    Lr, Mr = build_factors(rotate_tail(p, m, beta, tol))
    if m % 2 == 0:
        left, right = D.conj().T @ L @ V, V.conj().T @ M @ D @ S
    else:
        left, right = S @ D @ L @ V.conj().T, V @ M @ D.conj().T
    d1, at1 = _max_dev(left, Lr)
    d2, at2 = _max_dev(right, Mr)
    dev, at = (d1, at1) if d1 >= d2 else (d2, at2)
    return IdentityReport("factor-gauge", dev, at, dev <= tol.eps_schur)


def direct_sum_gauge(p: ParameterArray, m: int, b_m: complex,
                     tol: Tolerances = DEFAULT) -> np.ndarray:
    """``diag(I_m, Z, I_{n-m-1})`` with ``Z = Theta_m^* diag(conj(b_m), gamma_m)``."""
    g = gamma(p.alphas[m], b_m, tol.eps_unit)
    z = theta_block(p.alphas[m]).conj().T @ np.diag([complex(b_m).conjugate(), g])
    return direct_sum(np.eye(m), z, np.eye(p.n - m - 1))


def direct_sum_instance(p: ParameterArray, m: int, b_m: complex,
                        tol: Tolerances = DEFAULT):
    """A unitary pair ``(U, S)`` with ``U S`` block diagonal, plus the split size.

    For odd m, ``C(p) S = C_m + N``. For even m the identity is
    ``S^T C(p) = C_m + N^T``; transposing gives ``C(p)^T S = C_m^T + N``.
    """
    S = direct_sum_gauge(p, m, b_m, tol)
    c = cmv(p.alphas, p.b)
    U = c if m % 2 else c.T
    return U, S, m + 1


def direct_sum_identity_verify(p: ParameterArray, m: int, b_m: complex,
                               tol: Tolerances = DEFAULT) -> IdentityReport:
    if not 0 <= m < p.n:
        raise IndexError(f"m={m} out of range [0, {p.n})")
    S = direct_sum_gauge(p, m, b_m, tol)
    c = cmv(p.alphas, p.b)
    small = cmv(p.alphas[:m], b_m)
    N = build_N(p, m, b_m, tol)
    if m % 2:
        dev, at = _max_dev(direct_sum(small, N), c @ S)
    else:
        dev, at = _max_dev(direct_sum(small, N.T), S.T @ c)
    sv = np.linalg.svd(np.eye(p.n + 1) - S, compute_uv=False)
    rank_ok = bool(sv[0] > tol.eps_rank and (sv.size < 2 or sv[1] <= tol.eps_rank))
    return IdentityReport("direct-sum", dev, at, dev <= tol.eps_schur and rank_ok,
                          rank_ok, tuple(float(s) for s in sv[:2]))


def c22_circle_gap(p: ParameterArray, m: int) -> float:
    """``min(1 - |mu|)`` over eigenvalues of the trailing block ``C22``.

    Positive means no eigenvalue of ``C22`` lies on the circle.
    """
    c = cmv(p.alphas, p.b)
    mu = np.linalg.eigvals(c[m + 1:, m + 1:])
    return float(np.min(1.0 - np.abs(mu)))
