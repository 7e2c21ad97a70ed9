"""CMV matrices built from the LM factorisation of Givens-type blocks.

For an array ``(alpha_0, ..., alpha_{n-1}, b)`` with every ``alpha_j`` in the
open unit disk and ``b`` on the unit circle, the matrix ``C = L M`` is an
(n+1)x(n+1) unitary double-staircase matrix, where

* ``L = Theta_0 + Theta_2 + ... (+ conj(b) if n is even)``
* ``M = 1 + Theta_1 + Theta_3 + ... (+ conj(b) if n is odd)``

(``+`` denoting direct sums) and ``Theta(a) = [[conj(a), rho], [rho, -a]]``
with ``rho = sqrt(1 - |a|^2)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from popuc.errors import DomainError
from popuc.tolerances import DEFAULT


@dataclass(frozen=True)
class ParameterArray:
    """Verblunsky-type parameters ``(alpha_0, ..., alpha_{n-1}, b)``."""

    alphas: tuple[complex, ...]
    b: complex

    def __init__(self, alphas: Sequence[complex] = (), b: complex = 1.0,
                 eps_unit: float = DEFAULT.eps_unit):
        alphas = tuple(complex(a) for a in np.ravel(np.asarray(alphas, dtype=complex)))
        b = complex(b)
        for j, a in enumerate(alphas):
            if not abs(a) < 1.0:
                raise DomainError(f"alpha[{j}] outside open unit disk: {a!r}")
        if abs(abs(b) - 1.0) > eps_unit:
            raise DomainError(f"b not on the unit circle: {b!r} (|b| = {abs(b)!r})")
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return len(self.alphas)

    @property
    def size(self) -> int:
        return len(self.alphas) + 1

    def alpha_array(self) -> np.ndarray:
        return np.array(self.alphas, dtype=complex)

    def rho(self) -> np.ndarray:
        a = np.abs(self.alpha_array())
        return np.sqrt(1.0 - a * a)

    def head(self, m: int, b_m: complex) -> "ParameterArray":
        """The truncated array ``(alpha_0, ..., alpha_{m-1}, b_m)``."""
        return ParameterArray(self.alphas[:m], b_m)

    def tail(self, start: int) -> "ParameterArray":
        """The array ``(alpha_start, ..., alpha_{n-1}, b)``."""
        return ParameterArray(self.alphas[start:], self.b)


def _rho(alpha: complex) -> float:
    a = abs(alpha)
    return float(np.sqrt(max(0.0, (1.0 - a) * (1.0 + a))))


def theta_block(alpha: complex) -> np.ndarray:
    """The 2x2 unitary block ``[[conj(alpha), rho], [rho, -alpha]]``."""
    alpha = complex(alpha)
    if not abs(alpha) < 1.0:
        raise DomainError(f"alpha outside open unit disk: {alpha!r}")
    rho = _rho(alpha)
    return np.array([[alpha.conjugate(), rho], [rho, -alpha]], dtype=complex)


def direct_sum(*blocks) -> np.ndarray:
    blocks = [np.atleast_2d(np.asarray(b, dtype=complex)) for b in blocks]
    size = sum(b.shape[0] for b in blocks)
    out = np.zeros((size, size), dtype=complex)
    i = 0
    for blk in blocks:
        k = blk.shape[0]
        out[i:i + k, i:i + k] = blk
        i += k
    return out


def _factor_blocks(p: ParameterArray):
    n = p.n
    cb = np.array([[p.b.conjugate()]])
    one = np.array([[1.0 + 0j]])
    if n % 2 == 0:
        lblocks = [theta_block(p.alphas[j]) for j in range(0, n - 1, 2)] + [cb]
        mblocks = [one] + [theta_block(p.alphas[j]) for j in range(1, n, 2)]
    else:
        lblocks = [theta_block(p.alphas[j]) for j in range(0, n, 2)]
        mblocks = [one] + [theta_block(p.alphas[j]) for j in range(1, n - 1, 2)] + [cb]
    return lblocks, mblocks


def build_factors(p: ParameterArray) -> tuple[np.ndarray, np.ndarray]:
    """Block-diagonal factors ``(L, M)`` with ``C = L @ M``."""
    lblocks, mblocks = _factor_blocks(p)
    return direct_sum(*lblocks), direct_sum(*mblocks)


def staircase_mask(n: int) -> np.ndarray:
    """Boolean mask of the entries of ``C`` that may be nonzero.

    Obtained as the structural product of the block patterns of ``L`` and
    ``M``; everything outside it is zero by construction.
    """
    p = ParameterArray([0.5] * n, 1.0)
    lblocks, mblocks = _factor_blocks(p)
    lmask = direct_sum(*[np.ones_like(b) for b in lblocks]).real > 0
    mmask = direct_sum(*[np.ones_like(b) for b in mblocks]).real > 0
    return (lmask.astype(int) @ mmask.astype(int)) > 0


@dataclass(frozen=True, eq=False)
class BlockPartition:
    c11: np.ndarray
    c12: np.ndarray
    c21: np.ndarray
    c22: np.ndarray
    m: int

    def reassemble(self) -> np.ndarray:
        return np.block([[self.c11, self.c12], [self.c21, self.c22]])


@dataclass(frozen=True, eq=False)
class CmvMatrix:
    entries: np.ndarray
    source: ParameterArray

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    @property
    def shape(self):
        return self.entries.shape

    def unitarity_defect(self) -> float:
        c = self.entries
        return float(np.max(np.abs(c.conj().T @ c - np.eye(c.shape[0]))))

    def partition(self, m: int) -> BlockPartition:
        return partition(self.entries, m)


def build_cmv(p: ParameterArray) -> CmvMatrix:
    L, M = build_factors(p)
    return CmvMatrix(L @ M, p)


def cmv(alphas: Sequence[complex] = (), b: complex = 1.0) -> np.ndarray:
    """Shorthand returning the dense matrix ``C(alphas, b)``."""
    return build_cmv(ParameterArray(alphas, b)).entries


def partition(c, m: int) -> BlockPartition:
    """Split ``c`` with an (m+1)x(m+1) leading block; requires 0 <= m < n."""
    c = np.asarray(c)
    n = c.shape[0] - 1
    if not 0 <= m < n:
        raise IndexError(f"partition index m={m} out of range [0, {n})")
    k = m + 1
    return BlockPartition(c[:k, :k], c[:k, k:], c[k:, :k], c[k:, k:], m)


def alternating_diag(k: int, beta: complex) -> np.ndarray:
    """``diag(beta, 1, beta, 1, ...)`` of order ``k``."""
    d = np.ones(k, dtype=complex)
    d[0::2] = beta
    return np.diag(d)


def gauge_matrices(n: int, m: int, beta: complex,
                   eps_unit: float = DEFAULT.eps_unit):
    """Diagonal unitaries ``(S, D, V)`` of order n+1 used to rotate a tail.

    ``S = diag(I_m, conj(beta), I_{n-m})``, ``D = diag(I_m, J_{n-m+1})`` and
    ``V = diag(I_{m+1}, J_{n-m})`` with ``J_k = diag(beta, 1, beta, ...)``.
    """
    beta = complex(beta)
    if abs(abs(beta) - 1.0) > eps_unit:
        raise DomainError(f"beta not on the unit circle: {beta!r}")
    if not 0 <= m <= n:
        raise IndexError(f"gauge index m={m} out of range [0, {n}]")
    s = np.ones(n + 1, dtype=complex)
    s[m] = beta.conjugate()
    S = np.diag(s)
    D = direct_sum(np.eye(m), alternating_diag(n - m + 1, beta)) if m else alternating_diag(n + 1, beta)
    V = direct_sum(np.eye(m + 1), alternating_diag(n - m, beta)) if m < n else np.eye(n + 1, dtype=complex)
    return S, D, V
