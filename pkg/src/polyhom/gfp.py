"""Gaussian elimination over F_p on small dense numpy int64 matrices.

Vectors are rows.  Every function returns fresh arrays reduced into 0..p-1.
"""

from __future__ import annotations

import numpy as np


def _as_matrix(A, ncols: int | None = None) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    if A.ndim == 1:
        A = A.reshape(0 if A.size == 0 else 1, -1) if ncols is None else A.reshape(-1, ncols)
    if A.size == 0 and ncols is not None:
        A = A.reshape(0, ncols)
    return A


def rref(A, p: int, ncols: int | None = None) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form without zero rows, and the pivot columns."""
    M = _as_matrix(A, ncols) % p
    rows, cols = M.shape
    r = 0
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if not len(nz):
            continue
        i = r + int(nz[0])
        if i != r:
            M[[r, i]] = M[[i, r]]
        inv = pow(int(M[r, c]), -1, p)
        M[r] = (M[r] * inv) % p
        col = M[:, c].copy()
        col[r] = 0
        M = (M - np.outer(col, M[r])) % p
        pivots.append(c)
        r += 1
    return M[:r].copy(), tuple(pivots)


def rank(A, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(A, p: int, ncols: int | None = None) -> np.ndarray:
    """Basis (rows) of {x : A x^T = 0}."""
    M = _as_matrix(A, ncols)
    n = M.shape[1]
    R, piv = rref(M, p, n)
    free = [c for c in range(n) if c not in set(piv)]
    out = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        for i, pc in enumerate(piv):
            out[k, pc] = (-R[i, f]) % p
    return out


def left_nullspace(A, p: int) -> np.ndarray:
    """Basis (rows) of {x : x A = 0}."""
    A = np.asarray(A, dtype=np.int64)
    return nullspace(A.T, p, A.shape[0])


def span(A, p: int, ncols: int) -> np.ndarray:
    return rref(A, p, ncols)[0]


def reduce_against(R: np.ndarray, pivots: tuple[int, ...], vecs, p: int) -> np.ndarray:
    """Remainders of the rows of ``vecs`` after clearing the pivots of an RREF basis."""
    V = np.asarray(vecs, dtype=np.int64) % p
    for i, c in enumerate(pivots):
        V = (V - np.outer(V[:, c], R[i])) % p
    return V


def in_span(R: np.ndarray, pivots: tuple[int, ...], vecs, p: int) -> np.ndarray:
    """Boolean mask: which rows of ``vecs`` lie in the span of the RREF basis R."""
    return ~reduce_against(R, pivots, vecs, p).any(axis=1)


def sum_dim(A, B, p: int, ncols: int) -> int:
    return rank(np.vstack([_as_matrix(A, ncols), _as_matrix(B, ncols)]), p)


def intersection_dim(A, B, p: int, ncols: int) -> int:
    a, b = rank(_as_matrix(A, ncols), p), rank(_as_matrix(B, ncols), p)
    return a + b - sum_dim(A, B, p, ncols)


def inverse(A, p: int) -> np.ndarray | None:
    """Inverse mod p, or None when singular."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    R, piv = rref(np.hstack([A, np.eye(n, dtype=np.int64)]), p)
    if piv != tuple(range(n)):
        return None
    return R[:, n:].copy()


def complement(A, p: int, ncols: int) -> np.ndarray:
    """Unit vectors completing the rows of A to a basis of F_p^ncols."""
    R, piv = rref(A, p, ncols)
    out = [c for c in range(ncols) if c not in set(piv)]
    C = np.zeros((len(out), ncols), dtype=np.int64)
    C[np.arange(len(out)), out] = 1
    return C


def all_vectors(p: int, n: int) -> np.ndarray:
    """All of F_p^n, first coordinate most significant."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    idx = np.arange(p**n, dtype=np.int64)
    return np.stack([(idx // p ** (n - 1 - i)) % p for i in range(n)], axis=1)


def span_vectors(B, p: int, ncols: int) -> np.ndarray:
    """Every vector in the span of the rows of B (p^rank of them)."""
    R = span(B, p, ncols)
    coeffs = all_vectors(p, R.shape[0])
    return (coeffs @ R) % p if R.shape[0] else np.zeros((1, ncols), dtype=np.int64)
