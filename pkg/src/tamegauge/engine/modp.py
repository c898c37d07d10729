"""Dense linear algebra over F_p on int64 numpy arrays."""

from __future__ import annotations

import numpy as np


def rref(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    A = np.array(A, dtype=np.int64) % p
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = A[r] * pow(int(A[r, c]), p - 2, p) % p
        col = A[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            A[nzr] = (A[nzr] - np.outer(col[nzr], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def row_basis(A: np.ndarray, p: int) -> np.ndarray:
    """RREF basis of the row space."""
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return np.zeros((0, A.shape[1] if A.ndim == 2 else 0), dtype=np.int64)
    return rref(A, p)[0]


def rank(A: np.ndarray, p: int) -> int:
    return row_basis(A, p).shape[0]


def nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Rows spanning {x : A x = 0}."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = rref(A, p)
    free = [c for c in range(n) if c not in set(piv)]
    out = np.zeros((len(free), n), dtype=np.int64)
    for i, c in enumerate(free):
        out[i, c] = 1
        for r, pc in enumerate(piv):
            out[i, pc] = (-R[r, c]) % p
    return out


def inverse(A: np.ndarray, p: int) -> np.ndarray:
    n = A.shape[0]
    R, piv = rref(np.hstack([A % p, np.eye(n, dtype=np.int64)]), p)
    if piv[:n] != list(range(n)) or R.shape[0] < n:
        raise ZeroDivisionError("matrix is singular mod p")
    return R[:n, n:]


def in_span(B: np.ndarray, v: np.ndarray, p: int) -> bool:
    """Whether v lies in the row space of the RREF matrix B."""
    return rank(np.vstack([B, v.reshape(1, -1)]), p) == B.shape[0]


def intersect(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """Row basis of rowspace(A) meet rowspace(B)."""
    if A.shape[0] == 0 or B.shape[0] == 0:
        return np.zeros((0, A.shape[1]), dtype=np.int64)
    K = nullspace(np.vstack([A, -B]).T, p)
    return row_basis(K[:, : A.shape[0]] @ A % p, p)


def annihilator(W: np.ndarray, n: int, p: int) -> np.ndarray:
    """Rows spanning {v : w . v = 0 for all rows w of W}."""
    if W.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    return row_basis(nullspace(W, p), p)
