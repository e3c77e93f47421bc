"""Dense exact linear algebra over F_p and small helpers for exterior powers.

Matrices are numpy int64 arrays with entries in 0..p-1. Primes are bounded
(p <= 97), so products never overflow.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import CapacityError

DEFAULT_MAX_COLUMNS = 4096
MAX_COLUMNS = DEFAULT_MAX_COLUMNS


def set_max_columns(n: int) -> None:
    global MAX_COLUMNS
    MAX_COLUMNS = int(n)


def _as_mod(A, p):
    A = np.asarray(A, dtype=np.int64)
    if A.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    if A.shape[1] > MAX_COLUMNS or A.shape[0] > MAX_COLUMNS:
        raise CapacityError(
            f"matrix of shape {A.shape} exceeds dense limit {MAX_COLUMNS}"
        )
    return np.mod(A, p)


def rref_mod_p(A, p: int):
    """Reduced row echelon form over F_p. Returns (R, pivot_columns)."""
    R = _as_mod(A, p).copy()
    m, n = R.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        inv = pow(int(R[r, c]), -1, p)
        R[r] = (R[r] * inv) % p
        col = R[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            R[rows] = (R[rows] - np.outer(col[rows], R[r])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank_mod_p(A, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref_mod_p(A, p)[1])


def nullspace_mod_p(A, p: int) -> np.ndarray:
    """Basis (as rows) of {x : A x = 0} over F_p."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, pivots = rref_mod_p(A, p)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-R[i, f]) % p
    return basis


def row_basis_mod_p(A, p: int) -> np.ndarray:
    """A basis (rows) of the row space of A over F_p."""
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return np.zeros((0, A.shape[1] if A.ndim == 2 else 0), dtype=np.int64)
    R, pivots = rref_mod_p(A, p)
    return R[: len(pivots)].copy()


def solve_mod_p(A, b, p: int):
    """One solution x of A x = b over F_p, or None if inconsistent."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    aug = np.hstack([A, b])
    R, pivots = rref_mod_p(aug, p)
    n = A.shape[1]
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = R[i, n]
    return x


def det_mod_p(A, p: int) -> int:
    M = _as_mod(A, p).copy()
    k = M.shape[0]
    det = 1
    for c in range(k):
        nz = np.nonzero(M[c:, c])[0]
        if nz.size == 0:
            return 0
        piv = c + nz[0]
        if piv != c:
            M[[c, piv]] = M[[piv, c]]
            det = -det
        det = det * int(M[c, c]) % p
        inv = pow(int(M[c, c]), -1, p)
        for r in range(c + 1, k):
            if M[r, c]:
                M[r] = (M[r] - M[r, c] * inv * M[c]) % p
    return det % p


# --- exterior algebra on F_p^n in the basis e_I, I a sorted index tuple ---


@lru_cache(maxsize=None)
def wedge_basis(n: int, k: int) -> tuple:
    return tuple(combinations(range(n), k))


@lru_cache(maxsize=None)
def wedge_index(n: int, k: int) -> dict:
    return {I: i for i, I in enumerate(wedge_basis(n, k))}


def merge_sign(I, J):
    """Sign and sorted union for e_I ^ e_J; sign 0 if I and J overlap."""
    if set(I) & set(J):
        return 0, None
    inversions = sum(1 for a in I for b in J if a > b)
    return (-1) ** inversions, tuple(sorted(I + J))


@lru_cache(maxsize=None)
def _left_mult_structure(n: int, k: int):
    src = wedge_basis(n, k)
    tgt = wedge_index(n, k + 1)
    entries = []
    for col, I in enumerate(src):
        for j in range(n):
            s, K = merge_sign((j,), I)
            if s:
                entries.append((tgt[K], col, j, s))
    return entries


def left_wedge_matrix(vec, k: int, p: int) -> np.ndarray:
    """Matrix of w -> vec ^ w from Lambda^k to Lambda^(k+1) of F_p^n."""
    vec = [int(x) % p for x in vec]
    n = len(vec)
    M = np.zeros((len(wedge_basis(n, k + 1)), len(wedge_basis(n, k))), dtype=np.int64)
    for row, col, j, s in _left_mult_structure(n, k):
        M[row, col] += s * vec[j]
    return M % p


def exterior_power_basis(W, k: int, p: int, n: int) -> np.ndarray:
    """Rows spanning Lambda^k(W) inside Lambda^k(F_p^n); W given by independent basis rows."""
    W = np.asarray(W, dtype=np.int64).reshape(-1, n)
    d = W.shape[0]
    basis = wedge_basis(n, k)
    if k > d:
        return np.zeros((0, len(basis)), dtype=np.int64)
    if k == 0:
        return np.ones((1, 1), dtype=np.int64)
    rows = []
    for S in combinations(range(d), k):
        sub = W[list(S)]
        rows.append([det_mod_p(sub[:, list(I)], p) for I in basis])
    return np.array(rows, dtype=np.int64) % p
