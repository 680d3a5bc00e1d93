from typing import List, Optional, Tuple

import numpy as np


def as_gf2(matrix) -> np.ndarray:
    a = np.asarray(matrix)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    return (a & 1).astype(np.uint8, copy=True)


def rref(matrix) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form over GF(2) and its pivot columns."""
    a = as_gf2(matrix)
    m, n = a.shape
    pivots = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        rows = np.where(a[r:, c] == 1)[0]
        if rows.size == 0:
            continue
        p = r + int(rows[0])
        if p != r:
            a[[r, p], :] = a[[p, r], :]
        ones = np.where(a[:, c] == 1)[0]
        ones = ones[ones != r]
        if ones.size:
            a[ones, :] ^= a[r, :]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(matrix) -> int:
    a = np.asarray(matrix)
    if a.size == 0:
        return 0
    return len(rref(a)[1])


def nullspace(matrix, n: Optional[int] = None) -> np.ndarray:
    """
    Basis of {x : A x = 0} as rows, one per free column
    """
    a = np.asarray(matrix)
    if a.size == 0:
        cols = a.shape[1] if a.ndim == 2 and a.shape[1] else (n or 0)
        return np.eye(cols, dtype=np.uint8)
    reduced, pivots = rref(a)
    cols = reduced.shape[1]
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for row, p in enumerate(pivots):
            basis[t, p] = reduced[row, f]
    return basis


def solve(matrix, b) -> Optional[np.ndarray]:
    """
    Some x with A x = b over GF(2), free variables set to zero; None when inconsistent
    """
    a = as_gf2(matrix)
    b = (np.asarray(b).reshape(-1) & 1).astype(np.uint8)
    m, n = a.shape
    if m == 0 or n == 0:
        return np.zeros(n, dtype=np.uint8) if not b.any() else None
    aug = np.concatenate([a, b[:, None]], axis=1)
    reduced, pivots = rref(aug)
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.uint8)
    for row, p in enumerate(pivots):
        x[p] = reduced[row, n]
    return x


def in_rowspace(v, matrix) -> bool:
    a = np.asarray(matrix)
    if a.size == 0:
        return not np.asarray(v).any()
    return solve(as_gf2(a).T, v) is not None
