"""Linear solving over Z/ell^k.

Z/ell^k is a chain ring, not a field, so naive Gaussian elimination is wrong:
pivots must be chosen by minimal ell-valuation and scaled to powers of ell.
Row and column operations are unimodular, which diagonalizes any matrix to
diag(ell^v1, ..., ell^vr, 0, ...) -- a Smith form over the ring.  Entries stay
below the modulus (< 2**31) and every product is reduced before the next
accumulation, so int64 arithmetic is exact.
"""

from __future__ import annotations

import numpy as np


def _find_pivot(block: np.ndarray, ell: int, k: int):
    """First entry (row-major) of minimal ell-valuation, or None if zero."""
    for v in range(k):
        mask = block % ell ** (v + 1) != 0
        if mask.any():
            flat = int(np.flatnonzero(mask.ravel())[0])
            return flat // block.shape[1], flat % block.shape[1], v
    return None


def _diagonalize(A: np.ndarray, b, ell: int, k: int):
    """In-place Smith-style diagonalization; returns (pivot valuations, R).

    Row operations are mirrored on b when given; column operations are
    recorded in R so that solutions pull back via x = R y.
    """
    mod = ell**k
    m, n = A.shape
    R = np.eye(n, dtype=np.int64)
    pivots = []
    for s in range(min(m, n)):
        found = _find_pivot(A[s:, s:], ell, k)
        if found is None:
            break
        i0, j0, v = found[0] + s, found[1] + s, found[2]
        if i0 != s:
            A[[s, i0]] = A[[i0, s]]
            if b is not None:
                b[[s, i0]] = b[[i0, s]]
        if j0 != s:
            A[:, [s, j0]] = A[:, [j0, s]]
            R[:, [s, j0]] = R[:, [j0, s]]
        piv = ell**v
        unit = int(A[s, s]) // piv
        uinv = pow(unit, -1, mod)
        A[s] = A[s] * uinv % mod
        if b is not None:
            b[s] = b[s] * uinv % mod
        col = A[:, s].copy()
        for i in range(m):
            if i != s and col[i]:
                f = int(col[i]) // piv
                A[i] = (A[i] - f * A[s]) % mod
                if b is not None:
                    b[i] = (b[i] - f * b[s]) % mod
        row = A[s].copy()
        for j in range(n):
            if j != s and row[j]:
                f = int(row[j]) // piv
                A[:, j] = (A[:, j] - f * A[:, s]) % mod
                R[:, j] = (R[:, j] - f * R[:, s]) % mod
        pivots.append(v)
    return pivots, R


def solve_mod_prime_power(A, b, ell: int, k: int):
    """One solution x of A x = b over Z/ell^k, or None if inconsistent.

    Deterministic for fixed input (first minimal-valuation pivot in
    row-major order).
    """
    mod = ell**k
    A = np.array(A, dtype=np.int64) % mod
    b = np.array(b, dtype=np.int64) % mod
    m, n = A.shape
    pivots, R = _diagonalize(A, b, ell, k)

    y = np.zeros(n, dtype=np.int64)
    for s, v in enumerate(pivots):
        piv = ell**v
        if int(b[s]) % piv != 0:
            return None
        y[s] = int(b[s]) // piv
    for s in range(len(pivots), m):
        if b[s] % mod != 0:
            return None

    x = np.zeros(n, dtype=np.int64)
    for j in range(min(n, len(pivots))):
        if y[j]:
            x = (x + R[:, j] * int(y[j])) % mod
    return x % mod


def diagonal_valuations(A, ell: int, k: int):
    """Valuations of the Smith-form diagonal of A over Z/ell^k."""
    mod = ell**k
    A = np.array(A, dtype=np.int64) % mod
    pivots, _ = _diagonalize(A, None, ell, k)
    return pivots


def kernel_is_trivial(A, ell: int, k: int) -> bool:
    """True iff A x = 0 over Z/ell^k forces x = 0 (A injective)."""
    A = np.asarray(A)
    vals = diagonal_valuations(A, ell, k)
    return len(vals) == A.shape[1] and all(v == 0 for v in vals)
