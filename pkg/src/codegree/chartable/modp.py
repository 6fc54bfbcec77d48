"""Dense linear algebra over a prime field GF(p), on int64 numpy arrays.

Every routine keeps entries reduced to ``[0, p)`` so intermediate products stay
below ``p**2``; callers are expected to use primes below ~10**6.
"""

from __future__ import annotations

import numpy as np


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("0 has no inverse mod %d" % p)
    return pow(int(a), p - 2, p)


def rref(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns the nonzero rows and the pivot columns."""
    A = np.array(A, dtype=np.int64) % p
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if not len(nz):
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = A[r] * inv_mod(int(A[r, c]), p) % p
        f = A[:, c].copy()
        f[r] = 0
        A = (A - f[:, None] * A[r][None, :]) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Basis of {x : A x = 0} as the columns of an (n, t) array."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    R, piv = rref(A, p)
    free = [c for c in range(n) if c not in set(piv)]
    N = np.zeros((n, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        N[f, j] = 1
        for i, c in enumerate(piv):
            N[c, j] = (-R[i, f]) % p
    return N


def column_echelon(B: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Column basis in reduced form: rows ``pivots`` of the result are the identity."""
    R, piv = rref(np.asarray(B).T, p)
    return R.T.copy(), piv


def hessenberg(A: np.ndarray, p: int) -> np.ndarray:
    """Upper Hessenberg matrix similar to A over GF(p)."""
    H = np.array(A, dtype=np.int64) % p
    n = H.shape[0]
    for j in range(n - 2):
        nz = np.flatnonzero(H[j + 1:, j])
        if not len(nz):
            continue
        i = j + 1 + int(nz[0])
        if i != j + 1:
            H[[i, j + 1]] = H[[j + 1, i]]
            H[:, [i, j + 1]] = H[:, [j + 1, i]]
        piv_inv = inv_mod(int(H[j + 1, j]), p)
        t = H[j + 2:, j] * piv_inv % p
        if not t.any():
            continue
        H[j + 2:] = (H[j + 2:] - t[:, None] * H[j + 1][None, :]) % p
        H[:, j + 1] = (H[:, j + 1] + (H[:, j + 2:] @ t) % p) % p
    return H


def charpoly(A: np.ndarray, p: int) -> np.ndarray:
    """Coefficients (lowest degree first, monic) of det(xI - A) over GF(p)."""
    H = hessenberg(A, p)
    n = H.shape[0]
    P = np.zeros((n + 1, n + 1), dtype=np.int64)
    P[0, 0] = 1
    for m in range(1, n + 1):
        prev = P[m - 1]
        cur = np.zeros(n + 1, dtype=np.int64)
        cur[1:] = prev[:-1]
        cur = (cur - H[m - 1, m - 1] * prev) % p
        if m > 1:
            # subdiagonal products h(m,m-1) h(m-1,m-2) ... taken cumulatively
            sub = H[np.arange(m - 1, 0, -1), np.arange(m - 2, -1, -1)]
            t = np.ones(m - 1, dtype=np.int64)
            acc = 1
            for i in range(m - 1):
                acc = acc * int(sub[i]) % p
                t[i] = acc
            coef = t * H[np.arange(m - 2, -1, -1), m - 1] % p
            if coef.any():
                cur = (cur - (coef @ P[np.arange(m - 2, -1, -1)]) % p) % p
        P[m] = cur
    return P[n]


def poly_roots(coeffs: np.ndarray, p: int) -> list[int]:
    """Distinct roots in GF(p), found by evaluating at every field element."""
    x = np.arange(p, dtype=np.int64)
    val = np.zeros(p, dtype=np.int64)
    for c in coeffs[::-1]:
        val = (val * x + int(c)) % p
    return np.flatnonzero(val == 0).tolist()


def matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    inner = A.shape[-1]
    if inner * (p - 1) ** 2 < 2 ** 62:
        return (A @ B) % p
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    step = max(1, (2 ** 62) // ((p - 1) ** 2))
    for lo in range(0, inner, step):
        out = (out + A[:, lo:lo + step] @ B[lo:lo + step]) % p
    return out
