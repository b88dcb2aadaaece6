"""Linear algebra over the prime field F_p on numpy int64 arrays.

Matrices are reduced mod p on entry.  All routines are exact; p is small
(the library only ever uses p < 64), so products stay far below 2^63.
"""

import numpy as np


def rref(M, p):
    """Reduced row echelon form; returns (R, pivot_columns)."""
    A = np.array(M, dtype=np.int64) % p
    m, n = A.shape
    r = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = (A[r] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        nzr = np.flatnonzero(col)
        if nzr.size:
            A[nzr] = (A[nzr] - np.outer(col[nzr], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M, p):
    A = np.asarray(M)
    if A.size == 0:
        return 0
    if p == 2 and A.shape[0] * A.shape[1] > 200000:
        return rank_gf2(A)
    if A.shape[0] > A.shape[1]:
        A = A.T
    return _forward_rank(A, p)


def _forward_rank(M, p):
    """Rank by forward elimination only, touching the trailing block."""
    A = np.array(M, dtype=np.int64) % p
    m, n = A.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i], c:] = A[[i, r], c:]
        inv = pow(int(A[r, c]), -1, p)
        blk = A[r + 1:, c:]
        below = np.flatnonzero(blk[:, 0])
        if below.size:
            f = blk[below, 0] * inv % p
            blk[below] = (blk[below] - np.outer(f, A[r, c:])) % p
        r += 1
    return r


def nullspace(M, p, ncols=None):
    """Rows of the returned array form a basis of {x : M x = 0}."""
    A = np.array(M, dtype=np.int64)
    if A.size == 0:
        n = A.shape[1] if A.ndim == 2 else (ncols or 0)
        return np.eye(n, dtype=np.int64)
    R, piv = rref(A, p)
    n = A.shape[1]
    free = [c for c in range(n) if c not in set(piv)]
    N = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        N[k, f] = 1
        for r, c in enumerate(piv):
            N[k, c] = (-R[r, f]) % p
    return N


def solve(M, b, p):
    """One solution x of M x = b over F_p, or None."""
    A = np.array(M, dtype=np.int64) % p
    m, n = A.shape
    aug = np.concatenate([A, np.array(b, dtype=np.int64).reshape(m, 1) % p], axis=1)
    R, piv = rref(aug, p)
    if n in piv:
        return None
    x = np.zeros(n, dtype=np.int64)
    for r, c in enumerate(piv):
        x[c] = R[r, n]
    return x


def row_space_basis(M, p):
    A = np.array(M, dtype=np.int64)
    if A.size == 0:
        return A.reshape(0, A.shape[1] if A.ndim == 2 else 0)
    return rref(A, p)[0]


def complement_basis(sub, ambient, p):
    """Rows of ``ambient`` (in order) that extend a basis of span(sub) to
    span(sub + ambient); returns their indices."""
    R = np.array(sub, dtype=np.int64) % p
    n = np.array(ambient).shape[1]
    if R.size == 0:
        R = np.zeros((0, n), dtype=np.int64)
    cur = rank(R, p) if R.shape[0] else 0
    chosen = []
    for i, v in enumerate(np.array(ambient, dtype=np.int64) % p):
        T = np.vstack([R, v[None, :]])
        rk = rank(T, p)
        if rk > cur:
            R = T
            cur = rk
            chosen.append(i)
    return chosen


def pack_rows_gf2(A):
    """Pack a 0/1 matrix into rows of uint64 words."""
    A = (np.asarray(A) % 2).astype(np.uint8)
    m, n = A.shape
    nbytes = (n + 63) // 64 * 8
    P = np.zeros((m, nbytes), dtype=np.uint8)
    if n:
        P[:, : (n + 7) // 8] = np.packbits(A, axis=1)
    return P.view(np.uint64)


def rank_gf2_packed(P):
    """Rank over F_2 of a packed matrix (modified in place)."""
    m, W = P.shape
    r = 0
    for w in range(W):
        for bit in range(64):
            if r == m:
                return r
            shift = np.uint64(bit)
            colbits = (P[r:, w] >> shift) & np.uint64(1)
            nz = np.flatnonzero(colbits)
            if nz.size == 0:
                continue
            i = r + int(nz[0])
            if i != r:
                P[[r, i]] = P[[i, r]]
            others = r + nz[1:]
            if others.size:
                P[others, w:] ^= P[r, w:]
            r += 1
    return r


def rank_gf2(A):
    A = np.asarray(A)
    if A.shape[0] > A.shape[1]:
        A = A.T
    return rank_gf2_packed(pack_rows_gf2(A))


class Echelon:
    """Incrementally maintained row echelon basis over F_p."""

    def __init__(self, n, p):
        self.n = n
        self.p = p
        self.rows = np.zeros((0, n), dtype=np.int64)
        self.pivots = []

    def __len__(self):
        return len(self.pivots)

    def reduce(self, v):
        v = np.array(v, dtype=np.int64) % self.p
        if self.pivots:
            coef = v[self.pivots].copy()
            nz = np.flatnonzero(coef)
            if nz.size:
                v = (v - coef[nz] @ self.rows[nz]) % self.p
        return v

    def add(self, v):
        """Insert v; returns True when it enlarged the span."""
        v = self.reduce(v)
        nz = np.flatnonzero(v)
        if nz.size == 0:
            return False
        c = int(nz[0])
        v = v * pow(int(v[c]), -1, self.p) % self.p
        col = self.rows[:, c].copy()
        hit = np.flatnonzero(col)
        if hit.size:
            self.rows[hit] = (self.rows[hit] - np.outer(col[hit], v)) % self.p
        self.rows = np.vstack([self.rows, v[None, :]])
        self.pivots.append(c)
        return True

    def contains(self, v):
        return not np.any(self.reduce(v))
