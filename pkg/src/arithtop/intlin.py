"""Exact integer linear algebra on list-of-lists matrices.

Everything here works with Python ints, so entries never overflow.  The
central routine is :func:`smith_form`, which also returns the unimodular
transforms and their inverses; kernels, solvers and lattice quotients are
thin wrappers around it.
"""

import numpy as np


def zeros(m, n):
    return [[0] * n for _ in range(m)]


def identity(n):
    I = zeros(n, n)
    for i in range(n):
        I[i][i] = 1
    return I


def shape(A, ncols=None):
    m = len(A)
    if m:
        return m, len(A[0])
    return 0, (ncols or 0)


def matmul(A, B, ncols=None):
    """Product of two integer matrices (``ncols`` covers the 0-row case of B)."""
    m = len(A)
    k = len(B)
    n = len(B[0]) if k else (ncols or 0)
    out = zeros(m, n)
    for i in range(m):
        Ai = A[i]
        Oi = out[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                for j in range(n):
                    b = Bt[j]
                    if b:
                        Oi[j] += a * b
    return out


def matvec(A, x):
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def transpose(A, ncols=None):
    m, n = shape(A, ncols)
    return [[A[i][j] for i in range(m)] for j in range(n)]


def hstack(*mats):
    rows = len(mats[0])
    return [sum((list(M[i]) for M in mats), []) for i in range(rows)]


def column(A, j):
    return [row[j] for row in A]


class SmithForm:
    """Result of :func:`smith_form`.

    ``U @ A @ V == S`` where ``S`` is diagonal with nonnegative entries
    ``diag`` satisfying d_1 | d_2 | ... ; ``Uinv`` and ``Vinv`` are the exact
    inverses of the unimodular transforms.
    """

    def __init__(self, diag, U, V, Uinv, Vinv, rank):
        self.diag = diag
        self.U = U
        self.V = V
        self.Uinv = Uinv
        self.Vinv = Vinv
        self.rank = rank


def smith_form(A, ncols=None, transforms=True):
    """Smith normal form of an integer matrix with unimodular transforms."""
    m, n = shape(A, ncols)
    a = [list(map(int, row)) for row in A]
    U = identity(m) if transforms else None
    Uinv = identity(m) if transforms else None
    V = identity(n) if transforms else None
    Vinv = identity(n) if transforms else None

    def row_add(i, j, c):
        # row_i += c * row_j
        ai, aj = a[i], a[j]
        for k in range(n):
            if aj[k]:
                ai[k] += c * aj[k]
        if transforms:
            Ui, Uj = U[i], U[j]
            for k in range(m):
                if Uj[k]:
                    Ui[k] += c * Uj[k]
            for row in Uinv:
                if row[i]:
                    row[j] -= c * row[i]

    def col_add(i, j, c):
        # col_i += c * col_j
        for row in a:
            if row[j]:
                row[i] += c * row[j]
        if transforms:
            for row in V:
                if row[j]:
                    row[i] += c * row[j]
            Vi, Vj = Vinv[i], Vinv[j]
            for k in range(n):
                if Vi[k]:
                    Vj[k] -= c * Vi[k]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        if transforms:
            U[i], U[j] = U[j], U[i]
            for row in Uinv:
                row[i], row[j] = row[j], row[i]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if transforms:
            for row in V:
                row[i], row[j] = row[j], row[i]
            Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def row_neg(i):
        a[i] = [-x for x in a[i]]
        if transforms:
            U[i] = [-x for x in U[i]]
            for row in Uinv:
                row[i] = -row[i]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i0, j0 = best
        if i0 != t:
            row_swap(t, i0)
        if j0 != t:
            col_swap(t, j0)
        while True:
            piv = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    row_add(i, t, -(a[i][t] // piv))
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    col_add(j, t, -(a[t][j] // piv))
                    if a[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remainder in row/column t to the pivot
                cand = [(abs(a[i][t]), 0, i) for i in range(t + 1, m) if a[i][t]]
                cand += [(abs(a[t][j]), 1, j) for j in range(t + 1, n) if a[t][j]]
                v, kind, k = min(cand)
                if v < abs(a[t][t]):
                    if kind == 0:
                        row_swap(t, k)
                    else:
                        col_swap(t, k)
                continue
            bad = None
            for i in range(t + 1, m):
                row = a[i]
                for j in range(t + 1, n):
                    if row[j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_add(t, bad, 1)
        if a[t][t] < 0:
            row_neg(t)
        t += 1
    diag = [a[i][i] for i in range(min(m, n))]
    rank = sum(1 for d in diag if d)
    return SmithForm(diag, U, V, Uinv, Vinv, rank)


def elementary_divisors(A, ncols=None):
    """Nonzero invariant factors of A (the diagonal of its Smith form)."""
    return [d for d in smith_form(A, ncols, transforms=False).diag if d]


def kernel_basis(A, ncols=None):
    """Basis of the integer kernel {x : A x = 0}, as a list of vectors."""
    m, n = shape(A, ncols)
    if m == 0:
        return [[int(i == j) for i in range(n)] for j in range(n)]
    sf = smith_form(A, ncols)
    return [column(sf.V, j) for j in range(sf.rank, n)]


def solve(A, b, ncols=None):
    """An integer solution of A x = b, or None when none exists."""
    m, n = shape(A, ncols)
    if m == 0:
        return [0] * n
    sf = smith_form(A, ncols)
    c = matvec(sf.U, b)
    y = [0] * n
    for i in range(m):
        d = sf.diag[i] if i < len(sf.diag) else 0
        if d:
            if c[i] % d:
                return None
            y[i] = c[i] // d
        elif c[i]:
            return None
    return matvec(sf.V, y)


def lattice_quotient(B, ncols=None):
    """Describe Z^n / B Z^k for a full-rank generating matrix B (n rows).

    Returns ``(invariants, P, L)``: ``invariants`` are the nontrivial
    invariant factors s_i > 1 in increasing divisibility order, ``P`` maps
    Z^n onto the quotient coordinates (rows of U) and ``L`` lifts quotient
    coordinates back to Z^n (columns of U^{-1}).
    """
    n = len(B)
    sf = smith_form(B, ncols)
    if sf.rank < n:
        raise ValueError("generating matrix does not have full rank")
    keep = [i for i in range(n) if sf.diag[i] != 1]
    inv = [sf.diag[i] for i in keep]
    P = [sf.U[i] for i in keep]
    L = [[sf.Uinv[r][i] for i in keep] for r in range(n)]
    return inv, P, L


def valuation(x, p):
    if x == 0:
        return None
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def local_divisor_valuations(A, p, K):
    """p-adic valuations of the elementary divisors of an integer matrix.

    Works over Z/p^K, so it is exact for every divisor whose p-part is
    below p^K; divisors with valuation at least K are reported as K.  Uses
    numpy int64, so p^(2K) must stay below 2^62.
    """
    mod = p ** K
    if mod * mod >= 2 ** 62:
        raise ValueError("modulus too large for int64 elimination")
    M = np.array(A, dtype=np.int64) % mod
    if M.size == 0:
        return []
    vals = []
    # valuation table for residues mod p^K
    vt = np.full(mod, K, dtype=np.int64)
    for r in range(1, mod):
        vt[r] = valuation(r, p)
    while M.shape[0] and M.shape[1]:
        V = vt[M]
        idx = int(np.argmin(V))
        i, j = divmod(idx, M.shape[1])
        v = int(V[i, j])
        if v >= K:
            break
        vals.append(v)
        piv = int(M[i, j])
        u = piv // p ** v
        uinv = pow(u, -1, mod)
        col = M[:, j].copy()
        # coefficients c_r = col_r / p^v, exact since v is minimal
        c = (col // p ** v) * uinv % mod
        c[i] = 0
        M = (M - np.outer(c, M[i]) % mod) % mod
        M = np.delete(np.delete(M, i, axis=0), j, axis=1)
    return vals


def lattice_basis(gens, n):
    """Square basis matrix (columns) of the full-rank lattice spanned by the
    generator vectors ``gens`` in Z^n."""
    M = transpose(gens, ncols=n) if gens else [[] for _ in range(n)]
    sf = smith_form(M, ncols=len(gens))
    if sf.rank < n:
        raise ValueError("generators do not span a full-rank lattice")
    return [[sf.Uinv[i][j] * sf.diag[j] for j in range(n)] for i in range(n)]


def inverse_unimodular_solve(B, X):
    """Solve B Y = X exactly for square nonsingular B; raises if not integral."""
    n = len(B)
    cols = []
    for j in range(len(X[0]) if X else 0):
        y = solve(B, column(X, j))
        if y is None:
            raise ValueError("system has no integer solution")
        cols.append(y)
    return transpose(cols, ncols=n) if cols else [[] for _ in range(n)]
