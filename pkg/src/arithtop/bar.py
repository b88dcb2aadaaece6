"""Normalized bar cochains: the independent oracle for group cohomology.

Cochains of degree n are functions on (G - {1})^n, indexed in mixed radix
base |G|-1.  The oracle is exact but expensive, so it only runs inside a
fixed envelope: the largest cochain space touched may have at most
``BAR_ENVELOPE`` coordinates, and for odd p the dense elimination
(short side squared times long side) may cost at most ``BAR_WORK_ENVELOPE``.
"""

import numpy as np

from . import fpmat
from .intlin import local_divisor_valuations
from .resolution import ResourceEnvelopeError

BAR_ENVELOPE = 60000
BAR_WORK_ENVELOPE = 4 * 10 ** 9


def _check_envelope(G, n):
    size = (G.order - 1) ** n
    if size > BAR_ENVELOPE:
        raise ResourceEnvelopeError(
            "bar cochains of degree %d on a group of order %d have %d coordinates (limit %d)"
            % (n, G.order, size, BAR_ENVELOPE))


def _tuples(G, n):
    """Array of shape (count, n) listing (G - {1})^n in index order."""
    m = G.order - 1
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((m,) * n).reshape(n, -1).T
    return grids + 1


def _index(G, T):
    m = G.order - 1
    idx = np.zeros(T.shape[0], dtype=np.int64)
    for c in range(T.shape[1]):
        idx = idx * m + (T[:, c] - 1)
    return idx


def coboundary_entries(G, n):
    """(rows, cols, signs) of delta^n : C^n -> C^{n+1} with trivial coefficients."""
    _check_envelope(G, n + 1)
    mult = np.array(G.mult, dtype=np.int64)
    T = _tuples(G, n + 1)
    rows_all = np.arange(T.shape[0])
    rows, cols, vals = [], [], []

    def add(mask, sub, sign):
        rows.append(rows_all[mask])
        cols.append(_index(G, sub[mask]) if sub.shape[1] else np.zeros(int(mask.sum()), dtype=np.int64))
        vals.append(np.full(int(mask.sum()), sign, dtype=np.int64))

    full = np.ones(T.shape[0], dtype=bool)
    add(full, T[:, 1:], 1)
    for i in range(n):
        prod = mult[T[:, i], T[:, i + 1]]
        sub = np.concatenate([T[:, :i], prod[:, None], T[:, i + 2:]], axis=1)
        add(prod != 0, sub, (-1) ** (i + 1))
    add(full, T[:, :n], (-1) ** (n + 1))
    return np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)


def coboundary_matrix(G, n, modulus=None):
    m = G.order - 1
    r, c, v = coboundary_entries(G, n)
    M = np.zeros((m ** (n + 1), m ** n), dtype=np.int64)
    np.add.at(M, (r, c), v)
    return M % modulus if modulus else M


def _rank_mod_p(G, n, p):
    if n < 0:
        return 0
    m = G.order - 1
    if p == 2:
        r, c, v = coboundary_entries(G, n)
        # transpose: rows index C^n, packed along C^{n+1}
        A = np.zeros((m ** n, m ** (n + 1)), dtype=np.uint8)
        np.add.at(A, (c, r), (v % 2).astype(np.uint8))
        return fpmat.rank_gf2(A % 2)
    lo, hi = sorted((m ** n, m ** (n + 1)))
    if lo * lo * hi > BAR_WORK_ENVELOPE:
        raise ResourceEnvelopeError(
            "bar elimination mod %d in degree %d on a group of order %d exceeds the work limit"
            % (p, n, G.order))
    return fpmat.rank(coboundary_matrix(G, n, p), p)


def bar_betti(G, p, max_deg):
    """dim H^i(G, F_p) for i <= max_deg from normalized bar cochains."""
    ranks = [_rank_mod_p(G, n, p) for n in range(max_deg + 1)]
    out = []
    for n in range(max_deg + 1):
        dim = (G.order - 1) ** n
        out.append(dim - ranks[n] - (ranks[n - 1] if n else 0))
    return out


def bar_integral_torsion(G, p, n):
    """p-primary part of H^n(G, Z) for n >= 1 as a list of exponents.

    H^n is finite, so it equals the torsion of C^n / im delta^{n-1}, read
    off from the local elementary divisors of delta^{n-1}.
    """
    if n < 1:
        raise ValueError("integral bar cohomology is only reported in positive degree")
    K = 1
    while p ** K <= G.order:
        K += 1
    M = coboundary_matrix(G, n - 1)
    vals = local_divisor_valuations(M, p, K + 1)
    return sorted((v for v in vals if v > 0), reverse=True)


# cochain-level products and restrictions with F_p coefficients

def cup(G, f, a, g, b, p):
    """Alexander-Whitney cup product of bar cochains f (deg a) and g (deg b)."""
    _check_envelope(G, a + b)
    T = _tuples(G, a + b)
    fi = _index(G, T[:, :a]) if a else np.zeros(T.shape[0], dtype=np.int64)
    gi = _index(G, T[:, a:]) if b else np.zeros(T.shape[0], dtype=np.int64)
    return (np.asarray(f)[fi] * np.asarray(g)[gi]) % p


class BarCohomology:
    """Bar cohomology with F_p coefficients and explicit class coordinates."""

    def __init__(self, G, p, max_deg):
        from .resolution import CochainCohomology
        self.G = G
        self.p = p
        deltas = [coboundary_matrix(G, n, p) for n in range(max_deg + 1)]
        dims = [(G.order - 1) ** n for n in range(max_deg + 2)]
        self.coh = CochainCohomology(deltas, dims, p)

    def dim(self, n):
        return self.coh.dim(n)

    def reps(self, n):
        return self.coh.reps(n)

    def coords(self, n, v):
        return self.coh.coords(n, v)

    def hom_cochain(self, phi):
        """The 1-cocycle of a homomorphism G -> Z/p given as a value list."""
        return np.array(phi[1:], dtype=np.int64) % self.p

    def cup(self, f, a, g, b):
        return cup(self.G, f, a, g, b, self.p)


def central_extension_cocycle(G, Z, p):
    """For a central subgroup Z of order p, the 2-cocycle on Q = G/Z.

    Returns (Q, proj, cocycle) where Q is the quotient GroupTable, proj maps
    G -> Q and the cocycle lives on normalized bar 2-cochains of Q.
    """
    from .groups import GroupTable
    Z = sorted(Z)
    if len(Z) != p:
        raise ValueError("central subgroup must have order p")
    z = [a for a in Z if a != 0][0]
    zpow = {0: 0}
    x, k = z, 1
    while x != 0:
        zpow[x] = k
        x = G.mult[x][z]
        k += 1
    # cosets gZ, section = smallest element
    section = []
    proj = [None] * G.order
    for g in range(G.order):
        if proj[g] is None:
            section.append(g)
            for a in Z:
                proj[G.mult[g][a]] = len(section) - 1
    q = len(section)
    mult = [[proj[G.mult[section[i]][section[j]]] for j in range(q)] for i in range(q)]
    Q = GroupTable(mult, name="%s/Z" % G.name, check=False)
    T = _tuples(Q, 2)
    vals = []
    for a, b in T:
        prod = G.mult[section[a]][section[b]]
        s = section[proj[prod]]
        # prod = s * z^k
        k = next(zpow[w] for w in Z if G.mult[s][w] == prod)
        vals.append(k % p)
    return Q, proj, np.array(vals, dtype=np.int64)
