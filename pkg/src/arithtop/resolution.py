"""Free resolutions over F_p[G] and the cochain complexes built from them.

A free module F_p[G]^r is stored as a flat vector with index k*|G| + g for
the element g e_k.  A G-map out of a free module is stored by the images of
its basis vectors, an array ``img`` of shape (r_source, r_target, |G|)
meaning e_j -> sum_{k,g} img[j, k, g] g e_k.  Everything else (the
F_p-matrix of the map, Hom complexes relative to a subgroup, Yoneda lifts)
is derived from that array.
"""

import numpy as np

from . import fpmat


class ResourceEnvelopeError(RuntimeError):
    """Raised when a computation would exceed the documented size envelope."""


def group_ring_mul(G, x, y, p):
    """Product of two group ring elements given as length-|G| vectors."""
    out = np.zeros(G.order, dtype=np.int64)
    for g in np.flatnonzero(x):
        row = G.mult[g]
        for h in np.flatnonzero(y):
            out[row[h]] += x[g] * y[h]
    return out % p


def gmap_matrix(G, img, p):
    """F_p-matrix of the G-map with basis images ``img``.

    Columns are indexed by (j, h) for h e_j, rows by (k, g)."""
    rs, rt, n = img.shape
    M = np.zeros((rt * n, rs * n), dtype=np.int64)
    for h in range(n):
        perm = np.array(G.mult[h])
        for j in range(rs):
            col = np.zeros((rt, n), dtype=np.int64)
            col[:, perm] = img[j]
            M[:, j * n + h] = col.reshape(-1)
    return M % p


def act(G, h, X):
    """Left multiplication by h on a free-module vector of shape (r, |G|)."""
    Y = np.zeros_like(X)
    Y[:, np.array(G.mult[h])] = X
    return Y


class FreeResolution:
    """A free resolution P_* -> F_p of the trivial module, through P_length.

    For p-groups the generators are chosen modulo I*ker (I the augmentation
    ideal), which makes the resolution minimal: every Hom_G(P_*, F_p)
    differential vanishes.  For other groups generators are added greedily.
    """

    def __init__(self, G, p, length, images=None):
        self.G = G
        self.p = p
        self.length = length
        n = G.order
        self.minimal = G.is_p_group(p)
        self.ranks = [1]
        self.images = [None]  # images[d] has shape (r_d, r_{d-1}, |G|)
        self.mats = [np.ones((1, n), dtype=np.int64) % p]  # mats[0] is the augmentation
        if images is not None:
            for img in images[:length]:
                self._append(np.array(img, dtype=np.int64) % p)
            return
        gens = G.generators()
        for d in range(1, length + 1):
            K = fpmat.nullspace(self.mats[d - 1], p)
            r_prev = self.ranks[d - 1]
            chosen = self._choose_generators(K, r_prev, gens)
            img = np.array([v.reshape(r_prev, n) for v in chosen], dtype=np.int64)
            if img.size == 0:
                img = np.zeros((0, r_prev, n), dtype=np.int64)
            self._append(img)

    def _append(self, img):
        self.images.append(img)
        self.ranks.append(img.shape[0])
        self.mats.append(gmap_matrix(self.G, img, self.p))

    def _choose_generators(self, K, r, gens):
        G, p, n = self.G, self.p, self.G.order
        dim = K.shape[0]
        ech = fpmat.Echelon(r * n, p)
        chosen = []
        if self.minimal:
            for v in K:
                X = v.reshape(r, n)
                for g in gens:
                    ech.add((act(G, g, X) - X).reshape(-1))
            for v in K:
                if ech.add(v):
                    chosen.append(v)
            return chosen
        for v in K:
            if len(ech) == dim:
                break
            if not ech.contains(v):
                chosen.append(v)
                X = v.reshape(r, n)
                for h in range(n):
                    ech.add(act(G, h, X).reshape(-1))
        return chosen

    def check_exact(self):
        """True when d_{i} d_{i+1} = 0 and rank conditions give exactness at P_0..P_{length-1}."""
        p = self.p
        for d in range(1, self.length + 1):
            if np.any(self.mats[d - 1] @ self.mats[d] % p):
                return False
        for d in range(0, self.length):
            dim = self.ranks[d] * self.G.order
            if dim - fpmat.rank(self.mats[d], p) != fpmat.rank(self.mats[d + 1], p):
                return False
        return True


def trivial_rho(h):
    return np.ones((1, 1), dtype=np.int64)


class HomComplex:
    """Cochains Hom_H(P_*, M) for a subgroup H and an F_p[H]-module M.

    M is given by its dimension and ``rho(h)`` (an m x m matrix acting on
    column vectors).  A cochain in degree d is a vector indexed by
    (coset c, generator j, coordinate a): the value on c e_j, where c runs
    over right coset representatives of H in G.
    """

    def __init__(self, res, H=None, rho=trivial_rho, mdim=1):
        G = res.G
        self.res = res
        self.p = res.p
        self.H = list(range(G.order)) if H is None else sorted(H)
        self.reps, self.coset, self.hpart = G.right_coset_reps(self.H)
        self.mdim = mdim
        self._rho = {h: np.array(rho(h), dtype=np.int64) % self.p for h in self.H}
        self.deltas = [self._delta(d) for d in range(res.length)]

    def dim(self, d):
        return len(self.reps) * self.res.ranks[d] * self.mdim

    def _delta(self, d):
        """delta^d : C^d -> C^{d+1}, (delta f)(c e_j) = f(c d(e_j))."""
        res, p, m = self.res, self.p, self.mdim
        G = res.G
        img = res.images[d + 1]
        rt, rs = res.ranks[d + 1], res.ranks[d]
        R = len(self.reps)
        D = np.zeros((R * rt * m, R * rs * m), dtype=np.int64)
        for ci, c in enumerate(self.reps):
            row = G.mult[c]
            for j in range(rt):
                ks, gs = np.nonzero(img[j])
                r0 = (ci * rt + j) * m
                for k, g in zip(ks, gs):
                    x = row[g]
                    c2 = self.coset[x]
                    h = self.hpart[x]
                    c0 = (c2 * rs + k) * m
                    D[r0:r0 + m, c0:c0 + m] += img[j, k, g] * self._rho[h]
        return D % p


class CochainCohomology:
    """Cohomology of a finite cochain complex over F_p with explicit
    representatives and a coordinate map for cocycles."""

    def __init__(self, deltas, dims, p):
        self.deltas = deltas
        self.dims = dims
        self.p = p
        self._cache = {}

    def _data(self, d):
        if d in self._cache:
            return self._cache[d]
        if d >= len(self.deltas):
            raise ResourceEnvelopeError("cohomology requested beyond the computed range")
        p = self.p
        Z = fpmat.nullspace(self.deltas[d], p, ncols=self.dims[d])
        if d > 0 and self.deltas[d - 1].size:
            B = fpmat.row_space_basis(self.deltas[d - 1].T, p)
        else:
            B = np.zeros((0, self.dims[d]), dtype=np.int64)
        idx = fpmat.complement_basis(B, Z, p) if Z.shape[0] else []
        reps = Z[idx] if idx else np.zeros((0, self.dims[d]), dtype=np.int64)
        basis = np.vstack([B, reps]).T if (B.shape[0] + reps.shape[0]) else None
        self._cache[d] = (reps, B.shape[0], basis)
        return self._cache[d]

    def dim(self, d):
        return self._data(d)[0].shape[0]

    def reps(self, d):
        return self._data(d)[0]

    def coords(self, d, v):
        """Coordinates of the class of cocycle v in the basis ``reps(d)``."""
        reps, nb, basis = self._data(d)
        if reps.shape[0] == 0:
            return np.zeros(0, dtype=np.int64)
        x = fpmat.solve(basis, np.array(v) % self.p, self.p)
        if x is None:
            raise ValueError("vector is not a cocycle")
        return x[nb:]

    def map_matrix(self, d, target, d2, f):
        """Matrix (target coords x source coords) of the cochain map f."""
        cols = [target.coords(d2, f(v)) for v in self.reps(d)]
        if not cols:
            return np.zeros((target.dim(d2), 0), dtype=np.int64)
        return np.array(cols, dtype=np.int64).T % self.p


def cohomology_of(hc):
    return CochainCohomology(hc.deltas, [hc.dim(d) for d in range(hc.res.length + 1)], hc.p)


def yoneda_lift(res, u, a, upto):
    """Chain map sigma_t : P_{a+t} -> P_t lifting the cocycle u on P_a.

    u is a G-cochain with trivial coefficients (length r_a).  Returns the
    image arrays sigma[t] of shape (r_{a+t}, r_t, |G|) for t <= upto.
    """
    G, p, n = res.G, res.p, res.G.order
    if a + upto > res.length:
        raise ResourceEnvelopeError("resolution too short for the requested product")
    u = np.array(u, dtype=np.int64) % p
    s0 = np.zeros((res.ranks[a], 1, n), dtype=np.int64)
    s0[:, 0, 0] = u
    sig = [s0]
    for t in range(1, upto + 1):
        prev = gmap_matrix(G, sig[t - 1], p)  # P_{a+t-1} -> P_{t-1}
        rhs = prev @ res.mats[a + t] % p  # columns: images of h e_j
        img = np.zeros((res.ranks[a + t], res.ranks[t], n), dtype=np.int64)
        rs_src = res.ranks[a + t]
        for j in range(rs_src):
            b = rhs[:, j * n + 0]
            x = fpmat.solve(res.mats[t], b, p)
            if x is None:
                raise ArithmeticError("chain lift failed; resolution is not exact")
            img[j] = x.reshape(res.ranks[t], n)
        sig.append(img)
    return sig


def product_cochain(res, u, a, v, b, sig=None):
    """Cochain on P_{a+b} representing the product of classes u (deg a) and v (deg b)."""
    if sig is None:
        sig = yoneda_lift(res, u, a, b)
    S = sig[b]  # (r_{a+b}, r_b, |G|)
    return (S.sum(axis=2) @ np.array(v, dtype=np.int64)) % res.p
