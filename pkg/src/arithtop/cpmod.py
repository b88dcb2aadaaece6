"""Finite modules over the cyclic group C_p and their Tate cohomology.

A ``CpModule`` is a PGroup W with an automorphism zeta satisfying
zeta^p = 1.  With N = 1 + zeta + ... + zeta^(p-1) the Tate groups are

    H^odd  = ker N / im(1 - zeta),     H^even = ker(1 - zeta) / im N,

both killed by p, so their F_p-dimension is their length.

Block modules follow the left/right elementary blocks: L(N) = Z/p^N with
trivial action and R(N) = O / pi^N with O = Z[zeta] the cyclotomic integers
and pi = 1 - zeta.  Consecutive blocks of a chain are glued either by a
fibered sum over F_p (equalising the two top quotients) or by identifying
the two socles (Ker p in L with Ker pi in R).
"""

import itertools
import random

from . import intlin
from .abelian import (
    PGroup, Hom, hom_kernel, hom_image, hom_cokernel, hom_lift, hom_preimage,
    homology, direct_sum, lattice_module, presentation_group, p_log, subgroup,
    qz, is_prime,
)


class ModuleError(ValueError):
    pass


class CpModule:
    """A finite abelian p-group with an automorphism of order dividing p."""

    __slots__ = ("carrier", "zeta")

    def __init__(self, carrier, zeta, check=True):
        if zeta.source != carrier or zeta.target != carrier:
            raise ModuleError("zeta must be an endomorphism of the carrier")
        if check:
            if zeta.power(carrier.p) != Hom.identity(carrier):
                raise ModuleError("zeta^p is not the identity")
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "zeta", zeta)

    def __setattr__(self, name, value):
        raise AttributeError("CpModule is immutable")

    def __repr__(self):
        return "CpModule(%r, zeta=%r)" % (self.carrier, [list(r) for r in self.zeta.matrix])

    def __eq__(self, other):
        return isinstance(other, CpModule) and self.zeta == other.zeta

    def __hash__(self):
        return hash(self.zeta)

    @property
    def p(self):
        return self.carrier.p

    def one_minus_zeta(self):
        return Hom.identity(self.carrier) - self.zeta

    def norm(self):
        W = self.carrier
        out = Hom.zero(W, W)
        z = Hom.identity(W)
        for _ in range(self.p):
            out = out + z
            z = self.zeta.compose(z)
        return out

    def to_json(self):
        d = self.carrier.to_json()
        d["zeta"] = [list(r) for r in self.zeta.matrix]
        return d


def trivial_module(G):
    return CpModule(G, Hom.identity(G))


def scalar_module(p, k, u):
    """Z/p^k with zeta acting as multiplication by u."""
    G = PGroup(p, [k])
    return CpModule(G, Hom.scalar(G, u))


class TateTable:
    """Tate cohomology of a CpModule."""

    def __init__(self, h_odd, h_even, fixed, coinv, odd_group, even_group):
        self.h_odd = h_odd
        self.h_even = h_even
        self.fixed = fixed
        self.coinv = coinv
        self.odd_group = odd_group
        self.even_group = even_group

    def pair(self):
        return (self.h_odd, self.h_even)

    def __repr__(self):
        return "TateTable(h_odd=%d, h_even=%d, fixed=%s, coinv=%s)" % (
            self.h_odd, self.h_even, self.fixed, self.coinv)

    def to_json(self):
        return {"h_odd": self.h_odd, "h_even": self.h_even,
                "fixed": self.fixed.to_json(), "coinv": self.coinv.to_json()}


def tate_cohomology(m):
    d = m.one_minus_zeta()
    N = m.norm()
    H1, *_ = homology(d, N)
    H2, *_ = homology(N, d)
    fixed, _ = hom_kernel(d)
    coinv, _ = hom_cokernel(d)
    return TateTable(H1.length, H2.length, fixed, coinv, H1, H2)


def fp_t_module_structure(m, degree_cap):
    """Check 2-periodicity of H^i(C_p, W) for 1 <= i <= degree_cap.

    Uses the periodic resolution, whose cochain complex is
    W --(zeta-1)--> W --N--> W --(zeta-1)--> W ...; cup product with the
    degree-2 generator is the identity shift on cochains, so periodicity
    means H^i and H^(i+2) are the same subquotient of W.
    """
    if degree_cap < 2:
        raise ModuleError("degree_cap must be at least 2")
    W = m.carrier
    d = m.zeta - Hom.identity(W)
    N = m.norm()
    delta = [d if i % 2 == 0 else N for i in range(degree_cap + 2)]
    dims = {}
    groups = {}
    for i in range(1, degree_cap + 1):
        H, K, emb, proj = homology(delta[i - 1], delta[i])
        dims[i] = H.length
        groups[i] = H
    periodic = all(groups[i] == groups[i + 2] for i in range(1, degree_cap - 1))
    t = tate_cohomology(m)
    agrees = all(dims[i] == (t.h_odd if i % 2 else t.h_even) for i in dims)
    odd = {dims[i] for i in dims if i % 2}
    even = {dims[i] for i in dims if i % 2 == 0}
    return {"dims": dims, "periodic": periodic, "matches_tate": agrees,
            "constant_per_parity": len(odd) <= 1 and len(even) <= 1,
            "free_rank": t.h_odd}


def direct_sum_modules(*mods):
    S, injs, projs = direct_sum(*[m.carrier for m in mods])
    z = Hom.zero(S, S)
    for m, i, q in zip(mods, injs, projs):
        z = z + i.compose(m.zeta).compose(q)
    return CpModule(S, z)


def _zeta_closure(m, gens):
    out = []
    for g in gens:
        x = tuple(g)
        for _ in range(m.p):
            out.append(x)
            x = m.zeta.apply(x)
    return out


def submodule(m, gens):
    """The Lambda-submodule generated by gens, as (CpModule, embedding)."""
    H, emb = subgroup(m.carrier, _zeta_closure(m, gens))
    z = hom_lift(emb, m.zeta.compose(emb))
    return CpModule(H, z), emb


def quotient(m, gens):
    """W / Lambda<gens>, as (CpModule, projection)."""
    H, emb = subgroup(m.carrier, _zeta_closure(m, gens))
    Q, proj = hom_cokernel(emb)
    cols = []
    for e in Q.gens():
        x = hom_preimage(proj, e.coords)
        cols.append(list(proj.apply(m.zeta.apply(x))))
    M = intlin.transpose(cols, ncols=Q.rank) if cols else [[] for _ in range(Q.rank)]
    return CpModule(Q, Hom(Q, Q, M)), proj


def regular_module(p, k, copies=1):
    """(Z/p^k)[C_p]^copies with zeta the cyclic shift."""
    n = p * copies
    Z = intlin.zeros(n, n)
    for c in range(copies):
        for i in range(p):
            Z[c * p + (i + 1) % p][c * p + i] = 1
    L = [[p ** k * int(i == j) for j in range(n)] for i in range(n)]
    G, z, _, _ = lattice_module(p, Z, L)
    return CpModule(G, z)


# ---------------------------------------------------------------- blocks

def cyclotomic_companion(p):
    """Companion matrix of Phi_p acting on Z^(p-1) (basis 1, z, ..., z^(p-2))."""
    n = p - 1
    C = intlin.zeros(n, n)
    for i in range(n - 1):
        C[i + 1][i] = 1
    for i in range(n):
        C[i][n - 1] = -1
    return C


class Block:
    """One elementary block as a lattice Z^d with action and sublattice."""

    def __init__(self, kind, N, p):
        if kind not in ("L", "R"):
            raise ModuleError("block kind must be 'L' or 'R'")
        if N < 1:
            raise ModuleError("block length must be positive")
        self.kind = kind
        self.N = N
        self.p = p
        if kind == "L":
            self.dim = 1
            self.action = [[1]]
            self.sublattice = [[p ** N]]
            self.top = [1]
            self.socle = [p ** (N - 1)]
        else:
            self.dim = p - 1
            C = cyclotomic_companion(p)
            pi = [[int(i == j) - C[i][j] for j in range(p - 1)] for i in range(p - 1)]
            P = intlin.identity(p - 1)
            for _ in range(N):
                P = intlin.matmul(pi, P)
            self.action = C
            self.sublattice = P
            # O / pi = F_p via zeta -> 1: sum of coordinates
            self.top = [1] * (p - 1)
            S = intlin.identity(p - 1)
            for _ in range(N - 1):
                S = intlin.matmul(pi, S)
            self.socle = intlin.column(S, 0)

    def __repr__(self):
        return "%s(%d)" % (self.kind, self.N)


class BlockSpec:
    """A chain of blocks with glue tags, optionally closed by a relation.

    ``chain`` alternates blocks ("L" or "R", length N) and glue tags
    "fibered-sum" / "kernel-identification".  ``relation`` is the coefficient
    list a_0, ..., a_d of a polynomial over F_p used to close the chain.
    """

    GLUES = ("fibered-sum", "kernel-identification")

    def __init__(self, p, blocks, glues, relation=None):
        if not is_prime(p):
            raise ModuleError("p must be prime")
        self.p = p
        self.blocks = [tuple(b) for b in blocks]
        self.glues = list(glues)
        self.relation = None if relation is None else [int(a) % p for a in relation]
        self.validate()

    @classmethod
    def from_json(cls, d):
        blocks, glues = [], []
        for item in d["chain"]:
            if "glue" in item:
                glues.append(item["glue"])
            else:
                blocks.append((item["kind"], int(item["N"])))
        return cls(int(d["p"]), blocks, glues, d.get("relation"))

    def to_json(self):
        chain = []
        for i, (k, N) in enumerate(self.blocks):
            if i:
                chain.append({"glue": self.glues[i - 1]})
            chain.append({"kind": k, "N": N})
        return {"p": self.p, "chain": chain, "relation": self.relation}

    @property
    def closed(self):
        return self.relation is not None

    def validate(self):
        b, g = self.blocks, self.glues
        if not b:
            raise ModuleError("a chain needs at least one block")
        if len(g) != len(b) - 1:
            raise ModuleError("a chain of %d blocks needs %d glue tags" % (len(b), len(b) - 1))
        for kind, N in b:
            if kind not in ("L", "R") or N < 1:
                raise ModuleError("bad block %r" % ((kind, N),))
        for t in g:
            if t not in self.GLUES:
                raise ModuleError("unknown glue tag %r" % (t,))
        for i in range(len(b) - 1):
            if b[i][0] == b[i + 1][0]:
                raise ModuleError("glue %d joins two blocks of the same kind; "
                                  "every glue joins a left and a right block" % i)
        for i in range(len(g) - 1):
            if g[i] == g[i + 1]:
                raise ModuleError("glue tags must alternate, so that no block uses its top "
                                  "or its socle twice")
        # a length-one block has top = socle; it cannot carry both glue types
        for i, (kind, N) in enumerate(b):
            tags = self._tags_at(i)
            if N == 1 and len(set(tags)) > 1:
                raise ModuleError("block %d has length 1, so its top and socle coincide "
                                  "and it cannot carry both glue types" % i)
        if self.relation is not None:
            if len(b) % 2:
                raise ModuleError("a closed chain needs an even number of blocks")
            f = _trim(self.relation)
            if len(f) < 2:
                raise ModuleError("closing polynomial must have positive degree")
            if f[0] == 0:
                raise ModuleError("closing polynomial must not be divisible by t")
            if not is_irreducible_power(f, self.p):
                raise ModuleError("closing polynomial must be a power of an irreducible polynomial")

    def _tags_at(self, i):
        tags = []
        if i > 0:
            tags.append(self.glues[i - 1])
        if i < len(self.glues):
            tags.append(self.glues[i])
        if self.relation is not None and (i == 0 or i == len(self.blocks) - 1):
            tags.append(self.closing_tag())
        return tags

    def closing_tag(self):
        if self.glues:
            return [t for t in self.GLUES if t != self.glues[-1]][0]
        # two-block cycle with no internal glue is impossible; a closed chain
        # of two blocks has one internal glue
        return "fibered-sum"


# ------------------------------------------------------ polynomials over F_p

def _trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_divmod(a, b, p):
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        d = len(a) - len(b)
        q[d] = c
        for i, x in enumerate(b):
            a[i + d] = (a[i + d] - c * x) % p
        a = _trim(a)
    return _trim(q), a


def _monic_polys(deg, p):
    for coeffs in itertools.product(range(p), repeat=deg):
        yield list(coeffs) + [1]


def is_irreducible(f, p):
    f = _trim([x % p for x in f])
    d = len(f) - 1
    if d < 1:
        return False
    for k in range(1, d // 2 + 1):
        for g in _monic_polys(k, p):
            if not poly_divmod(f, g, p)[1]:
                return False
    return True


def is_irreducible_power(f, p):
    """True iff f = unit * g^e with g irreducible over F_p."""
    f = _trim([x % p for x in f])
    d = len(f) - 1
    if d < 1:
        return False
    for k in range(1, d + 1):
        if d % k:
            continue
        for g in _monic_polys(k, p):
            if not is_irreducible(g, p):
                continue
            r = f
            e = 0
            while len(r) > 1:
                q, rem = poly_divmod(r, g, p)
                if rem:
                    break
                r = q
                e += 1
            if len(r) == 1 and e * k == d:
                return True
    return False


def companion(f, p):
    """Companion matrix (integer lift) of a polynomial f over F_p, made monic."""
    f = _trim([x % p for x in f])
    d = len(f) - 1
    inv = pow(f[-1], -1, p)
    f = [x * inv % p for x in f]
    C = intlin.zeros(d, d)
    for i in range(d - 1):
        C[i + 1][i] = 1
    for i in range(d):
        C[i][d - 1] = (-f[i]) % p
    return C


# ------------------------------------------------------------ construction

def build_block_module(spec, validate=True):
    """Realise a BlockSpec as a CpModule.

    Open chains are glued block by block.  A closed chain uses d = deg f
    copies of the chain and closes the last block back onto the first with
    the glue type not used by the last internal glue, twisted by the
    companion matrix of f.  With ``validate`` the result must have Tate
    table (1, 1) for an open chain and (0, 0) for a closed one.
    """
    p = spec.p
    blocks = [Block(k, N, p) for k, N in spec.blocks]
    if spec.closed:
        f = spec.relation
        C = companion(f, p)
        copies = len(C)
    else:
        C = None
        copies = 1
    # ambient lattice: copies x blocks
    offsets = []
    pos = 0
    for c in range(copies):
        row = []
        for b in blocks:
            row.append(pos)
            pos += b.dim
        offsets.append(row)
    n = pos
    action = intlin.zeros(n, n)
    base = []  # generators of the defining sublattice
    for c in range(copies):
        for bi, b in enumerate(blocks):
            o = offsets[c][bi]
            for i in range(b.dim):
                for j in range(b.dim):
                    action[o + i][o + j] = b.action[i][j]
            for j in range(b.dim):
                v = [0] * n
                for i in range(b.dim):
                    v[o + i] = b.sublattice[i][j]
                base.append(v)

    def top_functional(c, bi, coef=1):
        v = [0] * n
        o = offsets[c][bi]
        for i, t in enumerate(blocks[bi].top):
            v[o + i] = coef * t
        return v

    def socle_vector(c, bi, coef=1):
        v = [0] * n
        o = offsets[c][bi]
        for i, s in enumerate(blocks[bi].socle):
            v[o + i] = coef * s
        return v

    def vadd(u, w):
        return [a + b for a, b in zip(u, w)]

    conditions = []   # functionals that must vanish mod p on the submodule
    relations = []    # extra vectors to quotient by
    for c in range(copies):
        for gi, tag in enumerate(spec.glues):
            if tag == "fibered-sum":
                conditions.append(vadd(top_functional(c, gi), top_functional(c, gi + 1, -1)))
            else:
                relations.append(vadd(socle_vector(c, gi), socle_vector(c, gi + 1, -1)))
    if spec.closed:
        last = len(blocks) - 1
        tag = spec.closing_tag()
        for c in range(copies):
            if tag == "fibered-sum":
                v = top_functional(c, last)
                for c2 in range(copies):
                    if C[c][c2]:
                        v = vadd(v, top_functional(c2, 0, -C[c][c2]))
                conditions.append(v)
            else:
                v = socle_vector(c, last)
                for c2 in range(copies):
                    if C[c2][c]:
                        v = vadd(v, socle_vector(c2, 0, -C[c2][c]))
                relations.append(v)
    m = _lattice_subquotient(p, action, base, conditions, relations, n)
    if validate:
        t = tate_cohomology(m)
        want = (0, 0) if spec.closed else (1, 1)
        if t.pair() != want:
            raise ModuleError("block module %s has Tate table %r, expected %r"
                              % (spec.to_json(), t.pair(), want))
    return m


def _lattice_subquotient(p, action, base, conditions, relations, n):
    """{x : conditions(x) = 0 mod p} / (base + relations) with induced action."""
    if conditions:
        A = [list(c) for c in conditions]
        k = len(A)
        M = intlin.hstack(A, [[-p * int(i == j) for j in range(k)] for i in range(k)])
        gens = [v[:n] for v in intlin.kernel_basis(M)]
    else:
        gens = [[int(i == j) for i in range(n)] for j in range(n)]
    S = intlin.lattice_basis(gens + base, n)
    Q = base + relations
    try:
        Qc = intlin.inverse_unimodular_solve(S, intlin.transpose(Q, ncols=n))
    except ValueError:
        raise ModuleError("identified socles do not lie in the fibered submodule")
    Z = intlin.inverse_unimodular_solve(S, intlin.matmul(action, S))
    G, z, _, _ = lattice_module(p, Z, Qc)
    return CpModule(G, z)


def constructible_specs(p, max_blocks=4, max_N=2, closed_degrees=(1,)):
    """All chain specs with at most max_blocks blocks and lengths <= max_N.

    Closed specs use every closing polynomial of the listed degrees that is
    a monic power of an irreducible polynomial other than t.
    """
    out = []
    for nb in range(1, max_blocks + 1):
        for first in ("L", "R"):
            kinds = [("L", "R")[(i + (first == "R")) % 2] for i in range(nb)]
            for lengths in itertools.product(range(1, max_N + 1), repeat=nb):
                for g0 in BlockSpec.GLUES:
                    glues = [BlockSpec.GLUES[(BlockSpec.GLUES.index(g0) + i) % 2] for i in range(nb - 1)]
                    if nb == 1 and g0 != BlockSpec.GLUES[0]:
                        continue
                    blocks = list(zip(kinds, lengths))
                    try:
                        out.append(BlockSpec(p, blocks, glues))
                    except ModuleError:
                        pass
                    if nb % 2 == 0 and nb >= 2:
                        for d in closed_degrees:
                            for f in _monic_polys(d, p):
                                if f[0] == 0 or not is_irreducible_power(f, p):
                                    continue
                                try:
                                    out.append(BlockSpec(p, blocks, glues, f))
                                except ModuleError:
                                    pass
    return out


# ------------------------------------------------------- decomposition

def endomorphism_ring(m):
    """End_Lambda(W) as (E, to_matrix) with E a PGroup of parameters.

    Hom(W, W) is parametrised entrywise by A[i][j] = p^max(0, k_i - k_j) c_ij
    with c_ij mod p^min(k_i, k_j); commuting with zeta is a linear condition.
    """
    W = m.carrier
    p = W.p
    s = W.rank
    k = W.exponents
    idx = [(i, j) for i in range(s) for j in range(s)]
    scale = [p ** max(0, k[i] - k[j]) for i, j in idx]
    orders = [p ** min(k[i], k[j]) for i, j in idx]
    if not idx:
        E = PGroup(p)
        return E, lambda c: Hom.zero(W, W)
    P, perm = presentation_group(p, orders)

    def to_matrix(c):
        A = intlin.zeros(s, s)
        for t, (i, j) in enumerate(idx):
            A[i][j] = scale[t] * c[perm[t]]
        return Hom(W, W, A)

    cols = []
    for t in range(len(idx)):
        c = [0] * len(idx)
        c[perm[t]] = 1
        A = to_matrix(c)
        D = A.compose(m.zeta) - m.zeta.compose(A)
        out = [0] * len(idx)
        for u, (i, j) in enumerate(idx):
            out[perm[u]] = D.matrix[i][j] // scale[u]
        cols.append(out)
    # columns are indexed by the sorted parameter order
    sorted_cols = [None] * len(idx)
    for t in range(len(idx)):
        sorted_cols[perm[t]] = cols[t]
    Phi = Hom(P, P, intlin.transpose(sorted_cols))
    E, emb = hom_kernel(Phi)

    def elem_matrix(e):
        return to_matrix(list(emb.apply(e)))
    return E, elem_matrix


def decompose(m, limit=1 << 14, rng=None):
    """Split m into Lambda-summands via Fitting decompositions of endomorphisms.

    Returns (summands, complete) where ``complete`` is True when every
    summand was certified indecomposable by exhausting its endomorphism
    ring (at most ``limit`` elements).
    """
    rng = rng or random.Random(0)
    W = m.carrier
    if W.is_trivial():
        return [], True
    E, to_matrix = endomorphism_ring(m)
    length = W.length
    exhaustive = E.order <= limit
    candidates = E.coords_iter() if exhaustive else (
        tuple(rng.randrange(n) for n in E.orders) for _ in range(limit))
    for c in candidates:
        A = to_matrix(c)
        F = A.power(length)
        K, kemb = hom_kernel(F)
        if K.is_trivial() or K.order == W.order:
            continue
        I, iemb = hom_image(F)
        parts = []
        ok = True
        for emb in (kemb, iemb):
            gens = [emb.apply(e.coords) for e in emb.source.gens()]
            sub, _ = submodule(m, gens)
            sub_parts, sub_ok = decompose(sub, limit, rng)
            parts += sub_parts
            ok = ok and sub_ok
        return parts, ok
    return [m], exhaustive


def classify_cohomological(m, brute_force_limit=1 << 10):
    """Cohomological shape: trivial, open-like(h) or a mixed report.

    h_odd counts open summands.  For |W| <= brute_force_limit the module is
    decomposed and each summand labelled open (Tate (1,1)) or closed
    (Tate (0,0)).
    """
    t = tate_cohomology(m)
    report = {"h_odd": t.h_odd, "h_even": t.h_even}
    if m.carrier.order <= brute_force_limit:
        parts, complete = decompose(m)
        kinds = []
        for part in parts:
            tp = tate_cohomology(part).pair()
            kinds.append("open" if tp == (1, 1) else "closed" if tp == (0, 0) else "anomalous%r" % (tp,))
        report["summands"] = [{"group": str(part.carrier), "kind": k} for part, k in zip(parts, kinds)]
        report["certified"] = complete
        n_open = kinds.count("open")
        n_closed = kinds.count("closed")
        report["open"] = n_open
        report["closed"] = n_closed
        if t.h_odd == 0:
            report["verdict"] = "cohomologically-trivial"
        elif n_closed == 0:
            report["verdict"] = "open-like(%d)" % t.h_odd
        else:
            report["verdict"] = "mixed-report"
    else:
        report["verdict"] = "cohomologically-trivial" if t.h_odd == 0 else "open-like(%d)?" % t.h_odd
        report["certified"] = False
    return report


# ------------------------------------------------------- invariant forms

def invariant_forms_group(m):
    """The group of zeta-invariant symmetric forms on m, as (F, to_gram).

    Parameters c_ij (i <= j) give g_ij = c_ij / p^min(k_i, k_j).
    """
    from fractions import Fraction
    W = m.carrier
    p = W.p
    s = W.rank
    k = W.exponents
    pairs = [(i, j) for i in range(s) for j in range(i, s)]
    if not pairs:
        return PGroup(p), lambda c: []
    mins = [min(k[i], k[j]) for i, j in pairs]
    P, perm = presentation_group(p, [p ** e for e in mins])

    def to_gram(c):
        g = [[Fraction(0)] * s for _ in range(s)]
        for t, (i, j) in enumerate(pairs):
            v = qz(Fraction(c[perm[t]], p ** mins[t]))
            g[i][j] = g[j][i] = v
        return g

    Z = m.zeta.matrix
    cols = [None] * len(pairs)
    for t, (i, j) in enumerate(pairs):
        c = [0] * len(pairs)
        c[perm[t]] = 1
        g = to_gram(c)
        out = [0] * len(pairs)
        for u, (a, b) in enumerate(pairs):
            val = sum(Z[x][a] * Z[y][b] * g[x][y] for x in range(s) for y in range(s)) - g[a][b]
            out[perm[u]] = int(qz(val) * p ** mins[u])
        cols[perm[t]] = out
    Phi = Hom(P, P, intlin.transpose(cols))
    F, emb = hom_kernel(Phi)
    return F, lambda c: to_gram(list(emb.apply(c)))


def invariant_nondegenerate_forms(m, limit=1 << 16):
    """Yield the zeta-invariant nondegenerate forms (exhaustive up to limit)."""
    from .linkform import LinkForm, check_nondegenerate
    F, to_gram = invariant_forms_group(m)
    if F.order > limit:
        raise ModuleError("invariant form space too large to enumerate (%d)" % F.order)
    for c in F.coords_iter():
        f = LinkForm(m.carrier, to_gram(c))
        if check_nondegenerate(f):
            yield f


# ------------------------------------------------------- random modules

def random_cpmodule(rng, p, max_len):
    """A random finite CpModule of order at most p^max_len.

    Built from direct sums of blocks, scalar cyclic modules and regular
    modules, then optionally cut down by a random submodule or quotient and
    conjugated by a random automorphism.
    """
    while True:
        pieces = []
        budget = max_len
        for _ in range(rng.randint(1, 3)):
            kind = rng.choice(["L", "R", "reg", "scalar", "chain"])
            if kind == "L":
                pieces.append(build_block_module(BlockSpec(p, [("L", rng.randint(1, 3))], [])))
            elif kind == "R":
                pieces.append(build_block_module(BlockSpec(p, [("R", rng.randint(1, 3))], [])))
            elif kind == "reg":
                pieces.append(regular_module(p, rng.randint(1, 2)))
            elif kind == "scalar":
                k = rng.randint(1, 4)
                units = [u for u in range(1, p ** k) if u % p and pow(u, p, p ** k) == 1]
                pieces.append(scalar_module(p, k, rng.choice(units)))
            else:
                specs = constructible_specs(p, 3, 2)
                pieces.append(build_block_module(rng.choice(specs), validate=False))
        m = direct_sum_modules(*pieces)
        op = rng.choice(["none", "sub", "quot"])
        if op != "none" and m.carrier.rank:
            g = tuple(rng.randrange(n) for n in m.carrier.orders)
            m = submodule(m, [g])[0] if op == "sub" else quotient(m, [g])[0]
        if m.carrier.length <= max_len:
            return conjugate_randomly(rng, m)


def random_automorphism(rng, G, tries=50):
    for _ in range(tries):
        rows = []
        for i in range(G.rank):
            row = []
            for j in range(G.rank):
                need = G.p ** max(0, G.exponents[i] - G.exponents[j])
                row.append(need * rng.randrange(G.orders[i]))
            rows.append(row)
        A = Hom(G, G, rows)
        if A.is_iso():
            return A
    return Hom.identity(G)


def conjugate_randomly(rng, m):
    A = random_automorphism(rng, m.carrier)
    return CpModule(m.carrier, A.compose(m.zeta).compose(A.inverse()))
