"""Finite abelian p-groups, their elements and homomorphisms.

A group is ``PGroup(p, [k_1, ..., k_s])`` = Z/p^k_1 + ... + Z/p^k_s with
k_1 >= ... >= k_s.  An element is a coordinate vector reduced coordinatewise.
A homomorphism ``Hom(src, tgt, A)`` acts by ``x -> A x`` where A has one row
per target coordinate; it is well defined exactly when
A[i][j] = 0 mod p^max(0, l_i - k_j).

Kernels, images and cokernels all go through the Smith normal form of the
lifted integer presentation, and every subquotient is renormalised to a
sorted exponent vector.
"""

import itertools
from fractions import Fraction

from . import intlin


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def qz(x, den=1):
    """Reduce a rational number into [0, 1), i.e. into Q/Z."""
    f = Fraction(x, den) if not isinstance(x, Fraction) else x / den
    return f - (f.numerator // f.denominator)


def qz_parse(s):
    """Parse an exact fraction string such as ``"3/8"`` into Q/Z."""
    if isinstance(s, (int, Fraction)):
        return qz(s)
    return qz(Fraction(str(s).strip()))


def qz_str(f):
    f = qz(f)
    return "%d/%d" % (f.numerator, f.denominator)


def qz_order(f):
    """Order of a Q/Z element (its reduced denominator)."""
    return qz(f).denominator


def p_log(n, p):
    """Exact log_p of a power of p."""
    k = 0
    while n > 1:
        if n % p:
            raise ValueError("%d is not a power of %d" % (n, p))
        n //= p
        k += 1
    return k


class PGroup:
    """The group Z/p^k_1 + ... + Z/p^k_s with k_1 >= ... >= k_s >= 1."""

    __slots__ = ("p", "exponents", "orders")

    def __init__(self, p, exponents=()):
        if not is_prime(p):
            raise ValueError("p = %r is not prime" % (p,))
        exps = tuple(int(k) for k in exponents)
        if any(k < 1 for k in exps):
            raise ValueError("exponents must be positive")
        if list(exps) != sorted(exps, reverse=True):
            raise ValueError("exponents must be non-increasing")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "exponents", exps)
        object.__setattr__(self, "orders", tuple(p ** k for k in exps))

    def __setattr__(self, name, value):
        raise AttributeError("PGroup is immutable")

    @classmethod
    def sorted(cls, p, exponents):
        return cls(p, sorted((k for k in exponents if k > 0), reverse=True))

    def __eq__(self, other):
        return isinstance(other, PGroup) and (self.p, self.exponents) == (other.p, other.exponents)

    def __hash__(self):
        return hash((self.p, self.exponents))

    def __repr__(self):
        return "PGroup(%d, %r)" % (self.p, list(self.exponents))

    def __str__(self):
        if not self.exponents:
            return "0"
        return " + ".join("Z/%d" % n for n in self.orders)

    @property
    def rank(self):
        return len(self.exponents)

    @property
    def order(self):
        return self.p ** sum(self.exponents)

    @property
    def length(self):
        """log_p of the order."""
        return sum(self.exponents)

    def is_trivial(self):
        return not self.exponents

    def is_elementary(self):
        return all(k == 1 for k in self.exponents)

    def reduce(self, coords):
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.rank:
            raise ValueError("expected %d coordinates, got %d" % (self.rank, len(coords)))
        return tuple(c % n for c, n in zip(coords, self.orders))

    def elem(self, coords):
        return GElem(self, coords)

    def zero(self):
        return GElem(self, (0,) * self.rank)

    def gens(self):
        return [GElem(self, [int(i == j) for i in range(self.rank)]) for j in range(self.rank)]

    def coords_iter(self):
        return itertools.product(*[range(n) for n in self.orders])

    def elements(self):
        for c in self.coords_iter():
            yield GElem(self, c)

    def add(self, x, y):
        return tuple((a + b) % n for a, b, n in zip(x, y, self.orders))

    def scale(self, c, x):
        return tuple((c * a) % n for a, n in zip(x, self.orders))

    def coord_order(self, x):
        """Order of a raw coordinate tuple."""
        k = 0
        p = self.p
        for a, e in zip(x, self.exponents):
            a %= p ** e
            if a:
                k = max(k, e - intlin.valuation(a, p))
        return p ** k

    def to_json(self):
        return {"p": self.p, "exponents": list(self.exponents)}


class GElem:
    """An element of a PGroup, stored as reduced coordinates."""

    __slots__ = ("parent", "coords")

    def __init__(self, parent, coords):
        object.__setattr__(self, "parent", parent)
        object.__setattr__(self, "coords", parent.reduce(coords))

    def __setattr__(self, name, value):
        raise AttributeError("GElem is immutable")

    def __eq__(self, other):
        return isinstance(other, GElem) and self.parent == other.parent and self.coords == other.coords

    def __hash__(self):
        return hash((self.parent, self.coords))

    def __repr__(self):
        return "GElem(%r, %r)" % (self.parent, list(self.coords))

    def _check(self, other):
        if not isinstance(other, GElem) or other.parent != self.parent:
            raise ValueError("elements live in different groups")

    def __add__(self, other):
        self._check(other)
        return GElem(self.parent, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        self._check(other)
        return GElem(self.parent, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return GElem(self.parent, [-a for a in self.coords])

    def __rmul__(self, c):
        return GElem(self.parent, [c * a for a in self.coords])

    def is_zero(self):
        return not any(self.coords)

    def order(self):
        return elem_order(self)


def elem_order(x):
    """Smallest power of p killing x (1 for the zero element)."""
    return x.parent.coord_order(x.coords)


class Hom:
    """A homomorphism src -> tgt given by an integer matrix (rows = target)."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source, target, matrix, check=True):
        m, n = target.rank, source.rank
        rows = [list(map(int, row)) for row in matrix]
        if len(rows) != m or any(len(r) != n for r in rows):
            raise ValueError("matrix shape must be %d x %d" % (m, n))
        p = source.p
        if target.p != p:
            raise ValueError("source and target have different primes")
        for i in range(m):
            for j in range(n):
                if check:
                    need = p ** max(0, target.exponents[i] - source.exponents[j])
                    if rows[i][j] % need:
                        raise ValueError(
                            "entry (%d,%d) = %d is not divisible by %d; map is not well defined"
                            % (i, j, rows[i][j], need))
                rows[i][j] %= target.orders[i]
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "matrix", tuple(tuple(r) for r in rows))

    def __setattr__(self, name, value):
        raise AttributeError("Hom is immutable")

    def __repr__(self):
        return "Hom(%r -> %r, %r)" % (self.source, self.target, [list(r) for r in self.matrix])

    def __eq__(self, other):
        return (isinstance(other, Hom) and self.source == other.source
                and self.target == other.target and self.matrix == other.matrix)

    def __hash__(self):
        return hash((self.source, self.target, self.matrix))

    @classmethod
    def identity(cls, G):
        return cls(G, G, intlin.identity(G.rank))

    @classmethod
    def zero(cls, G, H):
        return cls(G, H, intlin.zeros(H.rank, G.rank))

    @classmethod
    def scalar(cls, G, c):
        return cls(G, G, [[c * int(i == j) for j in range(G.rank)] for i in range(G.rank)])

    def apply(self, x):
        """Image of a raw coordinate tuple."""
        return self.target.reduce(intlin.matvec(self.matrix, x)) if self.target.rank else ()

    def __call__(self, x):
        if isinstance(x, GElem):
            if x.parent != self.source:
                raise ValueError("element not in the source group")
            return GElem(self.target, self.apply(x.coords))
        return self.apply(x)

    def compose(self, other):
        """self o other."""
        if other.target != self.source:
            raise ValueError("cannot compose: target/source mismatch")
        M = intlin.matmul(self.matrix, other.matrix, ncols=other.source.rank) if self.target.rank else []
        return Hom(other.source, self.target, M, check=False)

    def __matmul__(self, other):
        return self.compose(other)

    def _same_shape(self, other):
        if self.source != other.source or self.target != other.target:
            raise ValueError("homomorphisms have different source/target")

    def __add__(self, other):
        self._same_shape(other)
        return Hom(self.source, self.target,
                   [[a + b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)], check=False)

    def __sub__(self, other):
        self._same_shape(other)
        return Hom(self.source, self.target,
                   [[a - b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)], check=False)

    def __neg__(self):
        return Hom(self.source, self.target, [[-a for a in r] for r in self.matrix], check=False)

    def __rmul__(self, c):
        return Hom(self.source, self.target, [[c * a for a in r] for r in self.matrix], check=False)

    def power(self, n):
        if self.source != self.target:
            raise ValueError("only endomorphisms have powers")
        out = Hom.identity(self.source)
        for _ in range(n):
            out = self.compose(out)
        return out

    def is_zero(self):
        return not any(any(r) for r in self.matrix)

    def is_injective(self):
        return hom_kernel(self)[0].is_trivial()

    def is_surjective(self):
        return hom_cokernel(self)[0].is_trivial()

    def is_iso(self):
        return self.source.order == self.target.order and self.is_injective()

    def inverse(self):
        if not self.is_iso():
            raise ValueError("homomorphism is not invertible")
        cols = [hom_preimage(self, e.coords) for e in self.target.gens()]
        return Hom(self.target, self.source, intlin.transpose(cols, ncols=self.source.rank)
                   if cols else intlin.zeros(self.source.rank, 0))

    def to_json(self):
        return {"matrix": [list(r) for r in self.matrix]}


def _lattice_basis(G, gens):
    """Basis (columns) of span(gens) + D_G Z^s, a full-rank lattice in Z^s."""
    s = G.rank
    cols = [list(g) for g in gens] + [[G.orders[i] * int(i == j) for i in range(s)] for j in range(s)]
    M = intlin.transpose(cols, ncols=s)
    sf = intlin.smith_form(M)
    B = [[sf.Uinv[i][j] * sf.diag[j] for j in range(s)] for i in range(s)]
    return B, sf


def subgroup(G, gens):
    """The subgroup generated by raw coordinate tuples, as (H, embedding)."""
    s = G.rank
    if s == 0:
        H = PGroup(G.p)
        return H, Hom(H, G, [])
    B, sf = _lattice_basis(G, gens)
    # C = B^{-1} D_G, computed as diag(1/d) U D_G
    C = [[sf.U[i][j] * G.orders[j] // sf.diag[i] for j in range(s)] for i in range(s)]
    inv, P, L = intlin.lattice_quotient(C)
    order = sorted(range(len(inv)), key=lambda i: -inv[i])
    H = PGroup(G.p, [p_log(inv[i], G.p) for i in order])
    cols = []
    for i in order:
        y = [L[r][i] for r in range(s)]
        cols.append(intlin.matvec(B, y))
    E = intlin.transpose(cols, ncols=s) if cols else [[] for _ in range(s)]
    return H, Hom(H, G, E)


def hom_image(f):
    cols = [intlin.column(f.matrix, j) for j in range(f.source.rank)] if f.target.rank else []
    return subgroup(f.target, cols)


def hom_kernel(f):
    """Kernel of f as (K, embedding K -> source)."""
    A, B = f.source, f.target
    s, t = A.rank, B.rank
    if t == 0:
        return A, Hom.identity(A)
    M = intlin.hstack([list(r) for r in f.matrix],
                      [[-B.orders[i] * int(i == j) for j in range(t)] for i in range(t)])
    kb = intlin.kernel_basis(M)
    gens = [v[:s] for v in kb]
    return subgroup(A, gens)


def hom_cokernel(f):
    """Cokernel of f as (Q, projection target -> Q)."""
    A, B = f.source, f.target
    t = B.rank
    if t == 0:
        return B, Hom.identity(B)
    M = intlin.hstack([list(r) for r in f.matrix],
                      [[B.orders[i] * int(i == j) for j in range(t)] for i in range(t)])
    inv, P, L = intlin.lattice_quotient(M)
    order = sorted(range(len(inv)), key=lambda i: -inv[i])
    Q = PGroup(B.p, [p_log(inv[i], B.p) for i in order])
    return Q, Hom(B, Q, [P[i] for i in order])


def hom_preimage(f, y):
    """Some x with f(x) = y (raw coordinates), or None."""
    A, B = f.source, f.target
    t = B.rank
    if t == 0:
        return (0,) * A.rank
    M = intlin.hstack([list(r) for r in f.matrix],
                      [[B.orders[i] * int(i == j) for j in range(t)] for i in range(t)])
    sol = intlin.solve(M, list(y))
    if sol is None:
        return None
    return A.reduce(sol[:A.rank])


def hom_lift(emb, f):
    """Factor f through an injective map emb: returns g with emb o g = f."""
    cols = []
    for j in range(f.source.rank):
        y = f.apply([int(i == j) for i in range(f.source.rank)])
        x = hom_preimage(emb, y)
        if x is None:
            raise ValueError("map does not factor through the given subgroup")
        cols.append(list(x))
    K = emb.source
    M = intlin.transpose(cols, ncols=K.rank) if cols else [[] for _ in range(K.rank)]
    return Hom(f.source, K, M)


def homology(f, g):
    """ker g / im f for composable maps with g o f = 0.

    Returns (H, K, emb, proj): K = ker g with emb: K -> middle group and
    proj: K -> H the quotient map.
    """
    if not g.compose(f).is_zero():
        raise ValueError("g o f is not zero")
    K, emb = hom_kernel(g)
    fl = hom_lift(emb, f)
    H, proj = hom_cokernel(fl)
    return H, K, emb, proj


def direct_sum(*groups):
    """Direct sum with sorted exponents.

    Returns (S, injections, projections); coordinates of the summands are
    interleaved so that S has a non-increasing exponent vector.
    """
    p = groups[0].p
    tags = []
    for a, G in enumerate(groups):
        for j, k in enumerate(G.exponents):
            tags.append((k, a, j))
    order = sorted(range(len(tags)), key=lambda i: (-tags[i][0], i))
    S = PGroup(p, [tags[i][0] for i in order])
    pos = {}
    for newi, i in enumerate(order):
        pos[(tags[i][1], tags[i][2])] = newi
    injs, projs = [], []
    for a, G in enumerate(groups):
        inj = intlin.zeros(S.rank, G.rank)
        prj = intlin.zeros(G.rank, S.rank)
        for j in range(G.rank):
            inj[pos[(a, j)]][j] = 1
            prj[j][pos[(a, j)]] = 1
        injs.append(Hom(G, S, inj))
        projs.append(Hom(S, G, prj))
    return S, injs, projs


def presentation_group(p, orders, check=True):
    """Normalise an unsorted list of cyclic orders.

    Returns (G, perm) where coordinate i of the unsorted presentation is
    coordinate perm[i] of G.  Orders equal to 1 are not allowed.
    """
    exps = [p_log(n, p) for n in orders]
    order = sorted(range(len(exps)), key=lambda i: (-exps[i], i))
    G = PGroup(p, [exps[i] for i in order])
    perm = [0] * len(exps)
    for newi, i in enumerate(order):
        perm[i] = newi
    return G, perm


def lattice_module(p, action, sublattice, ncols=None):
    """Quotient Z^n / L with an endomorphism induced by ``action``.

    ``sublattice`` is a matrix whose columns generate a full-rank lattice L
    preserved by ``action``.  Returns (G, induced endomorphism, P, Lift)
    where P maps Z^n coordinates to G coordinates and Lift maps back.
    """
    n = len(action)
    inv, P, Lf = intlin.lattice_quotient(sublattice, ncols=ncols)
    order = sorted(range(len(inv)), key=lambda i: -inv[i])
    G = PGroup(p, [p_log(inv[i], p) for i in order])
    P = [P[i] for i in order]
    Lf = [[row[i] for i in order] for row in Lf]
    Z = intlin.matmul(intlin.matmul(P, action), Lf, ncols=G.rank) if G.rank else []
    return G, Hom(G, G, Z), P, Lf


def dual_group(W):
    """The Pontryagin dual Hom(W, Q/Z); same exponents as W."""
    return PGroup(W.p, W.exponents)


def dual_pairing(W):
    """The perfect pairing W x dual(W) -> Q/Z, x.y / p^k coordinatewise."""
    def pair(x, y):
        xc = x.coords if isinstance(x, GElem) else x
        yc = y.coords if isinstance(y, GElem) else y
        return qz(sum(Fraction(a * b, n) for a, b, n in zip(xc, yc, W.orders)))
    return pair


def character_to_dual(W, values):
    """Element of the dual realising the character e_i -> values[i] in Q/Z."""
    coords = []
    for v, n in zip(values, W.orders):
        v = qz_parse(v)
        if (v * n).denominator != 1:
            raise ValueError("character value %s is not killed by %d" % (v, n))
        coords.append(int(v * n))
    return GElem(W, coords)
