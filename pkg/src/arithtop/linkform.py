"""Linking forms: symmetric Q/Z-valued pairings on finite abelian p-groups.

A form on W = Z/p^k_1 + ... + Z/p^k_s is stored as its Gram matrix of
Fractions reduced into [0, 1).  Entry (i, j) must have denominator dividing
p^min(k_i, k_j).  The adjoint W -> Hom(W, Q/Z) has the integer matrix
A[j][i] = p^k_j * g[i][j], which is how nondegeneracy is decided.
"""

import itertools
import random
from fractions import Fraction

from . import intlin
from .abelian import (
    PGroup, GElem, Hom, qz, qz_parse, qz_order, qz_str, hom_kernel, hom_image,
    subgroup, presentation_group, p_log, elem_order,
)


class FormError(ValueError):
    pass


class LinkForm:
    """A symmetric bilinear pairing carrier x carrier -> Q/Z."""

    __slots__ = ("carrier", "gram")

    def __init__(self, carrier, gram):
        s = carrier.rank
        g = [[qz_parse(x) for x in row] for row in gram]
        if len(g) != s or any(len(r) != s for r in g):
            raise FormError("gram matrix must be %d x %d" % (s, s))
        for i in range(s):
            for j in range(s):
                if g[i][j] != g[j][i]:
                    raise FormError("gram matrix is not symmetric at (%d,%d)" % (i, j))
                bound = carrier.p ** min(carrier.exponents[i], carrier.exponents[j])
                if bound % g[i][j].denominator:
                    raise FormError("entry (%d,%d) = %s has denominator exceeding %d"
                                    % (i, j, qz_str(g[i][j]), bound))
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "gram", tuple(tuple(r) for r in g))

    def __setattr__(self, name, value):
        raise AttributeError("LinkForm is immutable")

    def __eq__(self, other):
        return isinstance(other, LinkForm) and self.carrier == other.carrier and self.gram == other.gram

    def __hash__(self):
        return hash((self.carrier, self.gram))

    def __repr__(self):
        return "LinkForm(%r, %r)" % (self.carrier, [[qz_str(x) for x in r] for r in self.gram])

    @property
    def p(self):
        return self.carrier.p

    def pair(self, x, y):
        """(x, y) in Q/Z for GElems or raw coordinate tuples."""
        xc = x.coords if isinstance(x, GElem) else x
        yc = y.coords if isinstance(y, GElem) else y
        total = Fraction(0)
        for i, a in enumerate(xc):
            if a:
                row = self.gram[i]
                for j, b in enumerate(yc):
                    if b:
                        total += a * b * row[j]
        return qz(total)

    def adjoint(self):
        """The adjoint map W -> dual(W) as a Hom."""
        W = self.carrier
        s = W.rank
        A = [[int(W.orders[j] * self.gram[i][j]) for i in range(s)] for j in range(s)]
        return Hom(W, PGroup(W.p, W.exponents), A)

    def to_json(self):
        return {"group": self.carrier.to_json(), "gram": [[qz_str(x) for x in r] for r in self.gram]}


def check_nondegenerate(f):
    """True iff the adjoint map onto the dual group is a bijection."""
    return f.adjoint().is_injective()


def induced_form(f, emb):
    """Pull a form back along an injective map emb: U -> carrier."""
    cols = [emb.apply(e.coords) for e in emb.source.gens()]
    g = [[f.pair(a, b) for b in cols] for a in cols]
    return LinkForm(emb.source, g)


def diagonal_form(p, exponents, numerators):
    """The diagonal form with entries numerators[i] / p^k_i."""
    G = PGroup(p, exponents)
    g = [[Fraction(numerators[i], G.orders[i]) if i == j else 0 for j in range(G.rank)]
         for i in range(G.rank)]
    return LinkForm(G, g)


def hyperbolic_form(p, k=1):
    G = PGroup(p, [k, k])
    h = Fraction(1, p ** k)
    return LinkForm(G, [[0, h], [h, 0]])


def restrict_to_scaled(f, ell):
    """The form (p^l x, p^l y)_V = p^l (x, y) on V = p^l W.

    Returns (g, emb) where emb: V -> W sends the i-th generator of V to
    p^l e_i (only coordinates with k_i > l survive).
    """
    W = f.carrier
    p = W.p
    keep = [i for i, k in enumerate(W.exponents) if k > ell]
    V = PGroup(p, [W.exponents[i] - ell for i in keep])
    E = [[p ** ell if (i == keep[c]) else 0 for c in range(len(keep))] for i in range(W.rank)]
    emb = Hom(V, W, E)
    g = [[qz(p ** ell * f.gram[i][j]) for j in keep] for i in keep]
    return LinkForm(V, g), emb


def _sqrt_mod_prime_power(a, p, k):
    """Some r with r^2 = a mod p^k (a a unit square, p odd)."""
    r = next(x for x in range(1, p) if (x * x - a) % p == 0)
    mod = p
    for _ in range(1, k):
        mod *= p
        # Newton step r <- r - (r^2 - a)/(2r)
        r = (r - (r * r - a) * pow(2 * r, -1, mod)) % mod
    return r


def _is_square_mod_p(a, p):
    return pow(a % p, (p - 1) // 2, p) == 1


def _smallest_nonresidue(p):
    return next(x for x in range(2, p) if not _is_square_mod_p(x, p))


def _canonical_unit(a, p):
    return 1 if _is_square_mod_p(a, p) else _smallest_nonresidue(p)


def _split_step(f, basis, allow_pairs=True):
    """Find the pivot for the orthogonal splitting on ``basis``.

    Returns (x, i0) with x of maximal order p^k, ord (x, x) = p^k and i0 the
    index of a maximal-order basis element that may be dropped, or None.
    """
    W = f.carrier
    orders = [W.coord_order(b) for b in basis]
    top = max(orders)
    tops = [i for i, o in enumerate(orders) if o == top]
    for i in tops:
        if qz_order(f.pair(basis[i], basis[i])) == top:
            return basis[i], i
    if allow_pairs:
        for i, j in itertools.combinations(tops, 2):
            x = W.add(basis[i], basis[j])
            if qz_order(f.pair(x, x)) == top:
                return x, i
    return None


def _project_off(f, basis, i0, x, k):
    """Make every other basis element orthogonal to x (ord (x,x) = p^k)."""
    W = f.carrier
    p = W.p
    mod = p ** k
    a = int(f.pair(x, x) * mod)
    ainv = pow(a, -1, mod)
    out = []
    for i, b in enumerate(basis):
        if i == i0:
            continue
        m = int(f.pair(b, x) * mod)
        c = (m * ainv) % mod
        out.append(W.add(b, W.scale(-c, x)))
    return out


def diagonalize_odd(f):
    """Orthogonal diagonalisation of a nondegenerate form, p odd.

    Returns (basis, diagonal): pairwise orthogonal GElems generating the
    carrier with ord (x_i, x_i) = ord x_i = p^k_i, and the diagonal values
    normalised to a/p^k with a = 1 or the least quadratic non-residue.
    """
    W = f.carrier
    p = W.p
    if p == 2:
        raise FormError("orthogonal diagonalisation needs p odd; use normalize_2adic for p = 2")
    if not check_nondegenerate(f):
        raise FormError("form is degenerate")
    basis = [e.coords for e in W.gens()]
    out, diag = [], []
    while basis:
        step = _split_step(f, basis)
        if step is None:
            raise FormError("no anisotropic pivot found; form is degenerate on a summand")
        x, i0 = step
        k = p_log(W.coord_order(x), p)
        basis = _project_off(f, basis, i0, x, k)
        mod = p ** k
        a = int(f.pair(x, x) * mod)
        target = _canonical_unit(a, p)
        r = _sqrt_mod_prime_power(target * pow(a, -1, mod) % mod, p, k)
        x = W.scale(r, x)
        out.append(GElem(W, x))
        diag.append(f.pair(x, x))
    return out, diag


def basis_change(f, basis):
    """The Hom from PGroup(p, orders of basis) to the carrier given by basis."""
    W = f.carrier
    exps = [p_log(elem_order(b), W.p) for b in basis]
    G = PGroup(W.p, exps)
    cols = [list(b.coords) for b in basis]
    M = intlin.transpose(cols, ncols=W.rank) if cols else [[] for _ in range(W.rank)]
    return Hom(G, W, M)


def normalize_2adic(f):
    """Split a p = 2 form into diagonal <a/2^k> summands and hyperbolic planes.

    Hyperbolic planes are only recognised on elementary (order 2) layers.
    Returns {"status": "classified", "blocks": [...]} or
    {"status": "unclassified", "reason": ...}.
    """
    W = f.carrier
    if W.p != 2:
        raise FormError("normalize_2adic is for p = 2")
    if not check_nondegenerate(f):
        raise FormError("form is degenerate")
    basis = [e.coords for e in W.gens()]
    blocks = []
    while basis:
        step = _split_step(f, basis, allow_pairs=False)
        if step is not None:
            x, i0 = step
            k = p_log(W.coord_order(x), 2)
            basis = _project_off(f, basis, i0, x, k)
            blocks.append({"type": "diagonal", "basis": [list(x)], "value": qz_str(f.pair(x, x))})
            continue
        orders = [W.coord_order(b) for b in basis]
        if max(orders) != 2:
            return {"status": "unclassified",
                    "reason": "even-type form on a layer of exponent %d" % max(orders),
                    "blocks": blocks}
        pair = None
        for i, j in itertools.combinations(range(len(basis)), 2):
            if f.pair(basis[i], basis[j]) == Fraction(1, 2):
                pair = (i, j)
                break
        if pair is None:
            return {"status": "unclassified", "reason": "no hyperbolic pair", "blocks": blocks}
        i, j = pair
        u, v = basis[i], basis[j]
        rest = []
        for t, b in enumerate(basis):
            if t in pair:
                continue
            cu = int(f.pair(b, v) * 2)
            cv = int(f.pair(b, u) * 2)
            b = W.add(b, W.scale(-cu, u))
            b = W.add(b, W.scale(-cv, v))
            rest.append(b)
        basis = rest
        blocks.append({"type": "hyperbolic", "basis": [list(u), list(v)]})
    return {"status": "classified", "blocks": blocks}


def isotropy_class(f, z):
    """isotropic if (z,z) = 0, split-anisotropic if ord (z,z) = ord z."""
    zc = z.coords if isinstance(z, GElem) else tuple(z)
    if not any(zc):
        raise FormError("z must be nonzero")
    q = f.pair(zc, zc)
    if q == 0:
        return "isotropic"
    if qz_order(q) == f.carrier.coord_order(zc):
        return "split-anisotropic"
    return "anisotropic"


def orthogonal_complement(f, S):
    """S^perp with its induced form, when f restricted to <S> is nondegenerate.

    Returns (C, emb, form) with emb: C -> carrier.
    """
    W = f.carrier
    gens = [s.coords if isinstance(s, GElem) else tuple(s) for s in S]
    H, hemb = subgroup(W, gens)
    if not check_nondegenerate(induced_form(f, hemb)):
        raise FormError("the form restricted to <S> is degenerate, so <S> has no orthogonal "
                        "complement splitting it off")
    hcols = [hemb.apply(e.coords) for e in H.gens()]
    T = PGroup(W.p, H.exponents)
    A = [[int(T.orders[i] * f.pair(hcols[i], e.coords)) for e in W.gens()] for i in range(H.rank)]
    C, cemb = hom_kernel(Hom(W, T, A))
    return C, cemb, induced_form(f, cemb)


def direct_sum_forms(*forms):
    """Orthogonal sum of forms (carrier coordinates interleaved by exponent)."""
    from .abelian import direct_sum
    S, injs, _ = direct_sum(*[f.carrier for f in forms])
    g = [[Fraction(0)] * S.rank for _ in range(S.rank)]
    for f, inj in zip(forms, injs):
        cols = [inj.apply(e.coords) for e in f.carrier.gens()]
        idx = [c.index(1) for c in cols]
        for a in range(f.carrier.rank):
            for b in range(f.carrier.rank):
                g[idx[a]][idx[b]] = f.gram[a][b]
    return LinkForm(S, g), injs


def primary_decomposition(orders, gram):
    """Split a form on Z/n_1 + ... + Z/n_s into its p-primary pieces.

    Returns {p: (LinkForm, generators)} where generators are the integer
    vectors in the original presentation spanning the p-part, and checks
    that pieces for different primes are orthogonal.
    """
    g = [[qz_parse(x) for x in row] for row in gram]
    n = len(orders)
    primes = sorted({q for m in orders for q in range(2, m + 1)
                     if m % q == 0 and all(q % d for d in range(2, q))})
    out = {}
    gens_by_p = {}
    for q in primes:
        gens, ords = [], []
        for i, m in enumerate(orders):
            v = intlin.valuation(m, q)
            if v:
                e = [0] * n
                e[i] = m // q ** v
                gens.append(e)
                ords.append(q ** v)
        gens_by_p[q] = gens

        def pair(x, y):
            return qz(sum(x[a] * y[b] * g[a][b] for a in range(n) for b in range(n)))
        G, perm = presentation_group(q, ords)
        sorted_gens = [None] * len(gens)
        for i, gi in enumerate(gens):
            sorted_gens[perm[i]] = gi
        gm = [[pair(a, b) for b in sorted_gens] for a in sorted_gens]
        out[q] = (LinkForm(G, gm), sorted_gens)
    for q1, q2 in itertools.combinations(primes, 2):
        for a in gens_by_p[q1]:
            for b in gens_by_p[q2]:
                val = qz(sum(a[i] * b[j] * g[i][j] for i in range(n) for j in range(n)))
                if val != 0:
                    raise FormError("primary pieces for %d and %d are not orthogonal" % (q1, q2))
    return out


class FormedCpAction:
    """A form with an orthogonal automorphism zeta of order dividing p."""

    __slots__ = ("form", "zeta")

    def __init__(self, form, zeta):
        W = form.carrier
        if zeta.source != W or zeta.target != W:
            raise FormError("zeta must be an endomorphism of the carrier")
        if zeta.power(W.p) != Hom.identity(W):
            raise FormError("zeta^p is not the identity")
        cols = [zeta.apply(e.coords) for e in W.gens()]
        for i in range(W.rank):
            for j in range(W.rank):
                if form.pair(cols[i], cols[j]) != form.gram[i][j]:
                    raise FormError("zeta does not preserve the form at (%d,%d)" % (i, j))
        object.__setattr__(self, "form", form)
        object.__setattr__(self, "zeta", zeta)

    def __setattr__(self, name, value):
        raise AttributeError("FormedCpAction is immutable")


def parity_dimension(a):
    """dim over F_p of Im(1 - zeta) tensor F_p (number of cyclic factors)."""
    W = a.form.carrier
    if W.p == 2:
        raise FormError("the parity statement needs p odd")
    I, _ = hom_image(Hom.identity(W) - a.zeta)
    return I.rank


def check_parity_lemma(a):
    """True iff dim Im(1 - zeta) is even."""
    return parity_dimension(a) % 2 == 0


def random_form(rng, p, max_len, max_exp=3, nondegenerate=True, tries=1000):
    """A random (by default nondegenerate) form on a group of order <= p^max_len."""
    for _ in range(tries):
        exps = []
        total = rng.randint(1, max_len)
        while total > 0:
            k = rng.randint(1, min(total, max_exp))
            exps.append(k)
            total -= k
        W = PGroup.sorted(p, exps)
        s = W.rank
        g = [[Fraction(0)] * s for _ in range(s)]
        for i in range(s):
            for j in range(i, s):
                d = p ** min(W.exponents[i], W.exponents[j])
                g[i][j] = g[j][i] = Fraction(rng.randrange(d), d)
        f = LinkForm(W, g)
        if not nondegenerate or check_nondegenerate(f):
            return f
    raise RuntimeError("could not sample a nondegenerate form")


def _elementary_matrix_hom(W, M):
    return Hom(W, W, M)


def random_orthogonal_action(rng, p, dim):
    """A random orthogonal action of order dividing p on a formed (Z/p)^dim.

    Mixes Eichler transformations, cyclic permutations of equal orthogonal
    blocks, conjugation by products of reflections and the trivial action.
    """
    if p == 2:
        raise FormError("random orthogonal actions are generated for odd p only")
    W = PGroup(p, [1] * dim)
    kind = rng.choice(["eichler", "permutation", "trivial", "eichler"])
    if kind == "permutation" and dim >= p:
        blocks = rng.randint(1, dim // p)
        block_len = rng.randint(1, dim // (p * blocks)) if dim // (p * blocks) >= 1 else 1
        while block_len * p * blocks > dim:
            block_len -= 1
        diag = [rng.randrange(1, p) for _ in range(block_len)]
        entries = []
        for _ in range(blocks):
            entries += diag * p
        entries += [rng.randrange(1, p) for _ in range(dim - len(entries))]
        f = diagonal_form(p, [1] * dim, entries)
        Z = intlin.zeros(dim, dim)
        pos = 0
        for _ in range(blocks):
            for c in range(p):
                for t in range(block_len):
                    src = pos + c * block_len + t
                    dst = pos + ((c + 1) % p) * block_len + t
                    Z[dst][src] = 1
            pos += p * block_len
        for t in range(pos, dim):
            Z[t][t] = 1
    else:
        f = diagonal_form(p, [1] * dim, [rng.randrange(1, p) for _ in range(dim)])
        Z = intlin.identity(dim)
        if kind == "eichler":
            Z = _random_eichler(rng, f) or Z
    zeta = Hom(W, W, Z)
    # conjugate by random reflections, which preserve the form
    for _ in range(rng.randint(0, 3)):
        R = _random_reflection(rng, f)
        if R is not None:
            zeta = R.compose(zeta).compose(R)
    return FormedCpAction(f, zeta)


def _bil(f, x, y):
    p = f.p
    return int(f.pair(x, y) * p) % p


def _random_eichler(rng, f):
    W = f.carrier
    p = W.p
    n = W.rank
    u = None
    for _ in range(200):
        x = tuple(rng.randrange(p) for _ in range(n))
        if any(x) and _bil(f, x, x) == 0:
            u = x
            break
    if u is None:
        return None
    for _ in range(200):
        v = tuple(rng.randrange(p) for _ in range(n))
        if _bil(f, v, u) == 0 and any(v):
            break
    else:
        return None
    half = pow(2, -1, p)
    qv = _bil(f, v, v) * half % p
    cols = []
    for e in W.gens():
        x = e.coords
        bu, bv = _bil(f, x, u), _bil(f, x, v)
        y = [(x[i] + bu * v[i] - bv * u[i] - qv * bu * u[i]) % p for i in range(n)]
        cols.append(y)
    return intlin.transpose(cols)


def _random_reflection(rng, f):
    W = f.carrier
    p = W.p
    n = W.rank
    for _ in range(100):
        w = tuple(rng.randrange(p) for _ in range(n))
        q = _bil(f, w, w)
        if q:
            qinv = pow(q, -1, p)
            cols = []
            for e in W.gens():
                x = e.coords
                c = 2 * _bil(f, x, w) * qinv
                cols.append([(x[i] - c * w[i]) % p for i in range(n)])
            return Hom(W, W, intlin.transpose(cols))
    return None
