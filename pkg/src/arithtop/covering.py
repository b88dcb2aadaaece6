"""Algebraic models of cyclic coverings of degree p.

A model is a quintuple (V, W, zeta, pi, t): linking forms on the base group V
and the cover group W, a deck action zeta on W, the projection pi: W -> V
and the transfer t: V -> W.  The axioms are

* both forms nondegenerate, zeta^p = 1, the cover form zeta-invariant;
* pi zeta = pi;
* reciprocity (pi x, y)_V = (x, t y)_W;
* t pi = N = 1 + zeta + ... + zeta^(p-1) and pi t = p.

The defining character of the covering is V -> V / pi(W).  The verifiers
check the structure theorems for the three kinds of character: anisotropic
(y -> (y, z) with (z, z) != 0), shrinking (killing all but one split summand
of order at least p^2) and isotropic (pairing with half of a hyperbolic
pair).  Builders produce a model of each kind from orthogonal pieces.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .abelian import (
    PGroup, Hom, qz_order, qz_str, p_log, subgroup, hom_kernel, hom_image,
    hom_preimage, direct_sum,
)
from .cpmod import CpModule, Block, tate_cohomology, classify_cohomological
from .linkform import (
    LinkForm, FormError, check_nondegenerate, induced_form, diagonal_form,
    hyperbolic_form, orthogonal_complement, direct_sum_forms,
)
from .abelian import lattice_module

EXHAUSTIVE_LIMIT = 1 << 10


class CoveringError(ValueError):
    """A verifier's hypothesis does not hold for the given model."""


def _coords(x):
    return tuple(x.coords) if hasattr(x, "coords") else tuple(int(c) for c in x)


class CoveringModel:
    """The quintuple (base, cover, zeta, proj, trans) of a degree-``degree`` covering.

    ``degree`` defaults to the prime p; degree 1 is the identity covering.
    ``marks`` records named elements of V placed by a builder (the defining
    element z, a hyperbolic pair, the shrinking generator).
    """

    def __init__(self, base, cover, zeta, proj, trans, degree=None, marks=None):
        V, W = base.carrier, cover.carrier
        if V.p != W.p:
            raise CoveringError("base and cover groups have different primes")
        for name, h, src, tgt in (("zeta", zeta, W, W), ("proj", proj, W, V), ("trans", trans, V, W)):
            if h.source != src or h.target != tgt:
                raise CoveringError("%s has the wrong source or target" % name)
        self.base = base
        self.cover = cover
        self.zeta = zeta
        self.proj = proj
        self.trans = trans
        self.degree = V.p if degree is None else degree
        self.marks = dict(marks or {})

    @property
    def p(self):
        return self.base.carrier.p

    @property
    def V(self):
        return self.base.carrier

    @property
    def W(self):
        return self.cover.carrier

    def module(self):
        return CpModule(self.W, self.zeta, check=False)

    def norm(self):
        W = self.W
        out = Hom.zero(W, W)
        z = Hom.identity(W)
        for _ in range(self.degree):
            out = out + z
            z = self.zeta.compose(z)
        return out

    def with_trans(self, trans):
        return CoveringModel(self.base, self.cover, self.zeta, self.proj, trans, self.degree, self.marks)

    def to_json(self):
        d = {"base": self.base.to_json(), "cover": self.cover.to_json(),
             "zeta": [list(r) for r in self.zeta.matrix],
             "proj": [list(r) for r in self.proj.matrix],
             "trans": [list(r) for r in self.trans.matrix]}
        if self.degree != self.p:
            d["degree"] = self.degree
        if self.marks:
            d["marks"] = {k: [list(v) for v in val] if k == "pair" else list(val)
                          for k, val in sorted(self.marks.items())}
        return d

    @classmethod
    def from_json(cls, obj):
        from .schema import form_from_literal, hom_from_literal, SchemaError
        base = form_from_literal(obj.get("base") if isinstance(obj, dict) else None, "base")
        cover = form_from_literal(obj["cover"], "cover")
        V, W = base.carrier, cover.carrier
        zeta = hom_from_literal(obj.get("zeta"), W, W, "zeta")
        proj = hom_from_literal(obj.get("proj"), W, V, "proj")
        trans = hom_from_literal(obj.get("trans"), V, W, "trans")
        marks = {}
        for k, val in (obj.get("marks") or {}).items():
            marks[k] = tuple(tuple(v) for v in val) if k == "pair" else tuple(val)
        try:
            return cls(base, cover, zeta, proj, trans, obj.get("degree"), marks)
        except CoveringError as e:
            raise SchemaError("model", str(e))


# ------------------------------------------------------------ validation

def _elements_array(G):
    if G.rank == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.indices(G.orders).reshape(G.rank, -1).T.astype(np.int64)


def _apply_array(h, X):
    M = np.array(h.matrix, dtype=X.dtype).reshape(h.target.rank, h.source.rank)
    orders = np.array(h.target.orders, dtype=X.dtype)
    return (X @ M.T) % orders if h.target.rank else np.zeros((X.shape[0], 0), dtype=X.dtype)


def _gram_int(f, D, dtype):
    s = f.carrier.rank
    return np.array([[int(f.gram[i][j] * D) for j in range(s)] for i in range(s)],
                    dtype=dtype).reshape(s, s)


def _pairs(X, G, Y, D):
    if X.shape[1] == 0 or Y.shape[1] == 0:
        return np.zeros((X.shape[0], Y.shape[0]), dtype=X.dtype)
    return ((X @ G) % D @ Y.T) % D


def _first_mismatch(A, B):
    bad = np.argwhere(A != B)
    return None if bad.size == 0 else tuple(int(i) for i in bad[0])


def _hom_witness(f, g):
    """First generator on which two maps differ, or None."""
    for e in f.source.gens():
        a, b = f.apply(e.coords), g.apply(e.coords)
        if a != b:
            return {"element": list(e.coords), "lhs": list(a), "rhs": list(b)}
    return None


def _sample(G, rng, count):
    rows = [list(e.coords) for e in G.gens()]
    rows += [[rng.randrange(n) for n in G.orders] for _ in range(count)]
    return rows


def validate_model(m, seed=0, samples=64):
    """Check every model axiom; each failure carries a witness.

    Pairing identities are checked on all pairs when |V|, |W| <= 2^10 and
    otherwise on generators plus ``samples`` random elements per side.
    """
    V, W = m.V, m.W
    checks = {}

    def put(name, witness, **extra):
        checks[name] = dict({"pass": witness is None, "witness": witness}, **extra)

    put("base-nondegenerate", None if check_nondegenerate(m.base) else "adjoint of base form not injective")
    put("cover-nondegenerate", None if check_nondegenerate(m.cover) else "adjoint of cover form not injective")
    put("zeta-order", _hom_witness(m.zeta.power(m.degree), Hom.identity(W)))
    put("proj-equivariance", _hom_witness(m.proj.compose(m.zeta), m.proj))
    put("norm", _hom_witness(m.trans.compose(m.proj), m.norm()))
    put("degree", _hom_witness(m.proj.compose(m.trans), Hom.scalar(V, m.degree)))

    D = max(max(V.orders, default=1), max(W.orders, default=1))
    exhaustive = V.order <= EXHAUSTIVE_LIMIT and W.order <= EXHAUSTIVE_LIMIT
    dtype = np.int64 if D <= 1 << 20 else object
    if exhaustive:
        X = _elements_array(W).astype(dtype)
        Y = _elements_array(V).astype(dtype)
    else:
        rng = random.Random(seed)
        X = np.array(_sample(W, rng, samples), dtype=dtype).reshape(-1, W.rank)
        Y = np.array(_sample(V, rng, samples), dtype=dtype).reshape(-1, V.rank)
    GV, GW = _gram_int(m.base, D, dtype), _gram_int(m.cover, D, dtype)

    def pair_witness(Xs, Ys, lhs, rhs):
        bad = _first_mismatch(lhs, rhs)
        if bad is None:
            return None
        i, j = bad
        return {"x": [int(c) for c in Xs[i]], "y": [int(c) for c in Ys[j]],
                "lhs": qz_str(Fraction(int(lhs[i, j]), D)), "rhs": qz_str(Fraction(int(rhs[i, j]), D))}

    ZX = _apply_array(m.zeta, X)
    put("zeta-invariance", pair_witness(X, X, _pairs(ZX, GW, ZX, D), _pairs(X, GW, X, D)))
    PX = _apply_array(m.proj, X)
    TY = _apply_array(m.trans, Y)
    put("reciprocity", pair_witness(X, Y, _pairs(PX, GV, Y, D), _pairs(X, GW, TY, D)))
    if m.degree == m.p and checks["zeta-order"]["pass"]:
        t = tate_cohomology(m.module())
        put("herbrand", None if t.h_odd == t.h_even else {"tate": [t.h_odd, t.h_even]})
    return {"pass": all(c["pass"] for c in checks.values()), "exhaustive": exhaustive,
            "pairs_checked": int(X.shape[0] * Y.shape[0]), "checks": checks}


# ------------------------------------------------------- subgroup helpers

def _span(G, gens):
    return subgroup(G, [tuple(g) for g in gens])


def _span_gens(G, gens):
    H, emb = _span(G, gens)
    return H, [emb.apply(e.coords) for e in H.gens()]


def _same_subgroup(G, A, B):
    a = _span(G, A)[0].order
    return a == _span(G, B)[0].order and a == _span(G, list(A) + list(B))[0].order


def _lambda_span(m, gens):
    out = []
    for g in gens:
        x = tuple(g)
        for _ in range(m.p):
            out.append(x)
            x = m.zeta.apply(x)
    return _span(m.W, out)


def _image_gens(h):
    H, emb = hom_image(h)
    return [emb.apply(e.coords) for e in H.gens()]


def _fixed_gens(m):
    K, emb = hom_kernel(Hom.identity(m.W) - m.zeta)
    return [emb.apply(e.coords) for e in K.gens()], K.order


def _perp_gens(f, z):
    """Generators of {y : (y, z) = 0}."""
    V = f.carrier
    vals = [f.pair(e.coords, z) for e in V.gens()]
    n = max((qz_order(v) for v in vals), default=1)
    if n == 1:
        return [e.coords for e in V.gens()]
    T = PGroup(V.p, [p_log(n, V.p)])
    K, emb = hom_kernel(Hom(V, T, [[int(v * n) for v in vals]]))
    return [emb.apply(e.coords) for e in K.gens()]


def _complement(f, S):
    """(generators of S^perp, embedding) with S = [] allowed."""
    S = [tuple(s) for s in S if any(s)]
    G = f.carrier
    if not S:
        return [e.coords for e in G.gens()], Hom.identity(G)
    C, emb, _ = orthogonal_complement(f, S)
    return [emb.apply(e.coords) for e in C.gens()], emb


def _lifts(proj, emb, targets):
    """x in the source of emb with proj(emb(x)) = target, mapped into W."""
    pe = proj.compose(emb)
    out = []
    for y in targets:
        x = hom_preimage(pe, y)
        out.append(None if x is None else emb.apply(x))
    return out


def _finish(out):
    out["pass"] = all(v["pass"] for k, v in out.items() if isinstance(v, dict) and "pass" in v)
    return out


def _tate_entry(m, want):
    t = tate_cohomology(m.module())
    return {"pass": t.pair() == want, "tate": [t.h_odd, t.h_even]}


# -------------------------------------------------------- anisotropic case

def verify_anisotropic(m, z):
    """Structure of the cover for the character (., z) with (z, z) != 0.

    Report keys: "transfer-orders" order of t e_i, "transfer-on-perp" t injective on z^perp with
    image W^zeta, "tate-trivial" Tate table (0, 0), "cyclic-generation" W generated over
    Lambda by lifts v_i of the e_i with the sum of the Lambda v_i direct.
    """
    V, W, p = m.V, m.W, m.p
    z = _coords(z)
    if V.coord_order(z) != p:
        raise CoveringError("z must have order p")
    if m.base.pair(z, z) == 0:
        raise CoveringError("z is isotropic; the anisotropic theorem needs (z, z) != 0")
    if not _same_subgroup(V, _image_gens(m.proj), _perp_gens(m.base, z)):
        raise CoveringError("the defining character of the model is not (., z)")
    out = {"character": "anisotropic"}
    out["tate-trivial"] = _tate_entry(m, (0, 0))
    gens, cemb = _complement(m.base, [z])
    rows = []
    for g in gens:
        te = m.trans.apply(g)
        rows.append({"e": list(g), "ord_e": V.coord_order(g), "ord_te": W.coord_order(te),
                     "ord_form": qz_order(m.base.pair(g, g))})
    out["transfer-orders"] = {"pass": all(r["ord_te"] == r["ord_e"] for r in rows), "generators": rows}
    tC = m.trans.compose(cemb)
    K, _ = hom_kernel(tC)
    fixed, nfixed = _fixed_gens(m)
    img = _image_gens(tC)
    out["transfer-on-perp"] = {"pass": K.is_trivial() and _same_subgroup(W, img, fixed),
                        "kernel_order": K.order, "image_order": _span(W, img)[0].order,
                        "fixed_order": nfixed}
    lifts = _lifts(m.proj, Hom.identity(W), gens)
    if any(v is None for v in lifts):
        out["cyclic-generation"] = {"pass": False, "witness": "some e_i has no lift"}
    else:
        orders = [_lambda_span(m, [v])[0].order for v in lifts]
        total = _lambda_span(m, lifts)[0].order
        prod = 1
        for o in orders:
            prod *= o
        out["cyclic-generation"] = {"pass": total == W.order and prod == W.order,
                      "summand_orders": orders, "span_order": total}
    return _finish(out)


# ---------------------------------------------------------- shrinking case

def verify_shrinking(m, s):
    """Structure of the cover when the character lives on one split summand.

    ``s`` is the index of a generator of V or a coordinate tuple e_s, with
    ord (e_s, e_s) = ord e_s = p^k, k >= 2, and the character killing
    e_s^perp.  Keys: "shrink-image" (t e_s invariant of order p^(k-1)), "shrink-sequence"
    (0 -> Z/p -> V -> W^zeta -> 0 via t), "shrink-splitting" (orthogonal splitting with
    W_s = <t e_s> trivial of order p^(k-1)).
    """
    V, W, p = m.V, m.W, m.p
    e = V.gens()[s].coords if isinstance(s, int) else _coords(s)
    q = V.coord_order(e)
    k = p_log(q, p)
    if k < 2:
        raise CoveringError("the shrinking theorem needs ord e_s >= p^2")
    if qz_order(m.base.pair(e, e)) != q:
        raise CoveringError("e_s must span an orthogonal summand (ord (e_s, e_s) = ord e_s)")
    gens, _ = _complement(m.base, [e])
    if not _same_subgroup(V, _image_gens(m.proj), list(gens) + [V.scale(p, e)]):
        raise CoveringError("the character must kill e_s^perp and send e_s to a generator")
    out = {"character": "shrinking", "k_s": k}
    ts = m.trans.apply(e)
    out["shrink-image"] = {"pass": W.coord_order(ts) == p ** (k - 1) and m.zeta.apply(ts) == ts,
                  "ord_te": W.coord_order(ts), "expected": p ** (k - 1)}
    K, kemb = hom_kernel(m.trans)
    fixed, nfixed = _fixed_gens(m)
    img = _image_gens(m.trans)
    out["shrink-sequence"] = {"pass": K.order == p and not any(m.trans.apply(V.scale(p ** (k - 1), e)))
                        and _same_subgroup(W, img, fixed),
                        "kernel_order": K.order, "fixed_order": nfixed}
    Ws, wemb = _span(W, [ts])
    ok = check_nondegenerate(induced_form(m.cover, wemb)) and Ws.exponents == (k - 1,)
    entry = {"W_s": str(Ws), "trivial_action": m.zeta.apply(ts) == ts}
    if ok:
        cg, cemb = _complement(m.cover, [ts])
        lifts = _lifts(m.proj, cemb, gens)
        if any(v is None for v in lifts):
            ok = False
            entry["witness"] = "some e_i has no lift orthogonal to W_s"
        else:
            rest = _lambda_span(m, lifts)[0].order
            entry["rest_order"] = rest
            ok = rest * Ws.order == W.order and _span(W, list(cg) + [ts])[0].order == W.order
    entry["pass"] = ok and entry["trivial_action"]
    out["shrink-splitting"] = entry
    return _finish(out)


# ---------------------------------------------------------- isotropic case

def _is_hyperbolic_pair(f, a, b):
    p = f.p
    V = f.carrier
    return (V.coord_order(a) == p and V.coord_order(b) == p and f.pair(a, a) == 0
            and f.pair(b, b) == 0 and qz_order(f.pair(a, b)) == p)


def _find_pair(m):
    V, p = m.V, m.p
    img = _image_gens(m.proj)
    elems = [tuple(c) for c in V.coords_iter() if V.coord_order(c) == p]
    for b in elems:
        if m.base.pair(b, b) == 0 and _same_subgroup(V, img, _perp_gens(m.base, b)):
            for a in elems:
                if _is_hyperbolic_pair(m.base, a, b):
                    return a, b
    raise CoveringError("no hyperbolic pair (a, b) with character (., b) in the base")


def verify_isotropic(m, pair=None):
    """Structure of the cover for the character (., b), b half of a hyperbolic pair.

    ``pair`` = (a, b) with (a, a) = (b, b) = 0 and (a, b) of order p; the
    pair is searched for when omitted.  Keys: "perp-orders" (ord t e_i = ord e_i
    on <a, b>^perp), "invariant-image" (T = t a invariant of order p), "free-fixed-generators" (the
    t e_i and T generate W^zeta freely), "isotropic-splitting" (orthogonal splitting with
    norm-annihilated complement generated by a lift of b), "tate-open"
    (Tate table (1, 1)).
    """
    V, W, p = m.V, m.W, m.p
    if pair is None:
        a, b = m.marks.get("pair") or _find_pair(m)
    else:
        a, b = pair
    a, b = _coords(a), _coords(b)
    if not _is_hyperbolic_pair(m.base, a, b):
        raise CoveringError("(a, b) is not a hyperbolic pair of order p")
    if not _same_subgroup(V, _image_gens(m.proj), _perp_gens(m.base, b)):
        raise CoveringError("the defining character of the model is not (., b)")
    out = {"character": "isotropic"}
    gens, cemb = _complement(m.base, [a, b])
    rows = [{"e": list(g), "ord_e": V.coord_order(g), "ord_te": W.coord_order(m.trans.apply(g))}
            for g in gens]
    out["perp-orders"] = {"pass": all(r["ord_te"] == r["ord_e"] for r in rows), "generators": rows}
    T = m.trans.apply(a)
    out["invariant-image"] = {"pass": W.coord_order(T) == p and m.zeta.apply(T) == T,
                    "T": list(T), "ord_T": W.coord_order(T)}
    # (c, x) -> t(c) + x T on z^perp + Z/p
    Cgrp = cemb.source
    S, injs, projs = direct_sum(Cgrp, PGroup(p, [1]))
    Tmap = Hom(PGroup(p, [1]), W, [[c] for c in T]) if W.rank else Hom.zero(PGroup(p, [1]), W)
    phi = m.trans.compose(cemb).compose(projs[0]) + Tmap.compose(projs[1])
    K, _ = hom_kernel(phi)
    fixed, nfixed = _fixed_gens(m)
    relations = None
    if S.order <= 1 << 12:
        relations = sum(1 for c in S.coords_iter() if not any(phi.apply(c)))
    out["free-fixed-generators"] = {"pass": K.is_trivial() and (relations in (None, 1))
                    and _same_subgroup(W, _image_gens(phi), fixed),
                    "relations_found": relations, "fixed_order": nfixed}
    out["tate-open"] = _tate_entry(m, (1, 1))
    entry = {"t_b_zero": not any(m.trans.apply(b))}
    lifts = _lifts(m.proj, Hom.identity(W), gens)
    ok = all(v is not None for v in lifts)
    if ok:
        span, semb = _lambda_span(m, lifts)
        span_gens = [semb.apply(x.coords) for x in span.gens()]
        ok = check_nondegenerate(induced_form(m.cover, semb)) if span.rank else True
    if ok:
        cg, wemb = _complement(m.cover, span_gens)
        (vt,) = _lifts(m.proj, wemb, [b])
        ok = vt is not None
    if ok:
        Nv = m.norm().apply(vt)
        Lv, _ = _lambda_span(m, [vt])
        entry.update({
            "v": list(vt), "norm_v_zero": not any(Nv),
            "T_in_Lambda_v": _span(W, _lambda_span_gens(m, [vt]) + [T])[0].order == Lv.order,
            "complement_is_Lambda_v": Lv.order == _span(W, cg)[0].order
            and _same_subgroup(W, cg, _lambda_span_gens(m, [vt])),
            "complement_norm_zero": all(not any(m.norm().apply(c)) for c in cg),
            "direct": span.order * Lv.order == W.order,
        })
        ok = all(v for k, v in entry.items() if isinstance(v, bool))
    else:
        entry["witness"] = "no orthogonal complement with a lift of b"
    entry["pass"] = ok and entry["t_b_zero"]
    out["isotropic-splitting"] = entry
    return _finish(out)


def _lambda_span_gens(m, gens):
    H, emb = _lambda_span(m, gens)
    return [emb.apply(e.coords) for e in H.gens()]


# ------------------------------------------------------------ classifiers

def classify_11_4(V, z):
    """Predicted Nazarova-Roiter shape of the cover for the character (., z).

    Isotropic z gives exactly one open summand plus closed ones (Tate
    (1, 1)); anisotropic z gives only closed summands (Tate (0, 0)).
    """
    z = _coords(z)
    p = V.p
    if V.carrier.coord_order(z) != p:
        raise CoveringError("z must have order p")
    if V.pair(z, z) == 0:
        return {"isotropy": "isotropic", "shape": "one-open-plus-closed", "tate": [1, 1]}
    return {"isotropy": "anisotropic", "shape": "all-closed", "tate": [0, 0]}


def shape_consistent(prediction, module):
    """Compare a classify_11_4 prediction with the computed summands of a module."""
    rep = classify_cohomological(module)
    if prediction["shape"] == "all-closed":
        return rep["h_odd"] == 0
    return rep["h_odd"] == 1 and rep.get("open", 1) == 1


def _invariant_cyclic_subgroups(mod):
    """Yield (z, u) for each zeta-invariant cyclic subgroup <z>, zeta z = u z."""
    W = mod.carrier
    seen = set()
    for c in W.coords_iter():
        if not any(c):
            continue
        n = W.coord_order(c)
        mult = [W.scale(u, c) for u in range(n)]
        key = frozenset(mult)
        if key in seen:
            continue
        seen.add(key)
        zc = mod.zeta.apply(c)
        if zc in key:
            yield c, mult.index(zc)


def obstruct_split_anisotropic(mod, form, search_limit=None):
    """Search for split anisotropic invariant cyclic summands <z> of a formed module.

    A summand is split anisotropic when ord (z, z) = ord z.  For odd p any
    such summand is a violation.  For p = 2 a summand is allowed only when
    zeta acts on it as -1; other actions are flagged with the excluded
    extension class and its Tate signature: trivial action is class (i)
    (H^i(C_2, W) = Z/2), any other action is class (iii), where the
    unbounded growth of H^*(C_{2^n} x| C_2, F_2) is reported.
    """
    from .resolution import ResourceEnvelopeError
    W, p = mod.carrier, mod.p
    if form.carrier != W:
        raise FormError("form and module live on different groups")
    if not check_nondegenerate(form):
        raise FormError("the form must be nondegenerate")
    for x in W.gens():
        for y in W.gens():
            if form.pair(mod.zeta.apply(x.coords), mod.zeta.apply(y.coords)) != form.pair(x.coords, y.coords):
                raise FormError("the form is not zeta-invariant")
    limit = search_limit or p ** 6
    if W.order > limit:
        raise ResourceEnvelopeError("exhaustive search limited to |W| <= %d" % limit)
    found = []
    for z, u in _invariant_cyclic_subgroups(mod):
        n = W.coord_order(z)
        if qz_order(form.pair(z, z)) != n:
            continue
        k = p_log(n, p)
        sig = tate_cohomology(CpModule(PGroup(p, [k]), Hom.scalar(PGroup(p, [k]), u))).pair()
        item = {"z": list(z), "order": n, "form": qz_str(form.pair(z, z)), "action": u,
                "tate": list(sig)}
        if p == 2:
            if u % n == (-1) % n:
                item["class"] = "allowed"
            elif u % n == 1:
                item["class"] = "(i)"
            else:
                item["class"] = "(iii)"
                item["growth"] = _semidirect_growth(k, u)
        else:
            item["class"] = "violation"
        found.append(item)
    flagged = [f for f in found if f["class"] != "allowed"]
    verdict = "consistent" if not flagged else ("violation" if p != 2 else "flagged")
    return {"p": p, "verdict": verdict, "summands": found}


def _semidirect_growth(k, u, max_deg=6):
    """F_2 Betti numbers of C_{2^k} x| C_2 (action u): unbounded rank growth."""
    from .groups import metacyclic
    from .cohomology import cohomology_fp
    m = 2 ** k
    if 2 * m > 32:
        return {"skipped": "group order %d beyond the resolution range" % (2 * m)}
    G = metacyclic(m, u % m, 0, name="C%d:C2(%d)" % (m, u % m))
    b = cohomology_fp(G, 2, max_deg, "resolution").dims
    return {"betti": b, "grows": b[-1] > max(b[1:4])}


def small_h1_classifier(V):
    """Predicted pro-p completion for the small first homology groups.

    Cyclic: finite cyclic.  (Z/2)^2 with an odd form: generalized quaternion
    Q_{2^n}, n >= 4.  (Z/2)^2 hyperbolic: Q_8.
    """
    G = V.carrier
    if not check_nondegenerate(V):
        raise FormError("linking form must be nondegenerate")
    if G.rank == 1:
        return {"family": "finite cyclic", "group": str(G)}
    if G.p == 2 and G.exponents == (1, 1):
        even = all(V.pair(c, c) == 0 for c in G.coords_iter())
        if even:
            return {"family": "Q_8", "form": "hyperbolic"}
        return {"family": "Q_{2^n}, n >= 4", "form": "odd"}
    return {"family": "outside classified range", "group": str(G)}


# ------------------------------------------------------------- class tower

@dataclass
class TowerSeq:
    """Rank bounds r_i and exponent bounds p^(e_log[i]); e_log[0] is None."""

    p: int
    r: list
    e_log: list
    betti: list = field(default_factory=list)

    @property
    def e(self):
        return [None if k is None else self.p ** k for k in self.e_log]

    def to_json(self):
        return {"p": self.p, "r": self.r,
                "e": [None if k is None else "%d^%d" % (self.p, k) for k in self.e_log],
                "e_log": self.e_log, "betti": self.betti}


def tower_bounds(r1, p, depth):
    """Rank and exponent lower bounds along the class tower.

    r_{i+1} = (r_i^2 - r_i) / 2 (an integer) and e_{i+1} = p^(r_i - 1);
    also the predicted F_p-cohomology (1, r_1, r_1, 1) of the pro-p
    completion.
    """
    from .abelian import is_prime
    if not is_prime(p):
        raise ValueError("p must be prime")
    if r1 < 4:
        raise ValueError("the class tower bound needs rank H_1(M, F_p) >= 4")
    if depth < 1:
        raise ValueError("depth must be positive")
    r = [r1]
    e_log = [None]
    for _ in range(depth - 1):
        r.append((r[-1] * r[-1] - r[-1]) // 2)
        e_log.append(r[-2] - 1)
    return TowerSeq(p, r, e_log, [1, r1, r1, 1])


# ---------------------------------------------------------------- builders

def _empty_form(p):
    return LinkForm(PGroup(p, []), [])


def _zero_hom(A, B):
    return Hom.zero(A, B)


def _free_piece(f0):
    """V0 covered by V0 (x) Lambda: pi(zeta^j v_i) = e_i, t e_i = N v_i."""
    V0 = f0.carrier
    p, s = V0.p, V0.rank
    W0 = PGroup(p, [k for k in V0.exponents for _ in range(p)])
    n = s * p
    Z = [[0] * n for _ in range(n)]
    P = [[0] * n for _ in range(s)]
    T = [[0] * s for _ in range(n)]
    g = [[Fraction(0)] * n for _ in range(n)]
    for i in range(s):
        for j in range(p):
            Z[i * p + (j + 1) % p][i * p + j] = 1
            P[i][i * p + j] = 1
            T[i * p + j][i] = 1
            for i2 in range(s):
                g[i * p + j][i2 * p + j] = f0.gram[i][i2]
    return f0, LinkForm(W0, g), Hom(W0, W0, Z), Hom(W0, V0, P), Hom(V0, W0, T)


def _point_piece(p, u):
    """<u/p> on Z/p with nothing above it."""
    V0 = PGroup(p, [1])
    W0 = PGroup(p, [])
    return (LinkForm(V0, [[Fraction(u % p, p)]]), _empty_form(p), Hom.identity(W0),
            Hom(W0, V0, [[]]), Hom(V0, W0, []))


def _shrink_piece(p, k, u):
    """<u/p^k> on Z/p^k covered by <u/p^(k-1)> on Z/p^(k-1) with trivial action."""
    V0, W0 = PGroup(p, [k]), PGroup(p, [k - 1])
    return (LinkForm(V0, [[Fraction(u, p ** k)]]), LinkForm(W0, [[Fraction(u, p ** (k - 1))]]),
            Hom.identity(W0), Hom(W0, V0, [[p]]), Hom(V0, W0, [[1]]))


def _right_block(p, N):
    b = Block("R", N, p)
    G, z, P, _ = lattice_module(p, b.action, b.sublattice)
    top = tuple(row[0] for row in P)  # image of 1 in O / pi^N
    return CpModule(G, z), G.reduce(top)


def _hyperbolic_piece(p, m=2):
    """Hyperbolic (Z/p)^2 = <a, b> covered by a right block O / pi^N.

    N = m for p = 2 (Z/2^m with zeta = -1), N = 3 for odd p.  pi sends the
    block to <b> through its coinvariants and t a is the invariant element
    dual to the coinvariant functional.
    """
    from .cpmod import invariant_nondegenerate_forms
    Vf = hyperbolic_form(p, 1)
    V0 = Vf.carrier
    if p == 2:
        if m < 2:
            raise CoveringError("the isotropic cover needs m >= 2")
        W0 = PGroup(2, [m])
        mod, top = CpModule(W0, Hom.scalar(W0, -1)), (1,)
        wf = LinkForm(W0, [[Fraction(1, 2 ** m)]])
    else:
        mod, top = _right_block(p, 3)
        W0 = mod.carrier
        wf = next(invariant_nondegenerate_forms(mod))
    Q, qproj = _coinvariant_functional(mod)
    scale = pow(qproj.apply(top)[0], -1, p)
    eps = [(scale * qproj.apply(e.coords)[0]) % p for e in W0.gens()]
    # pi(x) = eps(x) b with b the second coordinate
    proj = Hom(W0, V0, [[0] * W0.rank, eps])
    # T with (x, T) = eps(x) / p for all x
    adj = wf.adjoint()
    y = [eps[j] * W0.orders[j] // p for j in range(W0.rank)]
    T = hom_preimage(adj, y)
    trans = Hom(V0, W0, [[T[i], 0] for i in range(W0.rank)])
    return Vf, wf, mod.zeta, proj, trans


def _coinvariant_functional(mod):
    """W / (1 - zeta) W as (Z/p, projection); the module must have cyclic coinvariants of order p."""
    from .abelian import hom_cokernel
    Q, proj = hom_cokernel(Hom.identity(mod.carrier) - mod.zeta)
    if Q.exponents != (1,):
        raise CoveringError("coinvariants must be Z/p")
    return Q, proj


def _assemble(p, pieces, marks_local):
    """Orthogonal sum of pieces (Vf, Wf, zeta, proj, trans); marks_local maps
    a mark name to (piece index, coordinates or pair in that piece)."""
    base, vinj = direct_sum_forms(*[pc[0] for pc in pieces])
    cover, winj = direct_sum_forms(*[pc[1] for pc in pieces])
    _, _, vprj = direct_sum(*[pc[0].carrier for pc in pieces])
    _, _, wprj = direct_sum(*[pc[1].carrier for pc in pieces])
    V, W = base.carrier, cover.carrier
    Z, P, T = Hom.zero(W, W), Hom.zero(W, V), Hom.zero(V, W)
    for k, (_, _, z, pr, tr) in enumerate(pieces):
        Z = Z + winj[k].compose(z).compose(wprj[k])
        P = P + vinj[k].compose(pr).compose(wprj[k])
        T = T + winj[k].compose(tr).compose(vprj[k])
    marks = {}
    for name, (k, val) in marks_local.items():
        if name == "pair":
            marks[name] = tuple(vinj[k].apply(v) for v in val)
        else:
            marks[name] = vinj[k].apply(val)
    return CoveringModel(base, cover, Z, P, T, marks=marks)


def identity_model(form):
    """The degenerate degree-1 covering V = W, t = pi = id."""
    I = Hom.identity(form.carrier)
    return CoveringModel(form, form, I, I, I, degree=1)


def build_anisotropic(p, rest=None, z_unit=1):
    """V = rest + <z_unit/p> on Z/p z, W = rest (x) Lambda, character (., z)."""
    rest = diagonal_form(p, [1], [1]) if rest is None else rest
    pieces = [_free_piece(rest), _point_piece(p, z_unit)] if rest.carrier.rank else [_point_piece(p, z_unit)]
    return _assemble(p, pieces, {"z": (len(pieces) - 1, (1,))})


def build_anisotropic_cyclic(m, unit=1):
    """p = 2 model with cyclic cover: V = <1/2> e + <1/2> z, W = Z/2^m,
    zeta = 2^(m-1) - 1, pi(1) = e, t(e) = 2^(m-1), t(z) = 0 (m >= 3)."""
    if m < 3:
        raise CoveringError("the cyclic anisotropic cover needs m >= 3")
    V = diagonal_form(2, [1, 1], [1, 1])
    W = PGroup(2, [m])
    cover = LinkForm(W, [[Fraction(unit, 2 ** m)]])
    zeta = Hom.scalar(W, 2 ** (m - 1) - 1)
    proj = Hom(W, V.carrier, [[1], [0]])
    trans = Hom(V.carrier, W, [[2 ** (m - 1), 0]])
    return CoveringModel(V, cover, zeta, proj, trans, marks={"z": (0, 1)})


def build_shrinking(p, k, rest=None, unit=1):
    """V = rest + <unit/p^k> e_s, W = rest (x) Lambda + Z/p^(k-1) trivial."""
    if k < 2:
        raise CoveringError("the shrinking model needs k >= 2")
    pieces = ([_free_piece(rest)] if rest is not None and rest.carrier.rank else []) + [_shrink_piece(p, k, unit)]
    return _assemble(p, pieces, {"e_s": (len(pieces) - 1, (1,))})


def build_isotropic(p, rest=None, m=2):
    """V = rest + hyperbolic <a, b>, W = rest (x) Lambda + right block, character (., b)."""
    pieces = ([_free_piece(rest)] if rest is not None and rest.carrier.rank else []) + [_hyperbolic_piece(p, m)]
    return _assemble(p, pieces, {"pair": (len(pieces) - 1, ((1, 0), (0, 1)))})


def perturb_transfer(m, c=None):
    """A mutated model for the validators.

    With c given, t becomes c t.  Otherwise t(e_0) is shifted by a nonzero
    element of W of order dividing ord e_0, which breaks reciprocity
    whenever the cover form is nondegenerate.
    """
    if c is not None:
        return m.with_trans(Hom.scalar(m.W, c).compose(m.trans))
    V, W = m.V, m.W
    k0 = V.exponents[0]
    E = [[0] * V.rank for _ in range(W.rank)]
    E[0][0] = W.p ** max(0, W.exponents[0] - k0)
    return m.with_trans(m.trans + Hom(V, W, E))
