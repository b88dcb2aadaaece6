import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from arithtop.abelian import PGroup, Hom, qz_order
from arithtop.cpmod import CpModule, regular_module, tate_cohomology
from arithtop.linkform import LinkForm, FormError, diagonal_form, hyperbolic_form, random_form
from arithtop.covering import (
    CoveringModel, CoveringError, validate_model, verify_anisotropic, verify_shrinking,
    verify_isotropic, classify_11_4, shape_consistent, obstruct_split_anisotropic,
    small_h1_classifier, tower_bounds, identity_model, build_anisotropic,
    build_anisotropic_cyclic, build_shrinking, build_isotropic, perturb_transfer,
)


def brute_reciprocity(m):
    """All (x, y) with (pi x, y)_V != (x, t y)_W, by direct evaluation."""
    bad = []
    for x in m.W.coords_iter():
        px = m.proj.apply(x)
        for y in m.V.coords_iter():
            if m.base.pair(px, y) != m.cover.pair(x, m.trans.apply(y)):
                bad.append((x, y))
    return bad


def all_models():
    return [
        build_anisotropic(2), build_anisotropic(3), build_anisotropic(3, z_unit=2),
        build_anisotropic(2, diagonal_form(2, [2, 1], [1, 3])),
        build_anisotropic_cyclic(3), build_anisotropic_cyclic(5),
        build_shrinking(2, 2), build_shrinking(3, 2), build_shrinking(2, 3, diagonal_form(2, [1], [1])),
        build_isotropic(2), build_isotropic(2, m=4), build_isotropic(3), build_isotropic(5),
        build_isotropic(2, diagonal_form(2, [1], [1]), m=3),
    ]


# ------------------------------------------------------------- validation

@pytest.mark.parametrize("m", all_models(), ids=lambda m: "%s|%s" % (m.V, m.W))
def test_constructed_models_validate(m):
    rep = validate_model(m)
    assert rep["pass"], rep["checks"]
    assert rep["exhaustive"] == (m.W.order <= 1 << 10 and m.V.order <= 1 << 10)


@pytest.mark.parametrize("m", all_models()[:10], ids=lambda m: "%s|%s" % (m.V, m.W))
def test_reciprocity_matches_brute_force(m):
    assert brute_reciprocity(m) == []


def test_identity_covering():
    assert validate_model(identity_model(diagonal_form(3, [2, 1], [1, 2])))["pass"]


def test_doubled_transfer_caught_with_witness():
    m = build_anisotropic(2)
    rep = validate_model(perturb_transfer(m, 2))
    assert not rep["pass"]
    w = rep["checks"]["reciprocity"]["witness"]
    mut = perturb_transfer(m, 2)
    x, y = tuple(w["x"]), tuple(w["y"])
    assert mut.base.pair(mut.proj.apply(x), y) != mut.cover.pair(x, mut.trans.apply(y))
    assert (x, y) in brute_reciprocity(mut)


@pytest.mark.parametrize("m", all_models(), ids=lambda m: "%s|%s" % (m.V, m.W))
def test_every_mutation_caught(m):
    rep = validate_model(perturb_transfer(m))
    assert not rep["checks"]["reciprocity"]["pass"]
    assert not rep["pass"]
    failing = [k for k, c in rep["checks"].items() if not c["pass"]]
    assert all(rep["checks"][k]["witness"] is not None for k in failing)


def test_json_roundtrip():
    for m in all_models()[:6]:
        m2 = CoveringModel.from_json(json.loads(json.dumps(m.to_json())))
        assert m2.to_json() == m.to_json()


# ------------------------------------------------------ structure theorems

def test_anisotropic_verdicts():
    for m in [build_anisotropic(2), build_anisotropic(5, z_unit=2), build_anisotropic_cyclic(4)]:
        rep = verify_anisotropic(m, m.marks["z"])
        assert rep["pass"], rep
        for row in rep["transfer-orders"]["generators"]:
            assert row["ord_te"] == row["ord_e"] == row["ord_form"]


def test_anisotropic_nontrivial_tate_fails():
    V = diagonal_form(2, [1, 1], [1, 1])
    W = PGroup(2, [2])
    m = CoveringModel(V, LinkForm(W, [[Fraction(1, 4)]]), Hom.scalar(W, -1),
                      Hom(W, V.carrier, [[1], [0]]), Hom(V.carrier, W, [[2, 0]]))
    rep = verify_anisotropic(m, (0, 1))
    assert not rep["tate-trivial"]["pass"] and rep["tate-trivial"]["tate"] == [1, 1]
    assert not validate_model(m)["pass"]


def test_anisotropic_rejections():
    m = build_anisotropic(3)
    with pytest.raises(CoveringError):
        verify_anisotropic(m, m.V.gens()[0].coords)  # wrong character
    iso = build_isotropic(2)
    with pytest.raises(CoveringError):
        verify_anisotropic(iso, iso.marks["pair"][1])  # isotropic z


@pytest.mark.parametrize("p,k", [(2, 2), (3, 2), (2, 3), (5, 2)])
def test_shrinking(p, k):
    m = build_shrinking(p, k)
    rep = verify_shrinking(m, m.marks["e_s"])
    assert rep["pass"], rep
    assert rep["shrink-image"]["ord_te"] == p ** (k - 1)
    assert rep["shrink-splitting"]["W_s"] == str(PGroup(p, [k - 1]))


def test_shrinking_violation_and_rejection():
    V = diagonal_form(2, [2], [1])
    W = PGroup(2, [2])
    bad = CoveringModel(V, LinkForm(W, [[Fraction(1, 2)]]), Hom.identity(W),
                        Hom(W, V.carrier, [[2]]), Hom(V.carrier, W, [[1]]))
    rep = verify_shrinking(bad, 0)
    assert not rep["shrink-image"]["pass"] and rep["shrink-image"]["ord_te"] == 4
    assert not validate_model(bad)["pass"]
    with pytest.raises(CoveringError):
        verify_shrinking(build_anisotropic(2), 0)


@pytest.mark.parametrize("m", [build_isotropic(2), build_isotropic(2, m=3), build_isotropic(3),
                               build_isotropic(5), build_isotropic(3, diagonal_form(3, [1], [2]))],
                         ids=str)
def test_isotropic(m):
    rep = verify_isotropic(m)
    assert rep["pass"], rep
    assert rep["invariant-image"]["ord_T"] == m.p and rep["tate-open"]["tate"] == [1, 1]


def test_isotropic_q8_data():
    # the index-2 cyclic subgroup of Q_8 acts on Z/4 by -1
    m = build_isotropic(2, m=2)
    assert m.W == PGroup(2, [2]) and m.zeta == Hom.scalar(m.W, -1)
    assert verify_isotropic(m, m.marks["pair"])["pass"]


def test_isotropic_relation_check_is_exhaustive():
    m = build_isotropic(3, diagonal_form(3, [1], [1]))
    rep = verify_isotropic(m)
    assert rep["free-fixed-generators"]["relations_found"] == 1


def test_isotropic_tate_trivial_fails():
    V = hyperbolic_form(2)
    reg = regular_module(2, 1)
    W = reg.carrier
    g = [[Fraction(1, 2) if i == j else 0 for j in range(2)] for i in range(2)]
    m = CoveringModel(V, LinkForm(W, g), reg.zeta, Hom(W, V.carrier, [[0, 0], [1, 1]]),
                      Hom(V.carrier, W, [[1, 0], [1, 0]]))
    assert tate_cohomology(m.module()).pair() == (0, 0)
    rep = verify_isotropic(m, ((1, 0), (0, 1)))
    assert not rep["tate-open"]["pass"]


def test_isotropic_rejects_non_hyperbolic():
    m = build_isotropic(2)
    with pytest.raises(CoveringError):
        verify_isotropic(m, ((1, 0), (1, 0)))


# ------------------------------------------------------------ classifiers

def test_classify_11_4():
    assert classify_11_4(hyperbolic_form(2), (1, 0))["shape"] == "one-open-plus-closed"
    assert classify_11_4(diagonal_form(2, [1], [1]), (1,))["shape"] == "all-closed"
    with pytest.raises(CoveringError):
        classify_11_4(diagonal_form(3, [2], [1]), (1,))


@pytest.mark.parametrize("m", all_models(), ids=lambda m: "%s|%s" % (m.V, m.W))
def test_classify_11_4_matches_built_covers(m):
    if "z" in m.marks:
        z = m.marks["z"]
    elif "pair" in m.marks:
        z = m.marks["pair"][1]
    else:
        return
    assert shape_consistent(classify_11_4(m.base, z), m.module())


def _cyclic_module(n, u):
    W = PGroup(2, [n])
    return CpModule(W, Hom.scalar(W, u)), LinkForm(W, [[Fraction(1, 2 ** n)]])


def test_obstruction_p2():
    mod, f = _cyclic_module(3, -1)
    assert obstruct_split_anisotropic(mod, f)["verdict"] == "consistent"
    mod, f = _cyclic_module(3, 5)
    rep = obstruct_split_anisotropic(mod, f)
    assert rep["verdict"] == "flagged"
    (item,) = rep["summands"]
    assert item["class"] == "(iii)" and item["tate"] == [0, 0] and item["growth"]["grows"]
    mod, f = _cyclic_module(2, 1)
    item = obstruct_split_anisotropic(mod, f)["summands"][0]
    assert item["class"] == "(i)" and item["tate"] == [1, 1]


def test_obstruction_odd():
    W = PGroup(3, [1, 1])
    mod = CpModule(W, Hom.identity(W))
    rep = obstruct_split_anisotropic(mod, diagonal_form(3, [1, 1], [1, 1]))
    assert rep["verdict"] == "violation"
    assert all(qz_order(Fraction(s["form"])) == s["order"] for s in rep["summands"])
    reg = regular_module(3, 1)
    g = [[Fraction(1, 3) if i == j else 0 for j in range(3)] for i in range(3)]
    rep = obstruct_split_anisotropic(reg, LinkForm(reg.carrier, g))
    assert rep["verdict"] == "consistent"  # no invariant cyclic summand is split


def test_obstruction_rejects_degenerate():
    W = PGroup(3, [1])
    with pytest.raises(FormError):
        obstruct_split_anisotropic(CpModule(W, Hom.identity(W)), LinkForm(W, [[0]]))


def test_small_h1_classifier():
    assert small_h1_classifier(diagonal_form(2, [3], [3]))["family"] == "finite cyclic"
    assert small_h1_classifier(hyperbolic_form(2))["family"] == "Q_8"
    assert small_h1_classifier(diagonal_form(2, [1, 1], [1, 1]))["family"] == "Q_{2^n}, n >= 4"
    assert small_h1_classifier(diagonal_form(3, [1, 1], [1, 1]))["family"] == "outside classified range"


# ----------------------------------------------------------------- tower

def test_tower_values():
    t = tower_bounds(4, 2, 5)
    assert t.r == [4, 6, 15, 105, 5460]
    assert t.e == [None, 2 ** 3, 2 ** 5, 2 ** 14, 2 ** 104]
    assert t.betti == [1, 4, 4, 1]
    assert t.to_json()["e"] == [None, "2^3", "2^5", "2^14", "2^104"]
    assert tower_bounds(7, 3, 1).r == [7]


def test_tower_rejects_small_rank():
    with pytest.raises(ValueError):
        tower_bounds(3, 2, 4)


@settings(max_examples=40)
@given(st.integers(4, 40), st.sampled_from([2, 3, 5, 7]), st.integers(1, 6))
def test_tower_properties(r1, p, depth):
    t = tower_bounds(r1, p, depth)
    assert len(t.r) == depth
    for a, b in zip(t.r, t.r[1:]):
        assert b > a and 2 * b >= a * a - a
    for i in range(1, depth):
        assert t.e_log[i] == t.r[i - 1] - 1


# ------------------------------------------------------- property suites

@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3]))
def test_random_models_validate(seed, p):
    rng = random.Random(seed)
    rest = random_form(rng, p, 2, max_exp=2)
    kind = rng.choice(["aniso", "shrink", "iso"])
    if kind == "aniso":
        m = build_anisotropic(p, rest, z_unit=rng.randrange(1, p))
        ver = verify_anisotropic(m, m.marks["z"])
    elif kind == "shrink":
        m = build_shrinking(p, rng.randint(2, 3), rest, unit=rng.choice([u for u in range(1, p * p) if u % p]))
        ver = verify_shrinking(m, m.marks["e_s"])
    else:
        m = build_isotropic(p, rest, m=rng.randint(2, 3))
        ver = verify_isotropic(m)
    rep = validate_model(m)
    assert rep["pass"], rep["checks"]
    assert rep["checks"]["herbrand"]["pass"]
    assert ver["pass"], ver
