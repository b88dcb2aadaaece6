import itertools
import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from arithtop import rings
from arithtop.abelian import PGroup, Hom
from arithtop.groups import quaternion, dihedral
from arithtop.linkform import LinkForm, FormError, check_nondegenerate
from arithtop.resolution import FreeResolution


# ------------------------------------------------------------------ oracles

def brute_value(mu, a, b, c):
    """Trilinear value from the 10 monomial values, by plain expansion."""
    total = 0
    for i in range(3):
        for j in range(3):
            for k in range(3):
                total += a[i] * b[j] * c[k] * mu[rings.MONOMIALS.index(tuple(sorted((i, j, k))))]
    return total % 2


def brute_compatible(mu):
    vecs = list(itertools.product((0, 1), repeat=3))
    dot = lambda a, b: sum(x * y for x, y in zip(a, b)) % 2
    return all(brute_value(mu, a, a, b) == dot(a, b) == brute_value(mu, a, b, b) for a in vecs for b in vecs)


def brute_tate(G, M):
    """(|ker(1-z)|, |im(1+z)|) by listing elements."""
    els = list(G.coords_iter())
    app = lambda x: tuple(sum(M[i][j] * x[j] for j in range(G.rank)) % G.orders[i] for i in range(G.rank))
    ker = [x for x in els if app(x) == tuple(x)]
    im = {tuple((a + b) % o for a, b, o in zip(x, app(x), G.orders)) for x in els}
    return ker, im


def brute_order(G, x):
    k, y = 1, tuple(x)
    while any(y):
        y = tuple((a + b) % o for a, b, o in zip(y, x, G.orders))
        k += 1
    return k


def exponent_profile(G, S):
    """Sorted element orders, which pins down an abelian 2-group."""
    return sorted(brute_order(G, x) for x in S)


def profile_of(exps):
    H = PGroup(2, exps)
    return exponent_profile(H, list(H.coords_iter()))


# --------------------------------------------------------- trilinear tables

def test_raw_enumeration_matches_brute_force():
    brute = {mu for mu in itertools.product((0, 1), repeat=10) if brute_compatible(mu)}
    census = rings.trilinear_census()
    assert census["raw"] == 1024
    assert {t.mu for t in census["survivors"]} == brute
    assert len(brute) == 2


def test_two_tables():
    tables = rings.classify_trilinear()
    assert [t.tag() for t in tables] == ["zero-products", "cyclic-squares"]
    zero, cyc = tables
    assert all(zero.products()[k] == "0" for k in ("xy", "xz", "yz"))
    assert cyc.products()["yz"] == "x^2" and cyc.products()["xz"] == "y^2" and cyc.products()["xy"] == "z^2"


def test_tables_satisfy_compatibility_exhaustively():
    for t in rings.classify_trilinear():
        assert brute_compatible(t.mu)


def test_basis_change_group_is_permutations():
    O = rings.orthogonal_group(rings.orthonormal_link())
    perms = {tuple(map(tuple, np.eye(3, dtype=int)[list(s)].T)) for s in itertools.permutations(range(3))}
    assert {tuple(map(tuple, g)) for g in O} == perms


def test_orbit_closure():
    census = rings.trilinear_census()
    assert census["closed_under_group"]
    O = rings.orthogonal_group(rings.orthonormal_link())
    for t in census["survivors"]:
        for g in O:
            s = t.transform(g)
            vecs = list(itertools.product((0, 1), repeat=3))
            for a, b, c in itertools.product(vecs, repeat=3):
                ga, gb, gc = (tuple(np.array(g) @ np.array(v) % 2) for v in (a, b, c))
                assert brute_value(s.mu, a, b, c) == brute_value(t.mu, ga, gb, gc)


def test_b1_identities_and_quaternion_obstruction():
    e = np.eye(3, dtype=np.int64)
    add = lambda *vs: tuple(sum(v) % 2 for v in zip(*vs))
    zero, cyc = rings.classify_trilinear()
    for i, j in itertools.combinations(range(3), 2):
        (k,) = set(range(3)) - {i, j}
        # x^2 + y^2 = xz + yz when xyz = 1
        assert add(cyc.product(e[i], e[i]), cyc.product(e[j], e[j])) == \
            add(cyc.product(e[i], e[k]), cyc.product(e[j], e[k]))
        # x^2 + y^2 + xy never vanishes, so no pair maps onto Q_8
        for t in (zero, cyc):
            assert any(add(t.product(e[i], e[i]), t.product(e[j], e[j]), t.product(e[i], e[j])))


def test_predicates_each_reject_something():
    rep = rings.classification_report()
    assert rep["rejected_first"]["compatibility"] == 1022
    assert all(v > 0 for v in rep["rejected_alone"].values())
    assert rep["survivor_count"] == 2 and rep["basis_changes"] == 6


def test_case_b_kernel_spanned_as_predicted():
    for t in rings.classify_trilinear():
        w = np.array([1, 1, 0])
        ker = [tuple(a) for a in rings._kernel_of_times(t, w)]
        assert ker == [(t.xyz, t.xyz, 1)]


def test_link_rejections():
    G = PGroup(2, [1, 1, 1])
    odd = LinkForm(G, [[0, "1/2", 0], ["1/2", 0, 0], [0, 0, "1/2"]])
    assert check_nondegenerate(odd)
    with pytest.raises(FormError, match="orthonormal"):
        rings.classify_trilinear(odd)
    g = rings.orthonormal_basis(odd)
    cols = [tuple(int(x) for x in g[:, i]) for i in range(3)]
    assert [[int(odd.pair(a, b) * 2) for b in cols] for a in cols] == np.eye(3, dtype=int).tolist()
    with pytest.raises(FormError):
        rings.classify_trilinear(LinkForm(G, [["1/2", 0, 0], [0, "1/2", 0], [0, 0, 0]]))
    with pytest.raises(FormError):
        rings.classify_trilinear(LinkForm(PGroup(2, [2, 1]), [["1/4", 0], [0, "1/2"]]))


def test_report_json_deterministic():
    a = json.dumps(rings.classification_report(), sort_keys=True)
    b = json.dumps(rings.classification_report(), sort_keys=True)
    assert a == b and json.loads(a)["theorem"] == "15.4"


# ----------------------------------------------------------- ring facts

def yoneda_degree_two(G):
    """H^1 vectors and products on a minimal resolution (an independent route)."""
    from arithtop.resolution import product_cochain
    res = FreeResolution(G, 2, 3)
    assert res.ranks[1] == 2
    vecs = [v for v in itertools.product((0, 1), repeat=2) if any(v)]
    prod = lambda u, v: tuple(int(x) for x in product_cochain(res, u, 1, v, 1))
    return vecs, prod, res.ranks[2]


def test_facts_verified():
    facts = {f.family: f for f in rings.quaternion_ring_facts()}
    assert set(facts) == {"Q8", "Q16", "D8"}
    assert all(f.verified for f in facts.values())
    assert facts["Q8"].details["pairs_checked"] == 3
    assert facts["Q8"].details["extension_class_is_x2+xy+y2"]
    assert facts["D8"].details["b1"] == 2 and facts["D8"].details["b2"] == 3
    assert facts["D8"].details["extension_class_is_xy_in_basis"] is not None


def test_q8_relation_by_yoneda_products():
    vecs, prod, b2 = yoneda_degree_two(quaternion(8))
    assert b2 == 2
    for u, v in itertools.combinations(vecs, 2):
        s = tuple(sum(t) % 2 for t in zip(prod(u, u), prod(v, v), prod(u, v)))
        assert not any(s)
    assert all(any(prod(u, u)) for u in vecs)


def test_q16_basis_by_yoneda_products():
    vecs, prod, _ = yoneda_degree_two(quaternion(16))
    assert any(not any(prod(u, v)) for u, v in itertools.combinations(vecs, 2))


def test_d8_one_relation_by_yoneda_products():
    vecs, prod, b2 = yoneda_degree_two(dihedral(8))
    x, y = vecs[0], vecs[1]
    M = np.array([prod(x, x), prod(x, y), prod(y, y)]).T
    from arithtop.fpmat import rank
    assert b2 == 3 and rank(M, 2) == 2


# ------------------------------------------------------------ Z/2 + Z/4

def test_ring_z2z4_relations():
    r = rings.ring_z2z4()
    assert r.verified
    assert r.relations == ["U^2 = 0", "UV = 0", "V^3 = 1"]
    assert r.details["derived"] == ["U^3 = 0", "V^2U = 0"]


def test_ring_z2z4_all_forms():
    G = PGroup(2, [2, 1])
    seen = 0
    for a, b, c in itertools.product(range(4), range(2), range(2)):
        f = LinkForm(G, [[Fraction(a, 4), Fraction(c, 2)], [Fraction(c, 2), Fraction(b, 2)]])
        if not check_nondegenerate(f):
            continue
        seen += 1
        assert rings.ring_z2z4(f).relations == ["U^2 = 0", "UV = 0", "V^3 = 1"]
    assert seen > 0


def test_ring_z2z4_rejects_other_groups():
    with pytest.raises(FormError):
        rings.ring_z2z4(LinkForm(PGroup(2, [3]), [["1/8"]]))
    with pytest.raises(FormError):
        rings.ring_z2z4(LinkForm(PGroup(2, [2, 2]), [["1/4", 0], [0, "1/4"]]))


# ----------------------------------------------------- covering analysis

@pytest.fixture(scope="module")
def analysis():
    return rings.covering_case_analysis_16(6)


def test_involutions_match_brute_force():
    G = PGroup(2, [3, 1])
    els = list(G.coords_iter())
    brute = set()
    for i1, i2 in itertools.product(els, repeat=2):
        if brute_order(G, i2) > 2 or brute_order(G, i1) > 8:
            continue
        M = [[i1[0], i2[0]], [i1[1], i2[1]]]
        try:
            Z = Hom(G, G, M)
        except ValueError:
            continue
        if Z.compose(Z) == Hom.identity(G):
            brute.add(tuple(map(tuple, Z.matrix)))
    assert {tuple(map(tuple, Z.matrix)) for Z in rings.involutions(G)} == brute


def test_case_i_tate_rank_two():
    for n in range(2, 6):
        for c in rings._units_of_order_two(n):
            Z = rings.zeta_action(n, c, "(i)")
            ker, im = brute_tate(PGroup(2, [n, 1, 1]), Z.matrix)
            assert len(ker) // len(im) == 4


def test_relabelling_identities():
    for n in range(2, 6):
        R, eta = rings._r_module(n)
        for c in rings._units_of_order_two(n):
            for a, b in (("(ii)", "(iv)"), ("(iii)", "(i)")):
                lhs = np.array(rings.zeta_action(n, c, a).matrix) @ np.array(eta.matrix)
                rhs = np.array(rings.zeta_action(n, (-c) % 2 ** n, b).matrix)
                assert ((lhs - rhs) % np.array(R.orders)[:, None] == 0).all()


def test_isotropic_branch_groups():
    # the branch with ker(1-zeta) = Z/2 + Z/4 and im(1+zeta) = Z/2 + Z/2
    for n in range(3, 7):
        R = PGroup(2, [n, 1, 1])
        ker, im = brute_tate(R, rings.zeta_action(n, 2 ** (n - 1) - 1, "(ii)").matrix)
        assert exponent_profile(R, ker) == profile_of([2, 1])
        assert exponent_profile(R, im) == profile_of([1, 1])
        assert len(ker) // len(im) == 2
        rec = rings.action_tate(n, 2 ** (n - 1) - 1, "(ii)")
        assert rec["tate"] == [1, 1] and rec["ker(1-zeta)"] == "Z/4 + Z/2"
        assert rec["im(1+zeta)"] == "Z/2 + Z/2"
        # with 2l+1 = 2^(n-1) + 1 the element (1 + zeta) t has order 2^(n-1)
        ker, im = brute_tate(R, rings.zeta_action(n, 2 ** (n - 1) + 1, "(ii)").matrix)
        assert exponent_profile(R, ker) == profile_of([n - 1, 1])
        assert exponent_profile(R, im) == profile_of([n - 1])


def test_unit_branches_have_trivial_tate():
    for n in range(3, 7):
        R = PGroup(2, [n, 1, 1])
        for c in (1, 2 ** n - 1):
            ker, im = brute_tate(R, rings.zeta_action(n, c, "(iv)").matrix)
            assert len(ker) == len(im)


def test_eliminations_carry_witnesses(analysis):
    el = analysis["eliminations"]
    by_case = {case: [e for e in el if e.get("case") == case and e["stage"] == "anisotropic"]
               for case in ("(i)", "(ii)", "(iii)")}
    for e in by_case["(i)"]:
        assert max(t[0] for t in e["witness"].values()) == 2
    for e in by_case["(ii)"] + by_case["(iii)"]:
        assert e["witness"]["identity_holds"]
    for e in by_case["(iii)"]:
        assert e["witness"]["partner_tate"] == [2, 2]
    counts = sum(len(rings._units_of_order_two(n)) for n in range(2, 6))
    assert all(len(v) == counts for v in by_case.values())
    iso = [e for e in el if e["stage"] == "isotropic"]
    assert [e["S"] for e in iso] == ["Z/8", "Z/16", "Z/32", "Z/64"]
    assert all(e["witness"][0][0]["class"] == "(iii)" for e in iso)


def test_survivors(analysis):
    assert analysis["survivor_exponents"] == [[1, 1, 1], [2, 2], [4, 1], [5, 1], [6, 1]]
    assert analysis["characters"]["U"]["class"] == "isotropic"
    assert analysis["characters"]["V"]["kernel"] == [2]
    assert [r["n"] for r in analysis["realized"]] == [3, 4, 5]
    assert all(r["2l+1"] == 2 ** (r["n"] - 1) + 1 for r in analysis["realized"])


def test_refuted_members_have_no_closed_structure(analysis):
    refuted = {a["H"]: a for a in analysis["listed_but_refuted"]}
    assert set(refuted) == {"Z/2 + Z/4", "Z/2 + Z/8"}
    # brute force: no involution with trivial Tate groups and coinvariants Z/4
    for exps in ([2, 1], [3, 1]):
        G = PGroup(2, exps)
        for Z in rings.involutions(G):
            ker, im = brute_tate(G, Z.matrix)
            if len(ker) != len(im):
                continue
            coinv_order = G.order // len({tuple((a - b) % o for a, b, o in zip(x, Z.apply(x), G.orders))
                                          for x in G.coords_iter()})
            assert not (coinv_order == 4 and len(ker) == 4 and max(exponent_profile(G, ker)) == 4
                        and len(rings.closed_structures(G, (2,))[0]) > 0)
        assert rings.closed_structures(G, (2,))[0] == []


def test_analysis_deterministic():
    a = json.dumps(rings.covering_case_analysis_16(4), sort_keys=True)
    b = json.dumps(rings.covering_case_analysis_16(4), sort_keys=True)
    assert a == b
    assert json.loads(a)["survivors"] == ["Z/2 + Z/2 + Z/2", "Z/4 + Z/4", "Z/2 + Z/16"]


def test_small_n_max():
    assert rings.covering_case_analysis_16(2)["survivors"] == ["Z/2 + Z/2 + Z/2"]
    with pytest.raises(ValueError):
        rings.covering_case_analysis_16(1)


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 5), st.data())
def test_every_action_commutes_and_squares_to_one(n, data):
    R, eta = rings._r_module(n)
    c = data.draw(st.sampled_from(rings._units_of_order_two(n)))
    case = data.draw(st.sampled_from(["(i)", "(ii)", "(iii)", "(iv)"]))
    Z = rings.zeta_action(n, c, case)
    assert Z.compose(Z) == Hom.identity(R)
    assert Z.compose(eta) == eta.compose(Z)
