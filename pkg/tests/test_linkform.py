import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from arithtop.abelian import PGroup, Hom, hom_preimage, qz, subgroup
from arithtop.linkform import (
    LinkForm, FormError, FormedCpAction, check_nondegenerate, restrict_to_scaled,
    diagonalize_odd, basis_change, isotropy_class, orthogonal_complement,
    hyperbolic_form, diagonal_form, normalize_2adic, primary_decomposition,
    check_parity_lemma, parity_dimension, random_form, random_orthogonal_action,
)


def brute_nondegenerate(f):
    W = f.carrier
    elems = list(W.coords_iter())
    radical = [x for x in elems if all(f.pair(x, y) == 0 for y in elems)]
    return len(radical) == 1


def test_nondegenerate_examples():
    assert check_nondegenerate(LinkForm(PGroup(3, [1]), [[F(1, 3)]]))
    assert check_nondegenerate(hyperbolic_form(2))
    f = LinkForm(PGroup(2, [2]), [[F(1, 2)]])
    assert not check_nondegenerate(f)
    assert not brute_nondegenerate(f)


def test_malformed_gram_rejected():
    with pytest.raises(FormError):
        LinkForm(PGroup(2, [2, 1]), [[F(1, 4), F(1, 4)], [F(1, 4), F(1, 2)]])
    with pytest.raises(FormError):
        LinkForm(PGroup(3, [1, 1]), [[0, F(1, 3)], [F(2, 3), 0]])


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from([2, 3, 5]))
def test_nondegeneracy_matches_brute_force(seed, p):
    f = random_form(random.Random(seed), p, 3, nondegenerate=False)
    assert check_nondegenerate(f) == brute_nondegenerate(f)


def test_restrict_examples():
    f = LinkForm(PGroup(2, [2]), [[F(1, 4)]])
    assert restrict_to_scaled(f, 0)[0] == f
    g, _ = restrict_to_scaled(f, 1)
    assert g == LinkForm(PGroup(2, [1]), [[F(1, 2)]])
    g, _ = restrict_to_scaled(diagonal_form(3, [2, 1], [1, 1]), 1)
    assert g == LinkForm(PGroup(3, [1]), [[F(1, 3)]])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from([2, 3]), st.integers(1, 2))
def test_restrict_formula_on_all_lifts(seed, p, ell):
    f = random_form(random.Random(seed), p, 4)
    g, emb = restrict_to_scaled(f, ell)
    assert check_nondegenerate(g)
    W = f.carrier
    for x in W.coords_iter():
        u = hom_preimage(emb, W.scale(p ** ell, x))
        assert u is not None
        for y in W.coords_iter():
            v = hom_preimage(emb, W.scale(p ** ell, y))
            assert g.pair(u, v) == qz(p ** ell * f.pair(x, y))


def _check_diagonal(f, basis, diag):
    W = f.carrier
    for i, j in itertools.combinations(range(len(basis)), 2):
        assert f.pair(basis[i], basis[j]) == 0
    for b, d in zip(basis, diag):
        assert f.pair(b, b) == d
        assert d.denominator == b.order()
    assert sorted(b.order() for b in basis) == sorted(W.orders)
    assert basis_change(f, basis).is_iso()


def test_diagonalize_hyperbolic_p3():
    f = hyperbolic_form(3)
    basis, diag = diagonalize_odd(f)
    _check_diagonal(f, basis, diag)
    assert [b.coords for b in basis] == [(1, 1), (1, 2)]
    # brute force: an orthogonal basis of (Z/3)^2 exists among all pairs
    W = f.carrier
    found = [(a, b) for a in W.coords_iter() for b in W.coords_iter()
             if f.pair(a, b) == 0 and f.pair(a, a) != 0 and f.pair(b, b) != 0]
    assert found


def test_diagonalize_already_diagonal():
    f = diagonal_form(5, [2, 1], [1, 2])
    basis, diag = diagonalize_odd(f)
    _check_diagonal(f, basis, diag)
    assert diag == [F(1, 25), F(2, 5)]


def test_diagonalize_rejects_p2():
    with pytest.raises(FormError):
        diagonalize_odd(hyperbolic_form(2))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from([3, 5]))
def test_diagonalize_random(seed, p):
    f = random_form(random.Random(seed), p, 5)
    basis, diag = diagonalize_odd(f)
    _check_diagonal(f, basis, diag)
    for d in diag:
        a = d.numerator
        assert a == 1 or a == min(x for x in range(2, p) if pow(x, (p - 1) // 2, p) != 1)


def test_normalize_2adic():
    out = normalize_2adic(hyperbolic_form(2))
    assert [b["type"] for b in out["blocks"]] == ["hyperbolic"]
    out = normalize_2adic(diagonal_form(2, [1, 1], [1, 1]))
    assert [b["type"] for b in out["blocks"]] == ["diagonal", "diagonal"]
    out = normalize_2adic(hyperbolic_form(2, 2))
    assert out["status"] == "unclassified"


def test_isotropy_class():
    h = hyperbolic_form(2)
    assert isotropy_class(h, h.carrier.elem([1, 0])) == "isotropic"
    f = LinkForm(PGroup(2, [1]), [[F(1, 2)]])
    assert isotropy_class(f, f.carrier.elem([1])) == "split-anisotropic"
    f = LinkForm(PGroup(2, [2]), [[F(1, 4)]])
    assert isotropy_class(f, f.carrier.elem([2])) == "isotropic"
    f = LinkForm(PGroup(3, [2]), [[F(1, 9)]])
    assert isotropy_class(f, f.carrier.elem([1])) == "split-anisotropic"
    f = LinkForm(PGroup(3, [2, 2]), [[0, F(1, 9)], [F(1, 9), F(3, 9)]])
    assert isotropy_class(f, f.carrier.elem([0, 1])) == "anisotropic"
    with pytest.raises(FormError):
        isotropy_class(f, f.carrier.zero())


def test_orthogonal_complement_examples():
    f = diagonal_form(3, [1, 1], [1, 2])
    C, emb, g = orthogonal_complement(f, [f.carrier.elem([1, 0])])
    assert C == PGroup(3, [1])
    assert emb.apply((1,)) == (0, 1)
    assert g.gram == ((F(2, 3),),)
    C, _, _ = orthogonal_complement(f, f.carrier.gens())
    assert C.is_trivial()
    with pytest.raises(FormError):
        orthogonal_complement(hyperbolic_form(2), [(1, 1)])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from([3, 5]))
def test_orthogonal_complement_reassembles(seed, p):
    rng = random.Random(seed)
    f = random_form(rng, p, 4)
    basis, _ = diagonalize_odd(f)
    S = rng.sample(basis, rng.randint(1, len(basis)))
    C, emb, g = orthogonal_complement(f, S)
    H, hemb = subgroup(f.carrier, [s.coords for s in S])
    assert H.order * C.order == f.carrier.order
    ccols = [emb.apply(e.coords) for e in C.gens()]
    for s in S:
        for c in ccols:
            assert f.pair(s, c) == 0
    T, _ = subgroup(f.carrier, [s.coords for s in S] + ccols)
    assert T == f.carrier
    assert check_nondegenerate(g)


def test_primary_decomposition():
    pieces = primary_decomposition([6], [[F(1, 6)]])
    f2, gens2 = pieces[2]
    f3, gens3 = pieces[3]
    assert f2.gram == ((F(1, 2),),) and gens2 == [[3]]
    assert f3.gram == ((F(2, 3),),) and gens3 == [[2]]
    pieces = primary_decomposition([12, 5], [[F(1, 12), 0], [0, F(2, 5)]])
    assert sorted(pieces) == [2, 3, 5]
    assert pieces[2][0].carrier == PGroup(2, [2])


def test_parity_examples():
    f = diagonal_form(3, [1, 1], [1, 1])
    a = FormedCpAction(f, Hom.identity(f.carrier))
    assert check_parity_lemma(a) and parity_dimension(a) == 0
    # x -> x + y on the hyperbolic-type form with Gram [[0,1],[1,1]]/3 is not orthogonal;
    # use the order-3 Eichler-type matrix preserving diag(1,1,1) on (Z/3)^3 from a cyclic shift
    f = diagonal_form(3, [1, 1, 1], [1, 1, 1])
    shift = Hom(f.carrier, f.carrier, [[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    a = FormedCpAction(f, shift)
    assert parity_dimension(a) == 2
    with pytest.raises(FormError):
        FormedCpAction(f, Hom(f.carrier, f.carrier, [[1, 1, 0], [0, 1, 0], [0, 0, 1]]))


def test_parity_rejects_p2():
    f = hyperbolic_form(2)
    a = FormedCpAction(f, Hom.identity(f.carrier))
    with pytest.raises(FormError):
        check_parity_lemma(a)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from([3, 5]), st.integers(1, 6))
def test_parity_random(seed, p, dim):
    a = random_orthogonal_action(random.Random(seed), p, dim)
    assert check_parity_lemma(a)
