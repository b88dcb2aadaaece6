from fractions import Fraction

import pytest
from hypothesis import given, settings

from arithtop import intlin
from arithtop.abelian import (
    PGroup, Hom, elem_order, hom_kernel, hom_image, hom_cokernel, hom_preimage,
    homology, dual_group, dual_pairing, direct_sum, lattice_module, qz, qz_parse,
    subgroup,
)
from conftest import homs


def brute_kernel_size(f):
    return sum(1 for x in f.source.coords_iter() if not any(f.apply(x)))


def brute_image_size(f):
    return len({f.apply(x) for x in f.source.coords_iter()})


def test_smith_form_transforms():
    A = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    sf = intlin.smith_form(A)
    S = intlin.matmul(intlin.matmul(sf.U, A), sf.V)
    assert [S[i][i] for i in range(3)] == [2, 6, 12]
    assert intlin.matmul(sf.U, sf.Uinv) == intlin.identity(3)
    assert intlin.matmul(sf.V, sf.Vinv) == intlin.identity(3)


def test_kernel_and_solve():
    A = [[1, 2, 3], [2, 4, 6]]
    for v in intlin.kernel_basis(A):
        assert intlin.matvec(A, v) == [0, 0]
    assert len(intlin.kernel_basis(A)) == 2
    assert intlin.solve([[2, 0], [0, 3]], [4, 9]) == [2, 3]
    assert intlin.solve([[2]], [3]) is None


def test_local_divisors_match_smith():
    A = [[4, 2, 0], [0, 8, 4], [2, 2, 6]]
    divs = intlin.elementary_divisors(A)
    vals = sorted(intlin.valuation(d, 2) for d in divs)
    assert sorted(intlin.local_divisor_valuations(A, 2, 6)) == vals


def test_elem_order():
    assert elem_order(PGroup(2, [3]).zero()) == 1
    assert elem_order(PGroup(2, [3]).elem([1])) == 8
    assert elem_order(PGroup(2, [2, 1]).elem([2, 1])) == 2


def test_kernel_image_cokernel_examples():
    Z4 = PGroup(2, [2])
    K, emb = hom_kernel(Hom.scalar(Z4, 2))
    assert K == PGroup(2, [1])
    assert emb(K.gens()[0]) == Z4.elem([2])
    Z9 = PGroup(3, [2])
    Q, proj = hom_cokernel(Hom.scalar(Z9, 3))
    assert Q == PGroup(3, [1])
    Z16 = PGroup(2, [4])
    zeta = Hom.scalar(Z16, -1)
    K, _ = hom_kernel(Hom.identity(Z16) + zeta)
    assert K == Z16


def test_well_formedness_rejected():
    with pytest.raises(ValueError):
        Hom(PGroup(2, [1]), PGroup(2, [2]), [[1]])
    Hom(PGroup(2, [1]), PGroup(2, [2]), [[2]])


def test_trivial_group_total():
    T = PGroup(5)
    f = Hom.identity(T)
    assert hom_kernel(f)[0] == T
    assert hom_image(f)[0] == T
    assert hom_cokernel(f)[0] == T
    assert dual_group(T) == T
    G = PGroup(5, [1])
    assert hom_cokernel(Hom.zero(T, G))[0] == G
    assert hom_kernel(Hom.zero(G, T))[0] == G


@settings(max_examples=150, deadline=None)
@given(homs())
def test_subquotient_orders(f):
    K, emb = hom_kernel(f)
    I, iemb = hom_image(f)
    C, proj = hom_cokernel(f)
    assert K.order == brute_kernel_size(f)
    assert I.order == brute_image_size(f)
    assert f.source.order == K.order * I.order
    assert f.target.order == I.order * C.order
    assert f.compose(emb).is_zero()
    assert proj.compose(f).is_zero()
    assert emb.is_injective() and iemb.is_injective()
    assert proj.is_surjective()


@settings(max_examples=60, deadline=None)
@given(homs())
def test_preimage(f):
    for x in list(f.source.coords_iter())[:20]:
        y = f.apply(x)
        z = hom_preimage(f, y)
        assert f.apply(z) == y


def test_subgroup_brute():
    G = PGroup(2, [3, 2])
    H, emb = subgroup(G, [(2, 1), (4, 2)])
    span = {(0, 0)}
    frontier = [(0, 0)]
    while frontier:
        x = frontier.pop()
        for g in [(2, 1), (4, 2)]:
            y = G.add(x, g)
            if y not in span:
                span.add(y)
                frontier.append(y)
    assert H.order == len(span)
    assert {emb.apply(x) for x in H.coords_iter()} == span


def test_homology_of_two_term_complex():
    G = PGroup(2, [2])
    two = Hom.scalar(G, 2)
    H, K, emb, proj = homology(two, two)
    assert H.is_trivial()
    H, *_ = homology(Hom.zero(G, G), two)
    assert H == PGroup(2, [1])


def test_dual_perfect_on_z9():
    W = PGroup(3, [2])
    pair = dual_pairing(W)
    chars = {tuple(pair(x, y) for x in W.elements()) for y in dual_group(W).elements()}
    assert len(chars) == 9
    assert pair(W.elem([1]), W.elem([1])) == Fraction(1, 9)


def test_dual_of_dual():
    W = PGroup(2, [2, 1])
    assert dual_group(dual_group(W)) == W


def test_direct_sum_sorted():
    S, inj, prj = direct_sum(PGroup(2, [1]), PGroup(2, [3]))
    assert S == PGroup(2, [3, 1])
    for a in range(2):
        assert prj[a].compose(inj[a]) == Hom.identity(inj[a].source)


def test_lattice_module_rotation():
    # Z^2 with the companion matrix of t^2 + t + 1 modulo (1 - C)^2 = 3 Z^2 ... order 9
    C = [[0, -1], [1, -1]]
    one_minus = [[1, 1], [-1, 2]]
    L = intlin.matmul(one_minus, one_minus)
    G, z, _, _ = lattice_module(3, C, L)
    assert G.order == 9
    assert z.power(3) == Hom.identity(G)


def test_qz():
    assert qz(Fraction(5, 4)) == Fraction(1, 4)
    assert qz(-1, 3) == Fraction(2, 3)
    assert qz_parse("3/2") == Fraction(1, 2)
