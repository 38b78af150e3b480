import math

import pytest
import sympy
from hypothesis import given, strategies as st

from coalgtower import classified as cl


@pytest.mark.parametrize("m,n", [(1, 1), (2, 3), (3, 3), (0, 2)])
def test_product_rank(m, n):
    prod = cl.cogroup_product(cl.PointedSet.of_size(m + 1, "a"), cl.PointedSet.of_size(n + 1, "b"))
    assert prod.product.rank == (m + 1) * (n + 1) - 1
    assert all(p.is_morphism() for p in prod.proj)


def test_square_of_identity_cogroup_generators():
    X = cl.PointedSet(("e", "x"))
    gens = set(cl.cogroup_product(X, X).product.points.others)
    assert gens == {("x", "x"), ("x", "e"), ("e", "x")}


@pytest.mark.parametrize("z", [1, 2, 3, 4])
def test_product_universal_property(z):
    prod = cl.cogroup_product(cl.PointedSet.of_size(2, "a"), cl.PointedSet.of_size(3, "b"))
    assert cl.product_universal(prod, cl.Cogroup(cl.PointedSet.of_size(z, "c")))


def test_grouplike_elements_are_generators():
    C = cl.Cogroup(cl.PointedSet.of_size(3))
    assert [str(w) for w in cl.grouplike_elements(C, 3)] == ["1", "g_p1", "g_p2"]


def test_cogroup_axioms():
    C = cl.cogroup_product(cl.PointedSet.of_size(3), cl.PointedSet.of_size(2)).product
    assert cl.coassociative(C) and cl.counital(C) and cl.coinverse_ok(C)


def test_nonseparation():
    w = cl.nonseparation_witness()
    assert w.w1 != w.w2
    assert w.holds
    assert str(w.images[0][0]) == "g_x"


def test_cofree_small_cases():
    cf = cl.cofree_cogroup(cl.cyclic_group(2))
    assert cf.cogroup.rank == 1
    cf3 = cl.cofree_cogroup(cl.cyclic_group(3))
    assert cf3.cogroup.rank == 2
    rank1 = cl.Cogroup(cl.PointedSet.of_size(2))
    maps = list(cl.pointed_maps(rank1.points, cf3.cogroup.points))
    assert len(maps) == 3
    assert cl.cofree_bijection(cf3, rank1)


def test_monoid_models():
    free, bicyclic, integers = cl.monoid_models()
    assert all(M.relations_respected() for M in (free, bicyclic, integers))
    x0, x1 = cl.MX.tagged(0), cl.MX.tagged(1)
    y0, y1 = cl.MY.tagged(0), cl.MY.tagged(1)
    assert bicyclic.reduce([x0, x1, y1, y0]).payload == ()
    assert free.reduce([x0, x1, y1, y0]).payload != ()
    for M in (free, bicyclic, integers):
        assert {str(w) for w in M.special_elements(3)} == {"1", "x", "y"}


def test_functor_chain_at_two_element_group():
    Z2 = [[0, 1], [1, 0]]
    sizes = []
    for M in cl.monoid_models():
        homs, prod = M.functor_via_homs(Z2)
        assert sorted(homs) == sorted(M.functor_formula(Z2))
        assert all(prod(h, k) == (Z2[h[0]][k[0]], Z2[k[1]][h[1]]) for h in homs for k in homs)
        sizes.append(len(homs))
    assert sizes == [4, 2, 2]


def test_functor_chain_on_monoid_with_one_sided_inverse_failure():
    # {1, 0} under multiplication: only 1 is invertible
    A = [[0, 0], [0, 1]]
    sizes = [len(M.functor_via_homs(A)[0]) for M in cl.monoid_models()]
    assert sizes == [4, 1, 1]


def test_snf_example():
    U, D, V = cl.smith_normal_form([[2, 4], [6, 8]])
    assert cl.diagonal(D) == [2, 4]
    assert U * sympy.Matrix([[2, 4], [6, 8]]) * V == D
    assert abs(U.det()) == 1 and abs(V.det()) == 1


matrices = st.integers(1, 3).flatmap(
    lambda r: st.integers(1, 3).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@given(matrices)
def test_snf_matches_determinantal_divisors(M):
    U, D, V = cl.smith_normal_form(M)
    assert U * sympy.Matrix(M) * V == D
    d = [x for x in cl.diagonal(D) if x != 0]
    assert d == cl.determinantal_invariants(M)
    assert all(b % a == 0 for a, b in zip(d, d[1:]))


def test_snf_rejects_non_integers():
    with pytest.raises(TypeError):
        cl.smith_normal_form([[1.5, 2]])


def test_tensor_gcd_rule():
    assert cl.tensor_fg_ab(cl.cyclic(4), cl.cyclic(6)).invariants() == (0, (2,))
    assert cl.tensor_fg_ab(cl.cyclic(0), cl.cyclic(5)).invariants() == (0, (5,))


groups = st.lists(st.integers(0, 6), min_size=1, max_size=2).map(
    lambda ns: cl.FgAbGroup(len(ns), [[n if i == j else 0 for j in range(len(ns))] for i, n in enumerate(ns)])
)


@given(groups, groups)
def test_tensor_symmetric(A, B):
    assert cl.tensor_fg_ab(A, B).invariants() == cl.tensor_fg_ab(B, A).invariants()


@given(groups, groups, groups)
def test_tensor_distributes(A, A2, B):
    lhs = cl.tensor_fg_ab(cl.direct_sum(A, A2), B).invariants()
    rhs = cl.direct_sum(cl.tensor_fg_ab(A, B), cl.tensor_fg_ab(A2, B)).invariants()
    assert lhs == rhs


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_ringab_witness(p):
    r = cl.ringab_witness(p)
    assert r.order_in_BB == p
    assert r.image_is_zero and r.image_in_AA == [0, p, 0, 0]


def test_element_orders():
    G = cl.FgAbGroup(2, [[0, 4]])
    assert G.order_of([0, 1]) == 4 and G.order_of([0, 2]) == 2 and G.order_of([1, 0]) == math.inf


def test_pointed_set_json():
    X = cl.PointedSet(("e", "a", "b"))
    assert cl.PointedSet.from_json(X.to_json()) == X
    with pytest.raises(ValueError):
        cl.PointedSet(("a",), "e")
