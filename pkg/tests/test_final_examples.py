import json

import pytest
from hypothesis import given, strategies as st

from coalgtower import final_examples as fx
from coalgtower.oracle import enumerate_coalgebras, hom_algebra_satisfies
from coalgtower.sig_core import NAMED_IDENTITIES as N
from coalgtower.sig_core import Catalog, VarietyDescriptor
from coalgtower.tower import Tower
from coalgtower.words import GenId, bi, format_word


def test_cantor_coop():
    assert fx.cantor_coop("101") == (1, "01")
    with pytest.raises(ValueError):
        fx.cantor_coop("")


def test_xy_coalgebra_streams():
    R = fx.xy_coalgebra()
    assert fx.unfold(R, "x", 6) == fx.unfold(R, "y", 6) == "111111"


@pytest.mark.parametrize("name", ["no11", "no10", "assoc"])
def test_recognizers_match_towers(name):
    for n in range(1, 9):
        lang = fx.subvariety_language([N[name]], n)
        assert lang == {s for s in fx.all_strings(n) if fx.RECOGNIZERS[name](s)}


def test_unfold_gives_cantor_morphism():
    desc = VarietyDescriptor(Catalog.BI)
    for size in (1, 2, 3):
        for R in enumerate_coalgebras(desc, size):
            for x, (i, y) in R.coops["beta"].items():
                assert fx.unfold(R, x, 5) == str(i) + fx.unfold(R, y, 4)


def test_no10_functor_formula():
    A = fx.functor_value_set("no10", 2, m=3)
    assert len(A.elements) == 2**5
    assert all(A.beta(u, v) == fx.no10_formula(u, v) for u in A.elements for v in A.elements)


def test_xy_functor_swaps():
    A = fx.functor_value_set("xy", 3)
    assert all(A.beta(u, v) == (v[1], v[0]) for u in A.elements for v in A.elements)
    assert fx.find_violation(A, N["bb=b"]) is not None
    assert hom_algebra_satisfies(fx.xy_coalgebra(), 3, N["no10"])


def test_rectangular_band():
    F = fx.functor_value_set("assoc", 3)
    assert len(F.elements) == 9 and F.satisfies(N["assoc"])
    assert all(F.beta(u, u) == u for u in F.elements)


res = st.integers(0, 3).flatmap(
    lambda n: st.integers(1, 2).flatmap(
        lambda m: st.lists(st.sampled_from(["".join(p) for p in __import__("itertools").product("01", repeat=m)]), min_size=2**n, max_size=2**n).map(
            lambda t: fx.ResFunction(n, m, tuple(t))
        )
    )
)


@given(res)
def test_decode_encode(f):
    assert fx.bibi_encode(fx.bibi_decode(f)) == f.canonical()


@given(res)
def test_coop_rebuilds_function(f):
    assert fx.same_function(fx.eval_coop(fx.bibi_coop(f)), f)


@given(res)
def test_resfunction_json_round_trip(f):
    assert fx.ResFunction.from_json(json.loads(json.dumps(f.to_json()))) == f


def test_encode_examples():
    x0 = GenId("x", (0,), idempotent=True)
    x1 = GenId("x", (1,), idempotent=True)
    assert fx.bibi_encode(bi(x0)) == fx.ResFunction(0, 1, ("0",))
    step = fx.bibi_encode(bi((x0, x1)))
    assert step.table == ("0", "1")
    assert fx.bibi_beta(fx.ResFunction.constant("0"), fx.ResFunction.constant("1")) == step


def test_connecting_drops_last_output_bit():
    T = Tower(Catalog.BI, VarietyDescriptor(Catalog.BI), L=4)
    for w in T.level(2).carrier:
        low = T.level(2).connecting(w)
        assert fx.same_function(fx.bibi_encode(w).drop_last_output(), fx.bibi_encode(low))


def test_encode_is_a_homomorphism():
    T = Tower(Catalog.BI, VarietyDescriptor(Catalog.BI), L=3)
    ws = sorted(T.level(1).carrier)[:20]
    for u in ws:
        for v in ws:
            w = bi((u.payload, v.payload))
            assert fx.same_function(fx.bibi_encode(w), fx.bibi_beta(fx.bibi_encode(u), fx.bibi_encode(v)))


def test_resfunction_validation():
    with pytest.raises(ValueError):
        fx.ResFunction(1, 1, ("0",))
    with pytest.raises(ValueError):
        fx.ResFunction(0, 2, ("0",))
    with pytest.raises(ValueError):
        fx.bibi_unbeta(fx.ResFunction.constant("0"))


def test_bise_functor_on_three_element_monoid():
    table = [[0, 1, 2], [1, 1, 1], [2, 1, 2]]  # 0 is the identity, 1 absorbing
    F = fx.bise_final()
    els, op = F.functor_value(table)
    assert len(els) == 9
    assert all(op(op(a, b), c) == op(a, op(b, c)) for a in els for b in els for c in els)


def test_bise_product_element_is_compatible():
    imgs = fx.bise_product_images(4)
    assert format_word(imgs[0]) == "x" and format_word(imgs[2]) == "(x00.x11)"
    T = Tower(Catalog.BI, VarietyDescriptor(Catalog.SE), L=6)
    for k in range(1, 5):
        assert T.contains(imgs[k], k)
        assert T.level(k).connecting(imgs[k]) == imgs[k - 1]


def test_unary_final_fgab_example():
    v = fx.unary_functor_value(fx.unary_final("fgab_point", 3), 2, bound=2)
    assert all(sum(c) == 2 for c in v.coefficients)
    assert v.point() == (2, 0, 0)
    assert v.endo((1, 2, -1)) == (0, 1, 2) == fx.induced_endo((1, 2, -1), 3)


def test_unary_functor_value_scope():
    with pytest.raises(NotImplementedError):
        fx.unary_functor_value(fx.unary_final("pointed_endo", 2), 1)


def test_polyunary_final_is_one_point():
    F = fx.polyunary_final(2)
    assert F is not None and len(F) == 1
    assert all(F.coops[a] == {F.carrier[0]: (0, F.carrier[0])} for a in F.coops)
    ops = {"f": lambda x: (x * 2) % 4, "g": lambda x: x * x % 4}
    assert fx.polyunary_functor_value(range(4), ops, {"f": 1, "g": 1}) == [0]
