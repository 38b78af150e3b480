import itertools
import json

import pytest
from hypothesis import given, strategies as st

from coalgtower import oracle as orc
from coalgtower import final_examples as fx
from coalgtower.sig_core import NAMED_IDENTITIES as N
from coalgtower.sig_core import Catalog, Signature, VarietyDescriptor, parse_term
from coalgtower.tower import Tower, product_pseudo, psi

BI = VarietyDescriptor(Catalog.BI)


def small_coalgebras(max_size=3, desc=BI):
    return [R for m in range(1, max_size + 1) for R in orc.enumerate_coalgebras(desc, m)]


def test_enumeration_counts():
    assert [len(orc.enumerate_coalgebras(BI, m)) for m in range(4)] == [1, 2, 10, 44]


def test_commutative_is_empty():
    comm = VarietyDescriptor(Catalog.BI, (N["comm"],))
    assert all(orc.enumerate_coalgebras(comm, m) == [] for m in (1, 2, 3))
    assert len(orc.enumerate_coalgebras(comm, 0)) == 1


def test_size_cap():
    with pytest.raises(ValueError):
        orc.enumerate_coalgebras(BI, 5)


def test_identity_morphism_always_present():
    for R in small_coalgebras():
        ident = {x: x for x in R.carrier}
        assert ident in orc.morphisms(R, R)


def test_unique_maps_into_cantor_truncations():
    T = Tower(Catalog.SET, BI, L=4)
    for R in small_coalgebras(2):
        for n in range(5):
            (f,) = orc.morphisms_into_level(R, T, n)
            for x in R.carrier:
                assert T.format_element(f[x]) == "x" + fx.unfold(R, x, n)


def test_derived_coop_matches_unfolding():
    R = orc.FiniteCoalgebra(("00", "01", "10", "11"), {"beta": {s: (int(s[0]), s[1] + "0") for s in ("00", "01", "10", "11")}})
    t = parse_term("(beta (p 0) (p 1))")
    assert orc.derived_coop(R, t) == R.coops["beta"]
    two = parse_term("(beta (beta (p 0) (p 1)) (beta (p 2) (p 3)))")
    d = orc.derived_coop(R, two)
    assert d["10"][0] == 2  # first bit 1 then 0


def test_cosatisfaction_agrees_with_tower_membership():
    T = Tower(Catalog.SET, VarietyDescriptor(Catalog.BI, (N["no11"],)), L=4)
    for R in small_coalgebras(3):
        ok = orc.cosatisfies(R, N["no11"])
        images = [f for f in orc.morphisms_into_level(R, T, 4)]
        assert ok == bool(images)


def test_strongly_quasifinal_have_no_double_embeddings():
    pool = small_coalgebras(3)
    for R in pool:
        if not orc.strongly_quasifinal(R):
            continue
        for Q in pool:
            if len(Q) > len(R):
                continue
            injective = [f for f in orc.morphisms(Q, R) if len(set(f.values())) == len(Q)]
            assert len(injective) <= 1


def test_image_lattice_join_closed():
    for R in small_coalgebras(3):
        lat = orc.standard_images(R)
        assert lat.join_closed
        discrete = frozenset(frozenset([x]) for x in R.carrier)
        assert discrete in lat.partitions


def test_one_point_is_strongly_quasifinal():
    R = orc.FiniteCoalgebra(("a",), {"beta": {"a": (0, "a")}})
    assert orc.standard_images(R).discrete_only
    assert orc.strongly_quasifinal(R)


def test_final_for_associative_identity():
    cert = orc.final_over_S(VarietyDescriptor(Catalog.BI, (N["assoc"],)), 2)
    assert cert.coalgebra is not None and len(cert.coalgebra) == 2


def test_no_finite_final_binar_coalgebra():
    assert orc.final_over_S(BI, 2).coalgebra is None


def test_product_pseudocoalgebra_classifies_cones():
    R1 = orc.FiniteCoalgebra(("a",), {"beta": {"a": (0, "a")}})
    R2 = orc.FiniteCoalgebra(("b", "c"), {"beta": {"b": (0, "c"), "c": (0, "b")}})
    S = product_pseudo(psi(R1), psi(R2))
    for Z in small_coalgebras(3):
        anchors = [
            a for a in itertools.product(S.base, repeat=len(Z))
            if orc._anchor_ok(Z.coops, dict(zip(Z.carrier, a)), S, BI.sig.ops)
        ]
        assert len(anchors) == len(orc.morphisms(Z, R1)) * len(orc.morphisms(Z, R2))
    cert = orc.final_over_S(BI, 2, S)
    assert cert.coalgebra is not None
    pool = [Z for m in range(3) for Z in orc.enumerate_coalgebras(BI, m, S)]
    assert all(len(orc.morphisms(Z, cert.coalgebra)) == 1 for Z in pool)


def test_zeroary_unary_over_set_is_empty():
    sig = Signature((("a0", 0), ("a1", 1)))
    d = VarietyDescriptor(Catalog.ZEROARY_UNARY, (), sig)
    assert [len(orc.enumerate_coalgebras(d, m)) for m in range(3)] == [1, 0, 0]
    assert len(orc.final_over_S(d, 2).coalgebra) == 0


def test_largest_subcoalgebra():
    R = orc.FiniteCoalgebra(("a", "b", "c"), {"beta": {"a": (1, "a"), "b": (0, "a"), "c": (1, "c")}})
    sub, trace = orc.largest_subcoalgebra(R, [N["no11"]])
    assert sub.carrier == ()
    sub, _ = orc.largest_subcoalgebra(R, [N["no10"]])
    assert set(sub.carrier) == {"a", "b", "c"}


def test_json_round_trip():
    for R in small_coalgebras(2):
        again = orc.FiniteCoalgebra.from_json(json.dumps(R.to_json()))
        assert again.encoding() == R.encoding()


def test_invalid_coalgebra_rejected():
    with pytest.raises(ValueError):
        orc.FiniteCoalgebra(("a",), {"beta": {"a": (2, "a")}})
    with pytest.raises(ValueError):
        orc.FiniteCoalgebra(("a", "b"), {"beta": {"a": (0, "a")}})


@given(st.sampled_from(list(N)), st.integers(1, 2))
def test_vectorised_identity_check_matches_direct(name, a):
    for R in small_coalgebras(2):
        elements, ops = orc.hom_algebra(R, a)
        assert orc.hom_algebra_satisfies(R, a, N[name]) == orc.algebra_satisfies(elements, ops, N[name])


def test_hom_algebras_satisfy_cosatisfied_identities():
    for R in small_coalgebras(3):
        for name, ident in N.items():
            if orc.cosatisfies(R, ident):
                assert orc.hom_algebra_satisfies(R, 3, ident)
