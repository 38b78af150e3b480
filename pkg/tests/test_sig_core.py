import pytest
from hypothesis import given, strategies as st

from coalgtower.sig_core import (
    NAMED_IDENTITIES,
    App,
    Catalog,
    InitialFunctor,
    ParseError,
    Proj,
    Signature,
    VarietyDescriptor,
    Zeroary,
    check_term,
    classify_initial_functor,
    derived_zeroary,
    instance_exists,
    parse_identity,
    parse_term,
    term_depth,
)


def terms(max_var=3):
    leaves = st.integers(0, max_var).map(Proj)
    return st.recursive(leaves, lambda kids: st.tuples(kids, kids).map(lambda p: App("beta", p)), max_leaves=8)


@given(terms())
def test_term_text_round_trip(t):
    assert parse_term(str(t)) == t


@given(terms(), st.integers(0, 6), st.integers(0, 8))
def test_instance_exists_matches_depth(t, j, k):
    if j > k:
        with pytest.raises(ValueError):
            instance_exists(t, j, k)
    else:
        assert instance_exists(t, j, k) == (k >= j + term_depth(t))


def test_named_identities_parse_back():
    for ident in NAMED_IDENTITIES.values():
        again = parse_identity(str(ident))
        assert again == ident
    assert NAMED_IDENTITIES["assoc"].depth == 2
    assert NAMED_IDENTITIES["no11"].arity == 4


@pytest.mark.parametrize("bad", ["(beta (p 0)", "(= (p 0) (p 1))x", "(p -1)", ""])
def test_parse_errors(bad):
    with pytest.raises((ParseError, ValueError)):
        parse_identity(bad) if bad.startswith("(=") else parse_term(bad)


def test_unknown_symbol_rejected_against_signature():
    t = parse_term("(frob (p 0) (p 1))")
    with pytest.raises(ValueError):
        check_term(t, VarietyDescriptor(Catalog.BI).sig, 2)


def test_identity_arity_too_small():
    with pytest.raises(ValueError):
        parse_identity("(= (p 0) (p 3) :arity 2)")


def test_descriptor_json_round_trip():
    d = VarietyDescriptor(Catalog.BI, (NAMED_IDENTITIES["no11"],))
    assert VarietyDescriptor.from_json(d.to_json()) == d
    se = VarietyDescriptor(Catalog.SE)
    assert NAMED_IDENTITIES["assoc"] in se.all_identities


def test_zeroary_unary_needs_signature():
    with pytest.raises(ValueError):
        VarietyDescriptor(Catalog.ZEROARY_UNARY)
    with pytest.raises(ValueError):
        VarietyDescriptor(Catalog.ZEROARY_UNARY, (), Signature((("b", 2),)))


def test_signature_validation():
    with pytest.raises(ValueError):
        Signature((("a", 1), ("a", 2)))
    sig = Signature((("a", 0), ("u", 1)))
    assert Signature.from_json(sig.to_json()) == sig
    assert "u" in sig and sig.arity("u") == 1


def test_initial_functor_chart():
    assert classify_initial_functor(Zeroary.NONE, Zeroary.NONE) is InitialFunctor.STAR
    assert classify_initial_functor(Zeroary.ONE, Zeroary.NONE) is InitialFunctor.IF
    assert derived_zeroary(VarietyDescriptor(Catalog.GROUP)) is Zeroary.ONE
    zu = VarietyDescriptor(Catalog.ZEROARY_UNARY, (), Signature((("a0", 0), ("a1", 1))))
    assert derived_zeroary(zu) is Zeroary.MANY
