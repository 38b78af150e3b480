import pytest
from hypothesis import given, strategies as st

from coalgtower.sig_core import Catalog, ParseError
from coalgtower.words import (
    GenId,
    Word,
    apply_hom,
    coprojection,
    cotuple,
    format_word,
    gen_word,
    grp,
    inverse,
    multiply,
    normal_form,
    parse_word,
)

gens = st.builds(lambda n, t: GenId(n, t), st.sampled_from(["x", "y", "z"]), st.tuples(*[st.integers(0, 1)] * 2))
idem_gens = st.builds(lambda t: GenId("x", t, idempotent=True), st.tuples(*[st.integers(0, 1)] * 2))
group_letters = st.lists(st.tuples(gens, st.sampled_from([1, -1])), max_size=8)
bi_trees = st.recursive(idem_gens, lambda kids: st.tuples(kids, kids), max_leaves=6)


@given(group_letters)
def test_group_normal_form_is_reduced(seq):
    w = normal_form(Catalog.GROUP, seq)
    assert all(not (a == b and e == -f) for (a, e), (b, f) in zip(w.payload, w.payload[1:]))
    assert normal_form(Catalog.GROUP, w.payload) == w


@given(group_letters, group_letters)
def test_group_inverse(u, v):
    a, b = normal_form(Catalog.GROUP, u), normal_form(Catalog.GROUP, v)
    assert multiply(a, inverse(a)) == Word(Catalog.GROUP, ())
    assert inverse(multiply(a, b)) == multiply(inverse(b), inverse(a))


@given(group_letters, group_letters, group_letters)
def test_group_associative(u, v, w):
    a, b, c = (normal_form(Catalog.GROUP, s) for s in (u, v, w))
    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


@given(bi_trees)
def test_bi_idempotent_generators_collapse(t):
    w = normal_form(Catalog.BI, t)
    doubled = normal_form(Catalog.BI, (t, t))
    if isinstance(w.payload, GenId):
        assert doubled == w
    else:
        assert doubled != w


@given(bi_trees)
def test_bi_text_round_trip(t):
    w = normal_form(Catalog.BI, t)
    assert parse_word(format_word(w), Catalog.BI, idempotent=True) == w


@given(st.lists(idem_gens, min_size=1, max_size=8))
def test_se_text_round_trip(seq):
    w = normal_form(Catalog.SE, seq)
    assert parse_word(format_word(w), Catalog.SE, idempotent=True) == w


@given(group_letters)
def test_cotuple_of_coprojections_is_identity(seq):
    w = normal_form(Catalog.GROUP, seq)
    two = coprojection(1, 2, w)
    back = cotuple([lambda g: gen_word(Catalog.GROUP, g), lambda g: gen_word(Catalog.GROUP, g)], two)
    assert back == w


def test_coprojection_range():
    w = gen_word(Catalog.SE, GenId("x"))
    with pytest.raises(ValueError):
        coprojection(2, 2, w)
    assert coprojection(0, 1, w) == w


def test_apply_hom_group_to_free_abelian():
    x, y = GenId("x"), GenId("y")
    w = grp(x, y, (x, -1), (y, -1))
    img = apply_hom({x: gen_word(Catalog.FG_AB, x), y: gen_word(Catalog.FG_AB, y)}, w)
    assert img == normal_form(Catalog.FG_AB, [])


@pytest.mark.parametrize("text", ["x0..x1", "(x0.x1", "x0.", "3x"])
def test_parse_word_errors(text):
    with pytest.raises(ParseError):
        parse_word(text, Catalog.BI if text.startswith("(") else Catalog.SE, idempotent=True)
