import random

import pytest
from hypothesis import given, strategies as st

from coalgtower import sese
from coalgtower.sese import MESS, P, X00, X11, RGen, RWord, _absorbs, rword
from coalgtower.sig_core import Catalog, ParseError, VarietyDescriptor
from coalgtower.tower import Tower
from coalgtower.words import format_word, parse_word

rgens = st.one_of(
    st.sampled_from([X00, X11]),
    st.builds(RGen, st.sampled_from(["P", "Q"]), st.integers(0, 3)),
)


def rewrite_randomly(gens, rng):
    """Apply a randomly chosen applicable relation until none applies."""
    gens = list(gens)
    while True:
        spots = [i for i in range(len(gens) - 1) if _absorbs(gens[i], gens[i + 1]) is not None]
        if not spots:
            return tuple(gens)
        i = rng.choice(spots)
        gens[i : i + 2] = [_absorbs(gens[i], gens[i + 1])]


@given(st.lists(rgens, min_size=1, max_size=10), st.integers(0, 2**16))
def test_rewriting_is_confluent(gens, seed):
    assert rewrite_randomly(gens, random.Random(seed)) == rword(gens).gens


@given(st.lists(rgens, min_size=1, max_size=6), st.lists(rgens, min_size=1, max_size=6), st.lists(rgens, min_size=1, max_size=6))
def test_rword_product_associative(a, b, c):
    u, v, w = rword(a), rword(b), rword(c)
    assert (u * v) * w == u * (v * w)


@given(st.lists(rgens, min_size=1, max_size=6))
def test_expand_factor_round_trip(gens):
    w = rword(gens)
    assert sese.factor_R(sese.expand(w)) == w


@given(st.lists(rgens, min_size=1, max_size=5))
def test_expansions_are_members(gens):
    e = sese.expand(rword(gens))
    assert sese.r_member(e)
    assert all(sese.structural_properties(e).values())


def test_lmr_tables():
    assert sese.LMR_R == {(0, 0): 0, (0, 1): 1, (1, 0): 2, (1, 1): 2}
    assert sese.LMR_L == {(0, 0): 0, (0, 1): 0, (1, 0): 1, (1, 1): 2}
    assert sese.LMR_M == {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 2}


def test_p_and_q_membership():
    for i in range(4):
        assert sese.r_member(sese.p_word(i)) and sese.r_member(sese.q_word(i))
    assert format_word(sese.p_word(0)) == "x00.x01.x10.x11"
    assert not sese.r_member(MESS)


def test_mess_passes_two_maps_but_not_the_third():
    r, l, m = sese.lmr_images(MESS)
    assert r == l and m != r


def test_tower_level_two_is_a_two_map_equalizer():
    T = Tower(Catalog.SE, VarietyDescriptor(Catalog.SE), L=12)
    level2 = T.level(2).carrier
    R = sese.r_language(12)
    assert R <= level2
    assert (len(R), len(level2)) == (268, 334)
    short = parse_word("x00.x01.x00.x10.x01.x11.x10.x11", Catalog.SE, idempotent=True)
    assert short in level2 and not sese.r_member(short)
    assert min(len(w) for w in level2 - R) == 8


def test_language_equals_normal_forms():
    assert sese.r_language(12) == sese.level2_rword_language(12)


def test_factor_rejects_non_members():
    with pytest.raises(ValueError):
        sese.factor_R(MESS)


def test_beta_on_p1():
    assert sese.format_tagged(sese.beta_R(RWord((P(1),)))) == "P1^0.X00^1.X11^0.P1^1"


@pytest.mark.parametrize("i", range(4))
def test_coassociativity_p_case(i):
    left, right = sese.coassoc_sides(RWord((P(i),)))
    assert left == right == sese.expected_p_lmr(i)


def test_beta_agrees_with_lift_to_level_three():
    for w in sese.all_rwords(3, 2):
        assert sese.beta_R(w) == sese.beta_R_via_lift(w)


def test_parse_rword():
    assert str(sese.parse_rword("X00.P1.X11")) == "P1"
    with pytest.raises(ParseError):
        sese.parse_rword("X00.Z3")


def test_semigroup_counts_and_idempotents():
    counts = [len(sese.enumerate_semigroups(n)) for n in (1, 2, 3)]
    assert counts == [1, 5, 24]
    # every finite semigroup has an idempotent, so no finite example has an empty functor value
    assert all(A.idempotents() for n in (1, 2, 3) for A in sese.enumerate_semigroups(n))


def test_semigroup_json_rejects_non_associative():
    with pytest.raises(ValueError):
        sese.FiniteSemigroup.from_json({"elements": ["a", "b"], "table": [[1, 0], [0, 0]]})


def test_e_value_matches_hom_set_small():
    for A in sese.enumerate_semigroups(2):
        assert sese.compare_e_with_homs(A, 2).ok


def test_identity_functor_image():
    assert sese.expand(sese.identity_functor_image()) == sese.identity_tower_images(2)[2]


def test_w_functor_morphisms():
    rng = random.Random(7)
    for _ in range(5):
        w = sese.random_w(rng, 2, 2, 4)
        N = max(2, sese.block_index(w) + 1)
        f = sese.morphism_from_E(w, 2, 2, N)
        for A in sese.enumerate_semigroups(2):
            assert sese.is_tuple_hom(f, sese.e_value(A, N), sese.w_functor(w, 2, 2, A))


def test_x00_coalgebra_functor():
    A = sese.enumerate_semigroups(2)[0]
    rep = sese.x00_coalgebra(A, [0] * len(A) if A.mul(0, 0) == 0 else list(range(len(A))))
    assert rep.coassociative and rep.functor_associative and rep.functor_closed
