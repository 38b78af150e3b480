import pytest
from hypothesis import given, strategies as st

from coalgtower.oracle import FiniteCoalgebra
from coalgtower.sig_core import NAMED_IDENTITIES, CapabilityError, Catalog, VarietyDescriptor, parse_term
from coalgtower.tower import (
    Path,
    Tower,
    TowerCache,
    build_level,
    extract_final,
    product_pseudo,
    psi,
    x_gen,
)
from coalgtower.words import format_word, gen_word

N = NAMED_IDENTITIES


def bi(*names):
    return VarietyDescriptor(Catalog.BI, tuple(N[n] for n in names))


SE = VarietyDescriptor(Catalog.SE)


def test_fibonacci_counts():
    T = Tower(Catalog.SET, bi("no11"), L=12)
    assert [len(T.level(k)) for k in range(13)] == [1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377]


def test_no10_and_assoc_counts():
    T = Tower(Catalog.SET, bi("no10"), L=8)
    assert [len(T.level(k)) for k in range(9)] == list(range(1, 10))
    A = Tower(Catalog.SET, bi("assoc"), L=8)
    assert [len(A.level(k)) for k in range(6)] == [1, 2, 2, 2, 2, 2]


def test_full_cantor_tower():
    T = Tower(Catalog.SET, bi(), L=4)
    assert [len(T.level(k)) for k in range(7)] == [2**k for k in range(7)]


def test_se_tower_frozen_counts():
    assert [len(Tower(Catalog.SE, SE, L=10).level(k)) for k in range(4)] == [1, 20, 134, 32]
    assert len(Tower(Catalog.SE, SE, L=12).level(2)) == 334


def test_bi_towers_frozen_counts():
    T = Tower(Catalog.BI, bi(), L=4)
    assert [len(T.level(k)) for k in range(3)] == [1, 48, 1024]
    U = Tower(Catalog.BI, SE, L=6)
    assert [len(U.level(k)) for k in range(4)] == [1, 1136, 1136, 1136]


@pytest.mark.parametrize("c", [Catalog.SET, Catalog.SE, Catalog.BI])
def test_connecting_maps_land_in_lower_level(c):
    T = Tower(c, SE if c is not Catalog.SET else bi("no11"), L=5)
    for k in range(1, 4):
        lower = T.level(k - 1).carrier
        assert all(T.level(k).connecting(w) in lower for w in T.level(k).carrier)


terms = st.recursive(
    st.integers(0, 2).map(lambda i: parse_term(f"(p {i})")),
    lambda kids: st.tuples(kids, kids).map(lambda p: parse_term(f"(beta {p[0]} {p[1]})")),
    max_leaves=5,
)


@given(terms, st.data())
def test_recursive_instance_matches_walk(s, data):
    from coalgtower.sig_core import term_depth

    T = Tower(Catalog.SE, SE, L=8)
    depth = term_depth(s)
    j = data.draw(st.integers(0, 2))
    k = j + depth + data.draw(st.integers(0, 1))
    if k == 0 or k > 3:
        return
    w = data.draw(st.sampled_from(T.level(k).sorted()))
    choose_low = lambda s_, j_, k_: j_ + term_depth(s_) - 1 if term_depth(s_) else k_ - 1
    direct = T.instance(s, j, k, w)
    assert T.instance_recursive(s, j, k, w) == direct
    assert T.instance_recursive(s, j, k, w, choose_low) == direct


def test_instance_example_on_cantor_strings():
    T = Tower(Catalog.SET, bi(), L=4)
    s = parse_term("(beta (p 0) (beta (p 1) (p 2)))")
    w = gen_word(Catalog.SET, x_gen((1, 0, 1)))
    assert format_word(T.instance(s, 1, 3, w)) == "x11"
    with pytest.raises(ValueError):
        T.instance(s, 2, 3, w)


def test_violation_reasons_name_the_identity():
    T = Tower(Catalog.SET, bi("no11"), L=4)
    w = gen_word(Catalog.SET, x_gen((1, 1, 0)))
    reasons = T.violations(w, 3)
    assert reasons and "no11" in " ".join(reasons)


def test_capability_errors():
    with pytest.raises(CapabilityError):
        Tower(Catalog.GROUP, bi())
    with pytest.raises(CapabilityError):
        Tower(Catalog.SET, VarietyDescriptor(Catalog.MONOID))


def test_cache_is_transparent(tmp_path):
    cold = Tower(Catalog.SE, SE, L=8, cache=TowerCache(tmp_path))
    first = [cold.level(k).carrier for k in range(3)]
    assert list(tmp_path.glob("*.words"))
    warm = Tower(Catalog.SE, SE, L=8, cache=TowerCache(tmp_path))
    assert [warm.level(k).carrier for k in range(3)] == first
    plain = Tower(Catalog.SE, SE, L=8)
    assert [plain.level(k).carrier for k in range(3)] == first


def test_cache_env_variable(tmp_path, monkeypatch):
    monkeypatch.setenv("COALG_CACHE", str(tmp_path))
    assert TowerCache().dir == tmp_path


def test_extract_final_assoc():
    fa = extract_final(Tower(Catalog.SET, bi("assoc"), L=4), 6)
    assert fa.counts == [1, 2, 2, 2, 2, 2, 2]
    assert fa.bijective_from == 1
    assert fa.coalgebra is not None and len(fa.coalgebra) == 2


def test_psi_of_one_point_coalgebra_is_not_trivial_marker():
    R = FiniteCoalgebra(("a",), {"beta": {"a": (0, "a")}})
    S = psi(R)
    assert not S.is_trivial
    T = Tower(Catalog.SET, bi(), S=S, L=4)
    # a coalgebra over psi(R) only follows copy 0
    assert [len(T.level(k)) for k in range(4)] == [1, 1, 1, 1]
    assert T.level(3).sorted() == [Path(("a",) * 4, (0, 0, 0))]


def test_path_model_over_product():
    R1 = FiniteCoalgebra(("a",), {"beta": {"a": (0, "a")}})
    R2 = FiniteCoalgebra(("b", "c"), {"beta": {"b": (1, "c"), "c": (1, "b")}})
    S = product_pseudo(psi(R1), psi(R2))
    T = Tower(Catalog.SET, bi(), S=S, L=4)
    assert len(T.level(3)) == 0


def test_build_level_helper():
    assert len(build_level("set", bi("no11"), None, 5)) == 13
