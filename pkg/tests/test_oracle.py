import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treefair.errors import CapacityError, ZeroRowError
from treefair.matrix import parse_matrix
from treefair.oracle import (
    Caps,
    all_configurations,
    brute_force_family,
    enumerate_labelings_naive,
    level_matrix_supports,
    oracle_degrees,
    oracle_membership,
    oracle_relations_at,
    poss_families,
    poss_family,
    poss_root,
    relation_degree,
    render_configuration,
)

from conftest import brute_force_rows, matrices

FIG = parse_matrix("110|001|100")
SMALL_K = parse_matrix("0111|1011|1101|1110")


@pytest.mark.parametrize("xi, expected", [("12", {1}), ("33", {2}), ("21", {1}), ("22", {1}), ("31", set())])
def test_poss_root_depth_one(xi, expected):
    assert poss_root(FIG, 2, 1, xi) == expected


def test_poss_root_depth_zero():
    for c in FIG.symbols:
        assert poss_root(FIG, 2, 0, str(c)) == {c}


def test_poss_root_length_mismatch():
    with pytest.raises(ValueError):
        poss_root(FIG, 2, 1, "123")


def test_poss_family_full_matrix():
    assert poss_family(parse_matrix("11|11"), 2, 1).sets == {frozenset({1, 2})}


def test_poss_family_small_k_depth_two():
    assert poss_family(SMALL_K, 2, 2).sets == {frozenset({1, 2, 3, 4})}


def test_poss_family_three_symbols_depth_one():
    # Brute force: collect the root symbols of every configuration in D^{L_1}.
    brute = set()
    rows = {b: brute_force_rows(FIG, 2, 1, b) for b in FIG.symbols}
    for xi in itertools.product("123", repeat=2):
        brute.add(frozenset(b for b in FIG.symbols if "".join(xi) in rows[b]))
    assert poss_family(FIG, 2, 1).sets == brute
    assert brute == {frozenset(), frozenset({1}), frozenset({2}), frozenset({1, 3})}


@settings(max_examples=40, deadline=None)
@given(matrices(max_d=3, nonempty=False), st.integers(1, 2), st.integers(0, 2))
def test_family_matches_brute_force_labelings(A, k, n):
    if A.d ** (sum(k**m for m in range(n + 1)) - 1) > 5000:
        return
    rows = {b: brute_force_rows(A, k, n, b) for b in A.symbols}
    brute = set()
    for xi in itertools.product(range(1, A.d + 1), repeat=k**n):
        word = "".join(map(str, xi))
        brute.add(frozenset(b for b in A.symbols if word in rows[b]))
        assert poss_root(A, k, n, xi) == frozenset(b for b in A.symbols if word in rows[b])
    assert poss_family(A, k, n).sets == brute
    for b in A.symbols:
        assert enumerate_labelings_naive(A, k, n, b) == rows[b]


@settings(max_examples=30, deadline=None)
@given(matrices(max_d=3, nonempty=False), st.integers(1, 3), st.integers(0, 2))
def test_family_recursion_matches_all_configurations(A, k, n):
    if A.d ** (k**n) > 20000:
        return
    assert poss_family(A, k, n).masks == brute_force_family(A, k, n)


@pytest.mark.parametrize("n, count", [(1, 4), (2, 16), (3, 16)])
def test_small_k_relations(n, count):
    rel = oracle_relations_at(SMALL_K, 2, n)
    assert len(rel.pairs) == count
    if n == 1:
        assert rel.pairs == {(i, i) for i in range(1, 5)}


def test_three_symbols_fair_at_four():
    assert len(oracle_relations_at(FIG, 2, 4).pairs) == 9
    assert len(oracle_relations_at(FIG, 2, 3).pairs) < 9


def test_membership_examples():
    assert oracle_membership(SMALL_K, 2, 2) == (True, True)
    assert oracle_membership(parse_matrix("11|11"), 2, 1) == (True, True)
    for n in range(1, 7):
        assert oracle_membership(parse_matrix("011|100|010"), 2, n) == (False, False)


def test_membership_rejects_zero_rows_and_depth_zero():
    with pytest.raises(ZeroRowError):
        oracle_membership(parse_matrix("10|00"), 2, 1)
    with pytest.raises(ValueError):
        oracle_membership(FIG, 2, 0)


def test_one_dimensional_tree_matches_primitivity():
    # k = 1: fair at n exactly when every row of A^n is the same; here A^7 > 0.
    A = parse_matrix("0111|1000|0100|0010")
    assert oracle_membership(A, 1, 7) == (True, True)


@pytest.mark.parametrize("i, j, expected", [(1, 2, 4), (3, 1, 1), (2, 1, 2), (1, 3, 3), (1, 1, 0)])
def test_relation_degree(i, j, expected):
    assert relation_degree(FIG, 2, i, j, 6) == expected


def test_relation_degree_absent():
    assert relation_degree(parse_matrix("011|100|010"), 2, 1, 2, 8) is None
    assert relation_degree(FIG, 2, 2, 2, 0) == 0


def test_naive_enumeration_examples():
    A = parse_matrix("11|10")
    assert enumerate_labelings_naive(A, 2, 1, 1) == {"11", "12", "21", "22"}
    assert enumerate_labelings_naive(A, 2, 1, 2) == {"11"}
    assert enumerate_labelings_naive(A, 2, 0, 2) == {"2"}


def test_level_matrix_examples():
    table = level_matrix_supports(parse_matrix("11|10"), 2, 1)
    assert table.astype(int).tolist() == [[1, 1, 1, 1], [1, 0, 0, 0]]
    assert level_matrix_supports(parse_matrix("11|11"), 2, 1).all()


def test_level_matrix_three_symbols_depth_two():
    table = level_matrix_supports(FIG, 2, 2)
    configs = all_configurations(3, 2, 2)
    assert table.shape == (3, 81)
    for col, xi in enumerate(configs):
        assert set(np.flatnonzero(table[:, col]) + 1) == poss_root(FIG, 2, 2, xi)


@settings(max_examples=40, deadline=None)
@given(matrices(max_d=4), st.integers(1, 3))
def test_relations_monotone_transitive_reflexive(A, k):
    fams = poss_families(A, k, 6)
    prev = frozenset()
    for fam in fams:
        pairs = fam.relation_pairs()
        assert prev <= pairs
        assert all((i, i) in pairs for i in A.symbols)
        for (i, j), (j2, l) in itertools.product(pairs, pairs):
            if j == j2:
                assert (i, l) in pairs
        prev = pairs


def test_degrees_table():
    degrees = oracle_degrees(FIG, 2, 6)
    assert {p: v for p, v in degrees.items() if p[0] != p[1]} == {
        (3, 1): 1, (2, 1): 2, (2, 3): 2, (1, 3): 3, (1, 2): 4, (3, 2): 4,
    }


def test_caps():
    with pytest.raises(CapacityError) as exc:
        poss_family(parse_matrix("1" * 9 + "|" + "|".join(["1" * 9] * 8)), 2, 1)
    assert exc.value.cap == "d"
    with pytest.raises(CapacityError):
        poss_family(FIG, 5, 1)
    with pytest.raises(CapacityError):
        poss_family(FIG, 2, 13)
    with pytest.raises(CapacityError):
        level_matrix_supports(FIG, 2, 5)
    relaxed = Caps().with_overrides("d=10, n=20")
    assert relaxed.max_d == 10 and relaxed.max_depth == 20 and relaxed.max_k == 4
    assert len(poss_families(FIG, 2, 15, relaxed)) == 16


def test_caps_from_env(monkeypatch):
    monkeypatch.setenv("TREEFAIR_CAPS", "k=6,leaves=10")
    caps = Caps.from_env()
    assert caps.max_k == 6 and caps.leaf_guard == 10
    with pytest.raises(ValueError):
        Caps().with_overrides("q=1")


def test_render_configuration():
    assert render_configuration((1, 2), 3) == "12"
    assert render_configuration((1, 10), 10) == "1,10"
