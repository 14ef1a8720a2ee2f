import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treefair.errors import CapacityError
from treefair.harness import (
    Discrepancy,
    SweepSpec,
    check_observations,
    check_three_cycle,
    cross_validate,
    enumerate_matrices,
    run_sweep,
    verify_observations,
)
from treefair.matrix import is_irreducible, max_row_sum, parse_matrix

from conftest import matrices


@pytest.mark.parametrize(
    "spec, count",
    [
        (SweepSpec((2,), (2,), 1), 9),
        (SweepSpec((1,), (2,), 1), 1),
        (SweepSpec((2,), (2,), 1, max_row_sum=1), 4),
        (SweepSpec((2,), (1,), 1, ("no-zero-rows", "s_A<=k")), 4),
        (SweepSpec((2,), (2,), 1, ()), 16),
    ],
)
def test_enumeration_counts(spec, count):
    assert len(list(enumerate_matrices(spec))) == count


def test_enumeration_order_is_numeric():
    codes = [A.encoding for A in enumerate_matrices(SweepSpec((3,), (2,), 1))]
    assert codes == sorted(codes)
    assert len(codes) == 7**3


def test_enumeration_requires_sample_above_four():
    with pytest.raises(CapacityError):
        list(enumerate_matrices(SweepSpec((5,), (2,), 1)))
    sampled = list(enumerate_matrices(SweepSpec((5,), (2,), 1, sample=50, seed=3)))
    again = list(enumerate_matrices(SweepSpec((5,), (2,), 1, sample=50, seed=3)))
    assert sampled == again and 0 < len(sampled) <= 50


def test_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec((), (2,), 1)
    with pytest.raises(ValueError):
        SweepSpec((2,), (2,), 0)
    with pytest.raises(ValueError):
        SweepSpec((2,), (2,), 1, ("bogus",))


def test_cross_validate_fair_three_symbols():
    assert cross_validate(parse_matrix("110|001|100"), 2, 6) == []


def test_cross_validate_small_k_counterexample():
    found = cross_validate(parse_matrix("0111|1011|1101|1110"), 2, 4)
    assert len(found) == 12
    assert {x.kind for x in found} == {"missing relation"}
    assert all(x.check == "completeness" and not x.asserted for x in found)


def test_cross_validate_trivial():
    assert cross_validate(parse_matrix("1"), 1, 2) == []


def test_discrepancy_replays():
    found = cross_validate(parse_matrix("0111|1011|1101|1110"), 2, 4)
    assert all(x.replay() for x in found)
    fake = Discrepancy("110|001|100", 2, "missing relation", "completeness", "nothing", 6)
    assert not fake.replay()


def test_observation_discrepancy_replays():
    found = check_observations(parse_matrix("10|10"), 2, 3)
    assert found and all(x.observation == "fair-implies-primitive" for x in found)
    assert all(x.replay() for x in found)


def test_three_cycle_never_fair():
    assert check_three_cycle(6) == []


def test_observations_hold_on_irreducible_matrices():
    spec = SweepSpec((1, 2, 3), (1, 2), 3, ("no-zero-rows", "irreducible-only"))
    assert verify_observations(spec) == []


def test_fair_implies_primitive_fails_only_on_reducible():
    found = verify_observations(SweepSpec((1, 2, 3), (1, 2), 3))
    assert {x.observation for x in found} == {"fair-implies-primitive"}
    assert not any(is_irreducible(parse_matrix(x.matrix)) for x in found)


def test_sweep_small():
    report = run_sweep(SweepSpec((2,), (2,), 4))
    assert len(report.entries) == 9
    assert report.failures == []
    doc = report.to_dict()
    assert doc["summary"].startswith("matrices=9")


def test_sweep_parallel_matches_sequential():
    spec = SweepSpec((3,), (1, 3), 4)
    assert run_sweep(spec, workers=2) == run_sweep(spec)


@settings(max_examples=60, deadline=None)
@given(matrices(max_d=4), st.integers(1, 3))
def test_soundness_random_four_symbols(A, k):
    found = cross_validate(A, k, 4)
    assert [x for x in found if x.check in ("soundness", "verdict", "termination")] == []
    if k >= max_row_sum(A):
        assert found == []
