import math

import numpy as np
import pytest

from conftest import EPSILONS, bundles, ids, inst_b_values
from revkit.errors import (
    DimensionMismatchError,
    InvalidAllocationError,
    InvalidCapacityError,
    InvalidKError,
    InvalidOrderError,
    NegativeValueError,
    NonFiniteValueError,
    UnknownReviewerError,
)
from revkit.model import (
    Allocation,
    Order,
    ViolationKind,
    as_order,
    bundle_value,
    check_ef1,
    is_complete,
    new_instance,
    validate_allocation,
)


def test_new_instance_broadcasts_scalar_capacity(inst_a):
    assert inst_a.n == 3
    assert inst_a.m == 6
    assert inst_a.k == 2
    assert inst_a.capacities.tolist() == [1] * 6


def test_instance_arrays_are_read_only(inst_a):
    with pytest.raises(ValueError):
        inst_a.values[0, 0] = 100.0
    with pytest.raises(ValueError):
        inst_a.capacities[0] = 5


def test_negative_value_names_the_cell():
    with pytest.raises(NegativeValueError) as err:
        new_instance([[1, 2], [3, -0.5]], 1, 1)
    assert (err.value.paper, err.value.reviewer, err.value.value) == (1, 1, -0.5)


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_non_finite_values_rejected(bad):
    with pytest.raises(NonFiniteValueError):
        new_instance([[1, bad]], 1, 1)


def test_capacity_length_must_match_reviewers():
    with pytest.raises(DimensionMismatchError):
        new_instance([[1, 2, 3]], [1, 1], 1)


def test_ragged_values_rejected():
    with pytest.raises((DimensionMismatchError, ValueError)):
        new_instance([[1, 2, 3], [1, 2]], 1, 1)


@pytest.mark.parametrize("caps", [[0, 1], [1, -2], [1.5, 1]])
def test_invalid_capacities(caps):
    with pytest.raises(InvalidCapacityError):
        new_instance([[1, 2]], caps, 1)


@pytest.mark.parametrize("k", [0, 3, -1])
def test_k_must_lie_in_one_to_m(k):
    with pytest.raises(InvalidKError):
        new_instance([[1, 2]], 1, k)


def test_same_as_compares_contents(inst_a):
    twin = new_instance(np.array(inst_a.values), 1, 2)
    assert inst_a.same_as(twin)
    assert not inst_a.same_as(new_instance(inst_a.values, 1, 1))


def test_as_order_rejects_duplicates_and_out_of_range():
    with pytest.raises(InvalidOrderError):
        as_order([0, 1, 0], 3)
    with pytest.raises(InvalidOrderError):
        as_order([3], 3)
    assert as_order([2, 0], 3) == Order((2, 0))


def test_order_helpers():
    order = Order(ids(2, 1)).append(2)
    assert order.to_one_based() == [2, 1, 3]
    assert order.positions() == {1: 0, 0: 1, 2: 2}
    assert len(order) == 3 and order[0] == 1


def test_allocation_canonical_form_keeps_first_pick():
    alloc = Allocation.from_bundles([[3, 2], [0, 5]])
    assert alloc.bundles == ((2, 3), (0, 5))
    assert alloc.first_reviewer == (3, 0)
    assert alloc.to_one_based() == {"1": [3, 4], "2": [1, 6]}


def test_bundle_value(inst_a):
    assert bundle_value(inst_a, 0, ids(4, 3)) == 14.0
    assert bundle_value(inst_a, 2, []) == 0.0
    with pytest.raises(UnknownReviewerError):
        bundle_value(inst_a, 0, [6])
    with pytest.raises(InvalidOrderError):
        bundle_value(inst_a, 3, ids(1))
    with pytest.raises(InvalidOrderError):
        bundle_value(inst_a, -1, ids(1))


def test_bundle_value_is_additive():
    rng = np.random.default_rng(4)
    for _ in range(100):
        m = int(rng.integers(2, 9))
        inst = new_instance(rng.random((3, m)), 1, m)
        reviewers = rng.permutation(m).tolist()
        cut = int(rng.integers(0, m + 1))
        left, right = reviewers[:cut], reviewers[cut:]
        whole = bundle_value(inst, 1, reviewers)
        assert whole == pytest.approx(bundle_value(inst, 1, left) + bundle_value(inst, 1, right), abs=1e-12)
        assert whole == pytest.approx(sum(inst.values[1, r] for r in reviewers), abs=1e-12)
        assert bundle_value(inst, 1, reviewers[::-1]) == whole


def test_validate_allocation_collects_every_violation(inst_a):
    alloc = Allocation(
        bundles=((0, 0), (0, 1, 2), (7,)),
        first_reviewer=(0, 0, 7),
    )
    kinds = [v.kind for v in validate_allocation(inst_a, alloc).violations]
    assert ViolationKind.DUPLICATE_IN_BUNDLE in kinds
    assert ViolationKind.BUNDLE_TOO_LARGE in kinds
    assert ViolationKind.UNKNOWN_REVIEWER in kinds
    assert ViolationKind.OVER_CAPACITY in kinds


def test_validate_allocation_paper_count(inst_a):
    result = validate_allocation(inst_a, Allocation.empty(2))
    assert [v.kind for v in result.violations] == [ViolationKind.PAPER_COUNT]


def test_valid_and_complete(inst_b, naive_b_alloc):
    assert validate_allocation(inst_b, naive_b_alloc).ok
    assert is_complete(inst_b, naive_b_alloc)
    assert not is_complete(inst_b, Allocation.empty(4))


@pytest.mark.parametrize("eps", EPSILONS)
def test_check_ef1_finds_the_naive_round_robin_violation(eps, naive_b_alloc):
    report = check_ef1(new_instance(inst_b_values(eps), 2, 3), naive_b_alloc)
    assert report.violating_pairs == (ids(4, 2),)
    assert report.to_one_based() == [[4, 2]]


@pytest.mark.parametrize("eps", EPSILONS)
def test_check_ef1_repaired_allocation(eps, repaired_b_alloc):
    inst = new_instance(inst_b_values(eps), 2, 3)
    assert validate_allocation(inst, repaired_b_alloc).ok
    assert check_ef1(inst, repaired_b_alloc).count == 0


def test_check_ef1_restricted_to_papers(inst_b, naive_b_alloc):
    assert check_ef1(inst_b, naive_b_alloc, papers=ids(1, 2, 3)).count == 0
    assert check_ef1(inst_b, naive_b_alloc, papers=ids(2, 4)).count == 1
    with pytest.raises(InvalidOrderError):
        check_ef1(inst_b, naive_b_alloc, papers=ids(2, 5))


def ef1_pairs_by_brute_force(values, alloc):
    pairs = []
    for i, own_bundle in enumerate(alloc.bundles):
        own = sum(values[i][r] for r in own_bundle)
        for j, other in enumerate(alloc.bundles):
            if i == j or not other:
                continue
            if all(sum(values[i][x] for x in other if x != r) > own for r in other):
                pairs.append((i, j))
    return tuple(pairs)


def test_check_ef1_matches_brute_force():
    rng = np.random.default_rng(17)
    for trial in range(300):
        n = int(rng.integers(2, 7))
        m = int(rng.integers(1, 9))
        k = int(rng.integers(1, min(3, m) + 1))
        # integer scores keep every sum exact
        values = rng.integers(0, 10, size=(n, m)).tolist()
        inst = new_instance(values, n, k)
        alloc = Allocation.from_bundles(
            [rng.permutation(m)[: int(rng.integers(0, k + 1))].tolist() for _ in range(n)]
        )
        assert check_ef1(inst, alloc).violating_pairs == ef1_pairs_by_brute_force(values, alloc), trial


def test_check_ef1_refuses_invalid_allocation(inst_a):
    alloc = Allocation.from_bundles(bundles([1], [1], []))
    with pytest.raises(InvalidAllocationError) as err:
        check_ef1(inst_a, alloc)
    assert err.value.violations[0].kind is ViolationKind.OVER_CAPACITY
