"""
Problem instances, orders and allocations, plus the additive valuation,
constraint validation and EF1 checks every other module builds on.

Paper and reviewer ids are 0-based inside the library; files, JSON and the
command line use 1-based ids.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidAllocationError,
    InvalidCapacityError,
    InvalidKError,
    InvalidOrderError,
    NegativeValueError,
    NonFiniteValueError,
    UnknownReviewerError,
)


@dataclass(frozen=True, eq=False)
class Instance:
    """Immutable problem statement: n x m affinities, reviewer capacities, bundle limit k."""

    values: np.ndarray
    capacities: np.ndarray
    k: int

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    def same_as(self, other: "Instance") -> bool:
        return (
            self.k == other.k
            and np.array_equal(self.values, other.values)
            and np.array_equal(self.capacities, other.capacities)
        )


def new_instance(values, capacities, k: int) -> Instance:
    """
    Validate raw inputs and build an Instance.

    Args:
        values: n x m matrix of non-negative finite affinities
        capacities: per-reviewer upper bounds c_r, or one integer for every reviewer
        k: maximum number of reviewers per paper

    Returns:
        A read-only Instance
    """
    vals = np.array(values, dtype=np.float64)
    if vals.ndim != 2 or vals.shape[0] < 1 or vals.shape[1] < 1:
        raise DimensionMismatchError(f"Expected a non-empty n x m matrix, got shape {vals.shape}")
    n, m = vals.shape

    if not np.all(np.isfinite(vals)):
        row, col = np.argwhere(~np.isfinite(vals))[0]
        raise NonFiniteValueError(f"Non-finite affinity for paper {row + 1}, reviewer {col + 1}")
    if np.any(vals < 0):
        row, col = np.argwhere(vals < 0)[0]
        raise NegativeValueError(int(row), int(col), float(vals[row, col]))

    caps = np.asarray(capacities)
    if caps.ndim == 0:
        caps = np.full(m, caps)
    if caps.ndim != 1 or caps.shape[0] != m:
        raise DimensionMismatchError(f"Expected {m} reviewer capacities, got shape {caps.shape}")
    if caps.dtype.kind == "f":
        if not np.all(np.isfinite(caps)) or np.any(caps != np.floor(caps)):
            raise InvalidCapacityError("Reviewer capacities must be integers")
    elif caps.dtype.kind not in "iu":
        raise InvalidCapacityError(f"Reviewer capacities must be integers, got {caps.dtype}")
    caps = caps.astype(np.int64)
    if np.any(caps < 1):
        raise InvalidCapacityError(f"Reviewer {int(np.argmin(caps)) + 1} has capacity below 1")

    if isinstance(k, bool) or int(k) != k or not 1 <= k <= m:
        raise InvalidKError(f"k must be an integer in [1, {m}], got {k}")

    vals.flags.writeable = False
    caps.flags.writeable = False
    return Instance(values=vals, capacities=caps, k=int(k))


@dataclass(frozen=True)
class Order:
    """A picking sequence of distinct paper ids, possibly partial."""

    papers: tuple[int, ...] = ()

    def __iter__(self):
        return iter(self.papers)

    def __len__(self) -> int:
        return len(self.papers)

    def __getitem__(self, idx):
        return self.papers[idx]

    def append(self, paper: int) -> "Order":
        return Order(self.papers + (paper,))

    def positions(self) -> dict[int, int]:
        return {p: pos for pos, p in enumerate(self.papers)}

    def to_one_based(self) -> list[int]:
        return [p + 1 for p in self.papers]


def as_order(papers: Order | Iterable[int], n: int) -> Order:
    """Coerce a sequence to an Order, rejecting duplicate or out-of-range ids."""
    order = papers if isinstance(papers, Order) else Order(tuple(int(p) for p in papers))
    seen = set()
    for p in order.papers:
        if not 0 <= p < n:
            raise InvalidOrderError(f"Paper id {p + 1} outside [1, {n}]")
        if p in seen:
            raise InvalidOrderError(f"Paper {p + 1} appears twice in the order")
        seen.add(p)
    return order


@dataclass(frozen=True)
class Allocation:
    """
    Per-paper reviewer bundles in canonical (ascending) form, the first reviewer
    each paper received, and whether the mechanism stopped before k rounds.
    """

    bundles: tuple[tuple[int, ...], ...]
    first_reviewer: tuple[int | None, ...]
    halted_early: bool = False

    @classmethod
    def from_bundles(cls, bundles: Sequence[Iterable[int]], first_reviewer=None, halted_early=False):
        # Bundles arrive in pick order; the first entry becomes F_i unless given.
        raw = [tuple(int(r) for r in b) for b in bundles]
        canon = tuple(tuple(sorted(b)) for b in raw)
        if first_reviewer is None:
            first = tuple(b[0] if b else None for b in raw)
        else:
            first = tuple(None if r is None else int(r) for r in first_reviewer)
        return cls(bundles=canon, first_reviewer=first, halted_early=bool(halted_early))

    @classmethod
    def empty(cls, n: int) -> "Allocation":
        return cls(bundles=((),) * n, first_reviewer=(None,) * n)

    @property
    def n(self) -> int:
        return len(self.bundles)

    def to_one_based(self) -> dict[str, list[int]]:
        return {str(i + 1): [r + 1 for r in b] for i, b in enumerate(self.bundles)}


class ViolationKind(Enum):
    DUPLICATE_IN_BUNDLE = "duplicate-in-bundle"
    BUNDLE_TOO_LARGE = "bundle-too-large"
    OVER_CAPACITY = "over-capacity"
    UNKNOWN_REVIEWER = "unknown-reviewer"
    PAPER_COUNT = "paper-count"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    paper: int | None = None
    reviewer: int | None = None

    def describe(self) -> str:
        parts = [self.kind.value]
        if self.paper is not None:
            parts.append(f"paper {self.paper + 1}")
        if self.reviewer is not None:
            parts.append(f"reviewer {self.reviewer + 1}")
        return " ".join(parts)


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class Ef1Report:
    violating_pairs: tuple[tuple[int, int], ...] = field(default_factory=tuple)

    @property
    def count(self) -> int:
        return len(self.violating_pairs)

    def to_one_based(self) -> list[list[int]]:
        return [[i + 1, j + 1] for i, j in self.violating_pairs]


def additive_value(row: Sequence[float], reviewers: Iterable[int]) -> float:
    # Ascending reviewer id, left to right, so sums are bit-reproducible.
    total = 0.0
    for r in sorted(reviewers):
        total += row[r]
    return total


def bundle_value(inst: Instance, paper: int, bundle: Iterable[int]) -> float:
    """v_paper(bundle) under additive valuations; 0 for the empty bundle."""
    if not 0 <= paper < inst.n:
        raise InvalidOrderError(f"Paper id {paper + 1} outside [1, {inst.n}]")
    bundle = list(bundle)
    for r in bundle:
        if not 0 <= r < inst.m:
            raise UnknownReviewerError(f"Reviewer id {r + 1} outside [1, {inst.m}]")
    return additive_value(inst.values[paper].tolist(), bundle)


def validate_allocation(inst: Instance, alloc: Allocation) -> ValidationResult:
    """Collect every constraint violation; an empty result means the allocation is valid."""
    violations = []
    if alloc.n != inst.n:
        violations.append(Violation(ViolationKind.PAPER_COUNT))
    load = np.zeros(inst.m, dtype=np.int64)
    for paper, bundle in enumerate(alloc.bundles):
        seen = set()
        for r in bundle:
            if not 0 <= r < inst.m:
                violations.append(Violation(ViolationKind.UNKNOWN_REVIEWER, paper, r))
                continue
            if r in seen:
                violations.append(Violation(ViolationKind.DUPLICATE_IN_BUNDLE, paper, r))
                continue
            seen.add(r)
            load[r] += 1
        if len(bundle) > inst.k:
            violations.append(Violation(ViolationKind.BUNDLE_TOO_LARGE, paper))
    for r in np.flatnonzero(load > inst.capacities):
        violations.append(Violation(ViolationKind.OVER_CAPACITY, reviewer=int(r)))
    return ValidationResult(tuple(violations))


def is_complete(inst: Instance, alloc: Allocation) -> bool:
    return all(len(b) == inst.k for b in alloc.bundles)


def check_ef1(inst: Instance, alloc: Allocation, papers: Iterable[int] | None = None) -> Ef1Report:
    """
    List every ordered pair (i, j) where i envies j by more than one reviewer.

    Args:
        inst: The problem instance
        alloc: A valid allocation
        papers: Optional subset of papers; only pairs inside it are checked

    Returns:
        An Ef1Report with the violating pairs in (i, j) lexicographic order
    """
    result = validate_allocation(inst, alloc)
    if not result.ok:
        raise InvalidAllocationError(
            "Cannot check EF1 on an invalid allocation: "
            + "; ".join(v.describe() for v in result.violations),
            result.violations,
        )
    scope = sorted(set(papers)) if papers is not None else range(inst.n)
    for p in scope:
        if not 0 <= p < inst.n:
            raise InvalidOrderError(f"Paper id {p + 1} outside [1, {inst.n}]")
    rows = inst.values.tolist()
    pairs = []
    for i in scope:
        own = additive_value(rows[i], alloc.bundles[i])
        for j in scope:
            other = alloc.bundles[j]
            if i == j or not other:
                continue
            best = min(additive_value(rows[i], [x for x in other if x != r]) for r in other)
            if best > own:
                pairs.append((i, j))
    return Ef1Report(tuple(pairs))
