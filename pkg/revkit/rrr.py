"""
Reviewer Round Robin: k rounds of picking in a fixed paper order, where a pick
is refused whenever an earlier attempter of that reviewer would then envy the
picker by more than one reviewer. Also the naive constrained round robin used
as the counterexample baseline.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ParseError
from .model import Allocation, Instance, Order, additive_value, as_order

logger = logging.getLogger(__name__)


class Outcome(Enum):
    ASSIGNED = "assigned"
    REFUSED_DUPLICATE = "refused-duplicate"
    REFUSED_CAPACITY = "refused-capacity"
    REFUSED_OBJECTION = "refused-objection"


@dataclass(frozen=True)
class TraceEvent:
    round: int
    paper: int
    reviewer: int
    outcome: Outcome
    objector: int | None = None

    def to_line(self) -> str:
        outcome = self.outcome.value
        if self.outcome is Outcome.REFUSED_OBJECTION:
            outcome = f"{outcome}({self.objector + 1})"
        return f"{self.round},{self.paper + 1},{self.reviewer + 1},{outcome}"

    @classmethod
    def from_line(cls, line: str, lineno: int = 0) -> "TraceEvent":
        parts = line.strip().split(",")
        if len(parts) != 4:
            raise ParseError("Expected round,paper,reviewer,outcome", row=lineno)
        try:
            rnd, paper, reviewer = (int(p) for p in parts[:3])
        except ValueError:
            raise ParseError("Non-integer field in trace line", row=lineno) from None
        text = parts[3]
        objector = None
        if text.startswith(Outcome.REFUSED_OBJECTION.value + "(") and text.endswith(")"):
            objector = int(text[len(Outcome.REFUSED_OBJECTION.value) + 1:-1]) - 1
            text = Outcome.REFUSED_OBJECTION.value
        try:
            outcome = Outcome(text)
        except ValueError:
            raise ParseError(f"Unknown outcome {parts[3]!r}", row=lineno, col=4) from None
        return cls(rnd, paper - 1, reviewer - 1, outcome, objector)


@dataclass(frozen=True)
class RrrTrace:
    events: tuple[TraceEvent, ...] = ()

    def to_text(self) -> str:
        return "".join(e.to_line() + "\n" for e in self.events)

    @classmethod
    def from_text(cls, text: str) -> "RrrTrace":
        lines = [(no, ln) for no, ln in enumerate(text.splitlines(), start=1) if ln.strip()]
        return cls(tuple(TraceEvent.from_line(ln, no) for no, ln in lines))


def replay_trace(trace: RrrTrace, n: int, halted_early: bool = False) -> Allocation:
    """Rebuild the allocation from the assigned events of a trace."""
    bundles = [[] for _ in range(n)]
    for event in trace.events:
        if event.outcome is Outcome.ASSIGNED:
            bundles[event.paper].append(event.reviewer)
    return Allocation.from_bundles(bundles, halted_early=halted_early)


def preference_lists(inst: Instance) -> list[list[int]]:
    # Decreasing value, ties by ascending reviewer id (stable sort on -v).
    return np.argsort(-inst.values, axis=1, kind="stable").tolist()


def _run(inst: Instance, order: Order, prefs, trace: list | None) -> Allocation:
    rows = inst.values.tolist()
    caps = inst.capacities.tolist()
    n, m = inst.n, inst.m
    position = order.positions()

    bundles: list[list[int]] = [[] for _ in range(n)]
    owned: list[set[int]] = [set() for _ in range(n)]
    first: list[int | None] = [None] * n
    own_value = [0.0] * n
    load = [0] * m
    # dicts keep insertion order, so objectors are consulted oldest first
    objectors: list[dict[int, None]] = [{} for _ in range(m)]

    def objection(i: int, r: int) -> int | None:
        candidate = bundles[i] + [r]
        discounted = candidate[1:]  # F_i is the head of the pick list (r itself when A_i is empty)
        for j in objectors[r]:
            if j == i:
                continue
            if position[j] < position[i]:
                envied = additive_value(rows[j], candidate)
            else:
                envied = additive_value(rows[j], discounted)
            if envied > own_value[j]:
                return j
        return None

    for rnd in range(1, inst.k + 1):
        for i in order:
            assigned = False
            for r in prefs[i]:
                if r in owned[i]:
                    if trace is not None:
                        trace.append(TraceEvent(rnd, i, r, Outcome.REFUSED_DUPLICATE))
                    continue
                objectors[r][i] = None
                if load[r] >= caps[r]:
                    if trace is not None:
                        trace.append(TraceEvent(rnd, i, r, Outcome.REFUSED_CAPACITY))
                    continue
                j = objection(i, r)
                if j is not None:
                    if trace is not None:
                        trace.append(TraceEvent(rnd, i, r, Outcome.REFUSED_OBJECTION, j))
                    continue
                bundles[i].append(r)
                owned[i].add(r)
                if first[i] is None:
                    first[i] = r
                load[r] += 1
                own_value[i] = additive_value(rows[i], bundles[i])
                if trace is not None:
                    trace.append(TraceEvent(rnd, i, r, Outcome.ASSIGNED))
                assigned = True
                break
            if not assigned:
                logger.debug("Paper %d exhausted all reviewers in round %d; halting", i + 1, rnd)
                return Allocation.from_bundles(bundles, first, halted_early=True)
    return Allocation.from_bundles(bundles, first)


def reviewer_round_robin(inst: Instance, order, prefs=None) -> tuple[Allocation, RrrTrace]:
    """
    Run RRR on `order` and return the allocation with its full attempt trace.

    Args:
        inst: The problem instance
        order: Order or sequence of distinct 0-based paper ids
        prefs: Optional precomputed preference lists (see preference_lists)

    Returns:
        (allocation, trace); allocation.halted_early is set when some paper
        could take nobody on its turn
    """
    order = as_order(order, inst.n)
    events: list[TraceEvent] = []
    alloc = _run(inst, order, prefs if prefs is not None else preference_lists(inst), events)
    return alloc, RrrTrace(tuple(events))


def run_rrr(inst: Instance, order, prefs=None) -> Allocation:
    """RRR without recording a trace; the hot path of order search."""
    order = as_order(order, inst.n)
    return _run(inst, order, prefs if prefs is not None else preference_lists(inst), None)


def usw(inst: Instance, alloc: Allocation) -> float:
    rows = inst.values.tolist()
    return sum(additive_value(rows[i], b) for i, b in enumerate(alloc.bundles))


def usw_rrr(inst: Instance, order, prefs=None) -> float:
    """Un-normalized USW of the RRR allocation for `order`."""
    return usw(inst, run_rrr(inst, order, prefs))


def naive_round_robin(inst: Instance, order) -> Allocation:
    """
    k rounds where each paper takes its best reviewer it does not hold and
    that still has capacity. No objection checks; a paper with nothing left
    simply loses its turn.
    """
    order = as_order(order, inst.n)
    prefs = preference_lists(inst)
    caps = inst.capacities.tolist()
    bundles: list[list[int]] = [[] for _ in range(inst.n)]
    load = [0] * inst.m
    for _ in range(inst.k):
        for i in order:
            for r in prefs[i]:
                if r not in bundles[i] and load[r] < caps[r]:
                    bundles[i].append(r)
                    load[r] += 1
                    break
    return Allocation.from_bundles(bundles)
