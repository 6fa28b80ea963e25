"""
Welfare and inequality metrics for an allocation: mean USW, Nash welfare with
zero handling, minimum score, EF1 violations, Gini, envy and low-percentile blocks.
"""
from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .errors import AllZeroScoresError, InvalidParamsError
from .model import Allocation, Instance, additive_value, check_ef1

logger = logging.getLogger(__name__)

DEFAULT_FRACTIONS = (0.1, 0.25)


def paper_scores(inst: Instance, alloc: Allocation) -> np.ndarray:
    rows = inst.values.tolist()
    return np.array([additive_value(rows[i], b) for i, b in enumerate(alloc.bundles)], dtype=np.float64)


def usw_mean(inst: Instance, alloc: Allocation) -> float:
    return float(sum(paper_scores(inst, alloc).tolist()) / inst.n)


def nsw_of(scores: np.ndarray) -> tuple[float, float, int]:
    """(geometric mean, geometric mean of positive scores, number of zero scores)."""
    positive = scores[scores > 0]
    zeros = int(scores.size - positive.size)
    nsw_positive = float(np.exp(np.mean(np.log(positive)))) if positive.size else 0.0
    return (0.0 if zeros else nsw_positive), nsw_positive, zeros


def nsw(inst: Instance, alloc: Allocation) -> tuple[float, float, int]:
    return nsw_of(paper_scores(inst, alloc))


def gini_of(scores: np.ndarray) -> float:
    total = float(scores.sum())
    if total <= 0:
        raise AllZeroScoresError("Gini coefficient is undefined when every paper scores 0")
    n = scores.size
    ranked = np.sort(scores)
    # sum_i sum_j |s_i - s_j| = 2 * sum_i (2i - n - 1) s_(i) over ascending ranks i = 1..n
    weights = 2 * np.arange(1, n + 1) - n - 1
    return float(np.dot(weights, ranked) / (n * total))


def gini(inst: Instance, alloc: Allocation) -> float:
    return gini_of(paper_scores(inst, alloc))


def envy_matrix(inst: Instance, alloc: Allocation) -> np.ndarray:
    """Entry (i, j) is v_i(A_j)."""
    rows = inst.values.tolist()
    return np.array([[additive_value(rows[i], b) for b in alloc.bundles] for i in range(inst.n)])


def total_envy(inst: Instance, alloc: Allocation) -> tuple[float, float]:
    """(sum of positive envy over pairs i != j, literal signed sum of v_i(A_j) - v_i(A_i))."""
    values = envy_matrix(inst, alloc)
    diff = values - np.diag(values)[:, None]
    np.fill_diagonal(diff, 0.0)
    return float(np.maximum(diff, 0.0).sum()), float(diff.sum())


def percentile_block_of(scores: np.ndarray, fraction: float) -> tuple[float, float]:
    if not 0 < fraction <= 1:
        raise InvalidParamsError(f"fraction must be in (0, 1], got {fraction}")
    # round() guards against products like 0.3 * 10 = 3.0000000000000004
    size = max(1, math.ceil(round(fraction * scores.size, 9)))
    block = np.sort(scores)[:size]
    return float(block.mean()), float(block.std())


def percentile_block(inst: Instance, alloc: Allocation, fraction: float) -> tuple[float, float]:
    return percentile_block_of(paper_scores(inst, alloc), fraction)


@dataclass(frozen=True)
class MetricsReport:
    usw_mean: float
    nsw: float
    nsw_positive: float
    zero_score_count: int
    min_score: float
    ef1_violations: int
    gini: float
    total_envy: float
    literal_envy_sum: float
    percentile_blocks: tuple[tuple[float, float, float], ...]

    def to_json(self) -> dict:
        data = asdict(self)
        data["percentile_blocks"] = [
            {"fraction": f, "mean": mean, "std": std} for f, mean, std in self.percentile_blocks
        ]
        return data


def full_report(inst: Instance, alloc: Allocation, fractions=DEFAULT_FRACTIONS) -> MetricsReport:
    scores = paper_scores(inst, alloc)
    nsw_all, nsw_pos, zeros = nsw_of(scores)
    try:
        gini_value = gini_of(scores)
    except AllZeroScoresError:
        # every score equal (all zero): perfect equality
        logger.debug("All paper scores are 0; reporting Gini as 0")
        gini_value = 0.0
    envy, literal = total_envy(inst, alloc)
    blocks = tuple((f, *percentile_block_of(scores, f)) for f in fractions)
    return MetricsReport(
        usw_mean=float(sum(scores.tolist()) / inst.n),
        nsw=nsw_all,
        nsw_positive=nsw_pos,
        zero_score_count=zeros,
        min_score=float(scores.min()),
        ef1_violations=check_ef1(inst, alloc).count,
        gini=gini_value,
        total_envy=envy,
        literal_envy_sum=literal,
        percentile_blocks=blocks,
    )


SUMMARY_FIELDS = ("usw_mean", "nsw", "min_score", "ef1_violations", "gini", "total_envy")


def summarize_runs(reports: Sequence[MetricsReport]) -> dict[str, tuple[float, float]]:
    """Mean and population standard deviation of each headline metric over repeated runs."""
    if not reports:
        raise InvalidParamsError("Need at least one run to summarize")
    summary = {}
    for name in SUMMARY_FIELDS:
        values = np.array([getattr(r, name) for r in reports], dtype=np.float64)
        summary[name] = (float(values.mean()), float(values.std()))
    return summary
