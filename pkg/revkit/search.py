"""
Order search for RRR: greedy construction of a picking order (optionally
subsampling candidates each step and spreading evaluations over workers), the
brute-force optimal-order oracle, and the approximation-bound check that
compares the two.
"""
from __future__ import annotations

import itertools
import logging
import math
from contextlib import nullcontext
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from joblib import Parallel, delayed

from .config import DEFAULT_ORACLE_MAX
from .errors import InvalidParamsError, TooLargeError
from .model import Instance, Order
from .rrr import preference_lists, usw_rrr
from .sampling import SAMPLER_VERSION, make_rng, sample_without_replacement

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GrrrConfig:
    subsample_size: int | None = None
    seed: int = 0
    parallelism: int = 1

    def __post_init__(self):
        if self.subsample_size is not None and self.subsample_size < 1:
            raise InvalidParamsError(f"subsample_size must be positive, got {self.subsample_size}")
        if self.parallelism < 1:
            raise InvalidParamsError(f"parallelism must be at least 1, got {self.parallelism}")


@dataclass(frozen=True)
class SearchResult:
    order: Order
    usw: float
    per_step_usw: tuple[float, ...]
    config: GrrrConfig = field(default_factory=GrrrConfig)

    def to_json(self) -> dict:
        # parallelism is left out: results never depend on it
        cfg = asdict(self.config)
        cfg.pop("parallelism")
        cfg["sampler"] = SAMPLER_VERSION
        return {
            "order": self.order.to_one_based(),
            "usw": self.usw,
            "per_step_usw": list(self.per_step_usw),
            "config": cfg,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SearchResult":
        cfg = data.get("config", {})
        return cls(
            order=Order(tuple(int(p) - 1 for p in data["order"])),
            usw=float(data["usw"]),
            per_step_usw=tuple(float(v) for v in data["per_step_usw"]),
            config=GrrrConfig(subsample_size=cfg.get("subsample_size"), seed=int(cfg.get("seed", 0))),
        )


def _score_candidates(inst: Instance, prefix: tuple[int, ...], candidates, prefs) -> list[tuple[float, int]]:
    return [(usw_rrr(inst, prefix + (c,), prefs), c) for c in candidates]


def _best(scored: list[tuple[float, int]]) -> tuple[float, int]:
    # Highest value, ties to the smallest paper id; independent of chunking.
    return max(scored, key=lambda s: (s[0], -s[1]))


def greedy_rrr(inst: Instance, cfg: GrrrConfig | None = None) -> SearchResult:
    """
    Build an order by repeatedly appending the remaining paper whose addition
    gives the highest RRR welfare.

    Args:
        inst: The problem instance
        cfg: Subsampling, seed and worker-count settings

    Returns:
        SearchResult with the full order, its USW and the USW after every step
    """
    cfg = cfg or GrrrConfig()
    if cfg.subsample_size is not None and cfg.subsample_size > inst.n:
        raise InvalidParamsError(f"subsample_size {cfg.subsample_size} exceeds n = {inst.n}")

    rng = make_rng(cfg.seed)
    prefs = preference_lists(inst)
    prefix: tuple[int, ...] = ()
    remaining = list(range(inst.n))
    per_step = []

    pool = Parallel(n_jobs=cfg.parallelism) if cfg.parallelism > 1 else nullcontext()
    with pool as parallel:
        for step in range(inst.n):
            if cfg.subsample_size is not None and cfg.subsample_size < len(remaining):
                candidates = sorted(sample_without_replacement(rng, remaining, cfg.subsample_size))
            else:
                candidates = remaining

            if parallel is None or len(candidates) < 2:
                scored = _score_candidates(inst, prefix, candidates, prefs)
            else:
                chunks = [c.tolist() for c in np.array_split(candidates, cfg.parallelism) if len(c)]
                parts = parallel(delayed(_score_candidates)(inst, prefix, ch, prefs) for ch in chunks)
                scored = [s for part in parts for s in part]

            value, paper = _best(scored)
            prefix = prefix + (paper,)
            remaining.remove(paper)
            per_step.append(value)
            logger.debug("GRRR step %d: paper %d, USW %.6f (%d candidates)",
                         step + 1, paper + 1, value, len(candidates))
    return SearchResult(
        order=Order(prefix),
        usw=per_step[-1],
        per_step_usw=tuple(per_step),
        config=cfg,
    )


def greedy_rrr_runs(inst: Instance, cfg: GrrrConfig, runs: int) -> list[SearchResult]:
    """Repeat the greedy search with seeds cfg.seed, cfg.seed + 1, ..., one result per run."""
    if runs < 1:
        raise InvalidParamsError(f"runs must be at least 1, got {runs}")
    if cfg.subsample_size is None and runs > 1:
        logger.info("No subsampling: all %d runs will find the same order", runs)
    return [greedy_rrr(inst, replace(cfg, seed=cfg.seed + i)) for i in range(runs)]


def exhaustive_best_order(inst: Instance, max_papers: int = DEFAULT_ORACLE_MAX) -> tuple[Order, float]:
    """Best full order by enumeration; ties go to the lexicographically smallest order."""
    if inst.n > max_papers:
        raise TooLargeError(
            f"Exhaustive search over {inst.n}! orders exceeds the bound of n <= {max_papers}; "
            f"use greedy search with --subsample instead"
        )
    prefs = preference_lists(inst)
    best_order, best_value = None, -math.inf
    # permutations() yields in lexicographic order, so strict > keeps the smallest tie
    for perm in itertools.permutations(range(inst.n)):
        value = usw_rrr(inst, perm, prefs)
        if value > best_value:
            best_order, best_value = perm, value
    return Order(best_order), best_value


@dataclass(frozen=True)
class ApproximationReport:
    f_alg: float
    f_opt: float
    ratio: float
    gamma: float
    alpha: float
    violated: bool
    zero_optimum: bool = False

    def to_json(self) -> dict:
        return asdict(self)


def approximation_report(inst: Instance, alg: SearchResult, opt_value: float,
                         gamma: float, alpha: float) -> ApproximationReport:
    """
    Check f(alg) * (1 + gamma^2) >= f(opt) with f = USW_RRR * |order|^alpha.
    A ratio below 1 means either gamma is underestimated or something is wrong.
    """
    if gamma < 1:
        raise InvalidParamsError(f"gamma must be at least 1, got {gamma}")
    if alpha <= 0:
        raise InvalidParamsError(f"alpha must be positive, got {alpha}")
    f_alg = alg.usw * len(alg.order) ** alpha
    f_opt = opt_value * inst.n ** alpha
    if f_opt == 0:
        logger.info("Optimal value is 0; bound holds trivially")
        return ApproximationReport(f_alg, f_opt, math.inf, gamma, alpha, violated=False, zero_optimum=True)
    ratio = f_alg * (1 + gamma ** 2) / f_opt
    if ratio < 1:
        logger.warning("Approximation bound violated: ratio %.6f < 1 (gamma %.6f)", ratio, gamma)
    return ApproximationReport(f_alg, f_opt, ratio, gamma, alpha, violated=ratio < 1)
