"""
Sets of (paper, position) tuples and the set function built on them.

A tuple set maps to a picking order by sorting on position (then paper) and
keeping each paper's first tuple. The objective f(P) = USW_RRR(order(P)) * |P|^alpha
is monotone for a large enough alpha; the estimators below measure that alpha
and how far f is from submodular (gamma).
"""
from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Callable, Iterable

from .errors import (
    ElementPresentError,
    InvalidParamsError,
    NoValidSamplesError,
    TooLargeError,
    UnboundedAlphaError,
    UnboundedGammaError,
)
from .model import Instance, Order
from .rrr import preference_lists, usw_rrr
from .sampling import make_rng, sample_without_replacement

logger = logging.getLogger(__name__)

ALPHA_FLOOR = 0.01
EXHAUSTIVE_MAX_PAPERS = 3

Element = tuple[int, int]


@dataclass(frozen=True)
class TupleSet:
    elements: frozenset[Element] = frozenset()

    @classmethod
    def of(cls, *pairs: Element) -> "TupleSet":
        return cls(frozenset((int(p), int(q)) for p, q in pairs))

    @classmethod
    def from_order(cls, order: Iterable[int]) -> "TupleSet":
        return cls(frozenset((p, pos) for pos, p in enumerate(order)))

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, e) -> bool:
        return e in self.elements

    def __iter__(self):
        return iter(sorted(self.elements))

    def add(self, e: Element) -> "TupleSet":
        return TupleSet(self.elements | {e})


def ground_set(n: int) -> list[Element]:
    return [(paper, pos) for paper in range(n) for pos in range(n)]


def is_independent(ts: TupleSet) -> bool:
    """True when no paper and no position repeats (both partition matroids)."""
    papers = {p for p, _ in ts.elements}
    positions = {q for _, q in ts.elements}
    return len(papers) == len(positions) == len(ts)


def set_to_order(ts: TupleSet) -> Order:
    seen = set()
    papers = []
    for paper, _ in sorted(ts.elements, key=lambda e: (e[1], e[0])):
        if paper not in seen:
            seen.add(paper)
            papers.append(paper)
    return Order(tuple(papers))


Objective = Callable[[TupleSet], float]


class RrrObjective:
    """f(P) = USW_RRR(order(P)) * |P|^alpha with an RRR result cache keyed by order."""

    def __init__(self, inst: Instance, alpha: float):
        if alpha <= 0:
            raise InvalidParamsError(f"alpha must be positive, got {alpha}")
        self.inst = inst
        self.alpha = alpha
        self._prefs = preference_lists(inst)
        self._usw: dict[tuple[int, ...], float] = {}

    def usw(self, order: Iterable[int]) -> float:
        key = tuple(order)
        if key not in self._usw:
            self._usw[key] = usw_rrr(self.inst, key, self._prefs)
        return self._usw[key]

    def __call__(self, ts: TupleSet) -> float:
        if not len(ts):
            return 0.0
        return self.usw(set_to_order(ts).papers) * len(ts) ** self.alpha


def f_value(inst: Instance, ts: TupleSet, alpha: float) -> float:
    return RrrObjective(inst, alpha)(ts)


def marginal_gain(inst: Instance, ts: TupleSet, e: Element, alpha: float,
                  objective: Objective | None = None) -> float:
    if e in ts:
        raise ElementPresentError(f"Element ({e[0] + 1}, {e[1] + 1}) already in the set")
    f = objective or RrrObjective(inst, alpha)
    return f(ts.add(e)) - f(ts)


@dataclass(frozen=True)
class EstimationConfig:
    num_samples: int = 1000
    seed: int = 0
    max_prefix: int | None = None
    margin: float = 0.01
    zero_tolerance: float = 1e-12
    # gamma samples over all subsets of E; False restricts to prefix-shaped chains
    arbitrary_subsets: bool = True

    def __post_init__(self):
        if self.num_samples < 1:
            raise InvalidParamsError(f"num_samples must be at least 1, got {self.num_samples}")
        if self.margin < 0:
            raise InvalidParamsError(f"margin must be non-negative, got {self.margin}")
        if self.max_prefix is not None and self.max_prefix < 0:
            raise InvalidParamsError(f"max_prefix must be non-negative, got {self.max_prefix}")


def alpha_constraint(usw_before: float, usw_after: float, size: int) -> float | None:
    """
    Smallest alpha with usw_after * (size+1)^alpha >= usw_before * size^alpha.
    None when any alpha works, inf when none does.
    """
    if size == 0 or usw_after >= usw_before:
        return None
    if usw_after <= 0:
        return math.inf
    return math.log(usw_before / usw_after) / math.log((size + 1) / size)


@dataclass(frozen=True)
class AlphaSample:
    order: tuple[int, ...]
    paper: int
    usw_before: float
    usw_after: float
    required_alpha: float | None


def _max_order_length(n: int, max_prefix: int | None) -> int:
    limit = n - 1
    return limit if max_prefix is None else min(max_prefix, limit)


def sample_alpha_constraints(inst: Instance, cfg: EstimationConfig) -> list[AlphaSample]:
    """Draw (partial order O, paper i not in O) pairs and the alpha each one requires."""
    rng = make_rng(cfg.seed)
    f = RrrObjective(inst, 1.0)
    max_len = _max_order_length(inst.n, cfg.max_prefix)
    samples = []
    for _ in range(cfg.num_samples):
        length = int(rng.integers(0, max_len + 1))
        drawn = sample_without_replacement(rng, range(inst.n), length + 1)
        order, paper = tuple(drawn[:length]), drawn[length]
        before = f.usw(order)
        after = f.usw(order + (paper,))
        samples.append(AlphaSample(order, paper, before, after, alpha_constraint(before, after, length)))
    return samples


def _alpha_from(required: Iterable[float], margin: float) -> float:
    required = list(required)
    if not required:
        return ALPHA_FLOOR
    return (1 + margin) * max(required)


def estimate_alpha(inst: Instance, cfg: EstimationConfig | None = None) -> float:
    """
    Sampled estimate of the alpha that makes f monotone, (1 + margin) times the
    largest requirement seen, or ALPHA_FLOOR when no sample constrains it.
    """
    cfg = cfg or EstimationConfig()
    samples = sample_alpha_constraints(inst, cfg)
    required = []
    for s in samples:
        if s.required_alpha is None:
            continue
        if math.isinf(s.required_alpha):
            raise UnboundedAlphaError(s.order, s.paper, s.usw_before)
        required.append(s.required_alpha)
    alpha = _alpha_from(required, cfg.margin)
    logger.info("alpha estimate %.6f from %d samples (%d constraining)", alpha, len(samples), len(required))
    return alpha


def _mask_to_set(mask: int, ground: list[Element]) -> TupleSet:
    return TupleSet(frozenset(e for bit, e in enumerate(ground) if mask >> bit & 1))


def exhaustive_alpha(inst: Instance, margin: float = 0.01) -> float:
    """Exact monotonizing alpha over every X in E and e outside X (n <= 3)."""
    if inst.n > EXHAUSTIVE_MAX_PAPERS:
        raise TooLargeError(f"Exhaustive alpha needs n <= {EXHAUSTIVE_MAX_PAPERS}, got {inst.n}")
    ground = ground_set(inst.n)
    f = RrrObjective(inst, 1.0)
    required = []
    for mask in range(1 << len(ground)):
        x = _mask_to_set(mask, ground)
        before = f.usw(set_to_order(x).papers)
        for bit, e in enumerate(ground):
            if mask >> bit & 1:
                continue
            after_order = set_to_order(x.add(e)).papers
            need = alpha_constraint(before, f.usw(after_order), len(x))
            if need is None:
                continue
            if math.isinf(need):
                raise UnboundedAlphaError(set_to_order(x).papers, e[0], before)
            required.append(need)
    return _alpha_from(required, margin)


@dataclass(frozen=True)
class GammaDiagnostics:
    samples: int
    valid: int
    skipped_zero_gain: int
    max_ratio: float
    margin: float
    seed: int

    def to_json(self) -> dict:
        return asdict(self)


def _draw_nested(rng, inst: Instance, ground: list[Element], cfg: EstimationConfig):
    if cfg.arbitrary_subsets:
        max_size = len(ground) - 1
        if cfg.max_prefix is not None:
            max_size = min(cfg.max_prefix, max_size)
        size = int(rng.integers(0, max_size + 1))
        drawn = sample_without_replacement(rng, ground, size + 1)
        y, e = drawn[:size], drawn[size]
        x = [t for t in y if rng.random() < 0.5]
        return TupleSet(frozenset(x)), TupleSet(frozenset(y)), e
    length = int(rng.integers(0, _max_order_length(inst.n, cfg.max_prefix) + 1))
    drawn = sample_without_replacement(rng, range(inst.n), length + 1)
    cut = int(rng.integers(0, length + 1))
    return TupleSet.from_order(drawn[:cut]), TupleSet.from_order(drawn[:length]), (drawn[length], length)


def estimate_gamma(inst: Instance, alpha: float, cfg: EstimationConfig | None = None,
                   objective: Objective | None = None) -> tuple[float, GammaDiagnostics]:
    """
    Sampled estimate of gamma = max rho_e(Y) / rho_e(X) over nested X in Y, e outside Y.

    Args:
        inst: The problem instance
        alpha: Exponent of the monotonizing factor |P|^alpha
        cfg: Sample count, seed, size cap, margin and zero tolerance
        objective: Set function to analyse; defaults to the RRR objective

    Returns:
        (gamma, diagnostics); gamma is (1 + margin) * max ratio, never below 1
    """
    cfg = cfg or EstimationConfig()
    if alpha <= 0:
        raise InvalidParamsError(f"alpha must be positive, got {alpha}")
    f = objective or RrrObjective(inst, alpha)
    rng = make_rng(cfg.seed)
    ground = ground_set(inst.n)
    ratios = []
    skipped = 0
    for _ in range(cfg.num_samples):
        x, y, e = _draw_nested(rng, inst, ground, cfg)
        gain_x = f(x.add(e)) - f(x)
        if gain_x <= cfg.zero_tolerance:
            skipped += 1
            continue
        ratios.append((f(y.add(e)) - f(y)) / gain_x)
    if not ratios:
        raise NoValidSamplesError(f"All {cfg.num_samples} samples had a non-positive gain on X")
    max_ratio = max(ratios)
    gamma = max(1.0, (1 + cfg.margin) * max_ratio)
    if skipped:
        logger.warning("%d of %d gamma samples had non-positive gain on X; alpha may be too small",
                       skipped, cfg.num_samples)
    return gamma, GammaDiagnostics(cfg.num_samples, len(ratios), skipped, max_ratio, cfg.margin, cfg.seed)


def exhaustive_gamma(inst: Instance, alpha: float, objective: Objective | None = None,
                     zero_tolerance: float = 1e-12) -> float:
    """Exact max of rho_e(Y) / rho_e(X) over all X in Y in E, e outside Y (n <= 3)."""
    if inst.n > EXHAUSTIVE_MAX_PAPERS:
        raise TooLargeError(f"Exhaustive gamma needs n <= {EXHAUSTIVE_MAX_PAPERS}, got {inst.n}")
    f = objective or RrrObjective(inst, alpha)
    ground = ground_set(inst.n)
    values = [f(_mask_to_set(mask, ground)) for mask in range(1 << len(ground))]
    best = None
    for y in range(1 << len(ground)):
        for bit in range(len(ground)):
            e = 1 << bit
            if y & e:
                continue
            gain_y = values[y | e] - values[y]
            x = y
            while True:
                gain_x = values[x | e] - values[x]
                if gain_x <= zero_tolerance:
                    if gain_y > zero_tolerance:
                        raise UnboundedGammaError(
                            _mask_to_set(x, ground), _mask_to_set(y, ground), ground[bit], gain_x, gain_y
                        )
                else:
                    ratio = gain_y / gain_x
                    if best is None or ratio > best:
                        best = ratio
                if x == 0:
                    break
                x = (x - 1) & y
    if best is None:
        raise NoValidSamplesError("No triple has a positive gain on X")
    return best
