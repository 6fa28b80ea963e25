"""
Reading and writing instances, orders, allocations and search results, plus
seeded synthetic instances. Every file uses 1-based paper and reviewer ids.
"""
from __future__ import annotations

import json
import logging
import os
import re
from dataclasses import dataclass

import numpy as np
import pandas as pd

from .config import NegativeHandling
from .errors import DimensionMismatchError, InvalidParamsError, ParseError, RevkitError
from .model import Allocation, Instance, Order, new_instance
from .rrr import usw
from .sampling import make_rng
from .search import SearchResult

logger = logging.getLogger(__name__)

DISTRIBUTIONS = ("uniform", "exponential")


@dataclass(frozen=True)
class InstanceFiles:
    """scores_path: dense n x m CSV; loads: CSV path with m integers, or one integer for all."""

    scores_path: str
    loads: str | int
    k: int
    header: bool = False


def _read_matrix(path: str, header: bool) -> np.ndarray:
    if not os.path.exists(path):
        raise ParseError(f"File not found: {path}")
    try:
        df = pd.read_csv(path, header=None, skiprows=1 if header else 0, dtype=str,
                         skip_blank_lines=True, keep_default_na=False, encoding="utf-8")
    except pd.errors.EmptyDataError:
        raise ParseError(f"No data in {path}") from None
    except UnicodeDecodeError as e:
        raise ParseError(f"{path} is not UTF-8 (bad byte at offset {e.start})") from None
    except pd.errors.ParserError as e:
        # pandas reports "Expected 6 fields in line 3, saw 7"
        match = re.search(r"line (\d+)", str(e))
        row = int(match.group(1)) if match else None
        raise ParseError(f"Ragged CSV {path}: {e}", row=row) from None

    cells = df.to_numpy()
    out = np.empty(cells.shape, dtype=np.float64)
    offset = 2 if header else 1
    for (r, c), text in np.ndenumerate(cells):
        # short rows come back padded with NaN
        text = text.strip() if isinstance(text, str) else ""
        if text == "":
            raise ParseError(f"Missing value in {path}", row=r + offset, col=c + 1)
        try:
            out[r, c] = float(text)
        except ValueError:
            raise ParseError(f"Not a number {text!r} in {path}", row=r + offset, col=c + 1) from None
    return out


def shift_negative(values: np.ndarray, handling: NegativeHandling) -> tuple[np.ndarray, float]:
    """Subtract the global minimum when it is negative and shifting is requested."""
    low = float(values.min())
    if low >= 0 or handling is NegativeHandling.REJECT:
        return values, 0.0
    return values - low, -low


def read_loads(loads: str | int, m: int) -> np.ndarray:
    if isinstance(loads, (int, np.integer)):
        return np.full(m, int(loads))
    text = str(loads).strip()
    if re.fullmatch(r"\d+", text):
        return np.full(m, int(text))
    flat = _read_matrix(text, header=False).ravel()
    if flat.size == 1:
        return np.full(m, flat[0])
    if flat.size != m:
        raise DimensionMismatchError(f"{text} lists {flat.size} loads for {m} reviewers")
    return flat


def read_instance(files: InstanceFiles,
                  negative_handling: NegativeHandling = NegativeHandling.REJECT) -> tuple[Instance, float]:
    """Load an instance and report how much the scores were shifted (0.0 when untouched)."""
    values = _read_matrix(files.scores_path, files.header)
    values, shift = shift_negative(values, negative_handling)
    if shift:
        logger.info("Shifted all scores by +%r to remove negatives", shift)
    caps = read_loads(files.loads, values.shape[1])
    inst = new_instance(values, caps, files.k)
    logger.info("Loaded instance: n=%d papers, m=%d reviewers, k=%d", inst.n, inst.m, inst.k)
    return inst, shift


def load_instance(files: InstanceFiles,
                  negative_handling: NegativeHandling = NegativeHandling.REJECT) -> Instance:
    return read_instance(files, negative_handling)[0]


def save_instance(inst: Instance, scores_path: str, loads_path: str) -> None:
    # pandas writes shortest round-trip float text, so values reload bit-exact
    pd.DataFrame(inst.values).to_csv(scores_path, header=False, index=False)
    pd.DataFrame(inst.capacities.reshape(1, -1)).to_csv(loads_path, header=False, index=False)


def generate_synthetic(n: int, m: int, k: int, capacity: int | tuple[int, int] = 1,
                       distribution: str = "uniform", seed: int = 0) -> Instance:
    """
    Seeded random instance.

    Args:
        n, m, k: papers, reviewers, reviewers per paper
        capacity: one load for every reviewer, or an inclusive (low, high) range
        distribution: "uniform" on [0, 1) or "exponential" with rate 1
        seed: 64-bit seed

    Returns:
        An Instance that depends only on the arguments
    """
    if n < 1 or m < 1:
        raise InvalidParamsError(f"Need n >= 1 and m >= 1, got n={n}, m={m}")
    if not 1 <= k <= m:
        raise InvalidParamsError(f"k must be in [1, m={m}], got {k}")
    if distribution not in DISTRIBUTIONS:
        raise InvalidParamsError(f"Unknown distribution {distribution!r}; use one of {DISTRIBUTIONS}")
    low, high = (capacity, capacity) if isinstance(capacity, (int, np.integer)) else capacity
    if low < 1 or high < low:
        raise InvalidParamsError(f"Invalid capacity range ({low}, {high})")

    rng = make_rng(seed)
    if distribution == "uniform":
        values = rng.random((n, m))
    else:
        values = rng.exponential(1.0, (n, m))
    caps = rng.integers(low, high + 1, size=m)
    try:
        return new_instance(values, caps, k)
    except RevkitError as e:
        raise InvalidParamsError(str(e)) from e


def allocation_to_json(inst: Instance, alloc: Allocation) -> dict:
    return {
        "k": inst.k,
        "bundles": alloc.to_one_based(),
        "first_reviewer": {
            str(i + 1): (None if r is None else r + 1) for i, r in enumerate(alloc.first_reviewer)
        },
        "halted_early": alloc.halted_early,
        "usw": usw(inst, alloc),
    }


def _one_based(text, what: str) -> int:
    value = int(text)
    if value < 1:
        raise ParseError(f"Malformed allocation JSON: {what} id {value} is below 1")
    return value - 1


def allocation_from_json(data: dict) -> Allocation:
    try:
        bundles_raw = data["bundles"]
        papers = {key: _one_based(key, "paper") for key in bundles_raw}
        n = max(papers.values(), default=-1) + 1
        bundles = [[] for _ in range(n)]
        for key, reviewers in bundles_raw.items():
            bundles[papers[key]] = [_one_based(r, "reviewer") for r in reviewers]
        first_raw = data.get("first_reviewer")
        first = None
        if first_raw is not None:
            first = [None] * n
            for key, r in first_raw.items():
                first[_one_based(key, "paper")] = None if r is None else _one_based(r, "reviewer")
        return Allocation.from_bundles(bundles, first, halted_early=bool(data.get("halted_early", False)))
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise ParseError(f"Malformed allocation JSON: {e}") from None


def write_json(data: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, sort_keys=False)
        f.write("\n")


def read_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise ParseError(f"File not found: {path}") from None
    except json.JSONDecodeError as e:
        raise ParseError(f"Invalid JSON in {path}: {e.msg}", row=e.lineno, col=e.colno) from None
    except UnicodeDecodeError:
        raise ParseError(f"{path} is not UTF-8") from None


def save_allocation(inst: Instance, alloc: Allocation, path: str) -> None:
    write_json(allocation_to_json(inst, alloc), path)


def load_allocation(path: str) -> Allocation:
    return allocation_from_json(read_json(path))


def save_order(order: Order, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(",".join(str(p) for p in order.to_one_based()) + "\n")


def load_order(path: str) -> Order:
    try:
        with open(path, "r", encoding="utf-8") as f:
            tokens = [t for t in re.split(r"[,\s]+", f.read()) if t]
    except FileNotFoundError:
        raise ParseError(f"File not found: {path}") from None
    except UnicodeDecodeError:
        raise ParseError(f"{path} is not UTF-8") from None
    papers = []
    for pos, token in enumerate(tokens, start=1):
        try:
            papers.append(int(token) - 1)
        except ValueError:
            raise ParseError(f"Not a paper id {token!r} in {path}", col=pos) from None
    return Order(tuple(papers))


def save_search_result(result: SearchResult, path: str) -> None:
    write_json(result.to_json(), path)


def load_search_result(path: str) -> SearchResult:
    try:
        return SearchResult.from_json(read_json(path))
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"Malformed search result JSON: {e}") from None
