"""Seeded random streams shared by order search, estimation and instance generation."""
from __future__ import annotations

from typing import Sequence, TypeVar

import numpy as np

T = TypeVar("T")

# Bumped whenever the sampling procedure changes, so stored results can be matched to it.
SAMPLER_VERSION = "pcg64-fy-1"


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 stream for a 64-bit seed; identical across platforms."""
    return np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))


def sample_without_replacement(rng: np.random.Generator, items: Sequence[T], size: int) -> list[T]:
    """Partial Fisher-Yates: the first `size` entries of a shuffle of `items`."""
    pool = list(items)
    size = min(size, len(pool))
    for t in range(size):
        j = int(rng.integers(t, len(pool)))
        pool[t], pool[j] = pool[j], pool[t]
    return pool[:size]
