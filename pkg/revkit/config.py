"""Run configuration and environment defaults (REVKIT_* variables, optionally from .env)."""
from __future__ import annotations

import os
from dataclasses import dataclass
from enum import Enum

from dotenv import load_dotenv

from .errors import InvalidParamsError

DEFAULT_ORACLE_MAX = 8


class NegativeHandling(Enum):
    REJECT = "reject"
    SHIFT = "shift-to-zero"


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise InvalidParamsError(f"{name} must be an integer, got {raw!r}") from None


def load_env(dotenv_path: str | None = None) -> None:
    # Existing environment variables win over .env entries.
    load_dotenv(dotenv_path=dotenv_path, override=False)


def default_jobs() -> int:
    return max(1, _env_int("REVKIT_JOBS", 1))


def default_seed() -> int:
    return _env_int("REVKIT_SEED", 0)


def default_oracle_max() -> int:
    return _env_int("REVKIT_ORACLE_MAX", DEFAULT_ORACLE_MAX)


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    subsample_size: int | None = None
    parallelism: int = 1
    negative_handling: NegativeHandling = NegativeHandling.REJECT
    out_path: str | None = None
    metrics_path: str | None = None
    report_path: str | None = None

    def __post_init__(self):
        if self.parallelism < 1:
            raise InvalidParamsError(f"parallelism must be at least 1, got {self.parallelism}")
        if self.subsample_size is not None and self.subsample_size < 1:
            raise InvalidParamsError(f"subsample size must be positive, got {self.subsample_size}")

    def describe(self) -> dict:
        return {
            "seed": self.seed,
            "subsample_size": self.subsample_size,
            "parallelism": self.parallelism,
            "negative_handling": self.negative_handling.value,
        }
