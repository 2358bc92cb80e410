"""
Solver configuration.

Values come from keyword arguments, or from the environment (optionally a
``.env`` file) through :meth:`SolverConfig.from_env`.
"""

import logging
import os
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

from dotenv import load_dotenv

from .exceptions import ArgumentError

logger = logging.getLogger(__name__)

ENV_PREFIX = "DIAMCOL_"


class SolverMode(str, Enum):
    COMPLETE = "complete"
    PAPER = "paper"
    RANDOMIZED = "randomized"
    BASELINE_MS = "baseline-ms"
    DIAM3 = "diam3"

    @classmethod
    def parse(cls, value: str) -> "SolverMode":
        normalized = value.strip().lower().replace("_", "-")
        for mode in cls:
            if mode.value == normalized:
                return mode
        raise ArgumentError(
            f"Unknown solver mode '{value}'. "
            f"Expected one of: {', '.join(m.value for m in cls)}"
        )


@dataclass(frozen=True)
class SolverConfig:
    """
    Parameters for one solver run.

    Attributes:
        mode: Which search strategy to use
        k_const: The constant K bounding witness set sizes by K * mu^(1/3) * log(mu)
        witness_budget: Max (S, S~) candidates examined per B4 enumeration
        rng_seed: Seed for the witness sampler
        max_retries: Sampling attempts per node in RANDOMIZED mode
        time_limit: Wall-clock seconds before the run reports TIMEOUT
        threads: Worker threads used for the children of the search root
        phi_cap: Max colorings of S~ tried per sampled witness
        record_trace: Keep the rule applied at every expanded node
    """

    mode: SolverMode = SolverMode.COMPLETE
    k_const: float = 1.0
    witness_budget: int = 2000
    rng_seed: int = 0
    max_retries: int = 32
    time_limit: Optional[float] = None
    threads: int = 1
    phi_cap: int = 64
    record_trace: bool = False

    def __post_init__(self):
        if isinstance(self.mode, str) and not isinstance(self.mode, SolverMode):
            object.__setattr__(self, "mode", SolverMode.parse(self.mode))
        if not self.k_const > 0:
            raise ArgumentError(f"k_const must be positive, got {self.k_const}")
        if self.witness_budget < 0:
            raise ArgumentError(
                f"witness_budget must be non-negative, got {self.witness_budget}"
            )
        if self.max_retries < 0:
            raise ArgumentError(
                f"max_retries must be non-negative, got {self.max_retries}"
            )
        if self.time_limit is not None and self.time_limit <= 0:
            raise ArgumentError(f"time_limit must be positive, got {self.time_limit}")
        if self.threads < 1:
            raise ArgumentError(f"threads must be at least 1, got {self.threads}")
        if self.phi_cap < 1:
            raise ArgumentError(f"phi_cap must be at least 1, got {self.phi_cap}")
        if not 0 <= self.rng_seed < 2**64:
            raise ArgumentError(f"rng_seed must fit in 64 bits, got {self.rng_seed}")

    def with_overrides(self, **overrides) -> "SolverConfig":
        """Return a copy with every non-None override applied."""
        changes = {key: value for key, value in overrides.items() if value is not None}
        return replace(self, **changes)

    @classmethod
    def from_env(cls, dotenv_path: Optional[str] = None) -> "SolverConfig":
        """
        Build a configuration from ``DIAMCOL_*`` environment variables.

        Args:
            dotenv_path: Optional path of a ``.env`` file to load first

        Returns:
            A validated SolverConfig; unset variables keep their defaults.
        """
        load_dotenv(dotenv_path=dotenv_path)
        values = {}
        readers = {
            "mode": ("MODE", SolverMode.parse),
            "k_const": ("K", float),
            "witness_budget": ("BUDGET", int),
            "rng_seed": ("SEED", int),
            "max_retries": ("RETRIES", int),
            "time_limit": ("TIME_LIMIT", float),
            "threads": ("THREADS", int),
            "phi_cap": ("PHI_CAP", int),
        }
        for field_name, (suffix, convert) in readers.items():
            raw = os.getenv(ENV_PREFIX + suffix)
            if raw is None or raw.strip() == "":
                continue
            try:
                values[field_name] = convert(raw)
            except ValueError as e:
                raise ArgumentError(
                    f"Invalid value for {ENV_PREFIX + suffix}: '{raw}' ({e})"
                ) from e
        if values:
            logger.debug(f"Loaded solver settings from environment: {values}")
        return cls(**values)


def log_level_from_env(default: str = "WARNING") -> str:
    """Return the log level named by ``DIAMCOL_LOG_LEVEL``."""
    load_dotenv()
    return os.getenv(ENV_PREFIX + "LOG_LEVEL", default).upper()
