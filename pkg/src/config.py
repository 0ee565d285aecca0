"""
Toolkit Configuration
Global settings shared by every command, built from the command-line flags
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass

from src.fourier import FourierSettings

logger = logging.getLogger(__name__)

THREADS_ENV = "STERN_MEASURE_THREADS"
FORMATS = ("csv", "json")


def default_threads() -> int:
    """STERN_MEASURE_THREADS when set, otherwise every CPU"""
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
        if value < 1:
            raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
        return value
    return os.cpu_count() or 1


@dataclass(frozen=True)
class ToolkitConfig:
    tol: float = 1e-10
    depth: int = 24
    fmt: str = "csv"
    out: str | None = None
    threads: int | None = None
    grid: int = 10_000
    timing: bool = False
    verbose: bool = False

    def __post_init__(self):
        if self.fmt not in FORMATS:
            raise ValueError(f"--format must be one of {FORMATS}, got {self.fmt!r}")
        if self.grid < 2:
            raise ValueError(f"--grid must be at least 2, got {self.grid}")
        if self.threads is not None and self.threads < 1:
            raise ValueError(f"--threads must be positive, got {self.threads}")
        # FourierSettings owns the tol / depth ranges
        self.fourier_settings()

    @classmethod
    def from_args(cls, args) -> "ToolkitConfig":
        return cls(
            tol=args.tol,
            depth=args.depth,
            fmt=args.format,
            out=args.out,
            threads=args.threads if args.threads is not None else default_threads(),
            grid=args.grid,
            timing=args.timing,
            verbose=args.verbose,
        )

    def fourier_settings(self) -> FourierSettings:
        return FourierSettings(tail_tol=self.tol, min_depth=self.depth)

    @property
    def figure_level(self) -> int:
        """Dyadic level of the figure 2 and 3 grids"""
        return min(self.depth, 12)
