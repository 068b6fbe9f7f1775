from __future__ import annotations

import os
from dataclasses import dataclass

from .counting import DEFAULT_BUDGET

CACHE_ENV = "CUBELAB_CACHE"


@dataclass(frozen=True)
class Config:
    cache_dir: str | None = None
    budget: float = DEFAULT_BUDGET
    eta: float = 0.5
    sigma: float = 0.0
    delta: float = 0.5
    threads: int = 1
    fmt: str = "json"
    seed: int = 0
    timing: bool = True

    def __post_init__(self):
        if not self.budget > 0:
            raise ValueError("budget must be positive")
        if not 0 < self.eta <= 1:
            raise ValueError("eta must lie in (0, 1]")
        if not 0 <= self.sigma < 1:
            raise ValueError("sigma must lie in [0, 1)")
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.fmt not in ("json", "csv"):
            raise ValueError("format must be json or csv")

    @classmethod
    def from_args(cls, args, environ=None) -> "Config":
        environ = os.environ if environ is None else environ
        cache = environ.get(CACHE_ENV) or getattr(args, "cache_dir", None)
        return cls(
            cache_dir=cache,
            budget=args.budget,
            eta=args.eta,
            sigma=args.sigma,
            delta=args.delta,
            threads=args.threads,
            fmt=args.format,
            seed=args.seed,
            timing=not args.no_timing,
        )
