"""Deterministic run configuration for the searches and the CLI."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, replace


def _env_threads():
    raw = os.environ.get("GAMMA_INTERP_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class RunConfig:
    tol: float = 1e-6                # band on sup-norm status claims
    extremal_band: float = 1e-6      # half-width of the extremality band
    seed: int = 0
    verbose: bool = False
    grid0: int = 1024                # angle grid for degree-0 scans
    grid1_angles: int = 64           # degree-1 seeding: angles x disc grid
    grid1_disc: int = 12
    refine1: int = 20                # local refinements started at degree 1
    seeds_high: int = 2048           # quasi-random seeds for degree >= 2
    refine_high: int = 30
    max_refine_iter: int = 250
    angle_tol: float = 1e-10         # golden-section resolution in angle
    max_evaluations: int = 0         # 0 = unlimited
    threads: int = field(default_factory=_env_threads)

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.grid0 < 16 or self.grid1_angles < 8 or self.grid1_disc < 4:
            raise ValueError("grid sizes below documented minima")

    def with_(self, **kw):
        return replace(self, **kw)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        known = {k: v for k, v in d.items() if k in cls.__dataclass_fields__}
        return cls(**known)

    @classmethod
    def from_file(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


DEFAULT = RunConfig()
