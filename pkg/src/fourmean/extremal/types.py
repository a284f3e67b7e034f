from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from ..tuples import NonnegTuple

STRUCTURED = "structured"
PENALTY_SEARCH = "penalty_search"
BOUNDARY_REDUCTION = "boundary_reduction"
BRUTE_FORCE = "brute_force"
METHODS = (STRUCTURED, PENALTY_SEARCH, BOUNDARY_REDUCTION, BRUTE_FORCE)

DEFAULT_SCHEDULE = tuple(10.0 ** k for k in range(1, 9))


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    restarts: int = 8
    penalty_weight_schedule: tuple = DEFAULT_SCHEDULE
    mesh: int = 40
    tol: float = 1e-9

    def __post_init__(self):
        object.__setattr__(self, "penalty_weight_schedule",
                           tuple(float(w) for w in self.penalty_weight_schedule))
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.mesh < 8:
            raise ValueError("mesh must be >= 8")
        if not self.tol > 0:
            raise ValueError("tol must be > 0")
        if not self.penalty_weight_schedule:
            raise ValueError("penalty weight schedule is empty")

    def rng(self, *stream) -> np.random.Generator:
        """Private generator for one named sub-stream (e.g. a restart index)."""
        return np.random.default_rng(np.random.SeedSequence([self.seed, *stream]))

    def to_json(self) -> dict:
        d = asdict(self)
        d["penalty_weight_schedule"] = list(self.penalty_weight_schedule)
        return d

    @classmethod
    def from_json(cls, d: dict) -> "SearchConfig":
        known = {"seed", "restarts", "penalty_weight_schedule", "mesh", "tol"}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown SearchConfig keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def load(cls, path) -> "SearchConfig":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


@dataclass(frozen=True)
class CandidateProfile:
    """Reduced critical-point shape: ``x = (x1, u, .., u)``, ``y = (1 x (n-r), v x r)``."""

    x1: float
    u: float
    v: float
    r: int
    n: int

    def __post_init__(self):
        if self.n < 4:
            raise ValueError("n must be >= 4")
        if not 1 <= self.r <= self.n - 1:
            raise ValueError(f"r must lie in 1..{self.n - 1}")
        if self.x1 < 0 or self.u < 0 or not 0 <= self.v <= 1:
            raise ValueError("need x1 >= 0, u >= 0 and 0 <= v <= 1")

    def tuples(self) -> tuple:
        x = (self.x1,) + (self.u,) * (self.n - 1)
        y = (1.0,) * (self.n - self.r) + (self.v,) * self.r
        return NonnegTuple(x), NonnegTuple(y)

    def is_interior(self, tol: float = 1e-8) -> bool:
        """True for a genuinely interior point: ``u != v`` and ``v < 1``."""
        return abs(self.u - self.v) > tol and self.v < 1 - tol

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class ExtremalResult:
    value: float
    witness_x: NonnegTuple
    witness_y: NonnegTuple
    method: str
    certificate: dict = field(default_factory=dict)
    n: Optional[int] = None
    level: Optional[int] = None

    @property
    def certified(self) -> bool:
        return bool(self.certificate.get("passed", False))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "level": self.level,
            "value": self.value,
            "method": self.method,
            "witness_x": self.witness_x.to_json(),
            "witness_y": self.witness_y.to_json(),
            "certificate": self.certificate,
        }
