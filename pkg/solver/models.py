from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field, field_validator

from config.settings import settings
from solver.tour import Tour


def restart_stream(seed: int, restart_index: int) -> np.random.Generator:
    """
    Random stream for one restart: PCG64 seeded from the entropy pair
    (seed, restart_index). It depends on nothing else, so parallel and
    serial runs draw identical numbers for the same restart.
    """
    return np.random.default_rng([seed, restart_index])


class SolverConfig(BaseModel):
    seed: int = settings.SOLVER_SEED
    restarts: int = Field(settings.SOLVER_RESTARTS, ge=1)
    max_candidates: int = Field(settings.SOLVER_MAX_CANDIDATES, ge=2)
    move_depth: int = settings.SOLVER_MOVE_DEPTH
    kicks: Optional[int] = Field(settings.SOLVER_KICKS, ge=0)
    kick_span: int = Field(settings.SOLVER_KICK_SPAN, ge=1)
    time_limit: Optional[float] = Field(None, ge=0)
    target_weight: Optional[int] = None
    workers: int = Field(settings.SOLVER_WORKERS, ge=1)

    @field_validator("move_depth")
    @classmethod
    def _known_depth(cls, value: int) -> int:
        if value not in (2, 3):
            raise ValueError("move_depth must be 2 (Or-opt) or 3 (Or-opt + segment exchange)")
        return value

    def kicks_for(self, size: int) -> int:
        """Kicks per restart on a ``size``-vertex instance."""
        if self.kicks is not None:
            return self.kicks
        return settings.SOLVER_KICKS_PER_VERTEX * size


class SolveResult(BaseModel):
    best: Tour
    weight_history: List[int]
    runs_to_best: int
    elapsed: float

    @property
    def runs(self) -> int:
        return len(self.weight_history)

    def summary(self, n: Optional[int] = None) -> str:
        parts = [f"best_weight={self.best.weight}"]
        if n is not None:
            parts.append(f"best_length={n + self.best.weight}")
        parts += [f"runs={self.runs}", f"runs_to_best={self.runs_to_best}"]
        return " ".join(parts)
