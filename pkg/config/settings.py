"""
Configuration settings for the superpermutation ATSP toolkit
"""
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings"""

    # Alphabet
    MAX_SYMBOLS: int = 8

    # TSPLIB output
    DIAGONAL_SENTINEL: int = 9999
    TSPLIB_VALUES_PER_LINE: int = 20

    # Jonker-Volgenant transform (forbidden edges get FORBIDDEN_FACTOR * M)
    FORBIDDEN_FACTOR: int = 10

    # Exact solvers
    HELD_KARP_MAX_VERTICES: int = 20
    EXACT_MAX_VERTICES: int = 30
    EXACT_TIME_LIMIT: float = 600.0

    # Heuristic solver defaults
    SOLVER_SEED: int = 1
    SOLVER_RESTARTS: int = 100
    SOLVER_MAX_CANDIDATES: int = 6
    SOLVER_MOVE_DEPTH: int = 3
    SOLVER_KICKS: Optional[int] = None  # None: SOLVER_KICKS_PER_VERTEX * N
    SOLVER_KICKS_PER_VERTEX: int = 4
    SOLVER_KICK_SPAN: int = 10
    SOLVER_WORKERS: int = 1

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "{message}"

    @property
    def forbidden_multiplier(self) -> int:
        """Factor applied to big-M for disallowed symmetric edges"""
        return max(2, self.FORBIDDEN_FACTOR)

    model_config = SettingsConfigDict(
        env_prefix="SUPERPERM_",
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )


# Global settings instance
settings = Settings()
