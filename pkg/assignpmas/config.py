from __future__ import annotations

import logging
import os
from functools import lru_cache
from typing import Mapping, Optional

from pydantic import BaseModel, Field

logger = logging.getLogger(__name__)

HARD_PLAYER_CAP = 20


class Settings(BaseModel):
    max_players: int = Field(
        default=16, ge=1, le=HARD_PLAYER_CAP, description="Largest player count for exhaustive 2^n sweeps."
    )
    lp_oracle_max_players: int = Field(
        default=10, ge=1, le=HARD_PLAYER_CAP, description="Largest player count for the exhaustive PMAS LP oracle."
    )
    core_vertex_max_players: int = Field(
        default=8, ge=1, le=HARD_PLAYER_CAP, description="Largest player count for full core vertex enumeration."
    )
    default_seed: int = Field(default=7, description="Seed used by verify-paper when --seed is omitted.")
    default_instances: int = Field(default=100, ge=0, description="Random instances per verify-paper suite.")
    log_level: str = Field(default="WARNING", description="Root log level applied by the CLI.")


def load_settings(env: Optional[Mapping[str, str]] = None) -> Settings:
    """Build settings from defaults plus environment overrides.

    `PMAS_MAX_PLAYERS` raises or lowers the sweep cap (clamped to 20).
    `PMAS_LOG_LEVEL` sets the CLI log level.
    """

    env = os.environ if env is None else env
    values: dict[str, object] = {}

    raw = (env.get("PMAS_MAX_PLAYERS") or "").strip()
    if raw:
        try:
            cap = int(raw)
        except ValueError as exc:
            raise ValueError(f"PMAS_MAX_PLAYERS must be an integer, got {raw!r}") from exc
        if cap > HARD_PLAYER_CAP:
            logger.warning("PMAS_MAX_PLAYERS=%d exceeds the hard cap; using %d", cap, HARD_PLAYER_CAP)
            cap = HARD_PLAYER_CAP
        if cap < 1:
            raise ValueError(f"PMAS_MAX_PLAYERS must be positive, got {cap}")
        values["max_players"] = cap

    level = (env.get("PMAS_LOG_LEVEL") or "").strip()
    if level:
        values["log_level"] = level.upper()

    return Settings(**values)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return load_settings()
