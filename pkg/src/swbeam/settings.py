"""Environment-driven runtime settings."""

from __future__ import annotations

import os
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Knobs read from ``SWBEAM_*`` environment variables.

    Attributes:
        threads: Cap on concurrent replicate workers; 0 means one per CPU.
        log_level: Threshold for structured logs.
        log_format: ``console`` for humans, ``json`` for machines.
    """

    model_config = SettingsConfigDict(env_prefix="SWBEAM_", extra="ignore")

    threads: int = Field(default=0, ge=0)
    log_level: Literal["debug", "info", "warning", "error", "critical"] = "info"
    log_format: Literal["console", "json"] = "console"

    def worker_count(self) -> int:
        if self.threads > 0:
            return self.threads
        return os.cpu_count() or 1


def load_settings(**overrides: object) -> Settings:
    """Read settings from the environment, applying non-None overrides."""
    values = {key: value for key, value in overrides.items() if value is not None}
    return Settings(**values)  # type: ignore[arg-type]
