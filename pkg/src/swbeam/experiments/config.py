"""Experiment configuration.

Config files are plain ``key = value`` lines; lists are comma-separated and
``#`` starts a comment. A ``.toml`` file with the same keys is accepted too.

Example::

    study = rand_p_sweep
    n_nodes = 300
    widths = 10
    p_values = 0, 0.1, 0.2, 0.3
    model = ula
    replicates = 20
    base_seed = 7
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Any, Literal

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)
import tomlkit
from tomlkit.exceptions import ParseError

from ..antenna import UlaReachMode, default_theta_grid
from ..errors import ConfigError
from ..types import TWO_PI, AntennaModel

Study = Literal["rand_p_sweep", "diameter_sweep", "wfb_sweep"]

STUDY_ALIASES: dict[str, Study] = {
    "rand_p": "rand_p_sweep",
    "rand_p_sweep": "rand_p_sweep",
    "diameter": "diameter_sweep",
    "diameter_sweep": "diameter_sweep",
    "wfb": "wfb_sweep",
    "wfb_sweep": "wfb_sweep",
}

_LIST_FIELDS = ("widths", "heights", "p_values", "betas", "theta_grid")


def _default_p_values() -> list[float]:
    return [i / 10 for i in range(11)]


class ExperimentConfig(BaseModel):
    """Parameters of one study.

    Node counts follow a constant density: ``density`` if given, otherwise
    ``n_nodes`` spread over the first region. Other regions scale ``N`` with
    their area.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    study: Study
    n_nodes: int = Field(default=300, ge=2)
    density: float | None = Field(default=None, gt=0)
    widths: list[float] = Field(default_factory=lambda: [10.0], min_length=1)
    heights: list[float] | None = None
    p_values: list[float] = Field(default_factory=_default_p_values, min_length=1)
    p: float = Field(default=1.0, ge=0.0, le=1.0)
    model: AntennaModel = "sector"
    alpha: float = Field(default=2.0, gt=0)
    ula_reach_mode: UlaReachMode = "calibrated"
    betas: list[float] = Field(default_factory=lambda: [0.2], min_length=1)
    source_fraction: float = Field(default=0.5, gt=0.0, le=1.0)
    theta_grid: list[float] = Field(
        default_factory=lambda: list(default_theta_grid()), min_length=1
    )
    replicates: int = Field(default=20, ge=1)
    base_seed: int = Field(default=0, ge=0)
    omni_range: float = Field(default=1.0, gt=0)
    max_resamples: int = Field(default=100, ge=0)

    @field_validator("study", mode="before")
    @classmethod
    def _resolve_study(cls, value: Any) -> Any:
        if isinstance(value, str):
            return STUDY_ALIASES.get(value.strip().lower(), value)
        return value

    @field_validator(*_LIST_FIELDS, mode="before")
    @classmethod
    def _split_list(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [item.strip() for item in value.split(",") if item.strip()]
        if isinstance(value, int | float):
            return [value]
        return value

    @field_validator("widths", "heights")
    @classmethod
    def _positive_dims(cls, value: list[float] | None) -> list[float] | None:
        if value is not None and any(not (v > 0 and math.isfinite(v)) for v in value):
            raise ValueError("region dimensions must be positive and finite")
        return value

    @field_validator("p_values")
    @classmethod
    def _unit_interval(cls, value: list[float]) -> list[float]:
        if any(not 0.0 <= v <= 1.0 for v in value):
            raise ValueError("fractions must lie in [0, 1]")
        return value

    @field_validator("betas")
    @classmethod
    def _non_negative(cls, value: list[float]) -> list[float]:
        if any(v < 0 for v in value):
            raise ValueError("beta must be non-negative")
        return value

    @field_validator("theta_grid")
    @classmethod
    def _valid_widths(cls, value: list[float]) -> list[float]:
        if any(not 0.0 < v <= TWO_PI for v in value):
            raise ValueError("beam widths must lie in (0, 2π]")
        return value

    @model_validator(mode="after")
    def _check_regions(self) -> ExperimentConfig:
        if self.heights is not None and len(self.heights) != len(self.widths):
            raise ValueError(
                f"heights has {len(self.heights)} entries but widths has {len(self.widths)}"
            )
        if self.study == "diameter_sweep" and len(self.widths) < 3:
            raise ValueError("a diameter sweep needs at least 3 region sizes")
        return self

    def regions(self) -> list[tuple[float, float]]:
        heights = self.heights if self.heights is not None else self.widths
        return list(zip(self.widths, heights, strict=True))

    def node_density(self) -> float:
        if self.density is not None:
            return self.density
        width, height = self.regions()[0]
        return self.n_nodes / (width * height)

    def node_count(self, width: float, height: float) -> int:
        if self.density is None and (width, height) == self.regions()[0]:
            return self.n_nodes
        return max(2, round(self.node_density() * width * height))

    def sweep_p_values(self) -> list[float]:
        """p grid of the randomized study; always starts with the p=0 baseline."""
        values = list(self.p_values)
        if 0.0 not in values:
            values.insert(0, 0.0)
        return values


def parse_key_values(text: str, *, source: str = "<config>") -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        values[key] = value.strip()
    return values


def build_experiment_config(values: dict[str, Any], *, source: str = "<config>") -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(values)
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in error['loc']) or 'config'}: {error['msg']}"
            for error in exc.errors()
        )
        raise ConfigError(f"{source}: {problems}") from exc


def load_experiment_config(path: Path, **overrides: Any) -> ExperimentConfig:
    """Read a config file; non-None ``overrides`` replace file values."""
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if path.suffix == ".toml":
        try:
            values: dict[str, Any] = tomlkit.parse(text).unwrap()
        except ParseError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    else:
        values = dict(parse_key_values(text, source=str(path)))
    values.update({key: value for key, value in overrides.items() if value is not None})
    return build_experiment_config(values, source=str(path))
