"""Run configuration documents: ``{"model": …, "basis": …, "task": …}``."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from deformed_vibrations import constants, exceptions
from deformed_vibrations.models import ModelFamily, ModelSpec


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class BasisConfig(_Section):
    """Truncated Fock basis: mode count and per-mode occupation cutoff."""

    modes: int = Field(ge=1)
    n_max: int = Field(ge=1)


class FitOptions(_Section):
    """Fit controls; ``family`` defaults to the configured model's family."""

    family: ModelFamily | None = None
    free_params: list[str] | None = None
    init: dict[str, float] = Field(default_factory=dict)
    max_iterations: int = Field(default=constants.FIT_MAX_ITERATIONS, ge=1)
    ftol: float = Field(default=constants.FIT_FTOL, gt=0)
    xtol: float = Field(default=constants.FIT_XTOL, gt=0)
    mode_count: int | None = Field(default=None, ge=1)


class TaskConfig(_Section):
    """Options for every subcommand; each one reads only the fields it needs."""

    order: int = Field(default=constants.DEFAULT_SERIES_ORDER, ge=0)
    margin: int = Field(default=constants.DEFAULT_MARGIN, ge=1)
    tolerance: float = Field(default=constants.DEFAULT_CHECK_TOLERANCE, ge=0)
    max_polyad: int | None = Field(default=None, ge=0)
    energy_unit_scale: float = Field(default=1.0, gt=0)
    reference: ModelSpec | Literal["effective_constants"] | None = None
    fit: FitOptions = Field(default_factory=FitOptions)
    noise_sigma: float = Field(default=0.0, ge=0)
    seed: int = constants.DEFAULT_SEED


class RunConfig(_Section):
    """A whole configuration document."""

    model: ModelSpec
    basis: BasisConfig
    task: TaskConfig = Field(default_factory=TaskConfig)

    @model_validator(mode="after")
    def _modes_agree(self) -> RunConfig:
        if self.basis.modes != self.model.mode_count:
            raise ValueError(
                f"basis.modes={self.basis.modes} but model.mode_count="
                f"{self.model.mode_count}",
            )
        reference = self.task.reference
        modes = self.basis.modes
        if isinstance(reference, ModelSpec) and reference.mode_count != modes:
            raise ValueError("task.reference must have as many modes as the model")
        return self

    def dump_json(self) -> str:
        """Serialize to a document that parses back to an equal config."""
        return self.model_dump_json(indent=2, exclude_defaults=True) + "\n"


def parse_config(text: str) -> RunConfig:
    """Validate a JSON document into a :class:`RunConfig`.

    :raises ConfigError: On malformed JSON or a schema violation, including
        unknown keys.
    """
    try:
        return RunConfig.model_validate_json(text)
    except ValidationError as e:
        raise exceptions.ConfigError(f"Invalid configuration:\n{e}") from e


def load_config(path: str | Path) -> RunConfig:
    """Read and validate a configuration file.

    :raises ConfigError: If the file cannot be read or is invalid.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise exceptions.ConfigError(f"Cannot read configuration {path}: {e}") from e
    return parse_config(text)


def config_from_dict(document: dict) -> RunConfig:
    """Validate an already-parsed document (mainly for tests and scripts)."""
    return parse_config(json.dumps(document))
