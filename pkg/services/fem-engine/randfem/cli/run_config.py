# randfem - Run Configuration
# Validated CLI configuration merged from a config file and flags

"""
Run configuration of the command-line interface.

Values come from three layers, later layers winning: built-in defaults and
``RANDFEM_*`` settings, a flat ``key = value`` config file, and command-line
flags. Every invariant violation is reported as a :class:`ConfigError` naming
the offending key.
"""

import re
from enum import Enum
from pathlib import Path
from typing import Any, Mapping

from dotenv import dotenv_values
from pydantic import BaseModel, Field, ValidationError, ValidationInfo, field_validator

from randfem.engine.assembly.coefficients import SigmaKind
from randfem.engine.experiments.forcing import ForcingId
from randfem.engine.mesh.structured import MAX_LEVEL, MIN_LEVEL
from randfem.engine.solver.realization import Estimator
from randfem.engine.utils.config import get_settings
from randfem.engine.utils.errors import ConfigError

_LEVELS = re.compile(r"^\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?$")

# Table 1 spans these levels unless told otherwise.
TABLE1_LEVELS = (3, 8)


class Command(str, Enum):
    MESH = "mesh"
    SOLVE = "solve"
    STUDY = "study"
    TABLE1 = "table1"
    REPRODUCE = "reproduce"


FILE_KEYS = {
    "estimator": "estimator",
    "forcing": "forcing",
    "sigma": "sigma",
    "n": "n",
    "M": "replications",
    "m": "replications",
    "replications": "replications",
    "seed": "seed",
    "tol": "tol",
    "out": "out",
    "threads": "threads",
    "full_scale": "full_scale",
    "full-scale": "full_scale",
    "timing": "timing",
}

SINGLE_LEVEL_COMMANDS = {Command.MESH, Command.SOLVE}

# Field names as users spell them.
FLAG_NAMES = {"n_min": "n", "n_max": "n", "replications": "M"}


class RunConfig(BaseModel):
    """Validated inputs of one CLI command."""

    command: Command
    estimator: Estimator = Field(default=Estimator.MC)
    forcing: ForcingId = Field(default=ForcingId.F2)
    sigma: SigmaKind = Field(default=SigmaKind.UNIFORM)
    n_min: int = Field(..., ge=MIN_LEVEL, le=MAX_LEVEL)
    n_max: int = Field(..., ge=MIN_LEVEL, le=MAX_LEVEL)
    replications: int = Field(..., ge=1, description="M")
    seed: int = Field(..., ge=0, lt=2**64)
    tol: float = Field(..., gt=0.0, lt=1.0)
    out: Path | None = Field(default=None)
    threads: int = Field(..., ge=1, le=1024)
    full_scale: bool = Field(default=False)
    timing: bool = Field(default=False)
    validate_mesh: bool = Field(default=False)

    @field_validator("sigma")
    @classmethod
    def sigma_matches_estimator(
        cls, value: SigmaKind, info: ValidationInfo
    ) -> SigmaKind:
        estimator = info.data.get("estimator")
        needs_unit = estimator in (Estimator.IS, Estimator.BARYCENTRIC)
        if needs_unit and value is not SigmaKind.UNIFORM:
            raise ValueError(f"{estimator.value.upper()} requires sigma=unit")
        return value

    @field_validator("n_max")
    @classmethod
    def check_levels(cls, value: int, info: ValidationInfo) -> int:
        n_min = info.data.get("n_min")
        if n_min is not None and n_min > value:
            raise ValueError(f"range {n_min}..{value} is empty")
        return value

    @property
    def levels(self) -> range:
        return range(self.n_min, self.n_max + 1)


def parse_levels(text: str | int) -> tuple[int, int]:
    """``"A"`` or ``"A..B"`` into (A, B)."""
    match = _LEVELS.match(str(text))
    if match is None:
        raise ConfigError("n", f"expected A or A..B, got {text!r}")
    low = int(match.group(1))
    high = int(match.group(2)) if match.group(2) is not None else low
    return low, high


def read_config_file(path: Path) -> dict[str, str]:
    """Flat ``key = value`` lines; unknown keys and bare keys are errors."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError("config", f"cannot read config file {path}")
    try:
        raw = dotenv_values(path)
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigError("config", f"cannot read config file {path}: {exc}") from exc
    values: dict[str, str] = {}
    for key, value in raw.items():
        if key not in FILE_KEYS:
            raise ConfigError(key, f"unknown key in {path.name}")
        if value is None:
            raise ConfigError(key, "has no value")
        values[FILE_KEYS[key]] = value
    return values


def _defaults(command: Command, full_scale: bool) -> dict[str, Any]:
    settings = get_settings()
    experiment = settings.experiment
    if command is Command.TABLE1:
        n_min, n_max = TABLE1_LEVELS
        replications = (
            experiment.full_scale_replications
            if full_scale
            else experiment.table1_reference_replications
        )
    else:
        n_min = experiment.n_min
        n_max = experiment.full_scale_n_max if full_scale else experiment.n_max
        replications = experiment.replications
        if full_scale:
            replications = experiment.full_scale_replications
    return {
        "forcing": ForcingId.F1_EPS if command is Command.TABLE1 else ForcingId.F2,
        "n_min": n_min,
        "n_max": n_max,
        "replications": replications,
        "seed": settings.seed,
        "tol": settings.solver.tol,
        "threads": settings.threads,
    }


def _as_bool(key: str, value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in {"1", "true", "yes", "on"}:
        return True
    if text in {"0", "false", "no", "off"}:
        return False
    raise ConfigError(key, f"expected a boolean, got {value!r}")


def build_run_config(
    command: Command | str,
    flags: Mapping[str, Any],
    config_file: Path | None = None,
) -> RunConfig:
    """
    Merge defaults, config file and flags into a validated RunConfig.

    Flags set to None count as absent, so file values show through.
    """
    command = Command(command)
    merged: dict[str, Any] = dict(read_config_file(config_file)) if config_file else {}
    merged.update({key: value for key, value in flags.items() if value is not None})

    full_scale = _as_bool("full_scale", merged.pop("full_scale", False))
    values = _defaults(command, full_scale)
    values.update({"command": command, "full_scale": full_scale})
    if "timing" in merged:
        values["timing"] = _as_bool("timing", merged.pop("timing"))
    if "validate_mesh" in merged:
        values["validate_mesh"] = _as_bool("validate_mesh", merged.pop("validate_mesh"))

    if "n" in merged:
        values["n_min"], values["n_max"] = parse_levels(merged.pop("n"))
        if command in SINGLE_LEVEL_COMMANDS and values["n_min"] != values["n_max"]:
            raise ConfigError("n", f"'{command.value}' takes a single level")
    elif command in SINGLE_LEVEL_COMMANDS:
        raise ConfigError("n", f"'{command.value}' requires --n")
    values.update(merged)

    try:
        config = RunConfig(**values)
    except ValidationError as exc:
        error = exc.errors()[0]
        field = ".".join(str(part) for part in error["loc"]) or "config"
        key = FLAG_NAMES.get(field, field)
        message = str(error["msg"]).removeprefix("Value error, ")
        raise ConfigError(key, message) from exc
    if command is Command.STUDY and config.replications < 2:
        raise ConfigError("M", "studies need at least 2 replications")
    return config
