# randfem - Configuration Settings
# Pydantic Settings with Environment Variable Support

"""
Configuration management for randfem.
Uses Pydantic v2 settings with nested sections, each with its own env prefix.
The top-level ``RANDFEM_SEED`` variable is the seed fallback of the CLI.
"""

import os
from pathlib import Path

from pydantic import Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


def _available_parallelism() -> int:
    return os.cpu_count() or 1


class SamplingSettings(BaseSettings):
    """Random variate generation settings."""

    rejection_iteration_cap: int = Field(
        default=1_000_000,
        ge=10,
        description="Max rejection rounds per accepted sample before a diagnostic",
    )
    envelope_constant: float = Field(
        default=3.0,
        ge=3.0,
        description="Envelope constant c of the hat-density rejection sampler",
    )

    model_config = SettingsConfigDict(env_prefix="RANDFEM_SAMPLING_")


class SolverSettings(BaseSettings):
    """Conjugate gradient settings."""

    tol: float = Field(
        default=1e-10, gt=0.0, lt=1.0, description="Relative residual tolerance"
    )
    max_iter_factor: int = Field(
        default=10, ge=1, le=1000, description="max_iter = factor * N_h"
    )

    model_config = SettingsConfigDict(env_prefix="RANDFEM_SOLVER_")


class ExperimentSettings(BaseSettings):
    """Convergence study settings (desk scale and full scale)."""

    n_min: int = Field(default=2, ge=1, le=12, description="Coarsest mesh level")
    n_max: int = Field(default=6, ge=1, le=12, description="Finest desk-scale level")
    replications: int = Field(
        default=200, ge=2, description="Desk-scale replications per level"
    )
    full_scale_n_max: int = Field(
        default=8, ge=1, le=12, description="Finest full-scale level"
    )
    full_scale_replications: int = Field(
        default=10_000, ge=2, description="Full-scale replications per level"
    )
    table1_reference_replications: int = Field(
        default=1_000,
        ge=2,
        description="MC loads averaged into the Table 1 reference (desk scale)",
    )
    cache_dir: Path = Field(
        default_factory=lambda: Path.cwd() / ".randfem-cache",
        description="Directory for cached reference loads",
    )

    @model_validator(mode="after")
    def check_level_range(self) -> "ExperimentSettings":
        if self.n_min > self.n_max:
            raise ValueError("n_min must not exceed n_max")
        return self

    model_config = SettingsConfigDict(env_prefix="RANDFEM_EXPERIMENT_")


class MonitoringSettings(BaseSettings):
    """Logging settings."""

    log_level: str = Field(default="WARNING", description="Logging level")
    log_format: str = Field(
        default="console", pattern="^(json|console)$", description="Log format"
    )
    log_file: Path | None = Field(default=None, description="Log file path")

    @field_validator("log_level")
    @classmethod
    def normalize_level(cls, value: str) -> str:
        level = value.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level {value!r}")
        return level

    model_config = SettingsConfigDict(env_prefix="RANDFEM_MONITORING_")


class Settings(BaseSettings):
    """Main settings combining all configuration sections."""

    app_name: str = Field(default="randfem", description="Application name")
    environment: str = Field(default="production", description="Environment name")
    debug: bool = Field(default=False, description="Debug mode")

    seed: int = Field(
        default=0, ge=0, lt=2**64, description="Default 64-bit seed (RANDFEM_SEED)"
    )
    threads: int = Field(
        default_factory=_available_parallelism,
        ge=1,
        le=1024,
        description="Worker threads for replication loops",
    )

    sampling: SamplingSettings = Field(default_factory=SamplingSettings)
    solver: SolverSettings = Field(default_factory=SolverSettings)
    experiment: ExperimentSettings = Field(default_factory=ExperimentSettings)
    monitoring: MonitoringSettings = Field(default_factory=MonitoringSettings)

    @model_validator(mode="before")
    @classmethod
    def validate_environment(cls, values: dict) -> dict:
        """Relax logging for development environments."""
        if values.get("environment") == "development":
            values.setdefault("debug", True)
        return values

    model_config = SettingsConfigDict(
        env_prefix="RANDFEM_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )


# Global settings instance - Initialize only when needed
settings: Settings | None = None


def get_settings() -> Settings:
    """Get global settings instance with lazy initialization."""
    global settings
    if settings is None:
        settings = Settings()
    return settings


def reset_settings() -> None:
    """Drop the cached settings so the next call re-reads the environment."""
    global settings
    settings = None
