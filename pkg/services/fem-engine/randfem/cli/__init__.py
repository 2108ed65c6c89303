"""Command-line interface of randfem."""

from randfem.cli.main import app, main, parse_config
from randfem.cli.run_config import Command, RunConfig, build_run_config

__all__ = ["Command", "RunConfig", "app", "build_run_config", "main", "parse_config"]
