"""Command-line pipeline: configuration files, CSV artifacts and subcommands."""

from .commands import RunResult, run_subcommand
from .config import load_config, parse_config

__all__ = ["parse_config", "load_config", "run_subcommand", "RunResult"]
