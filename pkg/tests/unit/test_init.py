"""
Unit tests for the package exports.

Verifies that the public names of each subpackage are importable and that
__all__ lists only names that exist.
"""

import importlib

import pytest

import gamow_decay
from gamow_decay.utils import (
    EXCEPTION_REGISTRY,
    ErrorCode,
    GamowDecayError,
    configure_logging,
    get_logger,
    performance_logger,
    run_context,
)


class TestPackage:
    """Test the top-level package."""

    def test_version(self):
        """The version is a dotted string."""
        assert gamow_decay.__version__.count(".") == 2

    @pytest.mark.parametrize("module", [
        "gamow_decay.utils",
        "gamow_decay.models",
        "gamow_decay.core",
        "gamow_decay.cli",
    ])
    def test_all_names_exist(self, module):
        """Every name in __all__ resolves."""
        package = importlib.import_module(module)
        for name in package.__all__:
            assert hasattr(package, name), f"{module} lacks {name}"


class TestUtilsExports:
    """Test the utils subpackage."""

    def test_exception_exports(self):
        """The root exception and its registry are exported."""
        assert issubclass(EXCEPTION_REGISTRY[ErrorCode.PARSE_ERROR], GamowDecayError)

    def test_logging_exports(self):
        """Logging helpers are exported and usable."""
        assert callable(configure_logging)
        assert get_logger("init").name == "gamow_decay.init"
        with run_context(step="init"):
            with performance_logger.measure_time("init") as timing:
                pass
        assert timing['success'] is True


class TestSubpackageExports:
    """Test that core, models and cli expose the pipeline."""

    def test_core(self):
        """Operations of every core module are re-exported."""
        from gamow_decay import core
        for name in ("cauchy_pairing", "hardy_classify", "simulate_trajectory",
                     "detect_dark_periods", "fit_lifetime"):
            assert callable(getattr(core, name))

    def test_models(self):
        """Model classes are re-exported."""
        from gamow_decay import models
        assert models.RunConfig.model_fields['mode'].annotation is models.Mode
        assert models.HardyKind.LOWER.value == "lower"

    def test_cli(self):
        """The CLI exposes config parsing and the subcommand runner."""
        from gamow_decay import cli
        assert callable(cli.parse_config)
        assert callable(cli.run_subcommand)
