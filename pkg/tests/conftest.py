"""
Pytest configuration and fixtures for the gamow-decay test suite.

Provides the src path, a clean logging state, temporary directories and the
physical fixtures shared across modules: the reference resonance pole, its
sampled Gamow density, and a shelving scheme with a 30 s metastable lifetime.
"""

import logging
import sys
import tempfile
from pathlib import Path

import pytest

# Add the src directory to Python path for imports
test_dir = Path(__file__).parent
project_root = test_dir.parent
src_dir = project_root / "src"
sys.path.insert(0, str(src_dir))

from gamow_decay.models.resonance import RationalTestFunction, ResonancePole  # noqa: E402
from gamow_decay.models.shelving import LevelScheme  # noqa: E402
from gamow_decay.models.wavefunction import EnergyGrid  # noqa: E402


@pytest.fixture(scope="session", autouse=True)
def setup_test_environment():
    """Set up the test environment before running tests."""
    logging.getLogger().handlers.clear()
    logging.basicConfig(level=logging.WARNING)
    yield
    logging.getLogger().handlers.clear()


@pytest.fixture(autouse=True)
def reset_package_logging():
    """Drop handlers a test attached to the package logger."""
    package_logger = logging.getLogger("gamow_decay")
    handlers = package_logger.handlers[:]
    level = package_logger.level
    propagate = package_logger.propagate
    yield
    package_logger.handlers[:] = handlers
    package_logger.setLevel(level)
    package_logger.propagate = propagate


@pytest.fixture
def temp_directory():
    """Provide a temporary directory for test files."""
    with tempfile.TemporaryDirectory() as temp_dir:
        yield Path(temp_dir)


@pytest.fixture
def temp_log_file(temp_directory):
    """Provide a temporary log file for testing."""
    yield str(temp_directory / "test.log")


@pytest.fixture
def fixture_pole():
    """Resonance at E_R = 10 with width 1 (natural units)."""
    return ResonancePole(e_r=10.0, gamma=1.0)


@pytest.fixture
def double_pole_test(fixture_pole):
    """Test function 1/(E - (10 + 1i))^2, analytic in the lower half-plane."""
    return RationalTestFunction.double_pole(complex(10.0, 1.0))


@pytest.fixture
def fixture_grid(fixture_pole):
    """2^14-point grid spanning E_R +/- 200 gamma."""
    return EnergyGrid.uniform_span(fixture_pole.e_r, 200.0 * fixture_pole.gamma, 2 ** 14)


@pytest.fixture
def shelving_scheme():
    """Bright ion at 1000 counts/s with a 30 s metastable lifetime."""
    return LevelScheme(bright_rate=1000.0, shelve_rate=1.0 / 60.0, unshelve_rate=1.0 / 30.0)


@pytest.fixture
def write_config(temp_directory):
    """Write configuration text into the temporary directory and return its path."""
    def _write(text: str, name: str = "run.cfg") -> Path:
        path = temp_directory / name
        path.write_text(text, encoding="utf-8")
        return path
    return _write
