"""
Custom exception classes for the gamow-decay toolkit.

Every error raised by the library derives from GamowDecayError so callers (and
the CLI) can catch one root type, inspect a structured error code, and surface
suggestions to the user.

Exception Hierarchy:
    GamowDecayError (base)
    ├── ValidationError (generic precondition failures)
    ├── CausalityViolation (negative durations, backward evolution)
    │   └── NegativeDuration
    ├── QuadratureFailure
    ├── NonHardyTest
    ├── GridNotUniform
    ├── InsufficientDecay
    ├── NotAStateFunction
    ├── InvalidConfig (simulation setup)
    ├── NoBrightLevel
    ├── InsufficientPoints
    ├── NonDecayingData
    └── ConfigurationError (run configuration files)
        ├── ParseError
        ├── UnknownKey
        ├── RangeError
        └── MissingInput
"""

import sys
import traceback
from enum import Enum
from typing import Any, Dict, List, Optional

EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


class ErrorCode(Enum):
    """
    Enumeration of error codes for programmatic error handling.

    Codes are grouped by subsystem so a numeric range identifies where the
    failure originated.
    """
    # General errors (1000-1999)
    UNKNOWN_ERROR = 1000
    INTERNAL_ERROR = 1001
    VALIDATION_ERROR = 1002

    # Causality errors (2000-2999)
    CAUSALITY_VIOLATION = 2000
    NEGATIVE_DURATION = 2001

    # Numerical integration errors (3000-3999)
    QUADRATURE_FAILURE = 3000
    NON_HARDY_TEST = 3001

    # Sampled wave function errors (4000-4999)
    GRID_NOT_UNIFORM = 4000
    INSUFFICIENT_DECAY = 4001
    NOT_A_STATE_FUNCTION = 4002

    # Simulation errors (5000-5999)
    INVALID_CONFIG = 5000

    # Analysis errors (6000-6999)
    NO_BRIGHT_LEVEL = 6000
    INSUFFICIENT_POINTS = 6001
    NON_DECAYING_DATA = 6002

    # Configuration file errors (7000-7999)
    CONFIGURATION_ERROR = 7000
    PARSE_ERROR = 7001
    UNKNOWN_KEY = 7002
    RANGE_ERROR = 7003
    MISSING_INPUT = 7004


class GamowDecayError(Exception):
    """
    Base exception class for gamow-decay errors.

    Attributes:
        message: Human-readable error message
        error_code: Structured error code for programmatic handling
        details: Additional context information for debugging
        suggestions: List of suggested actions to resolve the error
        context: Contextual information about when/where the error occurred
        exit_code: Process exit status the CLI uses for this error
    """

    exit_code: int = EXIT_RUNTIME

    def __init__(
        self,
        message: str,
        error_code: ErrorCode = ErrorCode.UNKNOWN_ERROR,
        details: Optional[Dict[str, Any]] = None,
        suggestions: Optional[List[str]] = None,
        context: Optional[Dict[str, Any]] = None,
        add_frame_info: bool = False
    ):
        super().__init__(message)
        self.message = message
        self.error_code = error_code
        self.details = details or {}
        self.suggestions = suggestions or []
        self.context = context or {}

        if add_frame_info and hasattr(sys, '_getframe'):
            try:
                frame = sys._getframe(1)
                self.context.update({
                    'file': frame.f_code.co_filename,
                    'function': frame.f_code.co_name,
                    'line': frame.f_lineno
                })
            except (AttributeError, ValueError):
                pass

    def add_context(self, key: str, value: Any) -> 'GamowDecayError':
        """
        Add additional context information to the exception.

        Args:
            key: Context key
            value: Context value

        Returns:
            Self for method chaining
        """
        self.context[key] = value
        return self

    def add_suggestion(self, suggestion: str) -> 'GamowDecayError':
        """
        Add a suggestion for resolving the error.

        Args:
            suggestion: Human-readable suggestion

        Returns:
            Self for method chaining
        """
        self.suggestions.append(suggestion)
        return self

    def to_dict(self) -> Dict[str, Any]:
        """Convert the exception to a dictionary for serialization."""
        return {
            'error_type': self.__class__.__name__,
            'message': self.message,
            'error_code': self.error_code.name,
            'error_code_value': self.error_code.value,
            'exit_code': self.exit_code,
            'details': self.details,
            'suggestions': self.suggestions,
            'context': self.context
        }

    def __str__(self) -> str:
        result = f"[{self.error_code.name}] {self.message}"
        if self.suggestions:
            result += f"\nSuggestions: {'; '.join(self.suggestions)}"
        return result

    @classmethod
    def from_exception(
        cls,
        exception: Exception,
        message: Optional[str] = None,
        error_code: Optional[ErrorCode] = None,
        additional_context: Optional[Dict[str, Any]] = None
    ) -> 'GamowDecayError':
        """
        Wrap a foreign exception while preserving its information.

        Args:
            exception: The original exception to wrap
            message: Custom message (uses original exception message if None)
            error_code: Specific error code (uses INTERNAL_ERROR if None)
            additional_context: Additional context to add

        Returns:
            New GamowDecayError chained to the original exception
        """
        new_exception = GamowDecayError(
            message=message if message is not None else str(exception),
            error_code=error_code or ErrorCode.INTERNAL_ERROR,
            context=dict(additional_context or {})
        )
        new_exception.__cause__ = exception
        new_exception.add_context('original_exception_type', type(exception).__name__)
        new_exception.add_context('original_exception_message', str(exception))
        if exception.__traceback__ is not None:
            tb_lines = traceback.format_tb(exception.__traceback__)
            new_exception.add_context('original_traceback', tb_lines[-3:])
        return new_exception


class ValidationError(GamowDecayError):
    """
    Exception raised when an argument fails a precondition.

    Attributes:
        field: Name of the offending argument
        value: The invalid value that was provided
        expected: Description of what was expected
    """

    exit_code = EXIT_VALIDATION

    def __init__(self, field: str, value: Any, expected: str):
        super().__init__(
            message=f"Validation error for '{field}': {value!r} (expected: {expected})",
            error_code=ErrorCode.VALIDATION_ERROR,
            suggestions=[f"Ensure '{field}' satisfies: {expected}"]
        )
        self.field = field
        self.value = value
        self.expected = expected
        self.add_context('validation_field', field)
        self.add_context('validation_value', repr(value))


class CausalityViolation(GamowDecayError):
    """
    Raised when a duration or evolution time precedes the preparation time.

    Probabilities and state evolutions exist only for t >= t0; asking for
    t < 0 relative to preparation is rejected.

    Attributes:
        t: The offending time value
        quantity: What the time was meant to describe
    """

    exit_code = EXIT_VALIDATION

    def __init__(
        self,
        t: float,
        quantity: str = "duration",
        error_code: ErrorCode = ErrorCode.CAUSALITY_VIOLATION
    ):
        super().__init__(
            message=f"{quantity} must be >= 0 (after preparation), got {t!r}",
            error_code=error_code,
            suggestions=[
                "Measure times from the preparation instant t0",
                "Use the probe guard to study backward extrapolation explicitly"
            ]
        )
        self.t = t
        self.quantity = quantity
        self.add_context('time', t)
        self.add_context('quantity', quantity)


class NegativeDuration(CausalityViolation):
    """Raised when a dwell-time threshold is negative."""

    def __init__(self, t: float, quantity: str = "dwell threshold"):
        super().__init__(t, quantity=quantity, error_code=ErrorCode.NEGATIVE_DURATION)


class QuadratureFailure(GamowDecayError):
    """
    Raised when adaptive quadrature does not reach the requested tolerance.

    Attributes:
        achieved_error: Error estimate reported by the integrator
        tolerance: Requested absolute tolerance
    """

    def __init__(self, message: str, achieved_error: float, tolerance: float):
        super().__init__(
            message=f"{message} (achieved error {achieved_error:.3e}, tolerance {tolerance:.3e})",
            error_code=ErrorCode.QUADRATURE_FAILURE,
            suggestions=[
                "Loosen quad.abs_tol or raise quad.max_evals",
                "Reduce |t| so the integrand oscillates less"
            ]
        )
        self.achieved_error = achieved_error
        self.tolerance = tolerance
        self.add_context('achieved_error', achieved_error)
        self.add_context('tolerance', tolerance)


class NonHardyTest(GamowDecayError):
    """Raised when a rational test function has a pole in the lower half-plane."""

    exit_code = EXIT_VALIDATION

    def __init__(self, pole: complex):
        super().__init__(
            message=f"test function pole {pole} lies in the lower half-plane",
            error_code=ErrorCode.NON_HARDY_TEST,
            suggestions=["Place every test-function pole strictly above the real axis"]
        )
        self.pole = pole
        self.add_context('pole', str(pole))


class GridNotUniform(GamowDecayError):
    """Raised when a spectral operation receives a non-uniform energy grid."""

    exit_code = EXIT_VALIDATION

    def __init__(self, max_relative_deviation: float):
        super().__init__(
            message=f"energy grid spacing deviates by {max_relative_deviation:.3e} (relative)",
            error_code=ErrorCode.GRID_NOT_UNIFORM,
            suggestions=["Resample onto EnergyGrid.uniform_span(...)"]
        )
        self.max_relative_deviation = max_relative_deviation


class InsufficientDecay(GamowDecayError):
    """Raised when samples do not fall off at both grid ends."""

    exit_code = EXIT_VALIDATION

    def __init__(self, endpoint_ratio: float, limit: float):
        super().__init__(
            message=(
                f"samples near the grid ends deviate from an algebraic tail by "
                f"{endpoint_ratio:.3e} of the peak (limit {limit:.1e}); the transform would alias"
            ),
            error_code=ErrorCode.INSUFFICIENT_DECAY,
            suggestions=["Widen the energy span of the grid"]
        )
        self.endpoint_ratio = endpoint_ratio
        self.limit = limit


class NotAStateFunction(GamowDecayError):
    """Raised when semigroup evolution is applied to a non-Lower function."""

    exit_code = EXIT_VALIDATION

    def __init__(self, leakage: float, classification: str):
        super().__init__(
            message=(
                f"wave function classifies as {classification} (leakage {leakage:.3e}); "
                "only lower-Hardy state functions evolve by the semigroup"
            ),
            error_code=ErrorCode.NOT_A_STATE_FUNCTION
        )
        self.leakage = leakage
        self.classification = classification


class InvalidConfig(GamowDecayError):
    """Raised when a level scheme and trajectory setup cannot be simulated."""

    exit_code = EXIT_VALIDATION

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(
            message=message,
            error_code=ErrorCode.INVALID_CONFIG,
            suggestions=["Set exactly one of duration_s or target_dark_periods"]
            if field == "stop" else []
        )
        self.field = field
        self.add_context('field', field)


class NoBrightLevel(GamowDecayError):
    """Raised when a fluorescence trace has no bright level to calibrate against."""

    def __init__(self, n_bins: int):
        super().__init__(
            message=f"no bright fluorescence level found in {n_bins} bins",
            error_code=ErrorCode.NO_BRIGHT_LEVEL,
            suggestions=["Check the detection efficiency and bright rate"]
        )
        self.n_bins = n_bins


class InsufficientPoints(GamowDecayError):
    """Raised when a lifetime fit has fewer than two usable points."""

    def __init__(self, usable: int):
        super().__init__(
            message=f"lifetime fit needs at least 2 points with N(t) > 0, got {usable}",
            error_code=ErrorCode.INSUFFICIENT_POINTS,
            suggestions=["Use a smaller survival bin or a longer trace"]
        )
        self.usable = usable


class NonDecayingData(GamowDecayError):
    """Raised when the fitted log-slope is not negative."""

    def __init__(self, slope: float):
        super().__init__(
            message=f"fitted slope {slope:.6g} is not negative; data do not decay",
            error_code=ErrorCode.NON_DECAYING_DATA
        )
        self.slope = slope
        self.add_context('slope', slope)


class ConfigurationError(GamowDecayError):
    """
    Base class for run configuration problems.

    Attributes:
        key: Configuration key involved (if any)
        line: 1-based line number in the configuration text (if known)
    """

    exit_code = EXIT_VALIDATION

    def __init__(
        self,
        message: str,
        key: Optional[str] = None,
        line: Optional[int] = None,
        error_code: ErrorCode = ErrorCode.CONFIGURATION_ERROR,
        suggestions: Optional[List[str]] = None
    ):
        location = f"line {line}: " if line is not None else ""
        super().__init__(
            message=f"{location}{message}",
            error_code=error_code,
            suggestions=suggestions
        )
        self.key = key
        self.line = line
        self.add_context('config_key', key)
        self.add_context('config_line', line)


class ParseError(ConfigurationError):
    """Raised for a malformed configuration line."""

    def __init__(self, line: int, reason: str):
        super().__init__(
            message=reason,
            line=line,
            error_code=ErrorCode.PARSE_ERROR,
            suggestions=["Write one 'key = value' per line; start comments with '#'"]
        )
        self.reason = reason


class UnknownKey(ConfigurationError):
    """Raised for a configuration key outside the recognised namespaces."""

    def __init__(self, key: str, line: Optional[int] = None):
        super().__init__(
            message=f"unknown key '{key}'",
            key=key,
            line=line,
            error_code=ErrorCode.UNKNOWN_KEY,
            suggestions=["Check the key spelling against the documented keys"]
        )


class RangeError(ConfigurationError):
    """Raised when a configuration value violates its constraint."""

    def __init__(
        self,
        key: str,
        value: Any,
        constraint: str,
        line: Optional[int] = None
    ):
        super().__init__(
            message=f"'{key}' = {value!r} violates {constraint}",
            key=key,
            line=line,
            error_code=ErrorCode.RANGE_ERROR
        )
        self.value = value
        self.constraint = constraint


class MissingInput(ConfigurationError):
    """Raised when a configured input file does not exist."""

    def __init__(self, key: str, path: str, line: Optional[int] = None):
        super().__init__(
            message=f"input file for '{key}' not found: {path}",
            key=key,
            line=line,
            error_code=ErrorCode.MISSING_INPUT
        )
        self.path = path


EXCEPTION_REGISTRY = {
    ErrorCode.UNKNOWN_ERROR: GamowDecayError,
    ErrorCode.INTERNAL_ERROR: GamowDecayError,
    ErrorCode.VALIDATION_ERROR: ValidationError,
    ErrorCode.CAUSALITY_VIOLATION: CausalityViolation,
    ErrorCode.NEGATIVE_DURATION: NegativeDuration,
    ErrorCode.QUADRATURE_FAILURE: QuadratureFailure,
    ErrorCode.NON_HARDY_TEST: NonHardyTest,
    ErrorCode.GRID_NOT_UNIFORM: GridNotUniform,
    ErrorCode.INSUFFICIENT_DECAY: InsufficientDecay,
    ErrorCode.NOT_A_STATE_FUNCTION: NotAStateFunction,
    ErrorCode.INVALID_CONFIG: InvalidConfig,
    ErrorCode.NO_BRIGHT_LEVEL: NoBrightLevel,
    ErrorCode.INSUFFICIENT_POINTS: InsufficientPoints,
    ErrorCode.NON_DECAYING_DATA: NonDecayingData,
    ErrorCode.CONFIGURATION_ERROR: ConfigurationError,
    ErrorCode.PARSE_ERROR: ParseError,
    ErrorCode.UNKNOWN_KEY: UnknownKey,
    ErrorCode.RANGE_ERROR: RangeError,
    ErrorCode.MISSING_INPUT: MissingInput,
}


def get_exception_for_error_code(error_code: ErrorCode) -> type:
    """
    Get the exception class registered for an error code.

    Args:
        error_code: The error code to look up

    Returns:
        Exception class for the error code (GamowDecayError if unregistered)
    """
    return EXCEPTION_REGISTRY.get(error_code, GamowDecayError)
