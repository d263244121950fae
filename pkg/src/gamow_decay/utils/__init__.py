"""
Utility modules for gamow-decay.

1. Exception Handling (exceptions.py):
   - Exception hierarchy with error codes and CLI exit statuses

2. Logging (logging.py):
   - Structured and console logging on stderr
   - Run context and performance timing
"""

from .exceptions import (
    GamowDecayError,
    ValidationError,
    CausalityViolation,
    NegativeDuration,
    QuadratureFailure,
    NonHardyTest,
    GridNotUniform,
    InsufficientDecay,
    NotAStateFunction,
    InvalidConfig,
    NoBrightLevel,
    InsufficientPoints,
    NonDecayingData,
    ConfigurationError,
    ParseError,
    UnknownKey,
    RangeError,
    MissingInput,
    ErrorCode,
    EXCEPTION_REGISTRY,
    EXIT_RUNTIME,
    EXIT_VALIDATION,
    get_exception_for_error_code,
)

from .logging import (
    JSONFormatter,
    ConsoleFormatter,
    PerformanceLogger,
    configure_logging,
    current_run_context,
    get_logger,
    performance_logger,
    run_context,
    timed,
)

__all__ = [
    "GamowDecayError",
    "ValidationError",
    "CausalityViolation",
    "NegativeDuration",
    "QuadratureFailure",
    "NonHardyTest",
    "GridNotUniform",
    "InsufficientDecay",
    "NotAStateFunction",
    "InvalidConfig",
    "NoBrightLevel",
    "InsufficientPoints",
    "NonDecayingData",
    "ConfigurationError",
    "ParseError",
    "UnknownKey",
    "RangeError",
    "MissingInput",
    "ErrorCode",
    "EXCEPTION_REGISTRY",
    "EXIT_RUNTIME",
    "EXIT_VALIDATION",
    "get_exception_for_error_code",
    "JSONFormatter",
    "ConsoleFormatter",
    "PerformanceLogger",
    "configure_logging",
    "current_run_context",
    "get_logger",
    "performance_logger",
    "run_context",
    "timed",
]
