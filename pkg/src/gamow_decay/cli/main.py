"""
Command-line entry point: ``gamow-decay <subcommand> --config <path> [--out-dir <path>]``.

Exit status is 0 on success, 1 for configuration and precondition errors and
2 for runtime or numerical failures. Diagnostics go to stderr only.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from .. import __version__
from ..models.config import Mode
from ..utils.exceptions import EXIT_RUNTIME, GamowDecayError
from ..utils.logging import configure_logging, get_logger
from .commands import run_subcommand
from .config import load_config

logger = get_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gamow-decay",
        description="Resonance decay numerics and shelving-ion dwell-time analysis",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("subcommand", choices=[mode.value for mode in Mode],
                        help="Pipeline step to run")
    parser.add_argument("--config", required=True, type=Path,
                        help="Run configuration file (key = value lines)")
    parser.add_argument("--out-dir", type=Path, default=Path("."),
                        help="Directory for the artifacts (default: current directory)")
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
                        help="Diagnostic verbosity on stderr")
    parser.add_argument("--log-json", action="store_true",
                        help="Emit structured JSON log records")
    parser.add_argument("--log-file", type=Path, help="Also write DEBUG records to this file")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and return the process exit status."""
    args = build_parser().parse_args(argv)
    configure_logging(
        level=args.log_level,
        log_file=args.log_file,
        enable_structured=args.log_json,
        force=True,
    )

    try:
        config = load_config(args.config, mode=args.subcommand)
        result = run_subcommand(config, args.out_dir)
    except GamowDecayError as exc:
        logger.debug("%s failed", args.subcommand, exc_info=True)
        print(f"gamow-decay {args.subcommand}: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:
        wrapped = GamowDecayError.from_exception(exc, message=f"internal error: {exc}")
        logger.error("Unexpected failure in %s", args.subcommand, exc_info=True)
        print(f"gamow-decay {args.subcommand}: {wrapped}", file=sys.stderr)
        return EXIT_RUNTIME

    for path in result.artifacts:
        logger.info("artifact: %s", path)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
