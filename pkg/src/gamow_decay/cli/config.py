"""
Run configuration files.

A configuration is flat ``key = value`` UTF-8 text. Lines are tokenised with
python-dotenv's parser, so quoting and ``#`` comments follow the familiar
``.env`` grammar, and each binding keeps its source line for diagnostics.
Keys are namespaced (``scheme.unshelve_rate``) and map onto the sections of
RunConfig; anything else is rejected.
"""

import io
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Type, Union

import pydantic
from dotenv.parser import parse_stream
from pydantic import BaseModel

from ..models.config import RunConfig
from ..utils.exceptions import (
    ConfigurationError,
    GamowDecayError,
    MissingInput,
    ParseError,
    RangeError,
    UnknownKey,
)
from ..utils.logging import get_logger

logger = get_logger(__name__)

SCALAR_KEYS = ('mode', 'seed')
# validator field names that are not configuration keys
FIELD_ALIASES = {'stop': 'trajectory.target_dark_periods'}


def _sections() -> Dict[str, Type[BaseModel]]:
    sections = {}
    for name, field in RunConfig.model_fields.items():
        annotation = field.annotation
        if isinstance(annotation, type) and issubclass(annotation, BaseModel):
            sections[name] = annotation
    return sections


SECTIONS = _sections()


def _tokenise(text: str) -> Tuple[Dict[str, str], Dict[str, int]]:
    """Collect bindings as {key: raw value} and {key: line}."""
    values: Dict[str, str] = {}
    lines: Dict[str, int] = {}
    for binding in parse_stream(io.StringIO(text)):
        line = binding.original.line
        if binding.error:
            raise ParseError(line, f"cannot parse {binding.original.string.strip()!r}")
        if binding.key is None:
            continue
        if binding.value is None:
            raise ParseError(line, f"missing '=' after key '{binding.key}'")
        key = binding.key.strip()
        if key in lines:
            raise ParseError(line, f"duplicate key '{key}' (first set on line {lines[key]})")
        values[key] = binding.value.strip()
        lines[key] = line
    return values, lines


def _split(key: str, line: int) -> Tuple[str, Optional[str]]:
    if key in SCALAR_KEYS:
        return key, None
    namespace, _, name = key.partition('.')
    section = SECTIONS.get(namespace)
    if section is None or not name or name not in section.model_fields:
        raise UnknownKey(key, line)
    return namespace, name


def _range_error(exc: pydantic.ValidationError, prefix: str, raw: Dict[str, Any],
                 lines: Dict[str, int]) -> RangeError:
    first = exc.errors()[0]
    loc = [str(part) for part in first['loc']]
    key = '.'.join([prefix, *loc]) if prefix else '.'.join(loc)
    if key not in lines:
        key = prefix or key
    return RangeError(key, raw.get(key), first['msg'], lines.get(key))


def _domain_error(exc: GamowDecayError, prefix: str, raw: Dict[str, Any],
                  lines: Dict[str, int]) -> ConfigurationError:
    """Re-anchor a model validator error on the configuration key it concerns."""
    field = getattr(exc, 'field', None) or getattr(exc, 'key', None)
    field = FIELD_ALIASES.get(field, field)
    candidates = []
    if field:
        candidates = [f"{prefix}.{field}" if prefix else field, field,
                      f"scheme.{field}", f"trajectory.{field}"]
    key = next((c for c in candidates if c in lines), candidates[0] if candidates else prefix)
    if isinstance(exc, ConfigurationError):
        return ConfigurationError(exc.message, key=key, line=lines.get(key),
                                  error_code=exc.error_code, suggestions=exc.suggestions)
    return RangeError(key, raw.get(key), exc.message, lines.get(key))


def _resolve_inputs(config: RunConfig, lines: Dict[str, int],
                    base_dir: Optional[Path]) -> RunConfig:
    updates = {}
    for name in type(config.io).model_fields:
        path = getattr(config.io, name)
        if path is None:
            continue
        if not path.is_absolute() and base_dir is not None:
            path = base_dir / path
        key = f"io.{name}"
        if not path.is_file():
            raise MissingInput(key, str(path), lines.get(key))
        updates[name] = path
    if not updates:
        return config
    return config.model_copy(update={'io': config.io.model_copy(update=updates)})


def parse_config(text: str, base_dir: Optional[Path] = None,
                 mode: Optional[str] = None) -> RunConfig:
    """
    Parse and validate configuration text.

    Args:
        text: ``key = value`` lines
        base_dir: Directory that relative ``io.*`` paths are resolved against
        mode: Subcommand requested on the command line; fills in a missing
            ``mode`` key and must agree with a present one

    Returns:
        Fully validated RunConfig with input paths resolved

    Raises:
        ParseError: For a malformed line
        UnknownKey: For a key outside the recognised namespaces
        RangeError: For a value violating its constraint
        MissingInput: When a configured input file does not exist
        ConfigurationError: For other cross-key problems
    """
    values, lines = _tokenise(text)
    grouped: Dict[str, Dict[str, str]] = {}
    scalars: Dict[str, Any] = {}
    for key, value in values.items():
        namespace, name = _split(key, lines[key])
        if name is None:
            scalars[namespace] = value
        else:
            grouped.setdefault(namespace, {})[name] = value

    if mode is not None:
        if scalars.get('mode', mode) != mode:
            raise ConfigurationError(
                f"configuration is for mode '{scalars['mode']}', not '{mode}'",
                key='mode', line=lines['mode']
            )
        scalars['mode'] = mode
    if 'mode' not in scalars:
        raise ConfigurationError("'mode' is required", key='mode',
                                 suggestions=["Add a line 'mode = <subcommand>'"])

    sections: Dict[str, BaseModel] = {}
    for namespace, fields in grouped.items():
        try:
            sections[namespace] = SECTIONS[namespace](**fields)
        except pydantic.ValidationError as exc:
            raise _range_error(exc, namespace, values, lines) from exc
        except GamowDecayError as exc:
            raise _domain_error(exc, namespace, values, lines) from exc

    try:
        config = RunConfig(**scalars, **sections)
    except pydantic.ValidationError as exc:
        raise _range_error(exc, '', values, lines) from exc
    except GamowDecayError as exc:
        raise _domain_error(exc, '', values, lines) from exc

    config = _resolve_inputs(config, lines, base_dir)
    logger.debug("Parsed configuration with %d keys for mode '%s'", len(values), config.mode.value)
    return config


def load_config(path: Union[str, Path], mode: Optional[str] = None) -> RunConfig:
    """Read a configuration file; relative input paths are taken from its directory."""
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except FileNotFoundError as exc:
        raise MissingInput('--config', str(path)) from exc
    except UnicodeDecodeError as exc:
        raise ParseError(1, f"configuration is not UTF-8 text: {exc.reason}") from exc
    logger.info("Loading configuration from %s", path)
    return parse_config(text, base_dir=path.parent, mode=mode)
