"""
CSV artifacts of the pipeline.

Every file has a header row and a fixed column order. Floats are written as
the shortest decimal that reads back to the same double, integers as plain
digits and flags as 0/1, with ``\\n`` line endings, so that reading a file and
writing it again reproduces it byte for byte.
"""

import csv
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..models.analysis import ComparisonReport, DarkPeriod, SurvivalCurve
from ..models.resonance import PairingRow
from ..models.shelving import FluorescenceTrace, JumpRecord
from ..utils.exceptions import ParseError, ValidationError
from ..utils.logging import get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]

TRACE_COLUMNS = ('bin_index', 't_start_s', 'counts')
JUMP_COLUMNS = ('index', 'shelve_time_s', 'unshelve_time_s', 'censored')
DARK_COLUMNS = ('index', 't0_s', 't1_s', 'dwell_s')
SURVIVAL_COLUMNS = ('t_s', 'n_of_t', 'ratio', 'born', 'binomial_sigma')
PAIRING_COLUMNS = ('t', 'abs_ratio', 'phase', 'expected_abs')

# ulps searched either side of the mean spacing for a width that reproduces the bin starts
WIDTH_SEARCH_ULPS = 8


def format_value(value: Any) -> str:
    """Shortest round-trip text of a scalar."""
    if isinstance(value, (bool, np.bool_)):
        return '1' if value else '0'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _write(path: PathLike, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with path.open('w', encoding='utf-8', newline='') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
            count += 1
    logger.info("Wrote %d rows to %s", count, path)
    return path


def _read(path: PathLike, columns: Sequence[str]) -> List[Dict[str, str]]:
    path = Path(path)
    with path.open('r', encoding='utf-8', newline='') as handle:
        reader = csv.DictReader(handle)
        if tuple(reader.fieldnames or ()) != tuple(columns):
            raise ParseError(1, f"{path.name}: expected header {','.join(columns)}, "
                                f"got {','.join(reader.fieldnames or ())}")
        rows = list(reader)
    logger.debug("Read %d rows from %s", len(rows), path)
    return rows


def _column(rows: List[Dict[str, str]], name: str, convert: Callable[[str], Any],
            path: PathLike) -> List[Any]:
    values = []
    for number, row in enumerate(rows, start=2):
        try:
            values.append(convert(row[name]))
        except (TypeError, ValueError) as exc:
            raise ParseError(number, f"{Path(path).name}: bad {name} value {row[name]!r}") from exc
    return values


def _flag(text: str) -> bool:
    if text not in ('0', '1'):
        raise ValueError(text)
    return text == '1'


def write_trace(path: PathLike, trace: FluorescenceTrace) -> Path:
    rows = zip(range(trace.n_bins), trace.bin_starts(), trace.counts)
    return _write(path, TRACE_COLUMNS, rows)


def _bin_width(starts: np.ndarray) -> float:
    """Width w with starts[0] + w * i equal to every written start, or nearest to it."""
    n = starts.size
    estimate = (starts[-1] - starts[0]) / (n - 1)
    below = above = estimate
    candidates = [estimate]
    for _ in range(WIDTH_SEARCH_ULPS):
        below = np.nextafter(below, -np.inf)
        above = np.nextafter(above, np.inf)
        candidates.extend((above, below))
    offsets = np.arange(n)
    for width in candidates:
        if np.array_equal(starts[0] + width * offsets, starts):
            return float(width)
    return float(estimate)


def read_trace(path: PathLike, bin_width_s: Optional[float] = None) -> FluorescenceTrace:
    """
    Rebuild a trace from its bin starts and counts.

    The bin width is taken from the span of the bin starts. A single-bin trace
    carries no spacing, so its width must be passed in.

    Raises:
        ValidationError: If the starts are not evenly spaced or a single-bin
            trace has no width
    """
    rows = _read(path, TRACE_COLUMNS)
    starts = np.array(_column(rows, 't_start_s', float, path), dtype=float)
    counts = _column(rows, 'counts', int, path)
    if starts.size < 1:
        raise ValidationError('trace', 0, "at least one bin")
    if starts.size == 1:
        if bin_width_s is None:
            raise ValidationError('bin_width_s', None, "a width for a single-bin trace")
        width = bin_width_s
    else:
        width = _bin_width(starts) if bin_width_s is None else bin_width_s
        expected = starts[0] + width * np.arange(starts.size)
        if not np.allclose(starts, expected, rtol=1e-9, atol=1e-12 * abs(width)):
            raise ValidationError('t_start_s', f"{Path(path).name}", f"bin starts spaced by {width!r}")
    return FluorescenceTrace(bin_width_s=width, counts=counts, t_start_s=float(starts[0]))


def write_jumps(path: PathLike, jumps: Sequence[JumpRecord]) -> Path:
    rows = ((i, j.shelve_time_s, j.unshelve_time_s, j.censored) for i, j in enumerate(jumps))
    return _write(path, JUMP_COLUMNS, rows)


def read_jumps(path: PathLike) -> List[JumpRecord]:
    rows = _read(path, JUMP_COLUMNS)
    shelve = _column(rows, 'shelve_time_s', float, path)
    unshelve = _column(rows, 'unshelve_time_s', float, path)
    censored = _column(rows, 'censored', _flag, path)
    return [JumpRecord(shelve_time_s=a, unshelve_time_s=b, censored=c)
            for a, b, c in zip(shelve, unshelve, censored)]


def write_dark(path: PathLike, periods: Sequence[DarkPeriod]) -> Path:
    rows = ((i, p.t0_s, p.t1_s, p.dwell_s) for i, p in enumerate(periods))
    return _write(path, DARK_COLUMNS, rows)


def read_dark(path: PathLike) -> List[DarkPeriod]:
    rows = _read(path, DARK_COLUMNS)
    t0 = _column(rows, 't0_s', float, path)
    t1 = _column(rows, 't1_s', float, path)
    return [DarkPeriod(t0_s=a, t1_s=b) for a, b in zip(t0, t1)]


def write_survival(path: PathLike, report: ComparisonReport, curve: SurvivalCurve) -> Path:
    """Write N(t) with the Born probability and binomial envelope of `report`."""
    if len(report.rows) != curve.t_s.size:
        raise ValidationError('report', len(report.rows), f"{curve.t_s.size} rows")
    rows = ((row.t_s, n, row.ratio, row.born, row.binomial_sigma)
            for row, n in zip(report.rows, curve.n_of_t))
    return _write(path, SURVIVAL_COLUMNS, rows)


def read_survival(path: PathLike) -> Tuple[SurvivalCurve, np.ndarray]:
    """
    Read a survival table.

    Returns:
        The counting curve, with M recovered from the first row carrying a
        non-zero ratio, and the Born column
    """
    rows = _read(path, SURVIVAL_COLUMNS)
    t = _column(rows, 't_s', float, path)
    n = _column(rows, 'n_of_t', int, path)
    ratio = _column(rows, 'ratio', float, path)
    born = _column(rows, 'born', float, path)
    usable = [(count, r) for count, r in zip(n, ratio) if r > 0]
    if not usable:
        raise ValidationError('survival', path, "a row with N(t) > 0")
    m = int(round(usable[0][0] / usable[0][1]))
    return SurvivalCurve(t_s=t, n_of_t=n, M=m), np.array(born, dtype=float)


def write_pairing(path: PathLike, rows: Sequence[PairingRow]) -> Path:
    return _write(path, PAIRING_COLUMNS, ((r.t, r.abs_ratio, r.phase, r.expected_abs) for r in rows))


def read_pairing(path: PathLike) -> List[PairingRow]:
    rows = _read(path, PAIRING_COLUMNS)
    columns = [_column(rows, name, float, path) for name in PAIRING_COLUMNS]
    return [PairingRow(t=t, abs_ratio=a, phase=p, expected_abs=e) for t, a, p, e in zip(*columns)]
