"""
Shelving-ion trajectories as an alternating renewal process.

The ion starts bright at t = 0. A bright dwell ~ Exp(shelve_rate) is followed,
optionally, by a photon-free stay in the intermediate level ~ Exp(1 / lifetime),
and then by a dark dwell ~ Exp(unshelve_rate) in the metastable level. Photon
counts per bin are Poisson with mean bright_rate * efficiency * bright time in
the bin.

Every trajectory owns a generator seeded from (seed, trajectory index), so an
ensemble gives the same output serially or in parallel.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Iterator, List, Tuple

import numpy as np

from ..models.shelving import (
    FluorescenceTrace,
    JumpRecord,
    LevelScheme,
    Trajectory,
    TrajectoryConfig,
)
from ..utils.exceptions import InvalidConfig, ValidationError
from ..utils.logging import get_logger, performance_logger

logger = get_logger(__name__)

# bright bins appended after the last requested dark period
TAIL_BINS = 3
# bin widths above this fraction of the metastable lifetime blur dark periods
BIN_WARNING_FRACTION = 0.1

Cycle = Tuple[float, float, float, float]


def trajectory_rng(seed: int, index: int) -> np.random.Generator:
    """Independent generator for trajectory `index` of the ensemble seeded by `seed`."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def _cycles(rng: np.random.Generator, scheme: LevelScheme) -> Iterator[Cycle]:
    """Yield (bright_start, bright_end, shelve_time, unshelve_time) forever."""
    t = 0.0
    while True:
        if scheme.shelve_rate > 0:
            bright = rng.exponential(1.0 / scheme.shelve_rate)
        else:
            bright = math.inf
        delay = 0.0
        if scheme.intermediate_lifetime > 0:
            delay = rng.exponential(scheme.intermediate_lifetime)
        dark = rng.exponential(1.0 / scheme.unshelve_rate)
        bright_end = t + bright
        shelve = bright_end + delay
        unshelve = shelve + dark
        yield t, bright_end, shelve, unshelve
        t = unshelve


def _check_setup(scheme: LevelScheme, config: TrajectoryConfig) -> None:
    if scheme.bright_rate == 0:
        raise InvalidConfig("bright_rate is 0, so dark periods cannot be detected",
                            field='bright_rate')
    if config.bin_width_s > BIN_WARNING_FRACTION * scheme.metastable_lifetime:
        logger.warning(
            "bin width %.3g s is not small against the metastable lifetime %.3g s",
            config.bin_width_s, scheme.metastable_lifetime
        )


def _events(rng: np.random.Generator, scheme: LevelScheme,
            config: TrajectoryConfig) -> Tuple[float, List[Cycle]]:
    """Draw cycles up to the end of the trace; returns (end time, cycles)."""
    cycles: List[Cycle] = []
    source = _cycles(rng, scheme)
    if config.duration_s is not None:
        n_bins = math.ceil(config.duration_s / config.bin_width_s)
        end = n_bins * config.bin_width_s
    else:
        if scheme.shelve_rate == 0:
            raise InvalidConfig("target_dark_periods needs shelve_rate > 0",
                                field='target_dark_periods')
        while len(cycles) < config.target_dark_periods:
            cycles.append(next(source))
        last_unshelve = cycles[-1][3]
        end = (math.ceil(last_unshelve / config.bin_width_s) + TAIL_BINS) * config.bin_width_s

    # cycles drawn so far all finish before end; keep drawing until one reaches past it
    while not cycles or cycles[-1][3] < end:
        cycle = next(source)
        cycles.append(cycle)
        if cycle[1] >= end:
            break
    return end, cycles


def _jump_records(cycles: List[Cycle], end: float) -> List[JumpRecord]:
    records = []
    for _, _, shelve, unshelve in cycles:
        if shelve >= end:
            break
        if unshelve <= end:
            records.append(JumpRecord(shelve_time_s=shelve, unshelve_time_s=unshelve))
        else:
            records.append(JumpRecord(shelve_time_s=shelve, unshelve_time_s=end, censored=True))
    return records


def _bright_time_per_bin(cycles: List[Cycle], end: float, bin_width: float,
                         n_bins: int) -> np.ndarray:
    starts = np.array([c[0] for c in cycles])
    stops = np.minimum(np.array([c[1] for c in cycles]), end)
    keep = starts < end
    starts, stops = starts[keep], stops[keep]
    knots = np.column_stack([starts, stops]).ravel()
    lengths = stops - starts
    cumulative = np.column_stack([
        np.concatenate([[0.0], np.cumsum(lengths)[:-1]]),
        np.cumsum(lengths),
    ]).ravel()
    edges = bin_width * np.arange(n_bins + 1)
    covered = np.interp(edges, knots, cumulative, left=0.0, right=float(lengths.sum()))
    return np.clip(np.diff(covered), 0.0, None)


def simulate_trajectory(scheme: LevelScheme, config: TrajectoryConfig, index: int = 0) -> Trajectory:
    """
    Simulate one shelving trajectory.

    Args:
        scheme: Level rates of the ion
        config: Bin width, seed, stop criterion and detection efficiency
        index: Position in an ensemble; selects the random stream

    Returns:
        Trajectory with the binned fluorescence and ground-truth jump records

    Raises:
        InvalidConfig: If the setup cannot produce a detectable trace
    """
    if index < 0:
        raise ValidationError('index', index, ">= 0")
    _check_setup(scheme, config)
    rng = trajectory_rng(config.seed, index)

    with performance_logger.measure_time("simulate_trajectory", trajectory=index):
        end, cycles = _events(rng, scheme, config)
        n_bins = int(round(end / config.bin_width_s))
        bright_time = _bright_time_per_bin(cycles, end, config.bin_width_s, n_bins)
        mean_counts = scheme.bright_rate * config.detection_efficiency * bright_time
        counts = rng.poisson(mean_counts)
        records = _jump_records(cycles, end)

    if scheme.intermediate_lifetime > 0:
        held = sum(min(c[2], end) - min(c[1], end) for c in cycles)
        logger.info("Trajectory %d spent %.3e of its time in the intermediate level",
                    index, held / end)
    logger.debug("Trajectory %d: %d bins, %d jump records", index, n_bins, len(records))
    return Trajectory(
        trace=FluorescenceTrace(bin_width_s=config.bin_width_s, counts=counts),
        jumps=records,
    )


def run_ensemble(
    scheme: LevelScheme,
    config: TrajectoryConfig,
    n_trajectories: int,
    workers: int = 1,
) -> List[Trajectory]:
    """
    Simulate independent trajectories 0 .. n_trajectories - 1.

    Results are returned in trajectory-index order whatever the number of
    worker processes.
    """
    if n_trajectories < 1:
        raise ValidationError('n_trajectories', n_trajectories, ">= 1")
    if workers < 1:
        raise ValidationError('workers', workers, ">= 1")
    _check_setup(scheme, config)
    task = partial(simulate_trajectory, scheme, config)
    if workers == 1 or n_trajectories == 1:
        return [task(i) for i in range(n_trajectories)]
    logger.info("Simulating %d trajectories on %d processes", n_trajectories, workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, range(n_trajectories)))
