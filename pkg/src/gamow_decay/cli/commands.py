"""
Subcommands of the gamow-decay pipeline.

Each runner reads its inputs from the validated RunConfig, calls the library
and writes its artifacts into the output directory. Errors are not caught
here; the entry point maps them onto exit statuses.
"""

from pathlib import Path
from typing import Callable, Dict, List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from ..core.analysis import (
    compare_counting_to_born,
    detect_dark_periods,
    fit_lifetime,
    lifetime_width_report,
    match_dark_periods,
    survival_curve,
)
from ..core.hardy import hardy_classify, semigroup_multiplier
from ..core.resonance import lifetime_from_width, pairing_table, sampled_resonance
from ..core.simulator import run_ensemble
from ..models.analysis import DarkPeriod, DetectionMatch, DwellEnsemble, FitResult
from ..models.config import HardyFixture, Mode, RunConfig
from ..models.shelving import Trajectory
from ..models.wavefunction import EvolutionGuard, HardyKind, SampledWaveFunction
from ..utils.logging import get_logger, performance_logger, run_context
from . import csv_io
from .report import (
    Section,
    comparison_section,
    detection_section,
    fit_section,
    hardy_section,
    render,
    simulation_section,
    survival_head_section,
    width_section,
)

logger = get_logger(__name__)

# evolution time of the hardy check, in lifetimes hbar / gamma
PROBE_LIFETIMES = 5.0


class RunResult(BaseModel):
    """Outcome of a successful subcommand."""

    model_config = ConfigDict(frozen=True)

    mode: Mode
    artifacts: List[Path]
    exit_code: int = 0


def _trajectory_names(count: int) -> List[Tuple[str, str]]:
    if count == 1:
        return [("trace.csv", "jumps.csv")]
    return [(f"trace_{i:04d}.csv", f"jumps_{i:04d}.csv") for i in range(count)]


def _simulate(config: RunConfig) -> List[Trajectory]:
    return run_ensemble(config.scheme, config.trajectory_config(),
                        config.ensemble.n_trajectories, config.ensemble.workers)


def _write_trajectories(trajectories: Sequence[Trajectory], out_dir: Path) -> List[Path]:
    written = []
    for trajectory, (trace_name, jumps_name) in zip(trajectories, _trajectory_names(len(trajectories))):
        written.append(csv_io.write_trace(out_dir / trace_name, trajectory.trace))
        written.append(csv_io.write_jumps(out_dir / jumps_name, trajectory.jumps))
    return written


def _detect(config: RunConfig, trajectories: Sequence[Trajectory]) -> Tuple[List[DarkPeriod], DetectionMatch]:
    """Detect dark periods in every trace and pool them with the summed match counts."""
    periods: List[DarkPeriod] = []
    detected = truth = matched = 0
    onset = end = 0.0
    for trajectory in trajectories:
        found = detect_dark_periods(trajectory.trace, config.detect.threshold_frac,
                                    config.detect.min_dark_bins)
        match = match_dark_periods(found, trajectory.jumps, trajectory.trace.bin_width_s)
        periods.extend(found)
        detected += match.detected
        truth += match.truth
        matched += match.matched
        onset = max(onset, match.max_onset_error_s)
        end = max(end, match.max_end_error_s)
    return periods, DetectionMatch(detected=detected, truth=truth, matched=matched,
                                   max_onset_error_s=onset, max_end_error_s=end)


def _width_gamma(config: RunConfig) -> float:
    """Line width to compare with; the scheme's decay rate when none is configured."""
    if config.width.gamma is not None:
        return config.width.gamma
    return config.units.hbar * config.scheme.unshelve_rate


def _width_block(config: RunConfig, fit: FitResult) -> Section:
    gamma = _width_gamma(config)
    report = lifetime_width_report(gamma, fit, config.units.hbar, config.width.error)
    logger.info("hbar/gamma = %.6g against fitted %.6g: pull %.3f",
                lifetime_from_width(gamma, config.units), fit.tau_s, report.pull)
    return width_section(report)


def run_simulate(config: RunConfig, out_dir: Path) -> List[Path]:
    return _write_trajectories(_simulate(config), out_dir)


def run_detect(config: RunConfig, out_dir: Path) -> List[Path]:
    trace = csv_io.read_trace(config.io.trace)
    periods = detect_dark_periods(trace, config.detect.threshold_frac, config.detect.min_dark_bins)
    if config.io.jumps is not None:
        match = match_dark_periods(periods, csv_io.read_jumps(config.io.jumps), trace.bin_width_s)
        logger.info("Matched %d of %d detected dark periods to %d recorded ones",
                    match.matched, match.detected, match.truth)
    return [csv_io.write_dark(out_dir / "dark.csv", periods)]


def run_survival(config: RunConfig, out_dir: Path) -> List[Path]:
    ensemble = DwellEnsemble.from_periods(csv_io.read_dark(config.io.dark))
    curve = survival_curve(ensemble, config.survival.bin_s, config.survival.t_max_s)
    tau = config.compare.tau_s or fit_lifetime(curve).tau_s
    comparison = compare_counting_to_born(curve, tau, ensemble)
    return [csv_io.write_survival(out_dir / "survival.csv", comparison, curve)]


def run_fit(config: RunConfig, out_dir: Path) -> List[Path]:
    curve, _ = csv_io.read_survival(config.io.survival)
    fit = fit_lifetime(curve)
    sections = [fit_section(fit, curve.M)]
    if config.width.gamma is not None:
        sections.append(_width_block(config, fit))
    path = out_dir / "fit.txt"
    path.write_text(render(sections), encoding='utf-8')
    return [path]


def run_gamow(config: RunConfig, out_dir: Path) -> List[Path]:
    pole = config.pole.pole()
    test = config.test.test_function(pole)
    rows = pairing_table(test, pole, config.gamow.times(), config.units, config.quad)
    return [csv_io.write_pairing(out_dir / "pairing.csv", rows)]


def _hardy_fixture(config: RunConfig) -> SampledWaveFunction:
    pole = config.pole.pole()
    grid = config.grid.energy_grid(pole)
    if config.hardy.kind is HardyFixture.MIXED:
        return (sampled_resonance(grid, [pole], "gamow")
                + sampled_resonance(grid, [pole], "conjugate"))
    return sampled_resonance(grid, [pole], config.hardy.kind.value)


def run_hardy(config: RunConfig, out_dir: Path) -> List[Path]:
    f = _hardy_fixture(config)
    tol = config.hardy.tol
    result = hardy_classify(f, tol)
    t = PROBE_LIFETIMES * lifetime_from_width(config.pole.gamma, config.units)
    forward = None
    if result.kind is HardyKind.LOWER:
        forward = semigroup_multiplier(f, t, EvolutionGuard.ENFORCE, config.units, tol)
    backward = semigroup_multiplier(f, -t, EvolutionGuard.PROBE, config.units, tol)
    path = out_dir / "hardy.txt"
    path.write_text(render([hardy_section(config.hardy.kind.value, result, forward, backward)]),
                    encoding='utf-8')
    return [path]


def run_report(config: RunConfig, out_dir: Path) -> List[Path]:
    # 1. Simulate
    trajectories = _simulate(config)
    written = _write_trajectories(trajectories, out_dir)

    # 2. Detect dark periods
    periods, match = _detect(config, trajectories)
    written.append(csv_io.write_dark(out_dir / "dark.csv", periods))

    # 3. Survival curve and fit
    ensemble = DwellEnsemble.from_periods(periods)
    curve = survival_curve(ensemble, config.survival.bin_s, config.survival.t_max_s)
    fit = fit_lifetime(curve)

    # 4. Compare with the Born probability
    tau = config.compare.tau_s or fit.tau_s
    comparison = compare_counting_to_born(curve, tau, ensemble)
    written.append(csv_io.write_survival(out_dir / "survival.csv", comparison, curve))

    sections = [
        simulation_section(config.scheme, trajectories, config.seed),
        detection_section(match, config.trajectory.bin_width_s),
        survival_head_section(comparison),
        fit_section(fit, ensemble.M),
        comparison_section(comparison),
        _width_block(config, fit),
    ]
    path = out_dir / "report.txt"
    path.write_text(render(sections), encoding='utf-8')
    written.append(path)
    return written


RUNNERS: Dict[Mode, Callable[[RunConfig, Path], List[Path]]] = {
    Mode.SIMULATE: run_simulate,
    Mode.DETECT: run_detect,
    Mode.SURVIVAL: run_survival,
    Mode.FIT: run_fit,
    Mode.GAMOW: run_gamow,
    Mode.HARDY: run_hardy,
    Mode.REPORT: run_report,
}


def run_subcommand(config: RunConfig, out_dir: Path = Path(".")) -> RunResult:
    """
    Run the subcommand selected by config.mode.

    Args:
        config: Validated run configuration
        out_dir: Directory receiving the artifacts; created when missing

    Returns:
        RunResult listing the written files in order
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with run_context(subcommand=config.mode.value, seed=config.seed):
        with performance_logger.measure_time(f"subcommand.{config.mode.value}"):
            artifacts = RUNNERS[config.mode](config, out_dir)
    logger.info("%s wrote %d artifacts to %s", config.mode.value, len(artifacts), out_dir)
    return RunResult(mode=config.mode, artifacts=artifacts)
