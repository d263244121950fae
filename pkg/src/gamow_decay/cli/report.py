"""
Plain-text report sections.

Each formatter returns the lines of one titled section; render joins them.
Numbers use fixed formats so identical inputs give identical text.
"""

from typing import List, Optional, Sequence, Tuple

from ..models.analysis import (
    ComparisonReport,
    DetectionMatch,
    FitResult,
    LifetimeWidthReport,
)
from ..models.shelving import LevelScheme, Trajectory
from ..models.wavefunction import HardyClass, SemigroupResult

Section = Tuple[str, List[str]]

SURVIVAL_HEAD_ROWS = 6


def render(sections: Sequence[Section]) -> str:
    blocks = []
    for title, lines in sections:
        blocks.append("\n".join([f"== {title} ==", *lines]))
    return "\n\n".join(blocks) + "\n"


def simulation_section(scheme: LevelScheme, trajectories: Sequence[Trajectory], seed: int) -> Section:
    complete = sum(len(t.complete_jumps) for t in trajectories)
    censored = sum(len(t.jumps) for t in trajectories) - complete
    lab_time = sum(t.trace.t_end_s - t.trace.t_start_s for t in trajectories)
    return "simulation", [
        f"seed: {seed}",
        f"trajectories: {len(trajectories)}",
        f"bright_rate: {scheme.bright_rate:.6g} 1/s",
        f"shelve_rate: {scheme.shelve_rate:.6g} 1/s",
        f"unshelve_rate: {scheme.unshelve_rate:.6g} 1/s",
        f"lab time: {lab_time:.6g} s",
        f"dark periods (complete / censored): {complete} / {censored}",
    ]


def detection_section(match: DetectionMatch, bin_width_s: float) -> Section:
    return "detection", [
        f"detected dark periods: {match.detected}",
        f"ground-truth dark periods: {match.truth}",
        f"matched within {bin_width_s:.6g} s: {match.matched}",
        f"max onset error: {match.max_onset_error_s:.6g} s",
        f"max end error: {match.max_end_error_s:.6g} s",
    ]


def survival_head_section(report: ComparisonReport, rows: int = SURVIVAL_HEAD_ROWS) -> Section:
    lines = [f"{'t_s':>10} {'N/M':>10} {'born':>10} {'sigma':>10}"]
    for row in report.rows[:rows]:
        lines.append(f"{row.t_s:10.4g} {row.ratio:10.4f} {row.born:10.4f} {row.binomial_sigma:10.4f}")
    if len(report.rows) > rows:
        lines.append(f"... {len(report.rows) - rows} more rows in survival.csv")
    return "survival", lines


def fit_section(fit: FitResult, m: Optional[int] = None) -> Section:
    lines = [
        f"tau: {fit.tau_s:.6g} s",
        f"tau stderr: {fit.tau_stderr_s:.3g} s",
        f"slope: {fit.slope:.6g} 1/s",
        f"log intercept: {fit.log_intercept:.6g}",
        f"points used: {fit.points_used}",
    ]
    if m is not None:
        envelope = 3.0 * fit.tau_s / m ** 0.5
        lines.append(f"3 tau / sqrt(M) envelope: {envelope:.6g} s (M = {m})")
    return "lifetime fit", lines


def comparison_section(report: ComparisonReport) -> Section:
    lines = [
        f"born tau: {report.tau_s:.6g} s",
        f"M: {report.M}",
        f"sup |N/M - born|: {report.sup_deviation:.4g}",
    ]
    if report.ks_pass is not None:
        verdict = "PASS" if report.ks_pass else "FAIL"
        lines.append(f"KS statistic {report.ks_statistic:.4f} vs critical "
                     f"{report.ks_critical:.4f} (p = {report.ks_pvalue:.3g}): {verdict}")
    return "born comparison", lines


def width_section(report: LifetimeWidthReport) -> Section:
    verdict = "consistent" if report.consistent else "inconsistent"
    return "lifetime-width", [
        f"hbar / gamma: {report.tau_from_width:.6g} +/- {report.tau_from_width_error:.3g}",
        f"fitted tau: {report.fitted_tau:.6g} +/- {report.fitted_stderr:.3g}",
        f"pull: {report.pull:.3f} (bound {report.consistency_bound:.3g}): {verdict}",
    ]


def hardy_section(kind: str, result: HardyClass, forward: Optional[SemigroupResult],
                  backward: SemigroupResult) -> Section:
    profile = result.profile
    lines = [
        f"fixture: {kind}",
        f"class: {result.kind.value}",
        f"leakage: {result.leakage:.3e}",
        f"mass fraction t < 0: {profile.negative_fraction:.3e}",
        f"mass fraction t >= 0: {profile.nonnegative_fraction:.3e}",
    ]
    if forward is not None:
        lines.append(f"evolved to t = {forward.t:.6g}: class {forward.classification.kind.value}, "
                     f"leakage {forward.leakage:.3e}")
    lines.append(f"probe at t = {backward.t:.6g}: leakage {backward.leakage:.3e}")
    return "hardy classification", lines
