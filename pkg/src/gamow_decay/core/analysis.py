"""
Dwell-time analysis of fluorescence traces.

Dark periods are cut out of a trace, aligned to a common preparation time and
counted: N(t) is the number of dwells strictly longer than t. The counting
ratio N(t)/M is then set against the exponential Born probability, and the
lifetime from a log-linear fit against hbar / Gamma from a line width.
"""

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike
from scipy import stats

from ..models.analysis import (
    ComparisonReport,
    ComparisonRow,
    DarkPeriod,
    DetectionMatch,
    DwellEnsemble,
    FitResult,
    LifetimeWidthReport,
    SurvivalCurve,
)
from ..models.shelving import FluorescenceTrace, JumpRecord
from ..utils.exceptions import (
    CausalityViolation,
    InsufficientPoints,
    NegativeDuration,
    NoBrightLevel,
    NonDecayingData,
    ValidationError,
)
from ..utils.logging import get_logger

logger = get_logger(__name__)

DEFAULT_THRESHOLD_FRAC = 0.2
DEFAULT_MIN_DARK_BINS = 2
DEFAULT_SURVIVAL_BIN_S = 10.0
DEFAULT_SURVIVAL_T_MAX_S = 120.0
PULL_BOUND = 3.0

# asymptotic one-sample Kolmogorov-Smirnov coefficients c(alpha), D_crit = c / sqrt(M)
KS_COEFFICIENTS = {0.10: 1.22, 0.05: 1.36, 0.01: 1.63}


def bright_level(trace: FluorescenceTrace) -> float:
    """Median count of the bins above half the largest count."""
    peak = int(trace.counts.max())
    if peak <= 0:
        raise NoBrightLevel(trace.n_bins)
    return float(np.median(trace.counts[trace.counts > 0.5 * peak]))


def _dark_runs(dark: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Start indices and exclusive end indices of the runs of True."""
    edges = np.diff(np.concatenate([[0], dark.astype(np.int8), [0]]))
    return np.flatnonzero(edges == 1), np.flatnonzero(edges == -1)


def detect_dark_periods(
    trace: FluorescenceTrace,
    threshold_frac: float = DEFAULT_THRESHOLD_FRAC,
    min_dark_bins: int = DEFAULT_MIN_DARK_BINS,
) -> List[DarkPeriod]:
    """
    Find dark periods in a fluorescence trace.

    A bin is dark when its count is below threshold_frac times the bright level.
    Maximal runs of at least min_dark_bins dark bins become dark periods from
    the first bin's start edge to the last bin's end edge. Runs touching either
    end of the trace are censored and dropped.

    Args:
        trace: Binned photon counts
        threshold_frac: Dark threshold as a fraction of the bright level
        min_dark_bins: Shortest run reported as a dark period

    Returns:
        Dark periods in time order

    Raises:
        NoBrightLevel: If no bin carries any counts
    """
    if not 0 < threshold_frac < 1:
        raise ValidationError('threshold_frac', threshold_frac, "0 < threshold_frac < 1")
    if min_dark_bins < 1:
        raise ValidationError('min_dark_bins', min_dark_bins, ">= 1")

    level = bright_level(trace)
    dark = trace.counts < threshold_frac * level
    starts, ends = _dark_runs(dark)

    periods = []
    censored = 0
    for start, end in zip(starts, ends):
        if end - start < min_dark_bins:
            continue
        if start == 0 or end == trace.n_bins:
            censored += 1
            continue
        periods.append(DarkPeriod(t0_s=trace.bin_start(int(start)), t1_s=trace.bin_start(int(end))))

    logger.info("Detected %d dark periods (bright level %.1f, %d censored)",
                len(periods), level, censored)
    return periods


def match_dark_periods(
    detected: Sequence[DarkPeriod],
    jumps: Sequence[JumpRecord],
    tolerance_s: float,
) -> DetectionMatch:
    """
    Pair detected periods with complete ground-truth records.

    A pair matches when both its onset and its end agree within tolerance_s.
    Each record is used at most once.
    """
    if tolerance_s < 0:
        raise ValidationError('tolerance_s', tolerance_s, ">= 0")
    truth = [j for j in jumps if not j.censored]
    onset_errors: List[float] = []
    end_errors: List[float] = []
    used = set()
    for period in detected:
        best: Optional[int] = None
        for index, record in enumerate(truth):
            if index in used:
                continue
            onset = abs(period.t0_s - record.shelve_time_s)
            end = abs(period.t1_s - record.unshelve_time_s)
            if onset <= tolerance_s and end <= tolerance_s:
                best = index
                break
        if best is not None:
            used.add(best)
            onset_errors.append(abs(period.t0_s - truth[best].shelve_time_s))
            end_errors.append(abs(period.t1_s - truth[best].unshelve_time_s))
    return DetectionMatch(
        detected=len(detected),
        truth=len(truth),
        matched=len(used),
        max_onset_error_s=max(onset_errors, default=0.0),
        max_end_error_s=max(end_errors, default=0.0),
    )


def _require_duration(t: float, quantity: str) -> None:
    if math.isnan(t) or t < 0:
        raise NegativeDuration(t, quantity=quantity)


def counting_function(ens: DwellEnsemble, t: float) -> int:
    """Number of dwells strictly longer than t."""
    _require_duration(t, "counting time")
    return int(np.count_nonzero(ens.dwells_s > t))


def survival_curve(
    ens: DwellEnsemble,
    bin_s: float = DEFAULT_SURVIVAL_BIN_S,
    t_max_s: float = DEFAULT_SURVIVAL_T_MAX_S,
) -> SurvivalCurve:
    """Counting function on the grid 0, bin_s, 2 bin_s, ... <= t_max_s."""
    if not bin_s > 0:
        raise ValidationError('bin_s', bin_s, "> 0")
    if not t_max_s >= bin_s:
        raise ValidationError('t_max_s', t_max_s, f">= bin_s ({bin_s})")
    steps = int(math.floor(t_max_s / bin_s + 1e-9))
    t = bin_s * np.arange(steps + 1)
    ordered = np.sort(ens.dwells_s)
    n_of_t = ens.M - np.searchsorted(ordered, t, side='right')
    return SurvivalCurve(t_s=t, n_of_t=n_of_t, M=ens.M)


def fit_log_linear(t_s: ArrayLike, n_of_t: ArrayLike) -> FitResult:
    """
    Weighted straight-line fit of ln N against t.

    Points with N = 0 are dropped. Each point has weight N, the inverse of the
    Poisson variance of ln N, and the slope variance is taken unscaled from
    those weights.

    Raises:
        InsufficientPoints: If fewer than two points have N > 0
        NonDecayingData: If the fitted slope is not negative
    """
    t = np.asarray(t_s, dtype=float)
    n = np.asarray(n_of_t, dtype=float)
    usable = n > 0
    if np.count_nonzero(usable) < 2:
        raise InsufficientPoints(int(np.count_nonzero(usable)))
    t, n = t[usable], n[usable]
    if np.ptp(t) == 0:
        raise InsufficientPoints(1)

    coefficients, covariance = np.polyfit(t, np.log(n), 1, w=np.sqrt(n), cov='unscaled')
    slope, intercept = float(coefficients[0]), float(coefficients[1])
    if slope >= 0:
        raise NonDecayingData(slope)
    slope_stderr = math.sqrt(max(float(covariance[0, 0]), 0.0))
    result = FitResult(
        tau_s=-1.0 / slope,
        tau_stderr_s=slope_stderr / slope ** 2,
        log_intercept=intercept,
        slope=slope,
        points_used=int(t.size),
    )
    logger.info("Fitted lifetime %.4g +/- %.2g s from %d points",
                result.tau_s, result.tau_stderr_s, result.points_used)
    return result


def fit_lifetime(curve: SurvivalCurve) -> FitResult:
    """Lifetime as the negative inverse slope of ln N(t)."""
    return fit_log_linear(curve.t_s, curve.n_of_t)


def born_survival(tau_s: float, t: float) -> float:
    """Exponential survival probability exp(-t / tau_s) for t >= 0."""
    if not tau_s > 0:
        raise ValidationError('tau_s', tau_s, "> 0")
    if math.isnan(t) or t < 0:
        raise CausalityViolation(t, quantity="survival time")
    return math.exp(-t / tau_s)


def binomial_sigma(p: float, m: int) -> float:
    """Standard deviation of a counting ratio with success probability p out of m."""
    if m < 1:
        raise ValidationError('M', m, ">= 1")
    if not 0 <= p <= 1:
        raise ValidationError('p', p, "0 <= p <= 1")
    return math.sqrt(p * (1.0 - p) / m)


def ks_critical_value(m: int, alpha: float = 0.05) -> float:
    """Asymptotic critical value of the one-sample KS statistic."""
    if m < 1:
        raise ValidationError('M', m, ">= 1")
    if alpha not in KS_COEFFICIENTS:
        raise ValidationError('alpha', alpha, f"one of {sorted(KS_COEFFICIENTS)}")
    return KS_COEFFICIENTS[alpha] / math.sqrt(m)


def exponential_ks(ens: DwellEnsemble, tau_s: float) -> Tuple[float, float]:
    """KS statistic and p-value of the dwells against Exponential(mean tau_s)."""
    if not tau_s > 0:
        raise ValidationError('tau_s', tau_s, "> 0")
    result = stats.kstest(ens.dwells_s, 'expon', args=(0.0, tau_s))
    return float(result.statistic), float(result.pvalue)


def compare_counting_to_born(
    curve: SurvivalCurve,
    tau_s: float,
    ensemble: Optional[DwellEnsemble] = None,
    alpha: float = 0.05,
) -> ComparisonReport:
    """
    Set the counting ratio N(t)/M against exp(-t / tau_s).

    The KS columns are filled only when the raw dwell ensemble is supplied.
    """
    rows = []
    for t, ratio in zip(curve.t_s, curve.ratio):
        born = born_survival(tau_s, float(t))
        rows.append(ComparisonRow(
            t_s=float(t),
            ratio=float(ratio),
            born=born,
            deviation=float(ratio) - born,
            binomial_sigma=binomial_sigma(born, curve.M),
        ))
    report = ComparisonReport(
        tau_s=tau_s,
        M=curve.M,
        sup_deviation=max(abs(row.deviation) for row in rows),
        rows=rows,
    )
    if ensemble is not None:
        statistic, pvalue = exponential_ks(ensemble, tau_s)
        report = report.model_copy(update={
            'ks_statistic': statistic,
            'ks_pvalue': pvalue,
            'ks_critical': ks_critical_value(ensemble.M, alpha),
        })
        logger.info("KS statistic %.4f against critical %.4f", statistic, report.ks_critical)
    return report


def lifetime_width_report(
    gamma_energy: float,
    fitted: FitResult,
    hbar: float = 1.0,
    width_error: float = 0.0,
) -> LifetimeWidthReport:
    """
    Compare a fitted lifetime with hbar / Gamma.

    Args:
        gamma_energy: Line width Gamma in energy units
        fitted: Lifetime fit
        hbar: Reduced Planck constant in energy * time units
        width_error: Uncertainty of hbar / Gamma in time units

    Returns:
        Report with the pull (fitted - hbar/Gamma) / combined standard error
    """
    if not gamma_energy > 0:
        raise ValidationError('gamma_energy', gamma_energy, "> 0")
    if not hbar > 0:
        raise ValidationError('hbar', hbar, "> 0")
    if width_error < 0:
        raise ValidationError('width_error', width_error, ">= 0")

    tau_from_width = hbar / gamma_energy
    difference = fitted.tau_s - tau_from_width
    sigma = math.hypot(fitted.tau_stderr_s, width_error)
    if sigma > 0:
        pull = difference / sigma
    elif difference == 0:
        pull = 0.0
    else:
        pull = math.copysign(math.inf, difference)
    return LifetimeWidthReport(
        tau_from_width=tau_from_width,
        tau_from_width_error=width_error,
        fitted_tau=fitted.tau_s,
        fitted_stderr=fitted.tau_stderr_s,
        pull=pull,
        consistency_bound=PULL_BOUND,
    )
