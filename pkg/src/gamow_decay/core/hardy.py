"""
Hardy-class numerics on sampled energy wave functions.

The conjugate-time transform used throughout is

    F(t) = (1 / 2 pi) integral f(E) exp(-i E t) dE

evaluated with a zero-padded FFT. A function whose transform lives on t >= 0
is classed LOWER, one living on t < 0 is classed UPPER. The sample at exactly
t = 0 counts toward t >= 0.

Breit-Wigner amplitudes fall off only like 1/E, so their grid ends are far
from negligible. Such tails are continued past the grid by a short pole
expansion fitted to the outer samples,

    exp(i s E) sum_n [a_n / (E - conj(w))^n + b_n / (E - w)^n],   w = a - i kappa,

whose transform is known in closed form. The FFT only sees the residual, which
is small at both ends and has zero grid integral. Inputs whose ends follow
neither a fast decay nor such a tail are refused with InsufficientDecay.
"""

import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import numpy as np
from scipy import linalg

from ..models.resonance import Units
from ..models.wavefunction import (
    EvolutionGuard,
    HardyClass,
    HardyKind,
    SampledWaveFunction,
    SemigroupResult,
    SupportProfile,
)
from ..utils.exceptions import (
    CausalityViolation,
    InsufficientDecay,
    NotAStateFunction,
    ValidationError,
)
from ..utils.logging import get_logger, timed

logger = get_logger(__name__)

DEFAULT_UNITS = Units()
DEFAULT_TOLERANCE = 1e-4

PAD_FACTOR = 4
# ends below this fraction of the peak need no tail continuation
RAW_DECAY_LIMIT = 1e-6
# largest misfit of the tail expansion on the outer samples, relative to the peak
TAIL_FIT_LIMIT = 1e-5
# outer fraction of each half of the grid used for the tail fit
TAIL_FRACTION = 0.1
TAIL_ORDER = 3
# distance of the expansion centre from the real axis, in half-spans
TAIL_OFFSET = 0.02


def _tail_basis(energy: np.ndarray, center: float, kappa: float, shift: float,
                order: int) -> np.ndarray:
    """Columns (E - conj(w))^-n for n = 1..order, then (E - w)^-n, times exp(i s E)."""
    w = complex(center, -kappa)
    columns = [(energy - w.conjugate()) ** (-n) for n in range(1, order + 1)]
    columns.extend((energy - w) ** (-n) for n in range(1, order + 1))
    return np.exp(1j * shift * energy)[:, None] * np.column_stack(columns)


def _taylor_poles(energy: np.ndarray, pole: complex, shift: float, n: int) -> np.ndarray:
    """Pole part at `pole` of exp(i s E) / (E - pole)^n."""
    return np.exp(1j * shift * pole) * sum(
        (1j * shift) ** k / math.factorial(k) * (energy - pole) ** (k - n) for k in range(n)
    )


@dataclass(frozen=True)
class TailModel:
    """
    Closed-form continuation of an algebraic 1/E tail.

    The first `order` coefficients multiply the poles above the axis
    (transform on t < shift), the remaining `order` the poles below it
    (transform on t >= shift).
    """

    center: float
    kappa: float
    shift: float
    coefficients: np.ndarray

    @property
    def w(self) -> complex:
        return complex(self.center, -self.kappa)

    @property
    def order(self) -> int:
        return int(self.coefficients.size // 2)

    @property
    def upper_coefficients(self) -> np.ndarray:
        return self.coefficients[: self.order]

    @property
    def lower_coefficients(self) -> np.ndarray:
        return self.coefficients[self.order:]

    def values(self, energy: np.ndarray) -> np.ndarray:
        return _tail_basis(energy, self.center, self.kappa, self.shift, self.order) @ self.coefficients

    def transform(self, tau: np.ndarray) -> np.ndarray:
        w = self.w
        wb = w.conjugate()
        u = tau - self.shift
        ahead = u >= 0
        result = np.zeros(tau.shape, dtype=complex)
        ub = u[~ahead]
        rise = np.exp(-1j * wb * ub)
        for n, c in enumerate(self.upper_coefficients, start=1):
            result[~ahead] += c * 1j * (-1j * ub) ** (n - 1) / math.factorial(n - 1) * rise
        ua = u[ahead]
        decay = np.exp(-1j * w * ua)
        for n, c in enumerate(self.lower_coefficients, start=1):
            result[ahead] += c * (-1j) * (-1j * ua) ** (n - 1) / math.factorial(n - 1) * decay
        return result

    def lower_part(self, energy: np.ndarray) -> np.ndarray:
        """Part of the continuation whose transform lies on t >= 0."""
        w = self.w
        wb = w.conjugate()
        s = self.shift
        phase = np.exp(1j * s * energy)
        result = np.zeros(energy.shape, dtype=complex)
        for n, c in enumerate(self.lower_coefficients, start=1):
            if s >= 0:
                result += c * phase * (energy - w) ** (-n)
            else:
                # a negative shift moves part of the term onto t < 0; its pole part stays
                result += c * _taylor_poles(energy, w, s, n)
        if s > 0:
            # a positive shift moves the piece on [0, s) of each upper term onto t >= 0
            for n, c in enumerate(self.upper_coefficients, start=1):
                result += c * (phase * (energy - wb) ** (-n) - _taylor_poles(energy, wb, s, n))
        return result


def _estimate_shift(energy: np.ndarray, values: np.ndarray, center: float) -> float:
    """Common linear phase slope of (E - a) f(E) on the two tails."""
    rows = []
    phases = []
    for index, side in enumerate((energy < center, energy > center)):
        e = energy[side]
        offsets = np.zeros((e.size, 2))
        offsets[:, index] = 1.0
        rows.append(np.column_stack([e, offsets, 1.0 / (e - center)]))
        phases.append(np.unwrap(np.angle((e - center) * values[side])))
    solution, *_ = linalg.lstsq(np.vstack(rows), np.concatenate(phases))
    return float(solution[0])


def fit_tail(f: SampledWaveFunction) -> TailModel:
    """
    Fit the tail expansion to the outer samples of f.

    The residual f - tail is constrained to a zero grid integral.

    Raises:
        InsufficientDecay: If the expansion cannot follow the outer samples
    """
    energy = f.grid.points
    values = f.values
    peak = float(np.max(np.abs(values)))
    center = 0.5 * (energy[0] + energy[-1])
    half = 0.5 * (energy[-1] - energy[0])
    kappa = TAIL_OFFSET * half
    tail = np.abs(energy - center) >= (1.0 - TAIL_FRACTION) * half

    shift = _estimate_shift(energy[tail], values[tail], center)
    basis = _tail_basis(energy, center, kappa, shift, TAIL_ORDER)

    constraint = basis.sum(axis=0)[None, :]
    particular, *_ = linalg.lstsq(constraint, np.array([values.sum()]))
    null = linalg.null_space(constraint)
    design = basis[tail]
    reduced, *_ = linalg.lstsq(design @ null, values[tail] - design @ particular)
    coefficients = particular + null @ reduced

    misfit = float(np.max(np.abs(values[tail] - design @ coefficients))) / peak
    if misfit > TAIL_FIT_LIMIT:
        raise InsufficientDecay(misfit, TAIL_FIT_LIMIT)
    logger.debug("Tail continuation: shift=%.6g misfit=%.3e", shift, misfit)
    return TailModel(center=center, kappa=kappa, shift=shift, coefficients=coefficients)


@dataclass(frozen=True)
class ConjugateTransform:
    """Samples of F(t) on the FFT time grid, in FFT order."""

    tau: np.ndarray
    values: np.ndarray
    step: float
    residual_spectrum: np.ndarray
    tail: Optional[TailModel]

    def masses(self) -> np.ndarray:
        return 2.0 * np.pi * self.step * np.abs(self.values) ** 2


def _require_nonzero(f: SampledWaveFunction) -> float:
    peak = float(np.max(np.abs(f.values)))
    if peak == 0.0:
        raise ValidationError('values', 0.0, "a non-zero wave function")
    return peak


def conjugate_transform(f: SampledWaveFunction) -> ConjugateTransform:
    """
    Discrete conjugate-time transform of f.

    Raises:
        GridNotUniform: If the grid spacing is not uniform
        InsufficientDecay: If the grid ends are neither negligible nor algebraic
        ValidationError: If f vanishes identically
    """
    grid = f.grid
    grid.require_uniform()
    peak = _require_nonzero(f)
    edge = max(abs(f.values[0]), abs(f.values[-1])) / peak
    tail = fit_tail(f) if edge >= RAW_DECAY_LIMIT else None
    residual = f.values - tail.values(grid.points) if tail is not None else f.values

    n_pad = PAD_FACTOR * (1 << (grid.size - 1).bit_length())
    step = grid.step
    spectrum = np.fft.fft(residual, n=n_pad)
    tau = 2.0 * np.pi * np.fft.fftfreq(n_pad, d=step)
    values = step / (2.0 * np.pi) * np.exp(-1j * grid.points[0] * tau) * spectrum
    if tail is not None:
        values = values + tail.transform(tau)
    return ConjugateTransform(
        tau=tau,
        values=values,
        step=2.0 * np.pi / (n_pad * step),
        residual_spectrum=spectrum,
        tail=tail,
    )


def fourier_support_profile(f: SampledWaveFunction) -> SupportProfile:
    """Split the L2 mass of f between t < 0 and t >= 0."""
    transform = conjugate_transform(f)
    masses = transform.masses()
    negative = float(masses[transform.tau < 0].sum())
    nonnegative = float(masses[transform.tau >= 0].sum())
    return SupportProfile(
        mass_negative=negative,
        mass_nonnegative=nonnegative,
        total=negative + nonnegative,
    )


def hardy_classify(f: SampledWaveFunction, tol: float = DEFAULT_TOLERANCE) -> HardyClass:
    """
    Classify f as LOWER, UPPER or NEITHER.

    Args:
        f: Sampled wave function on a uniform grid
        tol: Largest mass fraction tolerated on the forbidden side

    Returns:
        HardyClass with the leakage on the forbidden side of the assigned class
    """
    if not 0 < tol < 0.5:
        raise ValidationError('tol', tol, "0 < tol < 0.5")
    profile = fourier_support_profile(f)
    negative = min(1.0, profile.negative_fraction)
    nonnegative = min(1.0, profile.nonnegative_fraction)
    if negative < tol:
        kind, leakage = HardyKind.LOWER, negative
    elif nonnegative < tol:
        kind, leakage = HardyKind.UPPER, nonnegative
    else:
        kind, leakage = HardyKind.NEITHER, min(negative, nonnegative)
    logger.debug("Hardy class %s (t<0: %.3e, t>=0: %.3e)", kind.value, negative, nonnegative)
    return HardyClass(kind=kind, leakage=leakage, profile=profile)


def hardy_project(f: SampledWaveFunction) -> Tuple[SampledWaveFunction, SampledWaveFunction]:
    """
    Split f into its UPPER and LOWER parts.

    Returns:
        (upper, lower) with upper + lower == f on the grid
    """
    if not np.any(f.values):
        return f, f
    transform = conjugate_transform(f)
    kept = np.where(transform.tau >= 0, transform.residual_spectrum, 0.0)
    lower = np.fft.ifft(kept)[: f.grid.size]
    if transform.tail is not None:
        lower = lower + transform.tail.lower_part(f.grid.points)
    return f.with_values(f.values - lower), f.with_values(lower)


def hilbert_transform(f: SampledWaveFunction) -> SampledWaveFunction:
    """
    Principal-value convolution of f with 1/(pi E).

    Applied through the multiplier -i sign(t) on the conjugate-time transform,
    so applying it twice returns -f.
    """
    upper, lower = hardy_project(f)
    return f.with_values(-1j * (lower.values - upper.values))


@timed("hardy.semigroup_multiplier")
def semigroup_multiplier(
    f: SampledWaveFunction,
    t: float,
    guard: EvolutionGuard = EvolutionGuard.ENFORCE,
    units: Units = DEFAULT_UNITS,
    tol: float = DEFAULT_TOLERANCE,
) -> SemigroupResult:
    """
    Evolve a state function by t.

    The multiplier exp(i E t / hbar) translates the conjugate-time transform by
    +t, so for t >= 0 a LOWER function stays LOWER and its support moves further
    into t >= 0. Under the probe guard negative t is allowed and the mass pushed
    onto t < 0 is reported as leakage.

    Raises:
        CausalityViolation: If t < 0 under the enforce guard
        NotAStateFunction: If f is not LOWER under the enforce guard
    """
    if not math.isfinite(t):
        raise ValidationError('t', t, "finite time")
    if guard is EvolutionGuard.ENFORCE:
        if t < 0:
            raise CausalityViolation(t, quantity="evolution time")
        source = hardy_classify(f, tol)
        if source.kind is not HardyKind.LOWER:
            raise NotAStateFunction(source.leakage, source.kind.value)

    evolved = f.with_values(f.values * np.exp(1j * f.grid.points * (t / units.hbar)))
    classification = hardy_classify(evolved, tol)
    leakage = min(1.0, classification.profile.negative_fraction)
    if guard is EvolutionGuard.PROBE and leakage >= tol:
        logger.info("Backward evolution by t=%g leaks %.3f of the mass onto t < 0", t, leakage)
    return SemigroupResult(
        function=evolved,
        classification=classification,
        leakage=leakage,
        t=t,
        guard=guard,
    )


def evolved_state_samples(
    f: SampledWaveFunction,
    times: Iterable[float],
    units: Units = DEFAULT_UNITS,
    tol: float = DEFAULT_TOLERANCE,
) -> List[SemigroupResult]:
    """Forward evolution of one state function at several non-negative times."""
    return [semigroup_multiplier(f, float(t), EvolutionGuard.ENFORCE, units, tol) for t in times]
