"""
Breit-Wigner amplitudes, Gamow-vector pairings and survival probabilities.

Pairings <psi-|E_R - i Gamma/2> are realised on the real energy axis as

    integral test(E) exp(-i E t / hbar) / (E - z_R) dE

with rational Hardy test functions. Closing the contour in the lower half-plane
gives the residue value -2 pi i test(z_R) exp(-i z_R t / hbar) for t >= 0; that
value is the oracle the quadrature is checked against. For t < 0 the contour
must close upward and the exponential law is lost.

Integrals over the line are split into a central window around the resonance
and two tails. Oscillatory pieces use Fourier-weighted quadrature (QAWO on the
window, QAWF on the tails) so large |t| needs no manual partitioning.
"""

import cmath
import math
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike
from scipy import integrate

from ..models.resonance import (
    Duration,
    EigenvalueCheck,
    EnergyDomain,
    PairingRow,
    QuadratureSettings,
    ResonancePole,
    TestFunction,
    Units,
)
from ..models.wavefunction import EnergyGrid, SampledWaveFunction
from ..utils.exceptions import QuadratureFailure, ValidationError
from ..utils.logging import get_logger

logger = get_logger(__name__)

DEFAULT_UNITS = Units()
DEFAULT_QUADRATURE = QuadratureSettings()

# central window half-width in units of gamma
WINDOW_WIDTHS = 50.0
# quadrature results flagged by QUADPACK are accepted up to this multiple of abs_tol
FAILURE_FACTOR = 1e3

RealFunction = Callable[[float], float]
ComplexFunction = Callable[[float], complex]


def _scalar_or_array(values: np.ndarray) -> complex | np.ndarray:
    return complex(values) if values.ndim == 0 else values


def bw_amplitude(energy: ArrayLike, pole: ResonancePole) -> complex | np.ndarray:
    """
    Breit-Wigner amplitude R / (E - z_R).

    Args:
        energy: Real energy or array of energies
        pole: Resonance pole

    Returns:
        Complex amplitude (scalar for scalar input)
    """
    e = np.asarray(energy, dtype=float)
    return _scalar_or_array(pole.residue / (e - pole.z_r))


def bw_amplitude_sum(energy: ArrayLike, poles: Sequence[ResonancePole]) -> complex | np.ndarray:
    """Sum of Breit-Wigner amplitudes of several resonance poles."""
    if not poles:
        raise ValidationError('poles', [], "at least one resonance pole")
    e = np.asarray(energy, dtype=float)
    total = np.zeros(e.shape, dtype=complex)
    for pole in poles:
        total = total + pole.residue / (e - pole.z_r)
    return _scalar_or_array(total)


def gamow_density(energy: ArrayLike, pole: ResonancePole) -> complex | np.ndarray:
    """
    Energy wave function of the Gamow ket, i sqrt(Gamma / 2 pi) / (E - z_R).

    Its modulus squared is the normalised Lorentzian on the real line.
    """
    e = np.asarray(energy, dtype=float)
    return _scalar_or_array(1j * math.sqrt(pole.gamma / (2.0 * math.pi)) / (e - pole.z_r))


def lorentzian(energy: float, pole: ResonancePole) -> float:
    """|gamow_density(E)|^2 as a plain float."""
    return (pole.gamma / (2.0 * math.pi)) / ((energy - pole.e_r) ** 2 + pole.gamma ** 2 / 4.0)


def lorentzian_norm(pole: ResonancePole, domain: EnergyDomain = EnergyDomain.FULL_LINE) -> float:
    """
    Integral of the Lorentzian density over the chosen energy support.

    Args:
        pole: Resonance pole
        domain: FULL_LINE (always 1) or HALF_LINE (energies >= 0)

    Returns:
        1 for FULL_LINE, 1/2 + arctan(2 e_r / gamma) / pi for HALF_LINE

    Raises:
        ValidationError: HALF_LINE with e_r <= 0
    """
    if domain is EnergyDomain.FULL_LINE:
        return 1.0
    _require_above_threshold(pole)
    return 0.5 + math.atan(2.0 * pole.e_r / pole.gamma) / math.pi


def lifetime_from_width(gamma: float, units: Units = DEFAULT_UNITS) -> float:
    """tau = hbar / Gamma."""
    if not (math.isfinite(gamma) and gamma > 0):
        raise ValidationError('gamma', gamma, "finite width > 0")
    return units.hbar / gamma


def width_from_lifetime(tau: float, units: Units = DEFAULT_UNITS) -> float:
    """Gamma = hbar / tau."""
    if not (math.isfinite(tau) and tau > 0):
        raise ValidationError('tau', tau, "finite lifetime > 0")
    return units.hbar / tau


def sampled_resonance(
    grid: EnergyGrid,
    poles: Sequence[ResonancePole],
    kind: str = "gamow"
) -> SampledWaveFunction:
    """
    Sample resonance wave functions on a grid.

    Args:
        grid: Energy grid
        poles: One or more resonance poles (summed)
        kind: "gamow" (state density), "bw" (Breit-Wigner amplitude) or
            "conjugate" (complex conjugate of the Gamow density, an observable)

    Returns:
        SampledWaveFunction of the summed contributions
    """
    if kind == "bw":
        values = bw_amplitude_sum(grid.points, poles)
    elif kind in ("gamow", "conjugate"):
        values = sum((np.asarray(gamow_density(grid.points, p)) for p in poles),
                     np.zeros(grid.size, dtype=complex))
        if kind == "conjugate":
            values = np.conj(values)
    else:
        raise ValidationError('kind', kind, "one of 'gamow', 'bw', 'conjugate'")
    return SampledWaveFunction(grid=grid, values=values)


def _require_above_threshold(pole: ResonancePole) -> None:
    if pole.e_r <= 0:
        raise ValidationError('e_r', pole.e_r, "> 0 for half-line energy support")


def _quad(
    func: RealFunction,
    lower: float,
    upper: float,
    settings: QuadratureSettings,
    label: str,
    weight: Optional[str] = None,
    wvar: Optional[float] = None
) -> float:
    kwargs = {}
    if weight is not None:
        kwargs = {'weight': weight, 'wvar': wvar}
    result = integrate.quad(
        func,
        lower,
        upper,
        epsabs=settings.abs_tol,
        epsrel=1e-12,
        limit=settings.subinterval_limit,
        full_output=1,
        **kwargs
    )
    value, abserr = float(result[0]), float(result[1])
    if len(result) > 3:
        if abserr > FAILURE_FACTOR * settings.abs_tol or not math.isfinite(value):
            raise QuadratureFailure(f"{label} did not converge: {result[3]}",
                                    achieved_error=abserr, tolerance=settings.abs_tol)
        logger.debug("%s flagged by integrator but within tolerance (error %.3e)", label, abserr)
    return value


def _weighted_integral(
    func: RealFunction,
    weight: Optional[str],
    w: float,
    window: Tuple[float, float],
    settings: QuadratureSettings,
    half_line: bool,
    label: str
) -> float:
    """
    Integral of func(E) * weight(w E) over the full or half line.

    weight is None (no oscillation), "cos" or "sin"; w > 0 when weighted.
    For the half line, window[0] must be 0.
    """
    a, b = window
    total = 0.0

    if not half_line:
        if weight is None:
            total += _quad(func, -np.inf, a, settings, label)
        else:
            # E = -u maps the left tail onto [-a, inf); sin is odd
            parity = 1.0 if weight == "cos" else -1.0
            total += parity * _quad(lambda u: func(-u), -a, np.inf, settings, label,
                                    weight=weight, wvar=w)

    if weight is None:
        total += _quad(func, a, b, settings, label)
        total += _quad(func, b, np.inf, settings, label)
    else:
        total += _quad(func, a, b, settings, label, weight=weight, wvar=w)
        total += _quad(func, b, np.inf, settings, label, weight=weight, wvar=w)
    return total


def fourier_energy_integral(
    func: ComplexFunction,
    omega: float,
    window: Tuple[float, float],
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
    half_line: bool = False,
    label: str = "energy integral"
) -> complex:
    """
    Adaptive quadrature of func(E) * exp(-i omega E) over the energy axis.

    Args:
        func: Complex scalar integrand
        omega: Angular frequency t / hbar (any sign)
        window: Central interval that contains the integrand's structure
        settings: Quadrature tolerances
        half_line: Integrate over [window[0], inf) only
        label: Name used in diagnostics

    Returns:
        Complex value of the integral

    Raises:
        QuadratureFailure: If a piece misses its tolerance
    """
    def real_part(e: float) -> float:
        return func(e).real

    def imag_part(e: float) -> float:
        return func(e).imag

    if omega == 0.0:
        re = _weighted_integral(real_part, None, 0.0, window, settings, half_line, label)
        im = _weighted_integral(imag_part, None, 0.0, window, settings, half_line, label)
        return complex(re, im)

    w = abs(omega)
    s = math.copysign(1.0, omega)
    c_r = _weighted_integral(real_part, "cos", w, window, settings, half_line, label)
    c_i = _weighted_integral(imag_part, "cos", w, window, settings, half_line, label)
    s_r = _weighted_integral(real_part, "sin", w, window, settings, half_line, label)
    s_i = _weighted_integral(imag_part, "sin", w, window, settings, half_line, label)
    # (c_r + i c_i) - i s (s_r + i s_i)
    return complex(c_r + s * s_i, c_i - s * s_r)


def _pairing_window(test: TestFunction, pole: ResonancePole) -> Tuple[float, float]:
    spread = max(abs(p.location.real - pole.e_r) + abs(p.location.imag) for p in test.poles)
    half_width = WINDOW_WIDTHS * pole.gamma + 2.0 * spread
    return pole.e_r - half_width, pole.e_r + half_width


def pole_pairing_integral(
    test: TestFunction,
    z: complex,
    t: float = 0.0,
    units: Units = DEFAULT_UNITS,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
    window: Optional[Tuple[float, float]] = None
) -> complex:
    """
    Quadrature of test(E) exp(-i E t / hbar) / (E - z) for any off-axis z.

    No Hardy-class checks are made; cauchy_pairing and evolved_pairing are
    the checked entry points.
    """
    if z.imag == 0.0:
        raise ValidationError('z', z, "point off the real axis")
    if window is None:
        spread = max(abs(p.location.real - z.real) + abs(p.location.imag) for p in test.poles)
        half_width = WINDOW_WIDTHS * abs(z.imag) * 2.0 + 2.0 * spread
        window = (z.real - half_width, z.real + half_width)

    def integrand(e: float) -> complex:
        return test.value_at(e) / (e - z)

    return fourier_energy_integral(integrand, t / units.hbar, window, settings,
                                   label=f"pairing at t={t}")


def cauchy_pairing(
    test: TestFunction,
    pole: ResonancePole,
    settings: QuadratureSettings = DEFAULT_QUADRATURE
) -> complex:
    """
    Pairing of an upper-Hardy test function with the Gamow ket.

    Args:
        test: Rational test function with all poles in the upper half-plane
        pole: Resonance pole
        settings: Quadrature tolerances

    Returns:
        Quadrature value of integral test(E) / (E - z_R) dE

    Raises:
        NonHardyTest: A test pole lies in the lower half-plane
    """
    test.require_upper()
    value = pole_pairing_integral(test, pole.z_r, 0.0, settings=settings,
                                  window=_pairing_window(test, pole))
    logger.debug("cauchy pairing %s (residue oracle %s)", value, cauchy_pairing_residue(test, pole))
    return value


def cauchy_pairing_residue(test: TestFunction, pole: ResonancePole) -> complex:
    """Residue-theorem value -2 pi i test(z_R) of the pairing."""
    test.require_upper()
    return -2j * math.pi * test.value_at(pole.z_r)


def integrate_test_function(
    test: TestFunction,
    window: Tuple[float, float],
    settings: QuadratureSettings = DEFAULT_QUADRATURE
) -> complex:
    """Quadrature of the test function alone over the real line."""
    return fourier_energy_integral(test.value_at, 0.0, window, settings, label="test integral")


def eigenvalue_defect(
    test: TestFunction,
    pole: ResonancePole,
    settings: QuadratureSettings = DEFAULT_QUADRATURE
) -> EigenvalueCheck:
    """
    Numerical check of H|z_R> = z_R |z_R> in the weak sense.

    Uses E / (E - z) = 1 + z / (E - z):

        defect = |integral E test/(E - z_R) - z_R * pairing - integral test|

    Returns:
        EigenvalueCheck with the defect and the plain test integral (zero for
        single-term tests of total order >= 2)
    """
    test.require_upper()
    z_r = pole.z_r
    window = _pairing_window(test, pole)

    def weighted(e: float) -> complex:
        return e * test.value_at(e) / (e - z_r)

    first_moment = fourier_energy_integral(weighted, 0.0, window, settings, label="first moment")
    pairing = cauchy_pairing(test, pole, settings)
    plain = integrate_test_function(test, window, settings)
    defect = abs(first_moment - z_r * pairing - plain)
    logger.debug("eigenvalue defect %.3e, test integral %s", defect, plain)
    return EigenvalueCheck(defect=defect, test_integral=plain)


def evolved_pairing(
    test: TestFunction,
    pole: ResonancePole,
    t: float,
    units: Units = DEFAULT_UNITS,
    settings: QuadratureSettings = DEFAULT_QUADRATURE
) -> complex:
    """
    Pairing of the test function with the Gamow ket evolved to time t.

    Any sign of t is accepted: for t >= 0 the value follows
    exp(-i z_R t / hbar) * cauchy_pairing; for t < 0 it does not.

    Raises:
        NonHardyTest: A test pole lies in the lower half-plane
        QuadratureFailure: The adaptive scheme did not converge
    """
    test.require_upper()
    return pole_pairing_integral(test, pole.z_r, t, units, settings,
                                 window=_pairing_window(test, pole))


def evolved_pairing_residue(
    test: TestFunction,
    pole: ResonancePole,
    t: float,
    units: Units = DEFAULT_UNITS
) -> complex:
    """Exponential-law value for t >= 0 from the residue at z_R."""
    if t < 0:
        raise ValidationError('t', t, ">= 0 (the lower contour closes only forward in time)")
    return cauchy_pairing_residue(test, pole) * cmath.exp(-1j * pole.z_r * t / units.hbar)


def pairing_table(
    test: TestFunction,
    pole: ResonancePole,
    times: Iterable[float],
    units: Units = DEFAULT_UNITS,
    settings: QuadratureSettings = DEFAULT_QUADRATURE
) -> List[PairingRow]:
    """
    Evolved pairings relative to t = 0 alongside the exponential law.

    Returns:
        One PairingRow per time, in input order
    """
    reference = cauchy_pairing(test, pole, settings)
    rows = []
    for t in times:
        ratio = evolved_pairing(test, pole, t, units, settings) / reference
        rows.append(PairingRow(
            t=float(t),
            abs_ratio=abs(ratio),
            phase=cmath.phase(ratio),
            expected_abs=math.exp(-pole.gamma * t / (2.0 * units.hbar))
        ))
    return rows


def survival_amplitude(
    pole: ResonancePole,
    t: Duration,
    domain: EnergyDomain = EnergyDomain.FULL_LINE,
    units: Units = DEFAULT_UNITS,
    settings: QuadratureSettings = DEFAULT_QUADRATURE
) -> complex:
    """
    Normalised quadrature of the Lorentzian density times exp(-i E t / hbar).

    Returns:
        Complex amplitude whose modulus squared is the survival probability
    """
    if domain is EnergyDomain.HALF_LINE:
        _require_above_threshold(pole)
        window = (0.0, pole.e_r + WINDOW_WIDTHS * pole.gamma)
    else:
        window = (pole.e_r - WINDOW_WIDTHS * pole.gamma, pole.e_r + WINDOW_WIDTHS * pole.gamma)
    amplitude = fourier_energy_integral(
        lambda e: complex(lorentzian(e, pole)),
        t.t / units.hbar,
        window,
        settings,
        half_line=domain is EnergyDomain.HALF_LINE,
        label=f"survival amplitude ({domain.value} line)"
    )
    return amplitude / lorentzian_norm(pole, domain)


def survival_probability(
    pole: ResonancePole,
    t: Duration,
    domain: EnergyDomain = EnergyDomain.FULL_LINE,
    units: Units = DEFAULT_UNITS,
    settings: QuadratureSettings = DEFAULT_QUADRATURE
) -> float:
    """
    Probability that the prepared resonance is still undecayed after t.

    Args:
        pole: Resonance pole
        t: Duration since preparation (negative values cannot be constructed)
        domain: FULL_LINE returns exp(-gamma t / hbar) in closed form;
            HALF_LINE integrates the density truncated at E = 0
        units: hbar convention
        settings: Quadrature tolerances

    Returns:
        Survival probability in [0, 1]
    """
    if domain is EnergyDomain.FULL_LINE:
        return math.exp(-pole.gamma * t.t / units.hbar)
    amplitude = survival_amplitude(pole, t, domain, units, settings)
    return min(1.0, abs(amplitude) ** 2)
