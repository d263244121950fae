"""
Unit tests for the resonance core: Breit-Wigner amplitudes, Gamow pairings,
the exponential law and the lifetime-width relation.
"""

import cmath
import math

import numpy as np
import pytest

from gamow_decay.core.resonance import (
    bw_amplitude,
    bw_amplitude_sum,
    cauchy_pairing,
    cauchy_pairing_residue,
    eigenvalue_defect,
    evolved_pairing,
    evolved_pairing_residue,
    gamow_density,
    lifetime_from_width,
    lorentzian,
    lorentzian_norm,
    pairing_table,
    pole_pairing_integral,
    sampled_resonance,
    survival_amplitude,
    survival_probability,
    width_from_lifetime,
)
from gamow_decay.models.resonance import (
    Duration,
    EnergyDomain,
    QuadratureSettings,
    RationalTestFunction,
    ResonancePole,
    Units,
)
from gamow_decay.utils.exceptions import CausalityViolation, NonHardyTest, ValidationError


class TestAmplitudes:
    """Test the pointwise resonance amplitudes."""

    def test_bw_amplitude_value(self, fixture_pole):
        """R/(E - z_R) at a real energy."""
        value = bw_amplitude(11.0, fixture_pole)
        assert value == pytest.approx(1.0 / (11.0 - complex(10.0, -0.5)))

    def test_on_resonance(self, fixture_pole):
        """At E = E_R the amplitude is -2i / gamma."""
        assert bw_amplitude(10.0, fixture_pole) == pytest.approx(-2j)
        assert gamow_density(10.0, fixture_pole) == pytest.approx(math.sqrt(2.0 / math.pi))

    def test_half_width_at_half_maximum(self):
        """|a|^2 at E_R +/- gamma/2 is half the peak value."""
        pole = ResonancePole(e_r=3.0, gamma=0.4)
        peak = abs(bw_amplitude(3.0, pole)) ** 2
        for energy in (2.8, 3.2):
            assert abs(bw_amplitude(energy, pole)) ** 2 == pytest.approx(0.5 * peak, rel=1e-12)

    def test_bw_amplitude_vectorised(self, fixture_pole):
        """Array input gives an array of the same shape."""
        energies = np.linspace(0.0, 20.0, 7)
        values = bw_amplitude(energies, fixture_pole)
        assert values.shape == (7,)
        np.testing.assert_allclose(values, 1.0 / (energies - fixture_pole.z_r))

    def test_bw_amplitude_sum(self, fixture_pole):
        """Several poles add their amplitudes."""
        other = ResonancePole(e_r=15.0, gamma=2.0, residue=0.5j)
        total = bw_amplitude_sum(12.0, [fixture_pole, other])
        assert total == pytest.approx(bw_amplitude(12.0, fixture_pole) + bw_amplitude(12.0, other))

    def test_bw_amplitude_sum_requires_poles(self):
        """An empty pole list is rejected."""
        with pytest.raises(ValidationError):
            bw_amplitude_sum(1.0, [])

    def test_gamow_density_modulus_is_lorentzian(self, fixture_pole):
        """|gamow_density|^2 equals the normalised Lorentzian."""
        for energy in (5.0, 9.5, 10.0, 13.0):
            assert abs(gamow_density(energy, fixture_pole)) ** 2 == pytest.approx(
                lorentzian(energy, fixture_pole), rel=1e-12)

    def test_non_positive_width_rejected(self):
        """A pole on or above the real axis cannot be constructed."""
        with pytest.raises(ValidationError):
            ResonancePole(e_r=10.0, gamma=0.0)
        with pytest.raises(ValidationError):
            ResonancePole(e_r=10.0, gamma=-1.0)


class TestLorentzianNorm:
    """Test the density normalisation on both energy supports."""

    def test_full_line(self, fixture_pole):
        """The full-line density integrates to one."""
        assert lorentzian_norm(fixture_pole) == 1.0

    def test_half_line(self, fixture_pole):
        """Truncating at E = 0 loses the arctan tail."""
        expected = 0.5 + math.atan(20.0) / math.pi
        assert lorentzian_norm(fixture_pole, EnergyDomain.HALF_LINE) == pytest.approx(expected)

    def test_half_line_far_above_threshold(self):
        """The half-line norm tends to one as E_R / gamma grows."""
        pole = ResonancePole(e_r=1e8, gamma=1.0)
        assert lorentzian_norm(pole, EnergyDomain.HALF_LINE) == pytest.approx(1.0, abs=1e-8)

    def test_half_line_below_threshold(self):
        """A pole at non-positive energy has no half-line density."""
        with pytest.raises(ValidationError):
            lorentzian_norm(ResonancePole(e_r=-1.0, gamma=1.0), EnergyDomain.HALF_LINE)


class TestSampledResonance:
    """Test sampling resonance functions on an energy grid."""

    def test_kinds(self, fixture_pole, fixture_grid):
        """gamow, bw and conjugate samples agree with the pointwise formulas."""
        gamow = sampled_resonance(fixture_grid, [fixture_pole], "gamow")
        bw = sampled_resonance(fixture_grid, [fixture_pole], "bw")
        conjugate = sampled_resonance(fixture_grid, [fixture_pole], "conjugate")
        np.testing.assert_allclose(gamow.values, gamow_density(fixture_grid.points, fixture_pole))
        np.testing.assert_allclose(bw.values, bw_amplitude(fixture_grid.points, fixture_pole))
        np.testing.assert_allclose(conjugate.values, np.conj(gamow.values))

    def test_unknown_kind(self, fixture_pole, fixture_grid):
        """Only the three documented kinds are accepted."""
        with pytest.raises(ValidationError):
            sampled_resonance(fixture_grid, [fixture_pole], "lorentz")


class TestCauchyPairing:
    """Test the pairing of test functions with the Gamow ket."""

    def test_quadrature_matches_residue(self, fixture_pole, double_pole_test):
        """Quadrature reproduces -2 pi i test(z_R)."""
        value = cauchy_pairing(double_pole_test, fixture_pole)
        oracle = cauchy_pairing_residue(double_pole_test, fixture_pole)
        assert abs(value - oracle) <= 1e-8 * abs(oracle)

    def test_closed_form(self, fixture_pole, double_pole_test):
        """For 1/(E - z0)^2 the residue value is -2 pi i / (z_R - z0)^2."""
        z0 = complex(10.0, 1.0)
        expected = -2j * math.pi / (fixture_pole.z_r - z0) ** 2
        assert cauchy_pairing_residue(double_pole_test, fixture_pole) == pytest.approx(expected)

    def test_lower_half_plane_test_rejected(self, fixture_pole, double_pole_test):
        """A test function with poles below the axis is not an observable."""
        with pytest.raises(NonHardyTest):
            cauchy_pairing(double_pole_test.conjugate(), fixture_pole)

    def test_linearity_over_sums(self, fixture_pole, double_pole_test):
        """Pairing a sum of test functions adds the pairings."""
        other = RationalTestFunction.double_pole(complex(12.0, 2.0), numerator=0.5)
        combined = cauchy_pairing_residue(double_pole_test + other, fixture_pole)
        separate = (cauchy_pairing_residue(double_pole_test, fixture_pole)
                    + cauchy_pairing_residue(other, fixture_pole))
        assert combined == pytest.approx(separate)

    def test_scaling_by_complex_factor(self, fixture_pole, double_pole_test):
        """Scaling the test function scales the quadrature pairing."""
        c = complex(0.3, -2.0)
        scaled = cauchy_pairing(double_pole_test.scaled(c), fixture_pole)
        assert scaled == pytest.approx(c * cauchy_pairing(double_pole_test, fixture_pole), rel=1e-8)

    def test_conjugation_symmetry(self, fixture_pole, double_pole_test):
        """Conjugating the test function and reflecting the pole conjugates the pairing."""
        reflected = pole_pairing_integral(double_pole_test.conjugate(), fixture_pole.z_r.conjugate())
        original = cauchy_pairing(double_pole_test, fixture_pole)
        assert reflected == pytest.approx(original.conjugate(), rel=1e-8)

    def test_test_pole_at_reflected_resonance(self, fixture_pole):
        """With z0 = conj(z_R) the pairing is 2 pi i / gamma^2."""
        test = RationalTestFunction.double_pole(fixture_pole.z_r.conjugate())
        expected = 2j * math.pi / fixture_pole.gamma ** 2
        assert cauchy_pairing_residue(test, fixture_pole) == pytest.approx(expected)
        assert cauchy_pairing(test, fixture_pole) == pytest.approx(expected, rel=1e-8)

    def test_eigenvalue_defect_for_sum(self, fixture_pole, double_pole_test):
        """The weak eigenvalue relation is linear in the test function."""
        other = RationalTestFunction.double_pole(complex(7.0, 3.0), numerator=2.0)
        assert eigenvalue_defect(double_pole_test + other, fixture_pole).defect < 1e-8

    def test_tighter_tolerance_does_not_grow_defect(self, fixture_pole, double_pole_test):
        """Halving the quadrature tolerance keeps the defect at or below its level."""
        coarse = QuadratureSettings(abs_tol=1e-8)
        fine = coarse.halved()
        defect_coarse = eigenvalue_defect(double_pole_test, fixture_pole, coarse).defect
        defect_fine = eigenvalue_defect(double_pole_test, fixture_pole, fine).defect
        assert defect_fine <= defect_coarse + 1e-9

    def test_eigenvalue_defect(self, fixture_pole, double_pole_test):
        """H acts on the Gamow ket as multiplication by z_R."""
        check = eigenvalue_defect(double_pole_test, fixture_pole)
        assert check.defect < 1e-8
        assert abs(check.test_integral) < 1e-8


class TestExponentialLaw:
    """Test the time evolution of the Gamow pairing."""

    def test_exponential_decay_forward(self, fixture_pole, double_pole_test):
        """|pairing(t)| / |pairing(0)| follows exp(-t/2) on [0, 10]."""
        rows = pairing_table(double_pole_test, fixture_pole, np.linspace(0.0, 10.0, 20))
        assert len(rows) == 20
        for row in rows:
            assert row.abs_ratio == pytest.approx(row.expected_abs, rel=1e-6)

    def test_phase_follows_resonance_energy(self, fixture_pole, double_pole_test):
        """The ratio rotates as exp(-i E_R t)."""
        t = 0.3
        ratio = (evolved_pairing(double_pole_test, fixture_pole, t)
                 / cauchy_pairing(double_pole_test, fixture_pole))
        assert cmath.phase(ratio) == pytest.approx(cmath.phase(cmath.exp(-1j * 10.0 * t)), abs=1e-6)

    def test_matches_residue_formula(self, fixture_pole, double_pole_test):
        """Quadrature agrees with the closed-form evolved pairing."""
        for t in (0.5, 2.0, 6.0):
            value = evolved_pairing(double_pole_test, fixture_pole, t)
            oracle = evolved_pairing_residue(double_pole_test, fixture_pole, t)
            assert abs(value - oracle) <= 1e-6 * abs(oracle)

    def test_backward_extrapolation_fails(self, fixture_pole, double_pole_test):
        """At t = -1 the pairing misses the extrapolated exponential by more than 10%."""
        ratio = abs(evolved_pairing(double_pole_test, fixture_pole, -1.0)
                    / cauchy_pairing(double_pole_test, fixture_pole))
        assert abs(ratio - math.exp(0.5)) > 0.1 * math.exp(0.5)

    def test_residue_formula_refuses_negative_time(self, fixture_pole, double_pole_test):
        """The closed form holds only forward in time."""
        with pytest.raises(ValidationError):
            evolved_pairing_residue(double_pole_test, fixture_pole, -0.5)

    def test_hbar_rescales_time(self, double_pole_test):
        """Doubling hbar halves the decay rate."""
        pole = ResonancePole(e_r=10.0, gamma=1.0)
        rows = pairing_table(double_pole_test, pole, [2.0], units=Units(hbar=2.0))
        assert rows[0].expected_abs == pytest.approx(math.exp(-0.5))
        assert rows[0].abs_ratio == pytest.approx(math.exp(-0.5), rel=1e-6)


class TestSurvivalProbability:
    """Test the survival probability and the lifetime-width relation."""

    def test_one_lifetime_full_line(self, fixture_pole):
        """At t = hbar / gamma the survival is exactly 1/e."""
        tau = lifetime_from_width(fixture_pole.gamma)
        value = survival_probability(fixture_pole, Duration(t=tau))
        assert value == pytest.approx(math.exp(-1.0), abs=1e-10)

    def test_zero_time(self, fixture_pole):
        """Nothing has decayed at preparation."""
        assert survival_probability(fixture_pole, Duration(t=0.0)) == 1.0

    def test_half_line_close_to_exponential(self, fixture_pole):
        """Truncating the energy support perturbs the law by a few percent at one lifetime."""
        value = survival_probability(fixture_pole, Duration(t=1.0), EnergyDomain.HALF_LINE)
        assert 0.0 <= value <= 1.0
        assert value == pytest.approx(math.exp(-1.0), rel=0.05)
        assert value > math.exp(-1.0)
        assert value == pytest.approx(0.37914, rel=2e-3)

    def test_full_line_quadrature_cross_check(self, fixture_pole):
        """The quadrature amplitude reproduces the closed-form exponential."""
        for t in (0.0, 0.5, 2.0):
            amplitude = survival_amplitude(fixture_pole, Duration(t=t))
            assert abs(amplitude) ** 2 == pytest.approx(math.exp(-t), rel=1e-10)

    def test_full_line_monotone(self, fixture_pole):
        """Full-line survival never increases."""
        values = [survival_probability(fixture_pole, Duration(t=t)) for t in np.linspace(0, 10, 41)]
        assert all(b <= a for a, b in zip(values, values[1:]))

    def test_negative_duration_rejected(self):
        """Durations before preparation cannot be constructed."""
        rng = np.random.default_rng(7)
        for t in -rng.exponential(5.0, size=50) - 1e-12:
            with pytest.raises(CausalityViolation):
                Duration(t=float(t))

    def test_lifetime_width_round_trip(self):
        """width_from_lifetime inverts lifetime_from_width."""
        units = Units.si_ev_s()
        tau = 16.237e-9
        gamma = width_from_lifetime(tau, units)
        assert lifetime_from_width(gamma, units) == pytest.approx(tau, rel=1e-12)
        assert units.hbar == 6.582119569e-16

    def test_invalid_width(self):
        """Widths must be finite and positive."""
        with pytest.raises(ValidationError):
            lifetime_from_width(0.0)
        with pytest.raises(ValidationError):
            width_from_lifetime(float("inf"))
