"""
Unit tests for the Hardy-class numerics: support profiles, classification,
projections, the spectral Hilbert transform and the semigroup guard.
"""

import math

import numpy as np
import pytest

from gamow_decay.core.hardy import (
    conjugate_transform,
    evolved_state_samples,
    fit_tail,
    fourier_support_profile,
    hardy_classify,
    hardy_project,
    hilbert_transform,
    semigroup_multiplier,
)
from gamow_decay.core.resonance import sampled_resonance
from gamow_decay.models.wavefunction import (
    EnergyGrid,
    EvolutionGuard,
    HardyKind,
    SampledWaveFunction,
)
from gamow_decay.utils.exceptions import (
    CausalityViolation,
    GridNotUniform,
    InsufficientDecay,
    NotAStateFunction,
    ValidationError,
)


def relative_distance(f: SampledWaveFunction, g: SampledWaveFunction) -> float:
    return f.distance(g) / g.norm()


@pytest.fixture
def bw_state(fixture_pole, fixture_grid):
    """Gamow density of the fixture pole, a state function."""
    return sampled_resonance(fixture_grid, [fixture_pole], "gamow")


@pytest.fixture
def gaussian():
    """Real Gaussian exp(-E^2), negligible at the grid ends."""
    grid = EnergyGrid.uniform_span(0.0, 10.0, 4096)
    return SampledWaveFunction.from_function(grid, lambda e: np.exp(-e ** 2))


@pytest.fixture
def split_pair(fixture_grid):
    """A lower part g (pole 10 - 0.5i) and an upper part h (pole 10 + 1i) of equal norm."""
    g = SampledWaveFunction.from_function(
        fixture_grid, lambda e: 1j * math.sqrt(1.0 / (2.0 * math.pi)) / (e - complex(10.0, -0.5)))
    h = SampledWaveFunction.from_function(
        fixture_grid, lambda e: math.sqrt(1.0 / math.pi) / (e - complex(10.0, 1.0)))
    return g, h


class TestSupportProfile:
    """Test the mass split of the conjugate-time transform."""

    def test_breit_wigner_lives_on_positive_times(self, bw_state):
        """A lower-half-plane pole puts no mass on t < 0."""
        profile = fourier_support_profile(bw_state)
        assert profile.negative_fraction < 1e-6

    def test_conjugate_lives_on_negative_times(self, bw_state):
        """Conjugation reflects the support."""
        profile = fourier_support_profile(bw_state.conjugate())
        assert profile.nonnegative_fraction < 1e-6

    def test_parseval_against_grid_norm(self, gaussian):
        """The transform mass equals the grid L2 norm."""
        profile = fourier_support_profile(gaussian)
        assert profile.total == pytest.approx(gaussian.norm_squared(), rel=1e-9)

    def test_real_even_function_splits_evenly(self, gaussian):
        """Apart from the t = 0 sample the mass is symmetric."""
        transform = conjugate_transform(gaussian)
        masses = transform.masses()
        at_zero = masses[transform.tau == 0].sum()
        negative = masses[transform.tau < 0].sum()
        positive = masses[transform.tau > 0].sum()
        assert negative == pytest.approx(positive, rel=1e-9)
        profile = fourier_support_profile(gaussian)
        assert profile.mass_nonnegative == pytest.approx(positive + at_zero, rel=1e-12)

    def test_gaussian_needs_no_tail(self, gaussian):
        """Fast-decaying inputs go straight to the FFT."""
        assert conjugate_transform(gaussian).tail is None

    def test_breit_wigner_tail_is_continued(self, bw_state):
        """1/E ends are fitted by the pole expansion."""
        transform = conjugate_transform(bw_state)
        assert transform.tail is not None
        assert transform.tail.order == 3
        assert abs(transform.tail.shift) < 1e-4

    def test_non_uniform_grid(self):
        """Non-uniform grids are refused."""
        points = np.linspace(-5.0, 5.0, 64) ** 3
        f = SampledWaveFunction.from_function(EnergyGrid(points=points), lambda e: np.exp(-e ** 2))
        with pytest.raises(GridNotUniform):
            fourier_support_profile(f)

    def test_non_decaying_input(self, fixture_grid):
        """Noise at the grid ends cannot be continued and would alias."""
        rng = np.random.default_rng(3)
        f = SampledWaveFunction(grid=fixture_grid, values=rng.normal(size=fixture_grid.size))
        with pytest.raises(InsufficientDecay):
            fourier_support_profile(f)

    def test_fit_tail_refuses_noise(self, fixture_grid):
        """The tail fit reports its misfit through InsufficientDecay."""
        rng = np.random.default_rng(5)
        f = SampledWaveFunction(grid=fixture_grid, values=1.0 + rng.normal(size=fixture_grid.size))
        with pytest.raises(InsufficientDecay) as excinfo:
            fit_tail(f)
        assert excinfo.value.endpoint_ratio > excinfo.value.limit

    def test_zero_function(self, fixture_grid):
        """A vanishing function has no mass to split."""
        f = SampledWaveFunction(grid=fixture_grid, values=np.zeros(fixture_grid.size))
        with pytest.raises(ValidationError):
            fourier_support_profile(f)


class TestHardyClassify:
    """Test the three-way classification."""

    def test_gamow_density_is_lower(self, bw_state):
        """The Gamow density is a state function."""
        result = hardy_classify(bw_state)
        assert result.kind is HardyKind.LOWER
        assert result.leakage < 1e-6

    def test_breit_wigner_amplitude_is_lower(self, fixture_pole, fixture_grid):
        """The bare Breit-Wigner amplitude is classed the same way."""
        f = sampled_resonance(fixture_grid, [fixture_pole], "bw")
        assert hardy_classify(f).kind is HardyKind.LOWER

    def test_conjugate_is_upper(self, bw_state):
        """The complex conjugate is an observable."""
        assert hardy_classify(bw_state.conjugate()).kind is HardyKind.UPPER

    def test_mixed_is_neither(self, split_pair):
        """Equal-norm lower and upper parts split the mass in half."""
        g, h = split_pair
        result = hardy_classify(g + h)
        assert result.kind is HardyKind.NEITHER
        assert result.leakage == pytest.approx(0.5, abs=1e-2)

    def test_stable_under_refinement(self, fixture_pole, bw_state):
        """Doubling the grid points barely moves the leakage."""
        fine_grid = EnergyGrid.uniform_span(fixture_pole.e_r, 200.0, 2 ** 15)
        fine = sampled_resonance(fine_grid, [fixture_pole], "gamow")
        assert abs(hardy_classify(fine).leakage - hardy_classify(bw_state).leakage) < 1e-3

    @pytest.mark.parametrize("tol", [0.0, 0.5, -0.1, 0.7])
    def test_tolerance_range(self, bw_state, tol):
        """The tolerance must lie strictly between 0 and 1/2."""
        with pytest.raises(ValidationError):
            hardy_classify(bw_state, tol)


class TestHardyProject:
    """Test the split into upper and lower parts."""

    def test_parts_sum_to_input(self, split_pair):
        """upper + lower reproduces f."""
        g, h = split_pair
        f = g + h
        upper, lower = hardy_project(f)
        assert relative_distance(upper + lower, f) < 1e-9

    def test_class_member_is_fixed(self, bw_state):
        """A lower function has a negligible upper part."""
        upper, lower = hardy_project(bw_state)
        assert upper.norm() < 1e-6 * bw_state.norm()
        assert relative_distance(lower, bw_state) < 1e-6

    def test_conjugate_member_is_fixed(self, bw_state):
        """An upper function has a negligible lower part."""
        observable = bw_state.conjugate()
        upper, lower = hardy_project(observable)
        assert lower.norm() < 1e-6 * observable.norm()
        assert relative_distance(upper, observable) < 1e-6

    def test_recovers_components(self, split_pair):
        """The parts of g + h are g and h."""
        g, h = split_pair
        upper, lower = hardy_project(g + h)
        assert relative_distance(lower, g) < 1e-6
        assert relative_distance(upper, h) < 1e-6

    def test_recovers_conjugate_components(self, split_pair):
        """Conjugating g + h swaps the classes of its parts."""
        g, h = split_pair
        upper, lower = hardy_project(g.conjugate() + h.conjugate())
        assert relative_distance(upper, g.conjugate()) < 1e-6
        assert relative_distance(lower, h.conjugate()) < 1e-6

    def test_parts_are_classified(self, split_pair):
        """Each part lands in its own class."""
        g, h = split_pair
        upper, lower = hardy_project(g + h)
        assert hardy_classify(upper, 1e-4).kind is HardyKind.UPPER
        assert hardy_classify(lower, 1e-4).kind is HardyKind.LOWER

    def test_parts_are_orthogonal(self, fixture_grid):
        """Upper and lower parts of third-order poles are orthogonal on the grid."""
        f = SampledWaveFunction.from_function(
            fixture_grid,
            lambda e: (e - complex(10.0, -1.0)) ** -3 + 2.0 * (e - complex(11.0, 2.0)) ** -3,
        )
        upper, lower = hardy_project(f)
        assert abs(upper.inner(lower)) < 1e-8 * f.norm_squared()

    def test_linearity(self, split_pair):
        """Projection commutes with scaling."""
        g, h = split_pair
        f = g + h
        alpha = complex(-1.5, 0.25)
        upper, lower = hardy_project(f)
        scaled_upper, scaled_lower = hardy_project(f.scaled(alpha))
        assert relative_distance(scaled_lower, lower.scaled(alpha)) < 1e-9
        assert relative_distance(scaled_upper, upper.scaled(alpha)) < 1e-9


class TestHilbertTransform:
    """Test the spectral Hilbert transform."""

    def test_lorentzian_pair(self, fixture_pole, fixture_grid):
        """Re 1/(E - z_R) transforms into Im 1/(E - z_R)."""
        f = sampled_resonance(fixture_grid, [fixture_pole], "bw")
        result = hilbert_transform(f.real_part())
        assert relative_distance(result, f.imag_part()) < 1e-5

    def test_applied_twice_negates(self, split_pair):
        """H(H(f)) = -f."""
        g, h = split_pair
        f = g + h
        twice = hilbert_transform(hilbert_transform(f))
        assert relative_distance(twice, f.scaled(-1.0)) < 1e-6

    def test_applied_twice_negates_observables(self, split_pair):
        """H(H(f)) = -f also for conjugated inputs."""
        g, h = split_pair
        f = (g + h).conjugate()
        twice = hilbert_transform(hilbert_transform(f))
        assert relative_distance(twice, f.scaled(-1.0)) < 1e-6

    def test_zero_input(self, fixture_grid):
        """Zero maps to zero."""
        f = SampledWaveFunction(grid=fixture_grid, values=np.zeros(fixture_grid.size))
        assert not np.any(hilbert_transform(f).values)


class TestSemigroupMultiplier:
    """Test forward evolution and the causality guard."""

    def test_zero_time_is_identity(self, bw_state):
        """t = 0 leaves the samples unchanged."""
        result = semigroup_multiplier(bw_state, 0.0)
        np.testing.assert_array_equal(result.function.values, bw_state.values)

    def test_forward_evolution_stays_lower(self, fixture_pole, bw_state):
        """At t = 5 lifetimes the state is still a state."""
        result = semigroup_multiplier(bw_state, 5.0 * fixture_pole.lifetime())
        assert result.classification.kind is HardyKind.LOWER
        assert result.leakage < 1e-6

    def test_backward_evolution_leaks(self, fixture_pole, bw_state):
        """Evolving back by 5 lifetimes pushes most of the mass onto t < 0."""
        result = semigroup_multiplier(bw_state, -5.0 * fixture_pole.lifetime(), EvolutionGuard.PROBE)
        assert result.leakage > 0.5
        assert result.classification.kind is not HardyKind.LOWER

    def test_enforce_rejects_negative_times(self, bw_state):
        """Backward evolution is refused under the enforce guard."""
        rng = np.random.default_rng(11)
        for t in -rng.exponential(3.0, size=20) - 1e-9:
            with pytest.raises(CausalityViolation):
                semigroup_multiplier(bw_state, float(t))

    def test_rejects_observables(self, bw_state):
        """Only lower functions may be evolved under enforce."""
        with pytest.raises(NotAStateFunction):
            semigroup_multiplier(bw_state.conjugate(), 1.0)

    def test_preserves_norm(self, bw_state):
        """The multiplier is unimodular."""
        for t in (0.5, 3.0, -2.0):
            result = semigroup_multiplier(bw_state, t, EvolutionGuard.PROBE)
            assert result.function.norm() == pytest.approx(bw_state.norm(), rel=1e-12)

    def test_composition(self, bw_state):
        """Evolving by t1 then t2 equals evolving by t1 + t2."""
        first = semigroup_multiplier(bw_state, 1.25).function
        composed = semigroup_multiplier(first, 2.5).function
        direct = semigroup_multiplier(bw_state, 3.75).function
        np.testing.assert_allclose(composed.values, direct.values, rtol=0, atol=1e-12)

    def test_evolved_state_samples(self, bw_state):
        """A batch of forward times gives one result per time."""
        results = evolved_state_samples(bw_state, [0.0, 1.0, 2.0])
        assert [r.t for r in results] == [0.0, 1.0, 2.0]
        assert all(r.classification.kind is HardyKind.LOWER for r in results)
        with pytest.raises(CausalityViolation):
            evolved_state_samples(bw_state, [1.0, -1.0])
