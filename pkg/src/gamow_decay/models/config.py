"""
Run configuration for the command-line pipeline.

One section model per key namespace; RunConfig bundles them and applies the
cross-section rules that depend on the selected mode.
"""

from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing_extensions import Self

from ..utils.exceptions import ConfigurationError, ValidationError
from .resonance import QuadratureSettings, RationalPole, RationalTestFunction, ResonancePole, Units
from .shelving import LevelScheme, TrajectoryConfig
from .wavefunction import EnergyGrid


class Mode(str, Enum):
    SIMULATE = "simulate"
    DETECT = "detect"
    SURVIVAL = "survival"
    FIT = "fit"
    GAMOW = "gamow"
    HARDY = "hardy"
    REPORT = "report"


class HardyFixture(str, Enum):
    """Sampled function classified by the hardy subcommand."""

    GAMOW = "gamow"
    CONJUGATE = "conjugate"
    MIXED = "mixed"


class _Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')


class TrajectorySettings(_Section):
    bin_width_s: float = Field(default=1.0, gt=0)
    duration_s: Optional[float] = Field(default=None, gt=0)
    target_dark_periods: Optional[int] = Field(default=None, ge=1)
    detection_efficiency: float = Field(default=1.0, gt=0, le=1)

    def with_seed(self, seed: int) -> TrajectoryConfig:
        return TrajectoryConfig(seed=seed, **self.model_dump())


class EnsembleSettings(_Section):
    n_trajectories: int = Field(default=1, ge=1)
    workers: int = Field(default=1, ge=1)


class PoleSettings(_Section):
    e_r: float = 10.0
    gamma: float = Field(default=1.0, gt=0)
    residue_re: float = 1.0
    residue_im: float = 0.0

    def pole(self) -> ResonancePole:
        return ResonancePole(e_r=self.e_r, gamma=self.gamma,
                             residue=complex(self.residue_re, self.residue_im))


class TestSettings(_Section):
    """Pole z0 of the rational test function; defaults to e_r + i gamma."""

    __test__ = False

    z0_re: Optional[float] = None
    z0_im: Optional[float] = None
    order: int = Field(default=2, ge=2)

    @model_validator(mode='after')
    def validate_pole(self) -> Self:
        if self.z0_im == 0:
            raise ValidationError('z0_im', self.z0_im, "!= 0 (test pole off the real axis)")
        return self

    def test_function(self, pole: ResonancePole) -> RationalTestFunction:
        z0 = complex(pole.e_r if self.z0_re is None else self.z0_re,
                     pole.gamma if self.z0_im is None else self.z0_im)
        return RationalTestFunction(poles=[RationalPole(location=z0, order=self.order)])


class GridSettings(_Section):
    half_width: float = Field(default=200.0, gt=0, description="Half-span in units of gamma")
    points: int = Field(default=16384, ge=8)

    def energy_grid(self, pole: ResonancePole) -> EnergyGrid:
        return EnergyGrid.uniform_span(pole.e_r, self.half_width * pole.gamma, self.points)


class GamowSettings(_Section):
    t_min: float = 0.0
    t_max: float = 10.0
    steps: int = Field(default=20, ge=1)

    @model_validator(mode='after')
    def validate_span(self) -> Self:
        if not self.t_max > self.t_min:
            raise ValidationError('t_max', self.t_max, f"> t_min ({self.t_min})")
        return self

    def times(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.steps)


class HardySettings(_Section):
    tol: float = Field(default=1e-4, gt=0, lt=0.5)
    kind: HardyFixture = HardyFixture.GAMOW


class DetectSettings(_Section):
    threshold_frac: float = Field(default=0.2, gt=0, lt=1)
    min_dark_bins: int = Field(default=2, ge=1)


class SurvivalSettings(_Section):
    bin_s: float = Field(default=10.0, gt=0)
    t_max_s: float = Field(default=120.0, gt=0)

    @model_validator(mode='after')
    def validate_span(self) -> Self:
        if self.t_max_s < self.bin_s:
            raise ValidationError('t_max_s', self.t_max_s, f">= bin_s ({self.bin_s})")
        return self


class CompareSettings(_Section):
    tau_s: Optional[float] = Field(default=None, gt=0)


class WidthSettings(_Section):
    gamma: Optional[float] = Field(default=None, gt=0)
    error: float = Field(default=0.0, ge=0)


class IOSettings(_Section):
    trace: Optional[Path] = None
    jumps: Optional[Path] = None
    dark: Optional[Path] = None
    survival: Optional[Path] = None


# inputs each mode reads from disk
REQUIRED_INPUTS = {
    Mode.DETECT: ('trace',),
    Mode.SURVIVAL: ('dark',),
    Mode.FIT: ('survival',),
}


class RunConfig(BaseModel):
    """Fully validated run configuration."""

    model_config = ConfigDict(frozen=True, extra='forbid')

    mode: Mode
    seed: Optional[int] = Field(default=None, ge=0)
    units: Units = Units()
    scheme: LevelScheme = LevelScheme()
    trajectory: TrajectorySettings = TrajectorySettings()
    ensemble: EnsembleSettings = EnsembleSettings()
    pole: PoleSettings = PoleSettings()
    test: TestSettings = TestSettings()
    grid: GridSettings = GridSettings()
    gamow: GamowSettings = GamowSettings()
    quad: QuadratureSettings = QuadratureSettings()
    hardy: HardySettings = HardySettings()
    detect: DetectSettings = DetectSettings()
    survival: SurvivalSettings = SurvivalSettings()
    compare: CompareSettings = CompareSettings()
    width: WidthSettings = WidthSettings()
    io: IOSettings = IOSettings()

    @model_validator(mode='after')
    def validate_mode(self) -> Self:
        if self.mode in (Mode.SIMULATE, Mode.REPORT):
            if self.seed is None:
                raise ConfigurationError(
                    f"'seed' is required for mode '{self.mode.value}'",
                    key='seed',
                    suggestions=["Add a line 'seed = <non-negative integer>'"]
                )
            self.trajectory_config()
        for name in REQUIRED_INPUTS.get(self.mode, ()):
            if getattr(self.io, name) is None:
                raise ConfigurationError(f"'io.{name}' is required for mode '{self.mode.value}'",
                                         key=f"io.{name}")
        return self

    def trajectory_config(self) -> TrajectoryConfig:
        if self.seed is None:
            raise ConfigurationError("'seed' is not set", key='seed')
        return self.trajectory.with_seed(self.seed)
