"""
Pydantic models for sampled energy wave functions and their Hardy classes.
"""

from enum import Enum
from typing import Any

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.integrate import trapezoid
from typing_extensions import Self

from ..utils.exceptions import GridNotUniform, ValidationError

MIN_GRID_POINTS = 8
UNIFORM_RTOL = 1e-12
PARSEVAL_RTOL = 1e-9


class EnergyGrid(BaseModel):
    """
    A strictly increasing set of real energies.

    Spacing is uniform when every step matches the mean step to 1e-12 of the
    grid's energy scale (largest |E| or span, whichever is bigger).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    points: np.ndarray = Field(description="Strictly increasing real energies")

    @field_validator('points', mode='before')
    @classmethod
    def validate_points(cls, v: Any) -> np.ndarray:
        points = np.array(v, dtype=float)
        if points.ndim != 1 or points.size < MIN_GRID_POINTS:
            raise ValidationError('points', points.shape,
                                  f"one-dimensional grid with at least {MIN_GRID_POINTS} points")
        if not np.all(np.isfinite(points)):
            raise ValidationError('points', "non-finite entries", "finite energies")
        if np.any(np.diff(points) <= 0):
            raise ValidationError('points', "non-increasing entries", "strictly increasing energies")
        points.setflags(write=False)
        return points

    @classmethod
    def uniform_span(cls, center: float, half_width: float, n_points: int) -> "EnergyGrid":
        """
        Uniform grid of n_points cell midpoints tiling [center - half_width, center + half_width].

        The points are symmetric about center, so odd functions of E - center
        sum to zero on the grid.
        """
        if half_width <= 0:
            raise ValidationError('half_width', half_width, "> 0")
        step = 2.0 * half_width / n_points
        return cls(points=center + step * (np.arange(n_points) - (n_points - 1) / 2.0))

    @property
    def size(self) -> int:
        return int(self.points.size)

    @property
    def step(self) -> float:
        return float((self.points[-1] - self.points[0]) / (self.size - 1))

    @property
    def nonuniformity(self) -> float:
        """Largest spacing deviation relative to the grid's energy scale."""
        deviation = np.max(np.abs(np.diff(self.points) - self.step))
        scale = max(float(np.max(np.abs(self.points))), float(self.points[-1] - self.points[0]))
        return float(deviation / scale)

    @property
    def uniform(self) -> bool:
        return self.nonuniformity <= UNIFORM_RTOL

    def require_uniform(self) -> None:
        if not self.uniform:
            raise GridNotUniform(self.nonuniformity)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, EnergyGrid) and np.array_equal(self.points, other.points)

    def __hash__(self) -> int:
        return hash(self.points.tobytes())


class SampledWaveFunction(BaseModel):
    """Complex samples f(E) on an EnergyGrid with finite trapezoid L2 norm."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: EnergyGrid
    values: np.ndarray

    @field_validator('values', mode='before')
    @classmethod
    def validate_values(cls, v: Any) -> np.ndarray:
        values = np.array(v, dtype=complex)
        if values.ndim != 1:
            raise ValidationError('values', values.shape, "one-dimensional samples")
        if not np.all(np.isfinite(values)):
            raise ValidationError('values', "non-finite samples", "finite L2 norm")
        values.setflags(write=False)
        return values

    @model_validator(mode='after')
    def validate_length(self) -> Self:
        if self.values.size != self.grid.size:
            raise ValidationError('values', self.values.size,
                                  f"one sample per grid point ({self.grid.size})")
        return self

    @classmethod
    def from_function(cls, grid: EnergyGrid, func: Any) -> "SampledWaveFunction":
        """Sample a vectorised callable on the grid."""
        return cls(grid=grid, values=func(grid.points))

    def with_values(self, values: ArrayLike) -> "SampledWaveFunction":
        return SampledWaveFunction(grid=self.grid, values=values)

    def norm_squared(self) -> float:
        return float(trapezoid(np.abs(self.values) ** 2, self.grid.points))

    def norm(self) -> float:
        return float(np.sqrt(self.norm_squared()))

    def inner(self, other: "SampledWaveFunction") -> complex:
        """Grid inner product <self, other>, antilinear in self."""
        return complex(trapezoid(np.conj(self.values) * other.values, self.grid.points))

    def distance(self, other: "SampledWaveFunction") -> float:
        return (self - other).norm()

    def conjugate(self) -> "SampledWaveFunction":
        return self.with_values(np.conj(self.values))

    def real_part(self) -> "SampledWaveFunction":
        return self.with_values(self.values.real)

    def imag_part(self) -> "SampledWaveFunction":
        return self.with_values(self.values.imag)

    def scaled(self, factor: complex) -> "SampledWaveFunction":
        return self.with_values(self.values * factor)

    def __add__(self, other: "SampledWaveFunction") -> "SampledWaveFunction":
        self._require_same_grid(other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "SampledWaveFunction") -> "SampledWaveFunction":
        self._require_same_grid(other)
        return self.with_values(self.values - other.values)

    def _require_same_grid(self, other: "SampledWaveFunction") -> None:
        if self.grid != other.grid:
            raise ValidationError('grid', other.grid.size, "identical energy grids")


class HardyKind(str, Enum):
    """Analyticity class of a boundary-value function."""

    UPPER = "upper"
    LOWER = "lower"
    NEITHER = "neither"


class SupportProfile(BaseModel):
    """L2 mass of the conjugate-time transform on t < 0 and t >= 0."""

    model_config = ConfigDict(frozen=True)

    mass_negative: float = Field(ge=0)
    mass_nonnegative: float = Field(ge=0)
    total: float = Field(gt=0)

    @model_validator(mode='after')
    def validate_parseval(self) -> Self:
        split = self.mass_negative + self.mass_nonnegative
        if abs(split - self.total) > PARSEVAL_RTOL * self.total:
            raise ValidationError('total', self.total, "mass_negative + mass_nonnegative")
        return self

    @property
    def negative_fraction(self) -> float:
        return self.mass_negative / self.total

    @property
    def nonnegative_fraction(self) -> float:
        return self.mass_nonnegative / self.total


class HardyClass(BaseModel):
    """
    Classification result.

    leakage is the mass fraction on the forbidden side of the assigned class;
    for NEITHER it is the smaller of the two fractions.
    """

    model_config = ConfigDict(frozen=True)

    kind: HardyKind
    leakage: float = Field(ge=0, le=1)
    profile: SupportProfile


class EvolutionGuard(str, Enum):
    """Whether backward (t < 0) evolution is refused or merely reported."""

    ENFORCE = "enforce"
    PROBE = "probe"


class SemigroupResult(BaseModel):
    """A multiplied wave function together with its Hardy classification."""

    model_config = ConfigDict(frozen=True)

    function: SampledWaveFunction
    classification: HardyClass
    leakage: float = Field(ge=0, le=1, description="Mass fraction of the output on t < 0")
    t: float
    guard: EvolutionGuard
