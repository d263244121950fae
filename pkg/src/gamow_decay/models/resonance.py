"""
Pydantic models for resonance poles, test functions and durations.

These are the value types consumed by gamow_decay.core.resonance. All models
are frozen; operations never mutate their inputs.
"""

import math
from enum import Enum
from typing import List, Union

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from typing_extensions import Self

from ..utils.exceptions import CausalityViolation, NonHardyTest, ValidationError

HBAR_EV_S = 6.582119569e-16


class Units(BaseModel):
    """Unit convention: the value of the reduced Planck constant."""

    model_config = ConfigDict(frozen=True)

    hbar: float = Field(
        default=1.0,
        description="Reduced Planck constant in energy*time units (1.0 = natural units)",
        gt=0
    )

    @classmethod
    def si_ev_s(cls) -> "Units":
        """hbar in eV*s, for widths in eV and times in seconds."""
        return cls(hbar=HBAR_EV_S)


class EnergyDomain(str, Enum):
    """Support of the energy integration."""

    FULL_LINE = "full"
    HALF_LINE = "half"


class ResonancePole(BaseModel):
    """
    A first-order S-matrix pole z_R = e_r - i*gamma/2 with its residue.

    The pole always lies strictly below the real axis because gamma > 0.
    """

    model_config = ConfigDict(frozen=True)

    e_r: float = Field(description="Resonance energy E_R")
    gamma: float = Field(description="Resonance width; must be positive")
    residue: complex = Field(default=1 + 0j, description="Residue R of the Breit-Wigner amplitude")

    @field_validator('e_r')
    @classmethod
    def validate_energy(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValidationError('e_r', v, "finite real energy")
        return v

    @field_validator('gamma')
    @classmethod
    def validate_width(cls, v: float) -> float:
        if not (math.isfinite(v) and v > 0):
            raise ValidationError('gamma', v, "finite width > 0")
        return v

    @property
    def z_r(self) -> complex:
        """Complex pole position e_r - i*gamma/2."""
        return complex(self.e_r, -self.gamma / 2.0)

    def lifetime(self, units: Units = Units()) -> float:
        """Lifetime tau = hbar / gamma."""
        return units.hbar / self.gamma


class RationalPole(BaseModel):
    """A pole of a rational test function."""

    model_config = ConfigDict(frozen=True)

    location: complex
    order: int = Field(default=1, ge=1)

    @field_validator('location')
    @classmethod
    def validate_off_axis(cls, v: complex) -> complex:
        if v.imag == 0.0:
            raise ValidationError('location', v, "pole off the real axis")
        return v


class RationalTestFunction(BaseModel):
    """
    numerator * prod_k (E - p_k)^(-n_k), all poles in one half-plane.

    A total order of at least 2 makes every pairing integrand absolutely
    integrable and forces the plain integral of the function to vanish.
    """

    model_config = ConfigDict(frozen=True)

    poles: List[RationalPole] = Field(min_length=1)
    numerator: complex = 1 + 0j

    @model_validator(mode='after')
    def validate_half_plane(self) -> Self:
        signs = {p.location.imag > 0 for p in self.poles}
        if len(signs) != 1:
            raise ValidationError('poles', [p.location for p in self.poles],
                                  "all poles in one half-plane")
        if self.decay_degree < 2:
            raise ValidationError('poles', self.decay_degree, "total pole order >= 2")
        return self

    @classmethod
    def double_pole(cls, z0: complex, numerator: complex = 1 + 0j) -> "RationalTestFunction":
        """The standard fixture numerator / (E - z0)^2."""
        return cls(poles=[RationalPole(location=z0, order=2)], numerator=numerator)

    @property
    def decay_degree(self) -> int:
        return sum(p.order for p in self.poles)

    @property
    def upper(self) -> bool:
        """True when every pole lies in the upper half-plane."""
        return self.poles[0].location.imag > 0

    @property
    def terms(self) -> List["RationalTestFunction"]:
        return [self]

    def __call__(self, energy: ArrayLike) -> np.ndarray:
        e = np.asarray(energy, dtype=complex)
        value = np.full(e.shape, self.numerator, dtype=complex)
        for pole in self.poles:
            value = value / (e - pole.location) ** pole.order
        return value

    def value_at(self, z: complex) -> complex:
        """Scalar evaluation, also valid off the real axis."""
        value = self.numerator
        for pole in self.poles:
            value /= (z - pole.location) ** pole.order
        return value

    def scaled(self, factor: complex) -> "RationalTestFunction":
        return self.model_copy(update={'numerator': self.numerator * factor})

    def conjugate(self) -> "RationalTestFunction":
        """Complex conjugate on the real axis: poles reflected across it."""
        return RationalTestFunction(
            poles=[RationalPole(location=p.location.conjugate(), order=p.order) for p in self.poles],
            numerator=self.numerator.conjugate()
        )

    def require_upper(self) -> None:
        """Raise NonHardyTest unless every pole lies above the real axis."""
        for pole in self.poles:
            if pole.location.imag <= 0:
                raise NonHardyTest(pole.location)

    def __add__(self, other: "TestFunction") -> "RationalTestSum":
        return RationalTestSum(terms=self.terms + other.terms)


class RationalTestSum(BaseModel):
    """A finite sum of rational test functions."""

    model_config = ConfigDict(frozen=True)

    terms: List[RationalTestFunction] = Field(min_length=1)

    @property
    def poles(self) -> List[RationalPole]:
        return [p for term in self.terms for p in term.poles]

    def __call__(self, energy: ArrayLike) -> np.ndarray:
        total = self.terms[0](energy)
        for term in self.terms[1:]:
            total = total + term(energy)
        return total

    def value_at(self, z: complex) -> complex:
        return sum((term.value_at(z) for term in self.terms), 0j)

    def scaled(self, factor: complex) -> "RationalTestSum":
        return RationalTestSum(terms=[t.scaled(factor) for t in self.terms])

    def conjugate(self) -> "RationalTestSum":
        return RationalTestSum(terms=[t.conjugate() for t in self.terms])

    def require_upper(self) -> None:
        for term in self.terms:
            term.require_upper()

    def __add__(self, other: "TestFunction") -> "RationalTestSum":
        return RationalTestSum(terms=self.terms + other.terms)


TestFunction = Union[RationalTestFunction, RationalTestSum]


class Duration(BaseModel):
    """A non-negative time elapsed since preparation."""

    model_config = ConfigDict(frozen=True)

    t: float = Field(description="Elapsed time since preparation")

    @field_validator('t')
    @classmethod
    def validate_after_preparation(cls, v: float) -> float:
        if math.isnan(v) or v < 0:
            raise CausalityViolation(v, quantity="duration")
        return v

    def __float__(self) -> float:
        return self.t


class QuadratureSettings(BaseModel):
    """Tolerances of the adaptive energy-axis quadrature."""

    model_config = ConfigDict(frozen=True)

    abs_tol: float = Field(default=1e-10, gt=0, description="Absolute tolerance per integral")
    max_evals: int = Field(default=1_000_000, ge=1000, description="Evaluation budget per integral")

    @property
    def subinterval_limit(self) -> int:
        # 21-point Gauss-Kronrod rule per subinterval
        return max(50, self.max_evals // 21)

    def halved(self) -> "QuadratureSettings":
        return self.model_copy(update={'abs_tol': self.abs_tol / 2.0})


class PairingRow(BaseModel):
    """One time sample of the evolved Gamow pairing relative to t = 0."""

    model_config = ConfigDict(frozen=True)

    t: float
    abs_ratio: float = Field(description="|pairing(t)| / |pairing(0)|")
    phase: float = Field(description="arg(pairing(t) / pairing(0)) in (-pi, pi]")
    expected_abs: float = Field(description="exp(-gamma t / 2 hbar), the exponential law")


class EigenvalueCheck(BaseModel):
    """Defect of the generalized eigenvalue relation and the plain test integral."""

    model_config = ConfigDict(frozen=True)

    defect: float
    test_integral: complex

    def __float__(self) -> float:
        return self.defect
