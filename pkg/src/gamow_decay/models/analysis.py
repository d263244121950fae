"""
Pydantic models for dwell-time analysis results.
"""

from typing import Any, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from typing_extensions import Self

from ..utils.exceptions import NegativeDuration, ValidationError


class DarkPeriod(BaseModel):
    """A detected interval of suppressed fluorescence."""

    model_config = ConfigDict(frozen=True)

    t0_s: float = Field(description="Onset on the laboratory clock")
    t1_s: float = Field(description="End on the laboratory clock")

    @model_validator(mode='after')
    def validate_interval(self) -> Self:
        if not self.t1_s > self.t0_s:
            raise ValidationError('t1_s', self.t1_s, f"> t0_s ({self.t0_s})")
        return self

    @property
    def dwell_s(self) -> float:
        return self.t1_s - self.t0_s


class DwellEnsemble(BaseModel):
    """
    Dwell times t_i = t1_i - t0_i, each measured from its own preparation.

    Aligning every onset to t = 0 turns the list into an ensemble of identically
    prepared systems.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    dwells_s: np.ndarray

    @field_validator('dwells_s', mode='before')
    @classmethod
    def validate_dwells(cls, v: Any) -> np.ndarray:
        dwells = np.array(v, dtype=float)
        if dwells.ndim != 1 or dwells.size < 1:
            raise ValidationError('dwells_s', dwells.shape, "at least one dwell time")
        if not np.all(np.isfinite(dwells)):
            raise ValidationError('dwells_s', "non-finite entries", "finite durations")
        if np.any(dwells < 0):
            raise NegativeDuration(float(dwells.min()), quantity="dwell time")
        if np.any(dwells == 0):
            raise ValidationError('dwells_s', 0.0, "strictly positive durations")
        dwells.setflags(write=False)
        return dwells

    @classmethod
    def from_periods(cls, periods: List[DarkPeriod]) -> "DwellEnsemble":
        return cls(dwells_s=[p.dwell_s for p in periods])

    @property
    def M(self) -> int:
        return int(self.dwells_s.size)

    def mean(self) -> float:
        return float(np.mean(self.dwells_s))


class SurvivalCurve(BaseModel):
    """Counting function N(t) sampled on a grid of durations."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    t_s: np.ndarray
    n_of_t: np.ndarray
    M: int = Field(ge=1)

    @field_validator('t_s', mode='before')
    @classmethod
    def validate_times(cls, v: Any) -> np.ndarray:
        t = np.array(v, dtype=float)
        if t.ndim != 1 or t.size < 1:
            raise ValidationError('t_s', t.shape, "at least one duration")
        if np.any(t < 0):
            raise NegativeDuration(float(t.min()), quantity="survival time")
        if np.any(np.diff(t) <= 0):
            raise ValidationError('t_s', "non-increasing", "strictly increasing durations")
        t.setflags(write=False)
        return t

    @field_validator('n_of_t', mode='before')
    @classmethod
    def validate_counts(cls, v: Any) -> np.ndarray:
        n = np.array(v, dtype=np.int64)
        if np.any(n < 0) or np.any(np.diff(n) > 0):
            raise ValidationError('n_of_t', n.tolist(), "non-negative, non-increasing counts")
        n.setflags(write=False)
        return n

    @model_validator(mode='after')
    def validate_shape(self) -> Self:
        if self.n_of_t.size != self.t_s.size:
            raise ValidationError('n_of_t', self.n_of_t.size, f"{self.t_s.size} entries")
        if self.n_of_t[0] > self.M:
            raise ValidationError('n_of_t', int(self.n_of_t[0]), f"<= M ({self.M})")
        return self

    @property
    def ratio(self) -> np.ndarray:
        return self.n_of_t / float(self.M)


class FitResult(BaseModel):
    """Lifetime from the straight-line fit of ln N(t) against t."""

    model_config = ConfigDict(frozen=True)

    tau_s: float = Field(gt=0)
    tau_stderr_s: float = Field(ge=0)
    log_intercept: float
    slope: float
    points_used: int = Field(ge=2)


class ComparisonRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    t_s: float
    ratio: float
    born: float
    deviation: float
    binomial_sigma: float


class ComparisonReport(BaseModel):
    """Counting ratio N(t)/M set against the Born survival probability."""

    model_config = ConfigDict(frozen=True)

    tau_s: float
    M: int
    sup_deviation: float
    rows: List[ComparisonRow]
    ks_statistic: Optional[float] = None
    ks_pvalue: Optional[float] = None
    ks_critical: Optional[float] = None

    @property
    def ks_pass(self) -> Optional[bool]:
        if self.ks_statistic is None or self.ks_critical is None:
            return None
        return self.ks_statistic < self.ks_critical


class LifetimeWidthReport(BaseModel):
    """Lifetime from the fit compared with hbar / Gamma from the line width."""

    model_config = ConfigDict(frozen=True)

    tau_from_width: float
    tau_from_width_error: float = 0.0
    fitted_tau: float
    fitted_stderr: float
    pull: float
    consistency_bound: float = 3.0

    @property
    def consistent(self) -> bool:
        return abs(self.pull) < self.consistency_bound


class DetectionMatch(BaseModel):
    """Pairing of detected dark periods with ground-truth jump records."""

    model_config = ConfigDict(frozen=True)

    detected: int
    truth: int
    matched: int
    max_onset_error_s: float
    max_end_error_s: float
