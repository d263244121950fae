"""
Pydantic models for the shelving-ion simulator.

A LevelScheme holds the rates of the collapsed three-level (optionally four-level)
ion, a TrajectoryConfig holds the run parameters, and a Trajectory bundles the
binned fluorescence with the ground-truth jump records.
"""

import math
from typing import Any, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from typing_extensions import Self

from ..utils.exceptions import InvalidConfig, ValidationError


class LevelScheme(BaseModel):
    """
    Transition rates of the monitored ion.

    The bright cycle g <-> e is summarised by the detected photon rate. The lamp
    pathway into the metastable level m is collapsed into shelve_rate, optionally
    preceded by a short stay in the intermediate level h.
    """

    model_config = ConfigDict(frozen=True)

    bright_rate: float = Field(
        default=1000.0,
        description="Detected photons per second while the ion is not shelved"
    )
    shelve_rate: float = Field(
        default=1.0 / 60.0,
        description="Rate (1/s) of transitions into the metastable level"
    )
    unshelve_rate: float = Field(
        default=1.0 / 30.0,
        description="Decay rate (1/s) of the metastable level, 1/tau_m"
    )
    intermediate_lifetime: float = Field(
        default=0.0,
        description="Mean dwell (s) in the intermediate level before shelving; 0 collapses it"
    )

    @field_validator('bright_rate', 'shelve_rate', 'intermediate_lifetime')
    @classmethod
    def validate_non_negative(cls, v: float, info: Any) -> float:
        if not (math.isfinite(v) and v >= 0):
            raise InvalidConfig(f"{info.field_name} must be finite and >= 0, got {v!r}",
                                field=info.field_name)
        return v

    @field_validator('unshelve_rate')
    @classmethod
    def validate_positive(cls, v: float) -> float:
        if not (math.isfinite(v) and v > 0):
            raise InvalidConfig(f"unshelve_rate must be finite and > 0, got {v!r}",
                                field='unshelve_rate')
        return v

    @property
    def metastable_lifetime(self) -> float:
        return 1.0 / self.unshelve_rate


class TrajectoryConfig(BaseModel):
    """Run parameters of one simulated trajectory."""

    model_config = ConfigDict(frozen=True)

    bin_width_s: float = Field(default=1.0, description="Photon-counting bin width")
    seed: int = Field(ge=0, description="Master seed of the random stream")
    duration_s: Optional[float] = Field(default=None, description="Stop after this lab time")
    target_dark_periods: Optional[int] = Field(
        default=None,
        description="Stop once this many complete dark periods have occurred"
    )
    detection_efficiency: float = Field(default=1.0, description="Photon detection probability")

    @model_validator(mode='after')
    def validate_run(self) -> Self:
        if not (math.isfinite(self.bin_width_s) and self.bin_width_s > 0):
            raise InvalidConfig(f"bin_width_s must be > 0, got {self.bin_width_s!r}",
                                field='bin_width_s')
        if (self.duration_s is None) == (self.target_dark_periods is None):
            raise InvalidConfig("exactly one stop criterion must be set", field='stop')
        if self.duration_s is not None and not (self.duration_s > 0 and math.isfinite(self.duration_s)):
            raise InvalidConfig(f"duration_s must be > 0, got {self.duration_s!r}",
                                field='duration_s')
        if self.target_dark_periods is not None and self.target_dark_periods < 1:
            raise InvalidConfig(
                f"target_dark_periods must be >= 1, got {self.target_dark_periods!r}",
                field='target_dark_periods'
            )
        if not 0 < self.detection_efficiency <= 1:
            raise InvalidConfig(
                f"detection_efficiency must lie in (0, 1], got {self.detection_efficiency!r}",
                field='detection_efficiency'
            )
        return self


class JumpRecord(BaseModel):
    """Ground-truth shelving interval on the laboratory clock."""

    model_config = ConfigDict(frozen=True)

    shelve_time_s: float = Field(ge=0)
    unshelve_time_s: float
    censored: bool = Field(
        default=False,
        description="True when the dark period is cut by the end of the trace"
    )

    @model_validator(mode='after')
    def validate_interval(self) -> Self:
        if not self.unshelve_time_s > self.shelve_time_s:
            raise ValidationError('unshelve_time_s', self.unshelve_time_s,
                                  f"> shelve_time_s ({self.shelve_time_s})")
        return self

    @property
    def dwell_s(self) -> float:
        return self.unshelve_time_s - self.shelve_time_s


class FluorescenceTrace(BaseModel):
    """Photon counts in consecutive bins of equal width."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    bin_width_s: float = Field(gt=0)
    counts: np.ndarray
    t_start_s: float = 0.0

    @field_validator('counts', mode='before')
    @classmethod
    def validate_counts(cls, v: Any) -> np.ndarray:
        counts = np.array(v)
        if counts.ndim != 1 or counts.size < 1:
            raise ValidationError('counts', counts.shape, "at least one bin")
        if not np.issubdtype(counts.dtype, np.integer):
            if not np.all(np.equal(np.mod(counts, 1), 0)):
                raise ValidationError('counts', "fractional counts", "integer photon counts")
        counts = counts.astype(np.int64)
        if np.any(counts < 0):
            raise ValidationError('counts', int(counts.min()), "non-negative counts")
        counts.setflags(write=False)
        return counts

    @property
    def n_bins(self) -> int:
        return int(self.counts.size)

    @property
    def t_end_s(self) -> float:
        return self.t_start_s + self.n_bins * self.bin_width_s

    def bin_start(self, index: int) -> float:
        return self.t_start_s + index * self.bin_width_s

    def bin_starts(self) -> np.ndarray:
        return self.t_start_s + self.bin_width_s * np.arange(self.n_bins)


class Trajectory(BaseModel):
    """One simulated run: fluorescence trace plus ordered jump records."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    trace: FluorescenceTrace
    jumps: List[JumpRecord]

    @model_validator(mode='after')
    def validate_records(self) -> Self:
        for earlier, later in zip(self.jumps, self.jumps[1:]):
            if later.shelve_time_s <= earlier.unshelve_time_s:
                raise ValidationError('jumps', later.shelve_time_s,
                                      "strictly ordered, non-overlapping records")
        return self

    @property
    def complete_jumps(self) -> List[JumpRecord]:
        return [j for j in self.jumps if not j.censored]

    def dark_dwells(self) -> np.ndarray:
        return np.array([j.dwell_s for j in self.complete_jumps], dtype=float)
