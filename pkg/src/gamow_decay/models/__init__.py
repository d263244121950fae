"""
Pydantic data models for gamow-decay.

Resonance poles and test functions, sampled wave functions and their Hardy
classification, the shelving-ion level scheme and trajectories, dwell-time
analysis results, and the run configuration.
"""

from .analysis import (
    ComparisonReport,
    ComparisonRow,
    DarkPeriod,
    DetectionMatch,
    DwellEnsemble,
    FitResult,
    LifetimeWidthReport,
    SurvivalCurve,
)
from .config import HardyFixture, Mode, RunConfig
from .resonance import (
    Duration,
    EigenvalueCheck,
    EnergyDomain,
    PairingRow,
    QuadratureSettings,
    RationalPole,
    RationalTestFunction,
    RationalTestSum,
    ResonancePole,
    Units,
)
from .shelving import FluorescenceTrace, JumpRecord, LevelScheme, Trajectory, TrajectoryConfig
from .wavefunction import (
    EnergyGrid,
    EvolutionGuard,
    HardyClass,
    HardyKind,
    SampledWaveFunction,
    SemigroupResult,
    SupportProfile,
)

__all__ = [
    # Resonances
    "Units",
    "EnergyDomain",
    "ResonancePole",
    "RationalPole",
    "RationalTestFunction",
    "RationalTestSum",
    "Duration",
    "QuadratureSettings",
    "PairingRow",
    "EigenvalueCheck",
    # Wave functions
    "EnergyGrid",
    "SampledWaveFunction",
    "HardyKind",
    "SupportProfile",
    "HardyClass",
    "EvolutionGuard",
    "SemigroupResult",
    # Shelving
    "LevelScheme",
    "TrajectoryConfig",
    "JumpRecord",
    "FluorescenceTrace",
    "Trajectory",
    # Analysis
    "DarkPeriod",
    "DwellEnsemble",
    "SurvivalCurve",
    "FitResult",
    "ComparisonRow",
    "ComparisonReport",
    "LifetimeWidthReport",
    "DetectionMatch",
    # Configuration
    "Mode",
    "HardyFixture",
    "RunConfig",
]
