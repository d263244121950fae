"""
Computational core of gamow-decay.

- resonance: Breit-Wigner amplitudes, Gamow pairings and survival probabilities
- hardy: conjugate-time transforms, Hardy classification and semigroup evolution
- simulator: seeded shelving-ion trajectories
- analysis: dark-period detection, counting functions and lifetime fits
"""

from .analysis import (
    born_survival,
    binomial_sigma,
    bright_level,
    compare_counting_to_born,
    counting_function,
    detect_dark_periods,
    exponential_ks,
    fit_lifetime,
    fit_log_linear,
    ks_critical_value,
    lifetime_width_report,
    match_dark_periods,
    survival_curve,
)
from .hardy import (
    conjugate_transform,
    evolved_state_samples,
    fit_tail,
    fourier_support_profile,
    hardy_classify,
    hardy_project,
    hilbert_transform,
    semigroup_multiplier,
)
from .resonance import (
    bw_amplitude,
    bw_amplitude_sum,
    cauchy_pairing,
    cauchy_pairing_residue,
    eigenvalue_defect,
    evolved_pairing,
    evolved_pairing_residue,
    gamow_density,
    lifetime_from_width,
    lorentzian_norm,
    pairing_table,
    sampled_resonance,
    survival_probability,
    width_from_lifetime,
)
from .simulator import run_ensemble, simulate_trajectory

__all__ = [
    "bw_amplitude",
    "bw_amplitude_sum",
    "gamow_density",
    "sampled_resonance",
    "lorentzian_norm",
    "cauchy_pairing",
    "cauchy_pairing_residue",
    "eigenvalue_defect",
    "evolved_pairing",
    "evolved_pairing_residue",
    "pairing_table",
    "survival_probability",
    "lifetime_from_width",
    "width_from_lifetime",
    "conjugate_transform",
    "fit_tail",
    "fourier_support_profile",
    "hardy_classify",
    "hardy_project",
    "hilbert_transform",
    "semigroup_multiplier",
    "evolved_state_samples",
    "simulate_trajectory",
    "run_ensemble",
    "bright_level",
    "detect_dark_periods",
    "match_dark_periods",
    "counting_function",
    "survival_curve",
    "fit_log_linear",
    "fit_lifetime",
    "born_survival",
    "binomial_sigma",
    "ks_critical_value",
    "exponential_ks",
    "compare_counting_to_born",
    "lifetime_width_report",
]
