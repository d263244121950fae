"""
gamow-decay

Numerics for resonance decay (Breit-Wigner poles, Gamow vectors, Hardy-class
causality checks) and a single-ion shelving simulator with the dwell-time
analysis that compares counting ratios with Born survival probabilities.
"""

__version__ = "0.1.0"

__all__ = [
    "__version__",
]
