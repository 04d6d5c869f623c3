"""Gamma/Beta evaluation helpers on positive real (rational) arguments.

All Gamma ratios in the transforms are assembled in log space so that large
arguments never overflow intermediate products.
"""

from fractions import Fraction

import numpy as np
from scipy.special import betaln, gammaln

_Real = (int, float, Fraction)


def log_gamma(x) -> float:
    """log Gamma(x) for x > 0 (accepts Fraction)."""
    xf = float(x)
    if xf <= 0.0:
        raise ValueError(f"log_gamma requires a positive argument, got {x}")
    return float(gammaln(xf))


def gamma_value(x) -> float:
    """Gamma(x) for x > 0, computed via log-Gamma."""
    return float(np.exp(log_gamma(x)))


def beta_value(a, b) -> float:
    """Beta(a, b) for a, b > 0, computed via log-Gamma."""
    af, bf = float(a), float(b)
    if af <= 0.0 or bf <= 0.0:
        raise ValueError(f"beta_value requires positive arguments, got ({a}, {b})")
    return float(np.exp(betaln(af, bf)))
