import math
from fractions import Fraction

import numpy as np
import pytest

from monoborel import BivariateSeries, LinearMonomialPDE, MonomialWeight


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_series(rng, trunc, l=1, density=0.5, support_min=(0, 0)):
    """Random complex series on the box, support bounded below componentwise."""
    coeffs = {}
    for n in range(support_min[0], trunc[0] + 1):
        for m in range(support_min[1], trunc[1] + 1):
            if rng.random() < density:
                vec = rng.standard_normal(l) + 1j * rng.standard_normal(l)
                coeffs[(n, m)] = vec
    if not coeffs:
        coeffs[support_min] = rng.standard_normal(l) + 1j * rng.standard_normal(l)
    return BivariateSeries.from_terms(coeffs, trunc, l=l)


def euler_problem(box=(36, 36)) -> LinearMonomialPDE:
    """t^2 y' = -y + t written in two variables: C = -1, gamma = x1 x2."""
    return LinearMonomialPDE(
        p=1,
        q=1,
        s=Fraction(1, 2),
        C=[[BivariateSeries.constant(-1.0, trunc=box)]],
        gamma=[BivariateSeries.monomial(1, 1, 1.0, trunc=box)],
    )


def pochhammer_problem(box=(36, 36)) -> LinearMonomialPDE:
    """Two-variable problem with gamma = x1; solution has Pochhammer growth."""
    return LinearMonomialPDE(
        p=1,
        q=1,
        s=Fraction(1, 2),
        C=[[BivariateSeries.constant(-1.0, trunc=box)]],
        gamma=[BivariateSeries.monomial(1, 0, 1.0, trunc=box)],
    )


def standard_weight(p=1, q=1, k=1, s=Fraction(1, 2)) -> MonomialWeight:
    return MonomialWeight(p=p, q=q, k=Fraction(k), s=Fraction(s))


FULL_TURN = 2 * math.pi + 0.5
