"""Formal Borel and Laplace transforms with respect to a monomial and weight.

The Borel transform divides each coefficient by Gamma of its alpha-weighted
degree and shifts exponents down by (pk, qk); the Laplace transform is its
exact formal inverse.  The weighted convolution makes the Borel transform
multiplicative.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np
from scipy.special import roots_legendre

from .errors import (
    PlaneMismatchError,
    QuadratureAccuracyError,
    SupportDomainError,
    WeightMismatchError,
)
from .series import BivariateSeries, MonomialWeight
from .specfun import beta_value, gamma_value

BOREL = "borel"
LAPLACE = "laplace"


@dataclass(frozen=True)
class TransformedSeries:
    """A series living in the Borel xi-plane or the Laplace x-plane."""

    base: BivariateSeries
    weight: MonomialWeight
    plane: str

    def __post_init__(self):
        if self.plane not in (BOREL, LAPLACE):
            raise ValueError(f"plane must be '{BOREL}' or '{LAPLACE}', got {self.plane!r}")

    def to_json(self) -> dict:
        data = self.base.to_json()
        data["plane"] = self.plane
        data["weight"] = self.weight.to_json()
        return data

    @classmethod
    def from_json(cls, data: Mapping) -> "TransformedSeries":
        return cls(
            base=BivariateSeries.from_json(data),
            weight=MonomialWeight.from_json(data["weight"]),
            plane=data["plane"],
        )


def formal_borel(f: BivariateSeries, w: MonomialWeight) -> TransformedSeries:
    """Termwise Borel transform of a series divisible by (x1^p x2^q)^k.

    x1^n x2^m maps to xi1^(n-pk) xi2^(m-qk) / Gamma(n*s/(pk) + m*(1-s)/(qk)),
    so every stored exponent must satisfy n >= pk and m >= qk.
    """
    pk, qk = w.pk, w.qk
    out = {}
    for (n, m), vec in f.coeffs.items():
        if n < pk or m < qk:
            raise SupportDomainError(
                f"exponent ({n}, {m}) is not divisible by the monomial block "
                f"(need n >= {pk} and m >= {qk})"
            )
        out[(n - pk, m - qk)] = vec / gamma_value(w.degree(n, m))
    box = (max(f.trunc[0] - pk, 0), max(f.trunc[1] - qk, 0))
    return TransformedSeries(BivariateSeries(out, f.l, box), w, BOREL)


def formal_laplace(g: TransformedSeries) -> BivariateSeries:
    """Exact formal inverse of formal_borel."""
    if g.plane != BOREL:
        raise PlaneMismatchError(f"formal_laplace expects a Borel-plane series, got {g.plane!r}")
    w = g.weight
    pk, qk = w.pk, w.qk
    out = {}
    for (n, m), vec in g.base.coeffs.items():
        out[(n + pk, m + qk)] = vec * gamma_value(w.degree(n + pk, m + qk))
    box = (g.base.trunc[0] + pk, g.base.trunc[1] + qk)
    return BivariateSeries(out, g.base.l, box)


def apply_weighted_derivation(f: BivariateSeries, w: MonomialWeight) -> BivariateSeries:
    """Apply x1^pk x2^qk * ((s/pk) x1 d/dx1 + ((1-s)/qk) x2 d/dx2) termwise.

    A coefficient a_{n,m} contributes its alpha-weighted degree times itself
    at exponent (n+pk, m+qk); the output box expands to hold every term.
    """
    return f.map_shift(w.pk, w.qk, lambda n, m: float(w.degree(n, m)))


def formal_convolution(f: TransformedSeries, g: TransformedSeries) -> TransformedSeries:
    """Weighted monomial convolution of two Borel-plane series.

    On monomials: x^(l1,m1) * x^(l2,m2) = B(b1+1, b2+1) x^(l1+l2+pk, m1+m2+qk)
    where b_i is the alpha-weighted degree of factor i and B is the Beta
    function; extended bilinearly.
    """
    if f.weight != g.weight:
        raise WeightMismatchError(f"weights differ: {f.weight} vs {g.weight}")
    if f.plane != g.plane:
        raise PlaneMismatchError(f"planes differ: {f.plane} vs {g.plane}")
    w = f.weight
    pk, qk = w.pk, w.qk
    fb, gb = f.base, g.base
    l = fb._common_l(gb)
    box = (min(fb.trunc[0], gb.trunc[0]) + pk, min(fb.trunc[1], gb.trunc[1]) + qk)
    out: dict[tuple[int, int], np.ndarray] = {}
    for (n1, m1), v1 in sorted(fb.coeffs.items()):
        b1 = w.degree(n1, m1)
        for (n2, m2), v2 in sorted(gb.coeffs.items()):
            key = (n1 + n2 + pk, m1 + m2 + qk)
            if key[0] > box[0] or key[1] > box[1]:
                continue
            b2 = w.degree(n2, m2)
            term = beta_value(b1 + 1, b2 + 1) * (v1 * v2)
            acc = out.get(key)
            out[key] = term if acc is None else acc + term
    return TransformedSeries(BivariateSeries(out, l, box), w, f.plane)


@dataclass(frozen=True)
class ConvolutionQuad:
    """Settings for the numerical convolution integral."""

    node_ladder: tuple[int, ...] = (16, 32, 64, 128, 256, 512)
    rtol: float = 1e-11
    fail_tol: float = 1e-7


def numerical_convolution(
    F: Callable[[complex, complex], object],
    G: Callable[[complex, complex], object],
    w: MonomialWeight,
    point: tuple[complex, complex],
    quad: ConvolutionQuad | None = None,
) -> tuple[np.ndarray, float]:
    """Evaluate the defining convolution integral at a point.

    Computes x1^pk x2^qk * integral over tau in (0,1) of
    F(x1 tau^(s/pk), x2 tau^((1-s)/qk)) * G(x1 (1-tau)^..., x2 (1-tau)^...)
    by Gauss-Legendre with node doubling; returns (value, error estimate).
    """
    quad = quad or ConvolutionQuad()
    x1, x2 = point
    a1, a2 = (float(a) for a in w.alpha)

    def integrand(tau: float) -> np.ndarray:
        fv = np.atleast_1d(np.asarray(F(x1 * tau**a1, x2 * tau**a2), dtype=complex))
        gv = np.atleast_1d(np.asarray(G(x1 * (1 - tau) ** a1, x2 * (1 - tau) ** a2), dtype=complex))
        return fv * gv

    prefactor = x1**w.pk * x2**w.qk
    prev = None
    change = np.inf
    for n in quad.node_ladder:
        nodes, weights = roots_legendre(n)
        taus = 0.5 * (nodes + 1.0)
        total = None
        for tau, wt in zip(taus, weights):
            term = 0.5 * wt * integrand(float(tau))
            total = term if total is None else total + term
        if prev is not None:
            scale = max(float(np.max(np.abs(total))), 1e-300)
            change = float(np.max(np.abs(total - prev))) / scale
            if change < quad.rtol:
                prev = total
                break
        prev = total
    if change > quad.fail_tol:
        raise QuadratureAccuracyError(
            f"convolution quadrature did not converge (achieved {change:.3e})",
            achieved=change,
        )
    err = 0.0 if not np.isfinite(change) else change
    return prefactor * prev, err
