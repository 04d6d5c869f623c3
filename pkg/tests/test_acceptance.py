"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines and timings.
"""

import math
import time
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from scipy.special import exp1, gamma as sp_gamma

from monoborel import (
    BivariateSeries,
    MonomialWeight,
    PfaffianSystem,
    SectorSpec,
    SingularDirectionError,
    TransformedSeries,
    borel_sum,
    build_convolution_problem,
    chebyshev_ray_grid,
    convergence_scan,
    cross_validate,
    detect_singular_directions,
    eigenvalue_pairing_check,
    fixpoint_defect,
    formal_borel,
    formal_convolution,
    formal_laplace,
    formal_solution,
    gevrey_order_estimate,
    integrability_check,
    kernel_bound_audit,
    pade_continue,
    picard_solve,
    reduce_to_ray,
    series_max_diff,
    apply_weighted_derivation,
    sum_and_verify,
    summation_weight,
)
from conftest import FULL_TURN, euler_problem, pochhammer_problem, random_series


def report(number: int, description: str, elapsed: float, limit: float, ok: bool):
    status = "PASS" if ok else "FAIL"
    print(f"criterion {number:02d} [{status}] {description} ({elapsed:.2f}s / limit {limit:.0f}s)")
    assert ok, f"criterion {number} failed: {description}"
    assert elapsed < limit, f"criterion {number} exceeded runtime limit ({elapsed:.2f}s >= {limit}s)"


def admissible_weights(rng, count):
    out = []
    while len(out) < count:
        p = int(rng.integers(1, 4))
        q = int(rng.integers(1, 4))
        k = rng.choice([Fraction(1), Fraction(2), Fraction(3), Fraction(1, 2)])
        if (p * k).denominator != 1 or (q * k).denominator != 1:
            continue
        s = Fraction(int(rng.integers(1, 8)), 8)
        out.append(MonomialWeight(p, q, k, s))
    return out


def test_criterion_01_borel_image_formula(rng):
    start = time.time()
    ok = True
    for w in admissible_weights(rng, 50):
        mu1 = int(rng.integers(w.pk, 41))
        mu2 = int(rng.integers(w.qk, 41))
        f = BivariateSeries.monomial(mu1, mu2, 1.0, trunc=(mu1, mu2))
        got = formal_borel(f, w).base.coeff(mu1 - w.pk, mu2 - w.qk)[0]
        expected = 1.0 / sp_gamma(float(w.degree(mu1, mu2)))
        ok = ok and abs(got - expected) <= 1e-12 * abs(expected)
    report(1, "monomial Borel image matches the Gamma-ratio formula", time.time() - start, 1.0, ok)


def test_criterion_02_inverse_pair(rng):
    start = time.time()
    ok = True
    weights = [
        MonomialWeight(p, q, Fraction(k), s)
        for p, q, k in product((1, 2), repeat=3)
        for s in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))
    ]
    for i in range(100):
        w = weights[i % len(weights)]
        f = random_series(rng, (20, 20), density=0.25, support_min=(w.pk, w.qk))
        back = formal_laplace(formal_borel(f, w))
        ok = ok and series_max_diff(f, back) < 1e-12 * max(f.max_norm(), 1.0)
        g = TransformedSeries(random_series(rng, (20, 20), density=0.25), w, "borel")
        back_g = formal_borel(formal_laplace(g), w).base
        ok = ok and series_max_diff(g.base, back_g) < 1e-12 * max(g.base.max_norm(), 1.0)
    report(2, "formal Borel and Laplace are mutually inverse", time.time() - start, 5.0, ok)


def test_criterion_03_convolution_algebra(rng):
    start = time.time()
    ok = True
    for w in (
        MonomialWeight(1, 1, 1, Fraction(1, 2)),
        MonomialWeight(2, 1, 1, Fraction(1, 4)),
        MonomialWeight(1, 2, 2, Fraction(3, 4)),
    ):
        # Gamma/Beta identity on monomials
        for _ in range(5):
            l1, m1 = int(rng.integers(0, 9)), int(rng.integers(0, 9))
            l2, m2 = int(rng.integers(0, 9)), int(rng.integers(0, 9))
            box = (l1 + l2 + w.pk, m1 + m2 + w.qk)
            a = TransformedSeries(BivariateSeries.monomial(l1, m1, 1.0, trunc=box), w, "borel")
            b = TransformedSeries(BivariateSeries.monomial(l2, m2, 1.0, trunc=box), w, "borel")
            got = formal_convolution(a, b).base.coeff(l1 + l2 + w.pk, m1 + m2 + w.qk)[0]
            b1, b2 = float(w.degree(l1, m1)), float(w.degree(l2, m2))
            expected = sp_gamma(b1 + 1) * sp_gamma(b2 + 1) / sp_gamma(b1 + b2 + 2)
            ok = ok and abs(got - expected) <= 1e-12 * abs(expected)
        f = TransformedSeries(random_series(rng, (9, 9), density=0.4), w, "borel")
        g = TransformedSeries(random_series(rng, (9, 9), density=0.4), w, "borel")
        h = TransformedSeries(random_series(rng, (9, 9), density=0.4), w, "borel")
        fg, gf = formal_convolution(f, g), formal_convolution(g, f)
        scale = max(fg.base.max_norm(), 1.0)
        ok = ok and series_max_diff(fg.base, gf.base) < 1e-12 * scale
        fg_h = formal_convolution(fg, h)
        f_gh = formal_convolution(f, formal_convolution(g, h))
        box = (
            min(fg_h.base.trunc[0], f_gh.base.trunc[0]),
            min(fg_h.base.trunc[1], f_gh.base.trunc[1]),
        )
        ok = ok and series_max_diff(
            fg_h.base.restrict(box), f_gh.base.restrict(box)
        ) < 1e-12 * max(fg_h.base.max_norm(), 1.0)
        lhs = formal_laplace(fg)
        rhs = formal_laplace(f) * formal_laplace(g)
        box = (min(lhs.trunc[0], rhs.trunc[0]), min(lhs.trunc[1], rhs.trunc[1]))
        ok = ok and series_max_diff(lhs.restrict(box), rhs.restrict(box)) < 1e-12 * max(
            rhs.max_norm(), 1.0
        )
    report(3, "convolution algebra: Beta identity, symmetry, homomorphism", time.time() - start, 5.0, ok)


def test_criterion_04_derivation_intertwining(rng):
    start = time.time()
    ok = True
    for w in (
        MonomialWeight(1, 1, 1, Fraction(1, 2)),
        MonomialWeight(2, 1, 1, Fraction(1, 3)),
        MonomialWeight(2, 2, 2, Fraction(2, 3)),
    ):
        f = random_series(rng, (16, 16), density=0.3, support_min=(w.pk, w.qk))
        lhs = formal_borel(apply_weighted_derivation(f, w), w).base
        rhs = formal_borel(f, w).base.shift(w.pk, w.qk)
        ok = ok and series_max_diff(lhs, rhs) < 1e-12 * max(rhs.max_norm(), 1.0)
    report(4, "Borel transform intertwines the weighted derivation", time.time() - start, 1.0, ok)


def test_criterion_05_euler_oracle():
    start = time.time()
    prob = euler_problem()
    y = formal_solution(prob, (32, 32))
    w = summation_weight(prob)
    sector = SectorSpec(0.0, FULL_TURN)
    ok = True
    for t, tol in ((0.05, 1e-8), (0.1, 1e-6), (0.2, 1e-6)):
        evals = borel_sum(y, w, 0.0, [(complex(2 * t), 0.5 + 0j)], sector)
        exact = math.exp(1 / t) * exp1(1 / t)
        ok = ok and abs(evals[0].value[0] - exact) < tol
    phi = formal_borel(y.shift(w.pk, w.qk), w)
    cont = pade_continue(reduce_to_ray(phi, (0.2 + 0j, 0.5 + 0j)))
    detected = detect_singular_directions(cont, w)
    ok = ok and len(detected) >= 1
    gap = min(abs(math.remainder(d - math.pi, 2 * math.pi)) for d in detected)
    ok = ok and gap < 1e-2
    report(5, "Euler sum matches exp(1/t) E1(1/t); singularity at pi", time.time() - start, 10.0, ok)


def test_criterion_06_weight_independence():
    start = time.time()
    prob = pochhammer_problem()
    y = formal_solution(prob, (32, 32))
    sector = SectorSpec(0.0, FULL_TURN)
    points = [(complex(x1), complex(t / x1)) for t, x1 in zip(
        np.linspace(0.02, 0.1, 10), np.linspace(0.2, 0.6, 10)
    )]
    ok = True
    values = {}
    for s in (Fraction(3, 10), Fraction(1, 2), Fraction(7, 10)):
        w = MonomialWeight(1, 1, 1, s)
        values[s] = [ev.value[0] for ev in borel_sum(y, w, 0.0, points, sector)]
    for s_a, s_b in ((Fraction(3, 10), Fraction(1, 2)), (Fraction(1, 2), Fraction(7, 10)), (Fraction(3, 10), Fraction(7, 10))):
        for va, vb in zip(values[s_a], values[s_b]):
            ok = ok and abs(va - vb) < 1e-6
    report(6, "sums agree across summation weights 3/10, 1/2, 7/10", time.time() - start, 30.0, ok)


def test_criterion_07_pde_residual():
    start = time.time()
    ok = True
    euler_points = [(0.2 + 0j, 0.5 + 0j), (0.4 + 0j, 0.25 + 0j), (0.1 + 0j, 0.5 + 0j)]
    for ev, residual in sum_and_verify(euler_problem(), 0.0, euler_points, box=(32, 32)):
        ok = ok and residual < 1e-6
    poch_points = [(0.3 + 0j, 0.2 + 0j), (0.25 + 0j, 0.2 + 0j), (0.5 + 0j, 0.1 + 0j)]
    for ev, residual in sum_and_verify(pochhammer_problem(), 0.0, poch_points, box=(32, 32)):
        ok = ok and residual < 1e-6
    report(7, "summed solutions satisfy the PDE to 1e-6", time.time() - start, 30.0, ok)


def test_criterion_08_gevrey_order():
    start = time.time()
    ok = True
    for prob in (euler_problem(), pochhammer_problem()):
        y = formal_solution(prob, (30, 30))
        est = gevrey_order_estimate(y, prob.p, prob.q)
        ok = ok and 0.85 <= est.s_hat <= 1.15
    report(8, "formal solutions are Gevrey of order about 1", time.time() - start, 5.0, ok)


def test_criterion_09_fixed_point_oracle():
    start = time.time()
    ok = True
    for prob, point, u_max in (
        (euler_problem(), (1.0 + 0j, 1.0 + 0j), 2.0),
        (pochhammer_problem(), (0.3 + 0j, 0.2 + 0j), 1.0),
    ):
        cp = build_convolution_problem(prob)
        grid = chebyshev_ray_grid(point, u_max, 129)
        sol = picard_solve(cp, grid, tol=1e-9)
        y = formal_solution(prob, (32, 32))
        w = summation_weight(prob)
        phi = formal_borel(y.shift(w.pk, w.qk), w)
        cont = pade_continue(reduce_to_ray(phi, point))
        ok = ok and cross_validate(cp, cont, sol) < 1e-6
        ok = ok and fixpoint_defect(cp, sol) < 1e-5
    report(9, "Picard solution matches Pade continuation on ray nodes", time.time() - start, 30.0, ok)


def test_criterion_10_kernel_bound_audit():
    start = time.time()
    ok = True
    for p, q in product((1, 2), repeat=2):
        for s in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
            rep = kernel_bound_audit(p, q, s, 50, 50, 200)
            ok = ok and rep["passed"]
    report(10, "scaled Beta kernel stays bounded in N", time.time() - start, 10.0, ok)


def test_criterion_11_pfaffian_checks():
    start = time.time()
    box = (14, 14)

    def const(c):
        return BivariateSeries.constant(c, trunc=box)

    def zero():
        return BivariateSeries.zero(1, box)

    const_sys = PfaffianSystem(
        p=2, q=1, A=[[const(2.0)]], B=[[const(1.0)]], gamma1=[zero()], gamma2=[zero()]
    )
    rep = integrability_check(const_sys, box)
    ok = rep["matrix_defect"] == 0.0 and rep["forcing_defect"] == 0.0
    ok = ok and eigenvalue_pairing_check(const_sys)["pass"]

    perturbed = PfaffianSystem(
        p=2, q=1,
        A=[[const(2.0)]],
        B=[[BivariateSeries.from_terms({(0, 0): 1.0, (1, 0): 1.0}, box)]],
        gamma1=[zero()], gamma2=[zero()],
    )
    rep2 = integrability_check(perturbed, box)
    ok = ok and abs(rep2["matrix_defect"] - 1.0) < 1e-14

    rotating = PfaffianSystem(
        p=1, q=1, A=[[const(1.0)]], B=[[const(1j)]], gamma1=[zero()], gamma2=[zero()]
    )
    ok = ok and convergence_scan(rotating)["verdict"] == "convergent"
    stuck = PfaffianSystem(
        p=1, q=1, A=[[const(-1.0)]], B=[[const(-1.0)]], gamma1=[zero()], gamma2=[zero()]
    )
    ok = ok and convergence_scan(stuck)["verdict"] == "inconclusive"
    report(11, "Pfaffian integrability, pairing and convergence scan", time.time() - start, 5.0, ok)


def test_criterion_12_scaling_invariance():
    start = time.time()
    prob = euler_problem()
    y = formal_solution(prob, (32, 32))
    w1 = MonomialWeight(1, 1, Fraction(1), Fraction(1, 2))
    w2 = MonomialWeight(2, 2, Fraction(1, 2), Fraction(1, 2))
    sector = SectorSpec(0.0, FULL_TURN)
    ok = True
    for pt in [(0.25 + 0j, 0.4 + 0j), (0.2 + 0j, 0.5 + 0j), (0.3 + 0.03j, 0.3 + 0j)]:
        v1 = borel_sum(y, w1, 0.0, [pt], sector)[0].value[0]
        v2 = borel_sum(y, w2, 0.0, [pt], sector)[0].value[0]
        ok = ok and abs(v1 - v2) < 1e-8
    report(12, "sums are invariant under (p,q,k) -> (2p,2q,k/2)", time.time() - start, 10.0, ok)
