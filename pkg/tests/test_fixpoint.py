import math
import warnings
from fractions import Fraction

import numpy as np
import pytest

from monoborel import (
    BivariateSeries,
    LinearMonomialPDE,
    SingularDirectionError,
    build_convolution_problem,
    chebyshev_ray_grid,
    cross_validate,
    fixpoint_defect,
    formal_borel,
    formal_solution,
    kernel_bound_audit,
    pade_continue,
    picard_solve,
    reduce_to_ray,
    summation_weight,
)
from conftest import euler_problem, pochhammer_problem


class TestBuildProblem:
    def test_euler_kernel_is_unit_constant(self):
        cp = build_convolution_problem(euler_problem())
        assert set(cp.kernel_coeffs) == {(1, 1)}
        assert np.allclose(cp.kernel_coeffs[(1, 1)], np.eye(1))
        assert cp.kernel_betas[(1, 1)] == 1
        # g = Borel image of x1 x2 * gamma = (x1 x2)^2, coefficient 1/Gamma(2) at (1,1)
        assert cp.g.base.support == [(1, 1)]
        assert abs(cp.g.base.coeff(1, 1)[0] - 1.0) < 1e-15

    def test_zero_forcing_gives_zero_g(self):
        prob = LinearMonomialPDE(
            p=1, q=1, s=Fraction(1, 2),
            C=[[BivariateSeries.constant(-1.0, trunc=(10, 10))]],
            gamma=[BivariateSeries.zero(1, (10, 10))],
        )
        cp = build_convolution_problem(prob)
        assert cp.g.base.max_norm() == 0.0

    def test_constant_matrix_kernel_is_identity(self):
        C = [[BivariateSeries.constant(-3.0, trunc=(8, 8))]]
        prob = LinearMonomialPDE(p=1, q=1, s=Fraction(1, 2), C=C,
                                 gamma=[BivariateSeries.monomial(1, 1, 1.0, trunc=(8, 8))])
        cp = build_convolution_problem(prob)
        assert set(cp.kernel_coeffs) == {(1, 1)}
        assert np.allclose(cp.kernel_coeffs[(1, 1)], np.eye(1))


class TestPicard:
    def test_euler_log_values(self):
        cp = build_convolution_problem(euler_problem())
        grid = chebyshev_ray_grid((1.0 + 0j, 1.0 + 0j), 2.0, 129)
        sol = picard_solve(cp, grid, tol=1e-10)
        assert sol.converged
        # exact solution of (z+1)F = int_0^z F + z is log(1+z)
        for u, val in zip(sol.nodes, sol.values):
            assert abs(val[0] - math.log1p(u)) < 1e-6

    def test_zero_forcing_one_iteration(self):
        prob = LinearMonomialPDE(
            p=1, q=1, s=Fraction(1, 2),
            C=[[BivariateSeries.constant(-1.0, trunc=(10, 10))]],
            gamma=[BivariateSeries.zero(1, (10, 10))],
        )
        cp = build_convolution_problem(prob)
        grid = chebyshev_ray_grid((1.0 + 0j, 1.0 + 0j), 1.0, 33)
        sol = picard_solve(cp, grid)
        assert sol.iterations == 1
        assert np.max(np.abs(sol.values)) == 0.0

    def test_defect_below_ten_tol(self):
        tol = 1e-9
        cp = build_convolution_problem(euler_problem())
        grid = chebyshev_ray_grid((1.0 + 0j, 1.0 + 0j), 2.0, 129)
        sol = picard_solve(cp, grid, tol=tol)
        assert fixpoint_defect(cp, sol) < 10 * tol

    def test_defects_decrease_monotonically(self):
        for prob, U in ((euler_problem(), 2.0), (pochhammer_problem(), 1.0)):
            cp = build_convolution_problem(prob)
            grid = chebyshev_ray_grid((1.0 + 0j, 1.0 + 0j), U, 129)
            sol = picard_solve(cp, grid, tol=1e-11)
            tail = sol.defects[3:]
            assert all(a > b for a, b in zip(tail, tail[1:]))

    def test_grid_refinement_stability(self):
        tol = 1e-9
        cp = build_convolution_problem(euler_problem())
        coarse = picard_solve(cp, chebyshev_ray_grid((1.0 + 0j, 1.0 + 0j), 2.0, 65), tol=tol)
        fine = picard_solve(cp, chebyshev_ray_grid((1.0 + 0j, 1.0 + 0j), 2.0, 129), tol=tol)
        # coarse nodes are a subset of the fine ones (both include endpoints)
        for u, val in zip(coarse.nodes, coarse.values):
            idx = np.argmin(np.abs(fine.nodes - u))
            assert abs(fine.nodes[idx] - u) < 1e-12
            assert np.max(np.abs(fine.values[idx] - val)) < 5 * tol * 1e3  # sup-norm scale

    def test_ray_toward_eigenvalue_rejected(self):
        prob = LinearMonomialPDE(
            p=1, q=1, s=Fraction(1, 2),
            C=[[BivariateSeries.constant(1.0, trunc=(10, 10))]],
            gamma=[BivariateSeries.monomial(1, 1, 1.0, trunc=(10, 10))],
        )
        cp = build_convolution_problem(prob)
        grid = chebyshev_ray_grid((1.0 + 0j, 1.0 + 0j), 2.0, 33)
        with pytest.raises(SingularDirectionError):
            picard_solve(cp, grid)

    def test_non_contraction_warning(self):
        cp = build_convolution_problem(euler_problem())
        grid = chebyshev_ray_grid((1.0 + 0j, 1.0 + 0j), 2.0, 65)
        with pytest.warns(UserWarning):
            picard_solve(cp, grid, tol=1e-14, max_iter=3)


class TestTaylorConsistency:
    def test_small_u_matches_series(self):
        # with a small truncation the Picard solution still matches the exact
        # fixed point, so its gap to the truncated series scales like u^(N+1)
        box = (4, 4)
        prob = euler_problem(box=box)
        cp = build_convolution_problem(prob)
        grid = chebyshev_ray_grid((1.0 + 0j, 1.0 + 0j), 0.5, 129)
        sol = picard_solve(cp, grid, tol=1e-13)
        y = formal_solution(prob, box)
        w = summation_weight(prob)
        phi = formal_borel(y.shift(w.pk, w.qk), w).base
        terms = sorted(
            (float(w.degree(n, m)), vec[0] * 1.0**n * 1.0**m)
            for (n, m), vec in phi.coeffs.items()
        )
        diffs = []
        us = []
        for u, val in zip(sol.nodes[5:16], sol.values[5:16]):
            series_val = sum(c * u**e for e, c in terms)
            gap = abs(val[0] - series_val)
            if gap > 1e-12:
                diffs.append(math.log(gap))
                us.append(math.log(u))
        assert len(diffs) >= 4
        slope = np.polyfit(us, diffs, 1)[0]
        assert slope >= box[0] - 1


class TestCrossValidate:
    def test_euler(self):
        prob = euler_problem()
        cp = build_convolution_problem(prob)
        grid = chebyshev_ray_grid((1.0 + 0j, 1.0 + 0j), 2.0, 129)
        sol = picard_solve(cp, grid, tol=1e-10)
        y = formal_solution(prob, (32, 32))
        w = summation_weight(prob)
        phi = formal_borel(y.shift(w.pk, w.qk), w)
        cont = pade_continue(reduce_to_ray(phi, (1.0 + 0j, 1.0 + 0j)))
        assert cross_validate(cp, cont, sol) < 1e-6

    def test_pochhammer(self):
        prob = pochhammer_problem()
        cp = build_convolution_problem(prob)
        grid = chebyshev_ray_grid((0.3 + 0j, 0.2 + 0j), 1.0, 129)
        sol = picard_solve(cp, grid, tol=1e-10)
        y = formal_solution(prob, (32, 32))
        w = summation_weight(prob)
        phi = formal_borel(y.shift(w.pk, w.qk), w)
        cont = pade_continue(reduce_to_ray(phi, (0.3 + 0j, 0.2 + 0j)))
        assert cross_validate(cp, cont, sol) < 1e-6

    def test_tiny_interval_reduces_to_taylor(self):
        prob = euler_problem()
        cp = build_convolution_problem(prob)
        grid = chebyshev_ray_grid((1.0 + 0j, 1.0 + 0j), 1e-3, 33)
        sol = picard_solve(cp, grid, tol=1e-13)
        y = formal_solution(prob, (32, 32))
        w = summation_weight(prob)
        phi = formal_borel(y.shift(w.pk, w.qk), w)
        cont = pade_continue(reduce_to_ray(phi, (1.0 + 0j, 1.0 + 0j)))
        assert cross_validate(cp, cont, sol) < 1e-12


class TestKernelBoundAudit:
    def test_reference_value(self):
        from scipy.special import betaln

        j_val = math.exp(betaln(0.5, 51.0))
        assert abs(j_val - 0.2477) < 3e-3  # exact log-Gamma value is 0.24880
        rep = kernel_bound_audit(1, 1, Fraction(1, 2), 10, 10, 100)
        assert rep["a"] == 0.5

    @pytest.mark.parametrize("p,q", [(1, 1), (1, 2), (2, 1), (2, 2)])
    @pytest.mark.parametrize("s", [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)])
    def test_bounded_over_all_weights(self, p, q, s):
        rep = kernel_bound_audit(p, q, s, 50, 50, 200)
        assert rep["passed"]
        assert rep["sup_overall"] < 50.0

    def test_plateau_in_n(self):
        rep = kernel_bound_audit(1, 1, Fraction(1, 2), 50, 50, 200)
        assert rep["sup_window_high"] <= 1.05 * rep["sup_window_low"]
