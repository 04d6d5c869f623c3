"""Numerical Borel summation along monomial rays.

The pipeline restricts a Borel-plane series to the one-variable ray through an
evaluation point, continues it by Pade approximation in the lattice variable,
locates singular directions from the pole pattern, checks exponential growth,
and evaluates the weighted Laplace integral by generalized Gauss-Laguerre
quadrature.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import roots_genlaguerre

from .errors import (
    LatticeSizeError,
    NotSummableError,
    PadeDegeneracyError,
    PlaneMismatchError,
    QuadratureAccuracyError,
    SingularDirectionError,
    SupportDomainError,
)
from .series import BivariateSeries, MonomialWeight
from .transforms import BOREL, TransformedSeries, formal_borel

TWO_PI = 2.0 * math.pi


def wrap_angle(a: float) -> float:
    """Reduce an angle to (-pi, pi]."""
    r = math.remainder(a, TWO_PI)
    if r <= -math.pi:
        r += TWO_PI
    return r


def circular_distance(a: float, b: float) -> float:
    return abs(wrap_angle(a - b))


@dataclass(frozen=True)
class PipelineConfig:
    """Tunable tolerances of the summation pipeline."""

    lattice_cap: int = 64
    pade_degrees: tuple[int, int] | None = None
    pade_rcond: float = 1e-12
    residue_tol: float = 1e-10
    pole_strength_tol: float = 1e-14
    pole_infinity_tol: float = 1e8
    cluster_tol: float = 1e-2
    singular_margin: float = 0.05
    theta_margin: float = 0.02
    growth_umax: float = 40.0
    growth_fail_slope: float = 1.0
    quad_node_ladder: tuple[int, ...] = (32, 64, 128, 256)
    quad_rtol: float = 1e-10
    quad_fail_tol: float = 1e-6


DEFAULT_CONFIG = PipelineConfig()


# -- ray restriction ---------------------------------------------------------


@dataclass(frozen=True)
class RaySeries:
    """Restriction of a Borel-plane series to the monomial ray of a point.

    Represents psi(u) = u^offset * sum_j coeffs[j] * u^(j/lattice) where u
    parametrizes (x1 u^(s/pk), x2 u^((1-s)/qk)).
    """

    base_point: tuple[complex, complex]
    weight: MonomialWeight
    lattice: int
    offset: Fraction
    coeffs: tuple[np.ndarray, ...]
    l: int

    @property
    def monomial_base(self) -> complex:
        x1, x2 = self.base_point
        return x1**self.weight.p * x2**self.weight.q

    def exponent(self, j: int) -> Fraction:
        return self.offset + Fraction(j, self.lattice)


def reduce_to_ray(
    phi: TransformedSeries,
    point: tuple[complex, complex],
    lattice_cap: int = DEFAULT_CONFIG.lattice_cap,
) -> RaySeries:
    """Collect Borel-plane coefficients by their ray exponent.

    A monomial xi1^n xi2^m restricts to x1^n x2^m u^e with exact rational
    e = n*s/(pk) + m*(1-s)/(qk); terms sharing e are summed.  The offset is
    the fractional part of the smallest exponent and the lattice pitch is the
    least common denominator of the exponent gaps.
    """
    if phi.plane != BOREL:
        raise PlaneMismatchError("reduce_to_ray expects a Borel-plane series")
    w = phi.weight
    x1, x2 = point
    collected: dict[Fraction, np.ndarray] = {}
    for (n, m), vec in sorted(phi.base.coeffs.items()):
        e = w.degree(n, m)
        term = vec * (x1**n * x2**m)
        acc = collected.get(e)
        collected[e] = term if acc is None else acc + term
    if not collected:
        return RaySeries(point, w, 1, Fraction(0), (), phi.base.l)
    exps = sorted(collected)
    base = exps[0]
    sigma = base - math.floor(base)
    if len(exps) == 1:
        lattice = max(base.denominator, 1)
    else:
        lattice = 1
        for e in exps[1:]:
            lattice = math.lcm(lattice, (e - base).denominator)
    if lattice > lattice_cap:
        raise LatticeSizeError(
            f"ray exponent lattice needs denominator {lattice} > cap {lattice_cap}"
        )
    js = [(e - sigma) * lattice for e in exps]
    assert all(j.denominator == 1 for j in js)
    top = int(js[-1])
    coeffs = [np.zeros(phi.base.l, dtype=complex) for _ in range(top + 1)]
    for e, j in zip(exps, js):
        coeffs[int(j)] = collected[e]
    return RaySeries(point, w, lattice, sigma, tuple(coeffs), phi.base.l)


# -- Pade continuation -------------------------------------------------------


@dataclass(frozen=True)
class PadePole:
    """A denominator root, in both the lattice variable v and the u-plane.

    u_arg is lattice*arg(v), kept unreduced so directions beyond (-pi, pi]
    (reachable when k < 1) stay distinguishable.
    """

    v: complex
    u_abs: float
    u_arg: float
    residue_mag: float
    component: int

    @property
    def u(self) -> complex:
        return self.u_abs * cmath.exp(1j * wrap_angle(self.u_arg))


@dataclass(frozen=True)
class PadeContinuation:
    """Componentwise [M/N] Pade approximants of a ray series."""

    degrees: tuple[int, int]
    numerators: tuple[np.ndarray, ...]
    denominators: tuple[np.ndarray, ...]
    poles: tuple[PadePole, ...]
    ray: RaySeries

    @property
    def numerator(self) -> np.ndarray:
        return self.numerators[0]

    @property
    def denominator(self) -> np.ndarray:
        return self.denominators[0]


def _polyval_ascending(coeffs: np.ndarray, v: complex) -> complex:
    acc = 0.0 + 0.0j
    for c in coeffs[::-1]:
        acc = acc * v + c
    return acc


def _coefficient_scale(c: np.ndarray) -> float:
    """Radius-like rescaling factor balancing geometric coefficient decay.

    Solving the Pade system with raw coefficients that decay like rho^j is
    hopelessly ill-conditioned; substituting v = R v' with R ~ 1/rho balances
    the Toeplitz matrix and suppresses spurious Froissart pole/zero pairs.
    """
    idx = np.nonzero(np.abs(c) > 0)[0]
    if len(idx) < 2:
        return 1.0
    slope = np.polyfit(idx, np.log(np.abs(c[idx])), 1)[0]
    return float(np.clip(np.exp(-slope), 1e-4, 1e4))


def _component_pade(
    c: np.ndarray, deg_m: int, deg_n: int, rcond: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """[M/N] Pade of one coefficient array; returns (num, den, roots, residues).

    num and den are in the original lattice variable v; the linear algebra
    runs in the rescaled variable.
    """
    if np.max(np.abs(c)) == 0.0:
        empty = np.zeros(0, dtype=complex)
        return np.zeros(1, dtype=complex), np.ones(1, dtype=complex), empty, empty
    scale = _coefficient_scale(c)
    cs = c * scale ** np.arange(len(c))
    den_s = np.ones(1, dtype=complex)
    if deg_n > 0:
        mat = np.zeros((deg_n, deg_n), dtype=complex)
        rhs = np.zeros(deg_n, dtype=complex)
        for i in range(deg_n):
            rhs[i] = -cs[deg_m + 1 + i]
            for j in range(deg_n):
                idx = deg_m + i - j
                if idx >= 0:
                    mat[i, j] = cs[idx]
        sol, _, _, _ = np.linalg.lstsq(mat, rhs, rcond=rcond)
        den_s = np.concatenate(([1.0 + 0.0j], sol))
    num_s = np.zeros(deg_m + 1, dtype=complex)
    for k in range(deg_m + 1):
        acc = 0.0 + 0.0j
        for j in range(0, min(k, len(den_s) - 1) + 1):
            acc += den_s[j] * cs[k - j]
        num_s[k] = acc
    # roots and residues computed in the balanced variable, mapped back
    trimmed = den_s
    mag = np.max(np.abs(trimmed))
    while len(trimmed) > 1 and abs(trimmed[-1]) <= 1e-14 * mag:
        trimmed = trimmed[:-1]
    if len(trimmed) > 1:
        roots_s = np.roots(trimmed[::-1])
        dden_s = np.array([j * trimmed[j] for j in range(1, len(trimmed))], dtype=complex)
        residues = np.empty(len(roots_s), dtype=complex)
        for i, r in enumerate(roots_s):
            dq = _polyval_ascending(dden_s, r)
            pv = _polyval_ascending(num_s, r)
            residues[i] = math.inf if dq == 0 else pv * scale / dq
        roots = roots_s * scale
    else:
        roots = np.zeros(0, dtype=complex)
        residues = np.zeros(0, dtype=complex)
    powers = scale ** np.arange(max(len(num_s), len(den_s)))
    num = num_s / powers[: len(num_s)]
    den = den_s / powers[: len(den_s)]
    return num, den, roots, residues


def pade_continue(
    psi: RaySeries,
    degrees: tuple[int, int] | None = None,
    config: PipelineConfig = DEFAULT_CONFIG,
) -> PadeContinuation:
    """Build [M/N] Pade approximants of the power-series part of a ray series.

    The default degrees are balanced, M = N = (count-1)//2 for count available
    lattice coefficients.  The linear system is solved by least squares with
    small-singular-value truncation, which suppresses spurious Froissart
    pole/zero pairs; remaining poles with residue magnitude below the
    configured threshold are discarded.
    """
    count = len(psi.coeffs)
    if count == 0:
        return PadeContinuation(
            (0, 0),
            tuple(np.zeros(1, dtype=complex) for _ in range(psi.l)),
            tuple(np.ones(1, dtype=complex) for _ in range(psi.l)),
            (),
            psi,
        )
    if degrees is None:
        if config.pade_degrees is not None:
            degrees = config.pade_degrees
        else:
            half = (count - 1) // 2
            degrees = (count - 1 - half, half)
    deg_m, deg_n = degrees
    if deg_m < 0 or deg_n < 0:
        raise PadeDegeneracyError(f"degrees must be nonnegative, got {degrees}")
    if deg_m + deg_n + 1 > count:
        raise PadeDegeneracyError(
            f"[{deg_m}/{deg_n}] needs {deg_m + deg_n + 1} coefficients but only "
            f"{count} are available; try lower degrees"
        )
    table = np.array(psi.coeffs)  # (count, l)
    numerators = []
    denominators = []
    poles: list[PadePole] = []
    for comp in range(psi.l):
        num, den, roots, residues = _component_pade(table[:, comp], deg_m, deg_n, config.pade_rcond)
        numerators.append(num)
        denominators.append(den)
        for v, res in zip(roots, residues):
            u_abs = abs(v) ** psi.lattice
            if u_abs > config.pole_infinity_tol:
                continue
            if abs(res) < config.residue_tol:
                continue
            # a pole only matters against the Laplace weight e^(-u); the far
            # pole ring that Pade builds for entire functions is dropped here
            if abs(res) * math.exp(-min(u_abs, 700.0)) < config.pole_strength_tol:
                continue
            poles.append(
                PadePole(
                    v=complex(v),
                    u_abs=u_abs,
                    u_arg=psi.lattice * cmath.phase(v),
                    residue_mag=abs(res),
                    component=comp,
                )
            )
    return PadeContinuation(degrees, tuple(numerators), tuple(denominators), tuple(poles), psi)


def evaluate_regular_part(cont: PadeContinuation, u: complex) -> np.ndarray:
    """Evaluate the rational part P(v)/Q(v) at v = u^(1/lattice), principal branch."""
    lat = cont.ray.lattice
    v = 0.0 + 0.0j if u == 0 else complex(u) ** (1.0 / lat)
    out = np.empty(cont.ray.l, dtype=complex)
    for comp in range(cont.ray.l):
        out[comp] = _polyval_ascending(cont.numerators[comp], v) / _polyval_ascending(
            cont.denominators[comp], v
        )
    return out


def evaluate_continuation(cont: PadeContinuation, u: complex) -> np.ndarray:
    """Evaluate psi-tilde(u) = u^offset * P(v)/Q(v)."""
    sigma = float(cont.ray.offset)
    if u == 0:
        if sigma > 0:
            return np.zeros(cont.ray.l, dtype=complex)
        return evaluate_regular_part(cont, 0)
    return complex(u) ** sigma * evaluate_regular_part(cont, u)


# -- singular directions -----------------------------------------------------


def _cluster_circular(values: list[float], tol: float) -> list[float]:
    """Cluster angles in (-pi, pi] whose circular gap is below tol."""
    if not values:
        return []
    vals = sorted(wrap_angle(v) for v in values)
    clusters: list[list[float]] = [[vals[0]]]
    for v in vals[1:]:
        if v - clusters[-1][-1] < tol:
            clusters[-1].append(v)
        else:
            clusters.append([v])
    if len(clusters) > 1 and (vals[0] + TWO_PI) - clusters[-1][-1] < tol:
        merged = clusters.pop() + [v + TWO_PI for v in clusters[0]]
        clusters[0] = merged
    reps = sorted(wrap_angle(float(np.mean(c))) for c in clusters)
    return reps


def detect_singular_directions(
    cont: PadeContinuation,
    w: MonomialWeight,
    config: PipelineConfig = DEFAULT_CONFIG,
) -> list[float]:
    """Map u-plane pole arguments to monomial-plane directions.

    A pole at u-argument phi obstructs the monomial direction
    arg(x1^p x2^q) + phi/k.  Directions are clustered, reduced to (-pi, pi],
    deduplicated and sorted.  (For k < 1 the reachable direction window is
    wider than a full turn; the reduced labels returned here are projections,
    borel_sum performs its obstruction checks on the unreduced angles.)
    """
    if not cont.poles:
        return []
    base_arg = cmath.phase(cont.ray.monomial_base)
    k = float(w.k)
    raw = [base_arg + pole.u_arg / k for pole in cont.poles]
    return _cluster_circular(raw, config.cluster_tol)


def _theta_obstructions(cont: PadeContinuation) -> list[float]:
    return [pole.u_arg for pole in cont.poles]


# -- growth estimation -------------------------------------------------------


@dataclass(frozen=True)
class GrowthEstimate:
    """Fitted |psi(u)| <= C exp(M |u|) along a ray, with the exponential orders
    of the two Borel variables implied by the weight."""

    C: float
    M: float
    orders: tuple[float, float]


def estimate_growth(
    cont: PadeContinuation,
    ray_direction: float,
    w: MonomialWeight,
    u_max: float,
    config: PipelineConfig = DEFAULT_CONFIG,
    samples: int = 60,
) -> GrowthEstimate:
    """Least-squares fit of log|psi| against |u| on [1, u_max].

    Raises NotSummableError when the fitted rate (on the full range or the
    upper half) exceeds one, since the Laplace weight e^(-u) can no longer
    damp the integrand.
    """
    k = float(w.k)
    base_arg = cmath.phase(cont.ray.monomial_base)
    theta = k * wrap_angle(ray_direction - base_arg)
    taus = np.linspace(1.0, u_max, samples)
    norms = np.empty(samples)
    phase = cmath.exp(1j * theta)
    for i, tau in enumerate(taus):
        val = evaluate_continuation(cont, phase * tau)
        norm = float(np.max(np.abs(val)))
        norms[i] = min(max(norm, 1e-300), 1e300) if math.isfinite(norm) else 1e300
    logs = np.log(norms)
    slope, intercept = np.polyfit(taus, logs, 1)
    half = samples // 2
    slope_hi, _ = np.polyfit(taus[half:], logs[half:], 1)
    if max(slope, slope_hi) > config.growth_fail_slope:
        raise NotSummableError(
            f"growth rate {max(slope, slope_hi):.3f} along the ray exceeds first "
            "order in u; Laplace integral would diverge"
        )
    margin = config.singular_margin * k
    offenders = [p for p in _theta_obstructions(cont) if abs(theta - p) < margin]
    if offenders:
        raise SingularDirectionError(
            f"ray direction {ray_direction:.4f} is within {config.singular_margin} rad "
            "of a singular direction",
            offenders=offenders,
        )
    return GrowthEstimate(
        C=float(np.exp(intercept)),
        M=max(float(slope), 0.0),
        orders=(float(Fraction(w.pk) / w.s), float(Fraction(w.qk) / (1 - w.s))),
    )


# -- Laplace quadrature ------------------------------------------------------


@lru_cache(maxsize=64)
def _genlaguerre_rule(n: int, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = roots_genlaguerre(n, alpha)
    return nodes, weights


def _adaptive_laplace(
    cont: PadeContinuation,
    theta: float,
    config: PipelineConfig,
) -> tuple[np.ndarray, float]:
    """Gauss-Kronrod fallback for rays passing near a continuation pole.

    Gauss-Laguerre degrades when a pole sits close to the integration ray;
    the adaptive rule resolves the sharp feature, with pole positions given
    as breakpoints.  Returns the integral (without the monomial prefactor)
    and an achieved relative error.
    """
    from scipy.integrate import quad

    sigma = float(cont.ray.offset)
    rot = cmath.exp(1j * theta)
    cos_t = math.cos(theta)
    cutoff = 60.0 / max(cos_t, 1e-3)
    hints = sorted(
        {
            round(pole.u_abs, 12)
            for pole in cont.poles
            if abs(pole.u_arg - theta) < 0.5 and 0.0 < pole.u_abs < cutoff
        }
    )
    total = np.zeros(cont.ray.l, dtype=complex)
    abserr = 0.0
    for comp in range(cont.ray.l):
        num = cont.numerators[comp]
        den = cont.denominators[comp]
        lat = cont.ray.lattice

        def integrand(w: float) -> complex:
            u = rot * w
            v = u ** (1.0 / lat) if w > 0 else 0.0 + 0.0j
            rho = _polyval_ascending(num, v) / _polyval_ascending(den, v)
            power = w**sigma if w > 0 else (1.0 if sigma == 0 else 0.0)
            return power * rho * cmath.exp(-u)

        re, re_err = quad(lambda w: integrand(w).real, 0.0, cutoff, points=hints or None, limit=400)
        im, im_err = quad(lambda w: integrand(w).imag, 0.0, cutoff, points=hints or None, limit=400)
        total[comp] = complex(re, im)
        abserr += re_err + im_err
    total = rot ** (1.0 + sigma) * total
    scale = max(float(np.max(np.abs(total))), 1e-300)
    return total, abserr / scale


def laplace_quadrature(
    cont: PadeContinuation,
    theta: float,
    w: MonomialWeight,
    point: tuple[complex, complex],
    config: PipelineConfig = DEFAULT_CONFIG,
) -> tuple[np.ndarray, float]:
    """Weighted Laplace integral of the continued ray function.

    Evaluates x1^pk x2^qk * integral over the rotated ray u = e^(i theta) R+
    of psi-tilde(u) e^(-u) du.  Substituting u = e^(i theta) tau / cos(theta)
    turns the weight into tau^sigma e^(-tau) times a bounded oscillation, so
    generalized Gauss-Laguerre with the fractional offset sigma applies; the
    node count doubles until the relative change drops below the configured
    tolerance.
    """
    if abs(theta) >= math.pi / 2:
        raise ValueError(f"|theta| must be < pi/2, got {theta}")
    for pole_arg in _theta_obstructions(cont):
        if abs(theta - pole_arg) < config.singular_margin:
            raise SingularDirectionError(
                f"integration ray theta={theta:.4f} passes within "
                f"{config.singular_margin} rad of a continuation pole",
                offenders=[pole_arg],
            )
    x1, x2 = point
    prefactor = x1**w.pk * x2**w.qk
    sigma = float(cont.ray.offset)
    if not cont.ray.coeffs:
        return np.zeros(cont.ray.l, dtype=complex), 0.0
    cos_t = math.cos(theta)
    rot = cmath.exp(1j * theta) / cos_t
    front = rot ** (1.0 + sigma)
    tan_t = math.tan(theta)
    prev = None
    change = math.inf
    for n in config.quad_node_ladder:
        taus, weights = _genlaguerre_rule(n, sigma)
        total = np.zeros(cont.ray.l, dtype=complex)
        for tau, wt in zip(taus, weights):
            rho = evaluate_regular_part(cont, rot * tau)
            total = total + wt * rho * cmath.exp(-1j * tau * tan_t)
        total = front * total
        if prev is not None:
            scale = max(float(np.max(np.abs(total))), 1e-300)
            change = float(np.max(np.abs(total - prev))) / scale
            if change < config.quad_rtol:
                prev = total
                break
        prev = total
    if change > config.quad_rtol:
        # a pole close to the ray defeats Gauss-Laguerre; retry adaptively
        prev, change = _adaptive_laplace(cont, theta, config)
    if change > config.quad_fail_tol:
        raise QuadratureAccuracyError(
            f"Laplace quadrature did not converge (achieved {change:.3e}, "
            f"wanted {config.quad_rtol:.1e})",
            achieved=change,
        )
    err = 0.0 if not math.isfinite(change) else change
    return prefactor * prev, err


# -- full pipeline -----------------------------------------------------------


@dataclass(frozen=True)
class SectorSpec:
    """Monomial sector: moduli below the radius, monomial argument near d."""

    d: float
    opening: float
    radius: float = math.inf

    def __post_init__(self):
        if self.opening <= 0:
            raise ValueError("opening must be positive")

    def contains(self, point: tuple[complex, complex], p: int, q: int) -> bool:
        x1, x2 = point
        if abs(x1) ** p >= self.radius or abs(x2) ** q >= self.radius:
            return False
        if x1 == 0 or x2 == 0:
            return False
        mono_arg = cmath.phase(x1**p * x2**q)
        return circular_distance(mono_arg, self.d) < self.opening / 2


@dataclass(frozen=True)
class SumEvaluation:
    """Value of a Borel-Laplace sum at one point."""

    point: tuple[complex, complex]
    direction: float
    weight: MonomialWeight
    value: np.ndarray
    err_estimate: float
    nearest_singularity_direction: float
    theta: float = 0.0
    growth: GrowthEstimate | None = None


def _choose_theta(
    theta_ideal: float,
    pole_args: list[float],
    config: PipelineConfig,
) -> float:
    theta_max = math.pi / 2 - config.theta_margin
    offsets = [0.0]
    step = 0.01
    while step <= 0.45:
        offsets.extend((step, -step))
        step += 0.01
    for off in offsets:
        cand = theta_ideal + off
        if abs(cand) > theta_max:
            cand = math.copysign(theta_max, cand)
        if all(abs(cand - p) >= config.singular_margin for p in pole_args):
            return cand
    raise SingularDirectionError(
        "no admissible integration ray avoids the continuation poles",
        offenders=pole_args,
    )


def borel_sum(
    f: BivariateSeries,
    w: MonomialWeight,
    d: float,
    points: list[tuple[complex, complex]],
    sector: SectorSpec,
    config: PipelineConfig = DEFAULT_CONFIG,
) -> list[SumEvaluation]:
    """Sum a divergent series at each point by the full Borel-Laplace pipeline.

    The series is multiplied by x1^pk x2^qk, Borel transformed, restricted to
    the monomial ray of each point, Pade continued, checked for singular
    directions and growth, and Laplace integrated along the admissible
    rotation closest to the requested direction d; the monomial prefactor is
    divided back out at the end.
    """
    shifted = f.shift(w.pk, w.qk)
    phi = formal_borel(shifted, w)
    k = float(w.k)
    out = []
    for point in points:
        if not sector.contains(point, w.p, w.q):
            raise SupportDomainError(
                f"point {point} lies outside the monomial sector "
                f"(d={sector.d}, opening={sector.opening}, radius={sector.radius})"
            )
        ray = reduce_to_ray(phi, point, config.lattice_cap)
        cont = pade_continue(ray, config.pade_degrees, config)
        directions = detect_singular_directions(cont, w, config)
        base_arg = cmath.phase(ray.monomial_base)
        theta_ideal = k * wrap_angle(d - base_arg)
        pole_args = _theta_obstructions(cont)
        blocking = [p for p in pole_args if abs(theta_ideal - p) < config.singular_margin * k]
        if blocking:
            offending = sorted({wrap_angle(base_arg + p / k) for p in blocking})
            raise SingularDirectionError(
                f"direction d={d:.4f} is within {config.singular_margin} rad of "
                f"singular direction(s) {offending}",
                offenders=offending,
            )
        theta = _choose_theta(theta_ideal, pole_args, config)
        growth = None
        if ray.coeffs:
            growth = estimate_growth(
                cont, base_arg + theta / k, w, config.growth_umax, config
            )
        x1, x2 = point
        quad_value, err = laplace_quadrature(cont, theta, w, point, config)
        value = quad_value / (x1**w.pk * x2**w.qk)
        nearest = math.nan
        if directions:
            nearest = min(directions, key=lambda s: circular_distance(s, d))
        out.append(
            SumEvaluation(
                point=point,
                direction=d,
                weight=w,
                value=value,
                err_estimate=err,
                nearest_singularity_direction=nearest,
                theta=theta,
                growth=growth,
            )
        )
    return out
