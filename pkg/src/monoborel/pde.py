"""Formal solutions and summability analysis for monomially-singular systems.

Handles the family x1^p x2^q ((s/p) x1 d/dx1 + ((1-s)/q) x2 d/dx2) y = C y + g
with an invertible constant term C(0,0), plus Pfaffian pairs sharing the same
monomial: integrability checks, eigenvalue pairing, the weighted combination
into a single equation, and a grid-certified convergence scan.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import NumericError, SingularProblemError
from .series import BivariateSeries, MonomialWeight, _rational
from .summation import (
    DEFAULT_CONFIG,
    PipelineConfig,
    SectorSpec,
    SumEvaluation,
    borel_sum,
    circular_distance,
)

Key = tuple[int, int]
TWO_PI = 2.0 * math.pi


def _coeff_table_vector(entries: Sequence[BivariateSeries]) -> dict[Key, np.ndarray]:
    """Coefficient table of a vector of scalar series: (n, m) -> C^l."""
    l = len(entries)
    table: dict[Key, np.ndarray] = {}
    for idx, entry in enumerate(entries):
        for (n, m), vec in entry.coeffs.items():
            acc = table.setdefault((n, m), np.zeros(l, dtype=complex))
            acc[idx] = vec[0]
    return table


def _coeff_table_matrix(entries: Sequence[Sequence[BivariateSeries]]) -> dict[Key, np.ndarray]:
    """Coefficient table of a matrix of scalar series: (n, m) -> C^(l x l)."""
    l = len(entries)
    table: dict[Key, np.ndarray] = {}
    for a in range(l):
        if len(entries[a]) != l:
            raise ValueError("coefficient matrix must be square")
        for b in range(l):
            for (n, m), vec in entries[a][b].coeffs.items():
                acc = table.setdefault((n, m), np.zeros((l, l), dtype=complex))
                acc[a, b] = vec[0]
    return table


def _evaluate_matrix(entries: Sequence[Sequence[BivariateSeries]], x1: complex, x2: complex) -> np.ndarray:
    l = len(entries)
    out = np.empty((l, l), dtype=complex)
    for a in range(l):
        for b in range(l):
            out[a, b] = entries[a][b].evaluate(x1, x2)[0]
    return out


def _evaluate_vector(entries: Sequence[BivariateSeries], x1: complex, x2: complex) -> np.ndarray:
    return np.array([entry.evaluate(x1, x2)[0] for entry in entries])


@dataclass
class LinearMonomialPDE:
    """Problem data for the weighted monomial equation.

    s may take the endpoint values 0 and 1, which give the doubly-singular
    single-derivative equations; summation then uses an interior weight.
    """

    p: int
    q: int
    s: Fraction
    C: list[list[BivariateSeries]]
    gamma: list[BivariateSeries]
    eigenvalues: np.ndarray = field(init=False)

    def __post_init__(self):
        self.s = _rational(self.s)
        if not (0 <= self.s <= 1):
            raise ValueError(f"s must lie in [0, 1], got {self.s}")
        if self.p < 1 or self.q < 1:
            raise ValueError("p and q must be positive integers")
        l = len(self.C)
        if len(self.gamma) != l:
            raise ValueError("gamma length must match the size of C")
        try:
            self.eigenvalues = np.linalg.eigvals(self.constant_term)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - defensive
            raise NumericError(f"eigenvalue computation failed: {exc}") from exc

    @property
    def l(self) -> int:
        return len(self.C)

    @property
    def constant_term(self) -> np.ndarray:
        l = self.l
        out = np.empty((l, l), dtype=complex)
        for a in range(l):
            for b in range(l):
                out[a, b] = self.C[a][b].coeff(0, 0)[0]
        return out

    def check_invertible(self, tol: float = 1e-12) -> None:
        eigs = self.eigenvalues
        scale = max(float(np.max(np.abs(eigs))), 1.0)
        if float(np.min(np.abs(eigs))) <= tol * scale:
            raise SingularProblemError(
                "C(0,0) must be invertible; smallest eigenvalue magnitude is "
                f"{float(np.min(np.abs(eigs))):.3e}"
            )

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "s": [self.s.numerator, self.s.denominator],
            "C": [[entry.to_json() for entry in row] for row in self.C],
            "gamma": [entry.to_json() for entry in self.gamma],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "LinearMonomialPDE":
        return cls(
            p=int(data["p"]),
            q=int(data["q"]),
            s=_rational(data["s"]),
            C=[[BivariateSeries.from_json(e) for e in row] for row in data["C"]],
            gamma=[BivariateSeries.from_json(e) for e in data["gamma"]],
        )


@dataclass
class PfaffianSystem:
    """A pair of compatible equations in the same unknown and monomial."""

    p: int
    q: int
    A: list[list[BivariateSeries]]
    B: list[list[BivariateSeries]]
    gamma1: list[BivariateSeries]
    gamma2: list[BivariateSeries]

    def __post_init__(self):
        l = len(self.A)
        if len(self.B) != l or len(self.gamma1) != l or len(self.gamma2) != l:
            raise ValueError("A, B, gamma1, gamma2 must share the same size")

    @property
    def l(self) -> int:
        return len(self.A)

    def constant_terms(self) -> tuple[np.ndarray, np.ndarray]:
        l = self.l
        a00 = np.empty((l, l), dtype=complex)
        b00 = np.empty((l, l), dtype=complex)
        for a in range(l):
            for b in range(l):
                a00[a, b] = self.A[a][b].coeff(0, 0)[0]
                b00[a, b] = self.B[a][b].coeff(0, 0)[0]
        return a00, b00

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "A": [[entry.to_json() for entry in row] for row in self.A],
            "B": [[entry.to_json() for entry in row] for row in self.B],
            "gamma1": [entry.to_json() for entry in self.gamma1],
            "gamma2": [entry.to_json() for entry in self.gamma2],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "PfaffianSystem":
        return cls(
            p=int(data["p"]),
            q=int(data["q"]),
            A=[[BivariateSeries.from_json(e) for e in row] for row in data["A"]],
            B=[[BivariateSeries.from_json(e) for e in row] for row in data["B"]],
            gamma1=[BivariateSeries.from_json(e) for e in data["gamma1"]],
            gamma2=[BivariateSeries.from_json(e) for e in data["gamma2"]],
        )


def load_problem(path_or_dict) -> LinearMonomialPDE | PfaffianSystem:
    """Load a problem file, dispatching on whether it holds C or the pair A, B."""
    if isinstance(path_or_dict, Mapping):
        data = path_or_dict
    else:
        with open(path_or_dict) as handle:
            data = json.load(handle)
    if "C" in data:
        return LinearMonomialPDE.from_json(data)
    if "A" in data and "B" in data:
        return PfaffianSystem.from_json(data)
    raise ValueError("problem file must contain either 'C' or 'A'/'B'")


# -- formal solution ---------------------------------------------------------


def formal_solution(
    prob: LinearMonomialPDE,
    box: Key,
    traversal: str = "grade",
) -> BivariateSeries:
    """Solve the equation formally by matching powers on the truncation box.

    For every exponent (n, m) the relation
    ((s/p)(n-p) + ((1-s)/q)(m-q)) y_{n-p,m-q}
        = sum_{(a,b) <= (n,m)} C_{a,b} y_{n-a,m-b} + gamma_{n,m}
    is solved for y_{n,m} through the invertible C(0,0); terms with negative
    indices vanish.  The traversal order does not change the result because
    inner sums always run in lexicographic order.
    """
    prob.check_invertible()
    l = prob.l
    c_table = _coeff_table_matrix(prob.C)
    g_table = _coeff_table_vector(prob.gamma)
    c00 = c_table.get((0, 0), np.zeros((l, l), dtype=complex))
    c_rest = sorted(key for key in c_table if key != (0, 0))
    sp = float(Fraction(prob.s, prob.p))
    sq = float(Fraction(1 - prob.s, prob.q))
    n1, n2 = box
    if traversal == "grade":
        order = sorted(
            ((n, m) for n in range(n1 + 1) for m in range(n2 + 1)),
            key=lambda key: (key[0] + key[1], key),
        )
    elif traversal == "lex":
        order = [(n, m) for n in range(n1 + 1) for m in range(n2 + 1)]
    else:
        raise ValueError(f"unknown traversal {traversal!r}")
    y: dict[Key, np.ndarray] = {}
    zero = np.zeros(l, dtype=complex)
    for n, m in order:
        lhs = zero
        if n >= prob.p and m >= prob.q:
            prev = y.get((n - prob.p, m - prob.q))
            if prev is not None:
                lhs = (sp * (n - prob.p) + sq * (m - prob.q)) * prev
        rhs = g_table.get((n, m), zero).copy()
        for a, b in c_rest:
            if a > n or b > m:
                continue
            yv = y.get((n - a, m - b))
            if yv is not None:
                rhs = rhs + c_table[(a, b)] @ yv
        target = lhs - rhs
        if np.any(target != 0):
            y[(n, m)] = np.linalg.solve(c00, target)
    return BivariateSeries(y, l, box)


def equation_operator(y: BivariateSeries, p: int, q: int, s: Fraction) -> BivariateSeries:
    """Left-hand side x1^p x2^q ((s/p) x1 d1 + ((1-s)/q) x2 d2) applied termwise.

    Unlike the transforms module this accepts the endpoint weights s = 0, 1.
    """
    s = _rational(s)
    sp = float(Fraction(s, p))
    sq = float(Fraction(1 - s, q))
    return y.map_shift(p, q, lambda n, m: sp * n + sq * m)


def equation_residual_series(prob: LinearMonomialPDE, y: BivariateSeries) -> BivariateSeries:
    """Residual series LHS - C*y - gamma on the solution's box."""
    lhs = equation_operator(y, prob.p, prob.q, prob.s).restrict(y.trunc)
    c_table = _coeff_table_matrix(prob.C)
    g_table = _coeff_table_vector(prob.gamma)
    out: dict[Key, np.ndarray] = {}
    for (n, m), vec in lhs.coeffs.items():
        out[(n, m)] = vec.copy()
    for (a, b), mat in sorted(c_table.items()):
        for (i, j), yv in sorted(y.coeffs.items()):
            key = (a + i, b + j)
            if key[0] > y.trunc[0] or key[1] > y.trunc[1]:
                continue
            acc = out.setdefault(key, np.zeros(prob.l, dtype=complex))
            out[key] = acc - mat @ yv
    for key, vec in g_table.items():
        if key[0] > y.trunc[0] or key[1] > y.trunc[1]:
            continue
        acc = out.setdefault(key, np.zeros(prob.l, dtype=complex))
        out[key] = acc - vec
    return BivariateSeries(out, prob.l, y.trunc)


def singular_directions(prob: LinearMonomialPDE) -> list[float]:
    """Sorted unique arguments of the eigenvalues of C(0,0)."""
    prob.check_invertible()
    args = [cmath.phase(complex(lam)) for lam in prob.eigenvalues]
    out: list[float] = []
    for a in sorted(args):
        if not out or circular_distance(a, out[-1]) > 1e-9:
            out.append(a)
    if len(out) > 1 and circular_distance(out[0], out[-1]) <= 1e-9:
        out.pop()
    return out


def summation_weight(prob: LinearMonomialPDE) -> MonomialWeight:
    """Weight used to sum the solution: the equation's s, or 1/2 at endpoints."""
    s = prob.s if 0 < prob.s < 1 else Fraction(1, 2)
    return MonomialWeight(p=prob.p, q=prob.q, k=Fraction(1), s=s)


def sum_and_verify(
    prob: LinearMonomialPDE,
    d: float,
    points: list[tuple[complex, complex]],
    box: Key = (30, 30),
    sector: SectorSpec | None = None,
    config: PipelineConfig = DEFAULT_CONFIG,
    weight: MonomialWeight | None = None,
) -> list[tuple[SumEvaluation, float]]:
    """Sum the formal solution at each point and report the PDE residual.

    The residual uses the derivative obtained by resumming the termwise
    weighted derivative of the solution series, which the summation method
    leaves stable, so no finite differences are needed near the singular
    locus.
    """
    w = weight if weight is not None else summation_weight(prob)
    y_hat = formal_solution(prob, box)
    sp = float(Fraction(prob.s, prob.p))
    sq = float(Fraction(1 - prob.s, prob.q))
    dy_hat = y_hat.map_shift(0, 0, lambda n, m: sp * n + sq * m)
    if sector is None:
        sector = SectorSpec(d=d, opening=TWO_PI + 0.5, radius=math.inf)
    y_evals = borel_sum(y_hat, w, d, points, sector, config)
    dy_evals = borel_sum(dy_hat, w, d, points, sector, config)
    out = []
    for y_eval, dy_eval in zip(y_evals, dy_evals):
        x1, x2 = y_eval.point
        mono = x1**prob.p * x2**prob.q
        c_val = _evaluate_matrix(prob.C, x1, x2)
        g_val = _evaluate_vector(prob.gamma, x1, x2)
        residual_vec = mono * dy_eval.value - c_val @ y_eval.value - g_val
        out.append((y_eval, float(np.max(np.abs(residual_vec)))))
    return out


# -- Pfaffian systems --------------------------------------------------------


def _matrix_series_map_shift(entries, p, q, factor) -> list[list[BivariateSeries]]:
    return [[entry.map_shift(p, q, factor) for entry in row] for row in entries]


def _matrix_series_combine(rows_a, rows_b, ca, cb) -> list[list[BivariateSeries]]:
    return [
        [a.scale(ca) + b.scale(cb) for a, b in zip(row_a, row_b)]
        for row_a, row_b in zip(rows_a, rows_b)
    ]


def _table_max_norm(table: Mapping[Key, np.ndarray]) -> float:
    if not table:
        return 0.0
    return max(float(np.max(np.abs(mat))) for mat in table.values())


def _table_add(into: dict[Key, np.ndarray], table: Mapping[Key, np.ndarray], sign: float, box: Key):
    for key, mat in table.items():
        if key[0] > box[0] or key[1] > box[1]:
            continue
        acc = into.get(key)
        into[key] = sign * mat if acc is None else acc + sign * mat
    return into


def _table_product(ta: Mapping[Key, np.ndarray], tb: Mapping[Key, np.ndarray], box: Key) -> dict[Key, np.ndarray]:
    out: dict[Key, np.ndarray] = {}
    for (i, j), ma in sorted(ta.items()):
        for (a, b), mb in sorted(tb.items()):
            key = (i + a, j + b)
            if key[0] > box[0] or key[1] > box[1]:
                continue
            term = ma @ mb
            acc = out.get(key)
            out[key] = term if acc is None else acc + term
    return out


def integrability_check(sys: PfaffianSystem, box: Key) -> dict:
    """Defects of the two compatibility identities on the truncation box.

    matrix identity: x1^p x2^q (x2 dA/dx2 - qA) - x1^p x2^q (x1 dB/dx1 - pB) + [A,B]
    forcing identity: the analogous relation on (gamma1, gamma2) with the
    cross terms A gamma2 - B gamma1.
    Zero defects mean the pair is integrable to truncation order.
    """
    p, q = sys.p, sys.q
    term_a = _coeff_table_matrix(_matrix_series_map_shift(sys.A, p, q, lambda n, m: float(m - q)))
    term_b = _coeff_table_matrix(_matrix_series_map_shift(sys.B, p, q, lambda n, m: float(n - p)))
    ta = _coeff_table_matrix(sys.A)
    tb = _coeff_table_matrix(sys.B)
    acc: dict[Key, np.ndarray] = {}
    _table_add(acc, term_a, 1.0, box)
    _table_add(acc, term_b, -1.0, box)
    _table_add(acc, _table_product(ta, tb, box), 1.0, box)
    _table_add(acc, _table_product(tb, ta, box), -1.0, box)
    matrix_defect = _table_max_norm(acc)

    g1 = [[entry] for entry in sys.gamma1]
    g2 = [[entry] for entry in sys.gamma2]
    term_g1 = _coeff_table_matrix(_matrix_series_map_shift(g1, p, q, lambda n, m: float(m - q)))
    term_g2 = _coeff_table_matrix(_matrix_series_map_shift(g2, p, q, lambda n, m: float(n - p)))
    tg1 = _coeff_table_matrix(g1)
    tg2 = _coeff_table_matrix(g2)
    gacc: dict[Key, np.ndarray] = {}
    _table_add(gacc, term_g1, 1.0, box)
    _table_add(gacc, term_g2, -1.0, box)
    _table_add(gacc, _table_product(ta, tg2, box), 1.0, box)
    _table_add(gacc, _table_product(tb, tg1, box), -1.0, box)
    forcing_defect = _table_max_norm(gacc)
    return {"matrix_defect": matrix_defect, "forcing_defect": forcing_defect}


def eigenvalue_pairing_check(sys: PfaffianSystem, tol: float = 1e-8) -> dict:
    """For each eigenvalue mu of B(0,0), look for lambda of A(0,0) with q*lambda = p*mu."""
    a00, b00 = sys.constant_terms()
    try:
        lams = np.linalg.eigvals(a00)
        mus = np.linalg.eigvals(b00)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - defensive
        raise NumericError(f"eigenvalue computation failed: {exc}") from exc
    pairs = []
    overall = True
    for mu in sorted(mus, key=lambda z: (z.real, z.imag)):
        defects = [abs(sys.q * lam - sys.p * mu) for lam in lams]
        best = int(np.argmin(defects))
        matched = bool(defects[best] < tol)
        overall = overall and matched
        pairs.append(
            {
                "mu": complex(mu),
                "matched_lambda": complex(lams[best]),
                "defect": float(defects[best]),
                "matched": matched,
            }
        )
    return {"pass": overall, "pairs": pairs}


def combine_pfaffian(sys: PfaffianSystem, s) -> LinearMonomialPDE:
    """Weighted combination (s/p) * first equation + ((1-s)/q) * second."""
    s = _rational(s)
    ca = Fraction(s, sys.p)
    cb = Fraction(1 - s, sys.q)
    c = _matrix_series_combine(sys.A, sys.B, float(ca), float(cb))
    gamma = [
        g1.scale(float(ca)) + g2.scale(float(cb))
        for g1, g2 in zip(sys.gamma1, sys.gamma2)
    ]
    return LinearMonomialPDE(p=sys.p, q=sys.q, s=s, C=c, gamma=gamma)


def convergence_scan(
    sys: PfaffianSystem,
    s_grid: Sequence[Fraction] | None = None,
    direction_grid: Sequence[float] | None = None,
    angular_tol: float = 0.02,
    zero_tol: float = 1e-12,
) -> dict:
    """Grid-certified test for absence of singular directions.

    For each direction d the s-grid is searched for a weight whose combined
    spectrum stays at least angular_tol away from d; if every direction has a
    witness the verdict is "convergent".  Any zero eigenvalue on the grid, or
    a direction with no witness, yields "inconclusive".  The verdict never
    claims more than the grids certify.
    """
    if s_grid is None:
        s_grid = [Fraction(i, 100) for i in range(101)]
    if direction_grid is None:
        direction_grid = [-math.pi + TWO_PI * i / 100 for i in range(101)]
    a00, b00 = sys.constant_terms()
    spectra: list[tuple[Fraction, np.ndarray]] = []
    for s in s_grid:
        s = _rational(s)
        mat = float(Fraction(s, sys.p)) * a00 + float(Fraction(1 - s, sys.q)) * b00
        eigs = np.linalg.eigvals(mat)
        scale = max(float(np.max(np.abs(eigs))), 1.0)
        if float(np.min(np.abs(eigs))) <= zero_tol * scale:
            return {
                "verdict": "inconclusive",
                "reason": f"zero eigenvalue at s={s}",
                "witnesses": {},
            }
        spectra.append((s, eigs))
    witnesses: dict[float, Fraction] = {}
    for d in direction_grid:
        found = None
        for s, eigs in spectra:
            gap = min(circular_distance(cmath.phase(complex(lam)), d) for lam in eigs)
            if gap > angular_tol:
                found = s
                break
        if found is None:
            return {
                "verdict": "inconclusive",
                "reason": f"no witness weight for direction {d:.4f}",
                "witnesses": {},
            }
        witnesses[float(d)] = found
    return {"verdict": "convergent", "reason": "", "witnesses": witnesses}
