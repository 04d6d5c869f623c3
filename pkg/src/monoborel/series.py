"""Truncated bivariate formal power series with complex-vector coefficients.

A series is a sparse map from exponent pairs (n, m) to length-l complex
vectors, truncated to a rectangular box n <= N1, m <= N2.  All operations are
pure and return new series; summation orders are fixed so results are
bit-deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping

import numpy as np
from scipy.special import gammaln

from .errors import DimensionMismatchError, InsufficientDataError

Key = tuple[int, int]


def _as_vector(value, l: int | None = None) -> np.ndarray:
    """Coerce a scalar or sequence to a complex vector, checking length."""
    vec = np.atleast_1d(np.asarray(value, dtype=complex))
    if vec.ndim != 1:
        raise DimensionMismatchError(f"coefficient must be a vector, got shape {vec.shape}")
    if l is not None and vec.shape[0] != l:
        raise DimensionMismatchError(f"coefficient has length {vec.shape[0]}, expected {l}")
    return vec


def _rational(value) -> Fraction:
    """Parse a rational given as Fraction, int, [num, den] or exact float."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return Fraction(int(value[0]), int(value[1]))
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**9)
    raise ValueError(f"cannot interpret {value!r} as a rational number")


@dataclass(frozen=True)
class MonomialWeight:
    """Monomial x1^p x2^q with Borel/Laplace level k and weight split (s, 1-s).

    The derived pair alpha = (s/(pk), (1-s)/(qk)) drives every transform.
    p*k and q*k are required to be integers so transformed series stay on the
    integer exponent lattice.
    """

    p: int
    q: int
    k: Fraction
    s: Fraction

    def __post_init__(self):
        object.__setattr__(self, "k", _rational(self.k))
        object.__setattr__(self, "s", _rational(self.s))
        if self.p < 1 or self.q < 1:
            raise ValueError("p and q must be positive integers")
        if self.k <= 0:
            raise ValueError("k must be positive")
        if not (0 < self.s < 1):
            raise ValueError(f"s must satisfy 0 < s < 1 exactly, got {self.s}")
        if (self.p * self.k).denominator != 1 or (self.q * self.k).denominator != 1:
            raise ValueError(f"p*k and q*k must be integers, got p*k={self.p * self.k}, q*k={self.q * self.k}")

    @property
    def pk(self) -> int:
        return int(self.p * self.k)

    @property
    def qk(self) -> int:
        return int(self.q * self.k)

    @property
    def alpha(self) -> tuple[Fraction, Fraction]:
        return (self.s / (self.p * self.k), (1 - self.s) / (self.q * self.k))

    def degree(self, n: int, m: int) -> Fraction:
        """alpha-weighted degree n*s/(pk) + m*(1-s)/(qk) of a monomial."""
        a1, a2 = self.alpha
        return n * a1 + m * a2

    def monomial_value(self, x1: complex, x2: complex) -> complex:
        return x1**self.p * x2**self.q

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "k": [self.k.numerator, self.k.denominator],
            "s": [self.s.numerator, self.s.denominator],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "MonomialWeight":
        return cls(p=int(data["p"]), q=int(data["q"]), k=_rational(data["k"]), s=_rational(data["s"]))


class BivariateSeries:
    """Sparse truncated series sum a_{n,m} x1^n x2^m with vector coefficients."""

    __slots__ = ("coeffs", "l", "trunc")

    def __init__(self, coeffs: Mapping[Key, np.ndarray], l: int, trunc: Key):
        n1, n2 = int(trunc[0]), int(trunc[1])
        if n1 < 0 or n2 < 0:
            raise ValueError(f"truncation box must be nonnegative, got {trunc}")
        if l < 1:
            raise ValueError("component count l must be positive")
        clean: dict[Key, np.ndarray] = {}
        for (n, m), value in coeffs.items():
            n, m = int(n), int(m)
            if n < 0 or m < 0:
                raise ValueError(f"negative exponent ({n}, {m})")
            if n > n1 or m > n2:
                raise ValueError(f"exponent ({n}, {m}) exceeds truncation box ({n1}, {n2})")
            vec = _as_vector(value, l)
            if not np.all(np.isfinite(vec.view(float))):
                raise ValueError(f"non-finite coefficient at ({n}, {m})")
            if np.any(vec != 0):
                clean[(n, m)] = vec.copy()
        self.coeffs = clean
        self.l = l
        self.trunc = (n1, n2)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, l: int = 1, trunc: Key = (0, 0)) -> "BivariateSeries":
        return cls({}, l, trunc)

    @classmethod
    def constant(cls, value, trunc: Key = (0, 0), l: int | None = None) -> "BivariateSeries":
        vec = _as_vector(value, l)
        return cls({(0, 0): vec}, vec.shape[0], trunc)

    @classmethod
    def monomial(cls, n: int, m: int, value=1.0, trunc: Key | None = None, l: int | None = None) -> "BivariateSeries":
        vec = _as_vector(value, l)
        box = trunc if trunc is not None else (n, m)
        return cls({(n, m): vec}, vec.shape[0], box)

    @classmethod
    def from_terms(cls, terms: Mapping[Key, object], trunc: Key, l: int | None = None) -> "BivariateSeries":
        if l is None:
            l = 1
            for value in terms.values():
                l = _as_vector(value).shape[0]
                break
        return cls({key: _as_vector(value, l) for key, value in terms.items()}, l, trunc)

    # -- basic access ------------------------------------------------------

    def coeff(self, n: int, m: int) -> np.ndarray:
        vec = self.coeffs.get((n, m))
        return vec.copy() if vec is not None else np.zeros(self.l, dtype=complex)

    def items(self) -> Iterator[tuple[Key, np.ndarray]]:
        """Stored terms in lexicographic (n, m) order."""
        for key in sorted(self.coeffs):
            yield key, self.coeffs[key]

    @property
    def support(self) -> list[Key]:
        return sorted(self.coeffs)

    def max_norm(self) -> float:
        if not self.coeffs:
            return 0.0
        return max(float(np.max(np.abs(vec))) for vec in self.coeffs.values())

    def __repr__(self) -> str:
        return f"BivariateSeries(l={self.l}, trunc={self.trunc}, nnz={len(self.coeffs)})"

    # -- arithmetic --------------------------------------------------------

    def _common_l(self, other: "BivariateSeries") -> int:
        if self.l == other.l:
            return self.l
        if self.l == 1 or other.l == 1:
            return max(self.l, other.l)
        raise DimensionMismatchError(f"incompatible component counts {self.l} and {other.l}")

    def __add__(self, other: "BivariateSeries") -> "BivariateSeries":
        l = self._common_l(other)
        box = (min(self.trunc[0], other.trunc[0]), min(self.trunc[1], other.trunc[1]))
        out: dict[Key, np.ndarray] = {}
        for key in sorted(set(self.coeffs) | set(other.coeffs)):
            if key[0] > box[0] or key[1] > box[1]:
                continue
            out[key] = self.coeff(*key) + other.coeff(*key)
        return BivariateSeries(out, l, box)

    def __sub__(self, other: "BivariateSeries") -> "BivariateSeries":
        return self + (-other)

    def __neg__(self) -> "BivariateSeries":
        return self.scale(-1.0)

    def scale(self, c) -> "BivariateSeries":
        return BivariateSeries({key: c * vec for key, vec in self.coeffs.items()}, self.l, self.trunc)

    def __mul__(self, other: "BivariateSeries") -> "BivariateSeries":
        """Cauchy product on the intersection of the truncation boxes.

        Each output coefficient is accumulated over contributing pairs sorted
        by an operand-order-independent key, with mirror pairs combined first,
        so f*g and g*f agree bit for bit.
        """
        l = self._common_l(other)
        box = (min(self.trunc[0], other.trunc[0]), min(self.trunc[1], other.trunc[1]))
        buckets: dict[Key, list] = {}

        def value_key(vec):
            return tuple(part for z in vec for part in (z.real, z.imag))

        for (i, j), fv in sorted(self.coeffs.items()):
            for (a, b), gv in sorted(other.coeffs.items()):
                n, m = i + a, j + b
                if n > box[0] or m > box[1]:
                    continue
                # multiply in an operand-order-independent sequence: hardware
                # fused-multiply-add makes complex products asymmetric otherwise
                if (i, j) < (a, b):
                    term = fv * gv
                elif (i, j) > (a, b):
                    term = gv * fv
                else:
                    lo, hi = sorted((fv, gv), key=value_key)
                    term = lo * hi
                sym_key = ((i, j), (a, b)) if (i, j) <= (a, b) else ((a, b), (i, j))
                buckets.setdefault((n, m), []).append((sym_key, term))
        out: dict[Key, np.ndarray] = {}
        for key, entries in buckets.items():
            entries.sort(key=lambda e: e[0])
            acc = None
            idx = 0
            while idx < len(entries):
                if idx + 1 < len(entries) and entries[idx + 1][0] == entries[idx][0]:
                    term = entries[idx][1] + entries[idx + 1][1]
                    idx += 2
                else:
                    term = entries[idx][1]
                    idx += 1
                acc = term if acc is None else acc + term
            out[key] = acc
        return BivariateSeries(out, l, box)

    def shift(self, dn: int, dm: int) -> "BivariateSeries":
        """Multiply by x1^dn x2^dm, expanding the truncation box to match."""
        if dn < 0 or dm < 0:
            raise ValueError("shift exponents must be nonnegative")
        box = (self.trunc[0] + dn, self.trunc[1] + dm)
        return BivariateSeries({(n + dn, m + dm): vec for (n, m), vec in self.coeffs.items()}, self.l, box)

    def map_terms(self, fn: Callable[[int, int, np.ndarray], np.ndarray]) -> "BivariateSeries":
        return BivariateSeries({(n, m): fn(n, m, vec) for (n, m), vec in self.coeffs.items()}, self.l, self.trunc)

    def map_shift(self, dn: int, dm: int, factor: Callable[[int, int], complex]) -> "BivariateSeries":
        """Termwise a_{n,m} -> factor(n, m) * a_{n,m} at exponent (n+dn, m+dm)."""
        box = (self.trunc[0] + max(dn, 0), self.trunc[1] + max(dm, 0))
        out: dict[Key, np.ndarray] = {}
        for (n, m), vec in self.coeffs.items():
            nn, mm = n + dn, m + dm
            if nn < 0 or mm < 0:
                continue
            out[(nn, mm)] = factor(n, m) * vec
        return BivariateSeries(out, self.l, box)

    def restrict(self, trunc: Key) -> "BivariateSeries":
        box = (min(self.trunc[0], trunc[0]), min(self.trunc[1], trunc[1]))
        kept = {key: vec for key, vec in self.coeffs.items() if key[0] <= box[0] and key[1] <= box[1]}
        return BivariateSeries(kept, self.l, box)

    # -- evaluation --------------------------------------------------------

    def evaluate(self, x1: complex, x2: complex) -> np.ndarray:
        """Horner evaluation of the truncated polynomial (fixed nested order)."""
        if not self.coeffs:
            return np.zeros(self.l, dtype=complex)
        rows: dict[int, list[tuple[int, np.ndarray]]] = {}
        for (n, m), vec in sorted(self.coeffs.items()):
            rows.setdefault(n, []).append((m, vec))
        total = np.zeros(self.l, dtype=complex)
        prev_n: int | None = None
        for n in sorted(rows, reverse=True):
            row_val = np.zeros(self.l, dtype=complex)
            prev_m: int | None = None
            for m, vec in sorted(rows[n], reverse=True):
                if prev_m is None:
                    row_val = vec.astype(complex)
                else:
                    row_val = row_val * x2 ** (prev_m - m) + vec
                prev_m = m
            row_val = row_val * x2**prev_m
            if prev_n is None:
                total = row_val
            else:
                total = total * x1 ** (prev_n - n) + row_val
            prev_n = n
        return total * x1**prev_n

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        rows = []
        for (n, m), vec in self.items():
            flat: list[float] = []
            for z in vec:
                flat.extend((float(z.real), float(z.imag)))
            rows.append([n, m, flat])
        return {"l": self.l, "trunc": [self.trunc[0], self.trunc[1]], "coeffs": rows}

    @classmethod
    def from_json(cls, data: Mapping) -> "BivariateSeries":
        l = int(data["l"])
        trunc = (int(data["trunc"][0]), int(data["trunc"][1]))
        coeffs: dict[Key, np.ndarray] = {}
        for row in data["coeffs"]:
            n, m, flat = int(row[0]), int(row[1]), row[2]
            if len(flat) != 2 * l:
                raise ValueError(f"coefficient row at ({n}, {m}) has {len(flat)} reals, expected {2 * l}")
            vec = np.array([complex(flat[2 * i], flat[2 * i + 1]) for i in range(l)])
            coeffs[(n, m)] = vec
        return cls(coeffs, l, trunc)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def series_product(f: BivariateSeries, g: BivariateSeries) -> BivariateSeries:
    """Cauchy product of two truncated series (see BivariateSeries.__mul__)."""
    return f * g


def evaluate_truncated(f: BivariateSeries, x1: complex, x2: complex) -> np.ndarray:
    return f.evaluate(x1, x2)


def series_max_diff(f: BivariateSeries, g: BivariateSeries) -> float:
    """Max coefficient-norm difference on the union of supports."""
    diff = 0.0
    for key in set(f.coeffs) | set(g.coeffs):
        diff = max(diff, float(np.max(np.abs(f.coeff(*key) - g.coeff(*key)))))
    return diff


def stack_series(components: Iterable[BivariateSeries], trunc: Key | None = None) -> BivariateSeries:
    """Stack scalar series into one vector-valued series."""
    comps = list(components)
    if not comps:
        raise ValueError("need at least one component")
    if any(c.l != 1 for c in comps):
        raise DimensionMismatchError("stack_series expects scalar components")
    box = trunc
    if box is None:
        box = (min(c.trunc[0] for c in comps), min(c.trunc[1] for c in comps))
    l = len(comps)
    out: dict[Key, np.ndarray] = {}
    for idx, comp in enumerate(comps):
        for (n, m), vec in comp.coeffs.items():
            if n > box[0] or m > box[1]:
                continue
            acc = out.setdefault((n, m), np.zeros(l, dtype=complex))
            acc[idx] = vec[0]
    return BivariateSeries(out, l, box)


# -- monomial decomposition -----------------------------------------------


@dataclass(frozen=True)
class MonomialDecomposition:
    """Parts f_0, f_1, ... with f = sum f_N * (x1^p x2^q)^N.

    Each part is supported on exponents (m, j) with m < p or j < q, which
    makes the decomposition unique.
    """

    parts: tuple[BivariateSeries, ...]
    p: int
    q: int


def monomial_decompose(f: BivariateSeries, p: int, q: int) -> MonomialDecomposition:
    """Split off powers of x1^p x2^q.

    A term at (n, m) belongs to part N = min(n // p, m // q), the unique N
    for which the reduced exponents (n - Np, m - Nq) satisfy the support
    condition.
    """
    if p < 1 or q < 1:
        raise ValueError("p and q must be positive integers")
    buckets: dict[int, dict[Key, np.ndarray]] = {}
    for (n, m), vec in f.coeffs.items():
        big_n = min(n // p, m // q)
        buckets.setdefault(big_n, {})[(n - big_n * p, m - big_n * q)] = vec
    count = (max(buckets) + 1) if buckets else 0
    parts = tuple(
        BivariateSeries(buckets.get(i, {}), f.l, f.trunc) for i in range(count)
    )
    return MonomialDecomposition(parts, p, q)


def monomial_recompose(d: MonomialDecomposition) -> BivariateSeries:
    """Exact left inverse of monomial_decompose on the truncation box."""
    if not d.parts:
        return BivariateSeries.zero()
    l = d.parts[0].l
    box = d.parts[0].trunc
    out: dict[Key, np.ndarray] = {}
    for big_n, part in enumerate(d.parts):
        for (m, j), vec in part.coeffs.items():
            key = (m + big_n * d.p, j + big_n * d.q)
            acc = out.get(key)
            out[key] = vec.copy() if acc is None else acc + vec
    box = (
        max([box[0]] + [k[0] for k in out]),
        max([box[1]] + [k[1] for k in out]),
    )
    return BivariateSeries(out, l, box)


# -- Gevrey order estimation ----------------------------------------------


@dataclass(frozen=True)
class GevreyEstimate:
    """Fitted constants of the bound |a_{n,m}| <= C * A^(n+m) * min(n!, m!)-type."""

    s_hat: float
    C_hat: float
    A_hat: float
    residual: float


def geometric_interpolation(a: float, b: float, lam: float) -> float:
    """Weighted geometric mean a^lam * b^(1-lam); lies between min and max."""
    if a <= 0 or b <= 0:
        raise ValueError("arguments must be positive")
    if not 0 <= lam <= 1:
        raise ValueError("interpolation parameter must lie in [0, 1]")
    return float(a**lam * b ** (1 - lam))


def gevrey_order_estimate(f: BivariateSeries, p: int, q: int) -> GevreyEstimate:
    """Least-squares fit of the monomial Gevrey bound on the dominant diagonal.

    For each total degree the largest-norm coefficient is kept, then
    log|a_{n,m}| = log C + (n+m) log A + s * min(log n!/p, log m!/q)
    is solved for (C, A, s) in the least-squares sense.  The fit is invariant
    under rescaling a -> c*a except for C.
    """
    best: dict[int, tuple[float, Key]] = {}
    for (n, m), vec in sorted(f.coeffs.items()):
        norm = float(np.max(np.abs(vec)))
        if norm <= 0.0:
            continue
        d = n + m
        if d not in best or norm > best[d][0]:
            best[d] = (norm, (n, m))
    if len(best) < 10:
        raise InsufficientDataError(
            f"need at least 10 nonzero diagonal-dominant coefficients, found {len(best)}"
        )
    rows = []
    targets = []
    for d in sorted(best):
        norm, (n, m) = best[d]
        u = min(float(gammaln(n + 1)) / p, float(gammaln(m + 1)) / q)
        rows.append([1.0, float(n + m), u])
        targets.append(np.log(norm))
    mat = np.array(rows)
    rhs = np.array(targets)
    coef, _, _, _ = np.linalg.lstsq(mat, rhs, rcond=None)
    fit_residual = float(np.sqrt(np.mean((mat @ coef - rhs) ** 2)))
    return GevreyEstimate(
        s_hat=max(float(coef[2]), 0.0),
        C_hat=float(np.exp(coef[0])),
        A_hat=float(np.exp(coef[1])),
        residual=fit_residual,
    )
