"""Shifted Legendre and shifted Chebyshev polynomials on [0, 1].

Both families are the classical ones composed with t = 2x - 1.  Evaluation
goes through the stable three-term recurrences; the closed monomial forms
are kept in exact integer arithmetic for cross-checks and for the fractional
calculus, which needs explicit powers of x.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

__all__ = [
    "LegendreSeries",
    "ChebyshevSeries",
    "MonomialSeries",
    "eval_shifted_legendre",
    "eval_shifted_chebyshev",
    "shifted_legendre_table",
    "shifted_chebyshev_table",
    "monomial_form_legendre",
    "monomial_form_chebyshev",
    "eval_series",
]


def _check_domain(x):
    x = np.asarray(x, dtype=float)
    if x.size and (np.any(x < 0.0) or np.any(x > 1.0) or not np.all(np.isfinite(x))):
        raise ValueError("evaluation point outside [0, 1]")
    return x


def _check_degree(i: int) -> int:
    if i != int(i) or i < 0:
        raise ValueError(f"polynomial degree must be a non-negative integer, got {i!r}")
    return int(i)


def shifted_legendre_table(n: int, x) -> np.ndarray:
    """Values of L_{1,0}..L_{1,n} at x in [0, 1]; row k holds degree k."""
    n = _check_degree(n)
    x = _check_domain(x)
    t = 2.0 * x - 1.0
    table = np.zeros((n + 1,) + t.shape)
    table[0] = 1.0
    if n >= 1:
        table[1] = t
    for k in range(1, n):
        table[k + 1] = ((2 * k + 1) * t * table[k] - k * table[k - 1]) / (k + 1)
    return table


def shifted_chebyshev_table(n: int, x) -> np.ndarray:
    """Values of T_{1,0}..T_{1,n} at x in [0, 1]; row k holds degree k."""
    n = _check_degree(n)
    x = _check_domain(x)
    t = 2.0 * x - 1.0
    table = np.zeros((n + 1,) + t.shape)
    table[0] = 1.0
    if n >= 1:
        table[1] = t
    for k in range(1, n):
        table[k + 1] = 2.0 * t * table[k] - table[k - 1]
    return table


def eval_shifted_legendre(i: int, x):
    """L_{1,i}(x) = P_i(2x - 1) by the three-term recurrence."""
    i = _check_degree(i)
    out = shifted_legendre_table(i, x)[i]
    return float(out) if out.ndim == 0 else out


def eval_shifted_chebyshev(i: int, x):
    """T_{1,i}(x) = T_i(2x - 1) by the three-term recurrence."""
    i = _check_degree(i)
    out = shifted_chebyshev_table(i, x)[i]
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class MonomialSeries:
    """Finite sum q_1 x^{p_1} + ... with real exponents p_k > -1.

    Coefficients may be Python ints (kept exact) or floats.  This is the
    carrier for closed monomial forms and for Caputo derivatives of them,
    whose exponents are genuinely non-integer (and may sit in (-1, 0),
    an integrable singularity at x = 0).
    """

    terms: tuple[tuple[float, float], ...]

    def __post_init__(self):
        for q, p in self.terms:
            if not np.isfinite(float(q)) or not np.isfinite(float(p)):
                raise ValueError("non-finite monomial term")
            if p <= -1:
                raise ValueError(f"exponent {p!r} is not integrable on [0, 1]")

    def __call__(self, x):
        x = _check_domain(x)
        out = np.zeros(x.shape)
        with np.errstate(divide="ignore"):
            for q, p in self.terms:
                if p == 0:
                    out += float(q)
                else:
                    out += float(q) * x ** float(p)
        return float(out) if out.ndim == 0 else out


def monomial_form_legendre(i: int) -> MonomialSeries:
    """Exact monomial expansion of L_{1,i}.

    L_{1,i}(x) = sum_k (-1)^{i+k} (i+k)! / ((i-k)! (k!)^2) x^k.  Coefficients
    are exact integers at every degree; note that evaluating the monomial
    form in float64 loses accuracy past i ~ 30 (the coefficients exceed
    2^53), so use eval_shifted_legendre for large degrees.
    """
    i = _check_degree(i)
    terms = []
    for k in range(i + 1):
        c = (-1) ** (i + k) * (factorial(i + k) // (factorial(i - k) * factorial(k) ** 2))
        terms.append((c, k))
    return MonomialSeries(tuple(terms))


def monomial_form_chebyshev(i: int) -> MonomialSeries:
    """Exact monomial expansion of T_{1,i}.

    T_{1,i}(x) = i * sum_k (-1)^{i-k} (i+k-1)! 4^k / ((i-k)! (2k)!) x^k for
    i >= 1; T_{1,0} = 1.  Individual terms of the sum are not integers, so
    they are accumulated as exact rationals and verified integral.
    """
    i = _check_degree(i)
    if i == 0:
        return MonomialSeries(((1, 0),))
    terms = []
    for k in range(i + 1):
        c = (Fraction(i) * (-1) ** (i - k) * factorial(i + k - 1) * 4**k
             / (factorial(i - k) * factorial(2 * k)))
        if c.denominator != 1:
            raise AssertionError(f"non-integer Chebyshev monomial coefficient at i={i}, k={k}")
        terms.append((int(c), k))
    return MonomialSeries(tuple(terms))


def _check_coeffs(coeffs) -> np.ndarray:
    arr = np.asarray(coeffs, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("coefficient vector must be one-dimensional and non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite coefficient")
    return arr


@dataclass(frozen=True)
class LegendreSeries:
    """u(x) = sum_j coeffs[j] L_{1,j}(x) on [0, 1]."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _check_coeffs(self.coeffs))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, x):
        return eval_series(self, x)


@dataclass(frozen=True)
class ChebyshevSeries:
    """u(x) = sum_j coeffs[j] T_{1,j}(x) on [0, 1]."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _check_coeffs(self.coeffs))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, x):
        return eval_series(self, x)


def _clenshaw_legendre(coeffs: np.ndarray, t: np.ndarray) -> np.ndarray:
    n = coeffs.size - 1
    b1 = np.zeros(t.shape)
    b2 = np.zeros(t.shape)
    for k in range(n, -1, -1):
        b1, b2 = coeffs[k] + (2 * k + 1) / (k + 1) * t * b1 - (k + 1) / (k + 2) * b2, b1
    return b1


def _clenshaw_chebyshev(coeffs: np.ndarray, t: np.ndarray) -> np.ndarray:
    n = coeffs.size - 1
    if n == 0:
        return np.full(t.shape, coeffs[0])
    b1 = np.zeros(t.shape)
    b2 = np.zeros(t.shape)
    for k in range(n, 0, -1):
        b1, b2 = coeffs[k] + 2.0 * t * b1 - b2, b1
    return coeffs[0] + t * b1 - b2


def eval_series(series, x):
    """Evaluate a LegendreSeries or ChebyshevSeries by Clenshaw recursion."""
    x = _check_domain(x)
    t = 2.0 * x - 1.0
    if isinstance(series, LegendreSeries):
        out = _clenshaw_legendre(series.coeffs, t)
    elif isinstance(series, ChebyshevSeries):
        out = _clenshaw_chebyshev(series.coeffs, t)
    else:
        raise TypeError(f"expected LegendreSeries or ChebyshevSeries, got {type(series).__name__}")
    return float(out) if out.ndim == 0 else out
