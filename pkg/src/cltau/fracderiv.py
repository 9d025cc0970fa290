"""Caputo fractional derivatives of monomials and the shifted-Legendre
operational matrix.

The power rule is exact: D^a x^b = Gamma(b+1)/Gamma(b-a+1) x^{b-a}, with
integer powers below m = ceil(a) annihilated.  The operational matrix
projects D^a applied to each shifted Legendre polynomial back onto the
basis.  Its closed double sum mixes factorially large integer coefficients
with gamma ratios and cancels catastrophically in float64 once the
truncation degree grows past ~20, so the entries are accumulated in mpmath
extended precision (exact integer monomial coefficients, working precision
scaled with the truncation) and rounded to float64 once at the end.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .orthopoly import MonomialSeries, monomial_form_legendre

__all__ = [
    "gamma",
    "CaputoOrder",
    "caputo_power_rule",
    "caputo_apply",
    "OperationalMatrix",
    "operational_matrix",
    "single_sum_operational_matrix",
    "apply_operational",
]


def gamma(x: float) -> float:
    """Gamma function for real arguments (poles at 0, -1, -2, ... rejected).

    Relative error is below 1e-13 on (0, 40], which is the budget the
    fractional calculus here needs; the expression evaluator shares this
    routine.
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"gamma argument must be finite, got {x!r}")
    if x <= 0 and x == int(x):
        raise ValueError(f"gamma pole at non-positive integer {x!r}")
    return math.gamma(x)


@dataclass(frozen=True)
class CaputoOrder:
    """Fractional order alpha > 0 with m = ceil(alpha), so m - 1 < alpha <= m."""

    alpha: float
    m: int = 0  # derived; any passed value is overwritten

    def __post_init__(self):
        alpha = float(self.alpha)
        if not math.isfinite(alpha) or alpha <= 0:
            raise ValueError(f"Caputo order must be finite and positive, got {self.alpha!r}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "m", math.ceil(alpha))


def _as_order(order) -> CaputoOrder:
    if isinstance(order, CaputoOrder):
        return order
    return CaputoOrder(float(order))


def caputo_power_rule(beta: float, order) -> tuple[float, float]:
    """(coefficient, exponent) of D^alpha x^beta.

    Integer beta below m is annihilated, returned as (0.0, 0.0).  Non-integer
    beta must satisfy beta > m - 1 (below that the Caputo integral of the
    m-th derivative diverges at 0).
    """
    order = _as_order(order)
    beta = float(beta)
    if not math.isfinite(beta) or beta < 0:
        raise ValueError(f"exponent must be finite and non-negative, got {beta!r}")
    if beta == int(beta):
        if beta < order.m:
            return (0.0, 0.0)
    elif beta <= order.m - 1:
        raise ValueError(
            f"non-integer exponent {beta!r} must exceed m - 1 = {order.m - 1} "
            f"for Caputo order {order.alpha!r}")
    return (gamma(beta + 1.0) / gamma(beta - order.alpha + 1.0), beta - order.alpha)


def caputo_apply(series: MonomialSeries, order) -> MonomialSeries:
    """Termwise Caputo derivative of a monomial series (vanishing terms dropped)."""
    order = _as_order(order)
    out = []
    for q, p in series.terms:
        coeff, expo = caputo_power_rule(p, order)
        if coeff != 0.0 and q != 0:
            out.append((float(q) * coeff, expo))
    return MonomialSeries(tuple(out))


@dataclass(frozen=True)
class OperationalMatrix:
    """entries[i, j]: coefficient of L_{1,j} in the projection of D^alpha L_{1,i}.

    Row i of `entries` expands the derivative of basis element i, so
    coefficient vectors transform by entries.T (see apply_operational).
    The first m rows are exactly zero.
    """

    alpha: float
    m: int
    n: int
    entries: np.ndarray


def _exact_legendre_coeffs(i: int) -> list[int]:
    return [int(q) for q, _ in monomial_form_legendre(i).terms]


@lru_cache(maxsize=None)
def _operational_entries(alpha: float, n: int) -> np.ndarray:
    """Exact projection S(i,j) = (2j+1) sum_k c_ik G(k) sum_l c_jl/(k+l-alpha+1)."""
    m = math.ceil(alpha)
    coeffs = [_exact_legendre_coeffs(i) for i in range(n + 1)]
    entries = np.zeros((n + 1, n + 1))
    with mpmath.mp.workdps(30 + (3 * n) // 2):
        a = mpmath.mpf(alpha)
        grow = {k: mpmath.gamma(k + 1) / mpmath.gamma(k - a + 1) for k in range(m, n + 1)}
        inner = {}
        for k in range(m, n + 1):
            for j in range(n + 1):
                inner[k, j] = mpmath.fsum(
                    coeffs[j][l] / (k + l - a + 1) for l in range(j + 1))
        for i in range(m, n + 1):
            for j in range(n + 1):
                entries[i, j] = float((2 * j + 1) * mpmath.fsum(
                    coeffs[i][k] * grow[k] * inner[k, j] for k in range(m, i + 1)))
    entries.flags.writeable = False
    return entries


def operational_matrix(order, n: int) -> OperationalMatrix:
    """Operational matrix of D^alpha on shifted Legendre coefficients, degree <= n.

    `order` is a CaputoOrder, a positive real, or a non-negative integer;
    integer orders reproduce exact differentiation matrices and order 0 is
    the identity by convention.
    """
    if n != int(n) or n < 0:
        raise ValueError(f"truncation degree must be a non-negative integer, got {n!r}")
    n = int(n)
    if not isinstance(order, CaputoOrder) and float(order) == 0.0:
        eye = np.eye(n + 1)
        eye.flags.writeable = False
        return OperationalMatrix(alpha=0.0, m=0, n=n, entries=eye)
    order = _as_order(order)
    return OperationalMatrix(alpha=order.alpha, m=order.m, n=n,
                             entries=_operational_entries(order.alpha, n))


def single_sum_operational_matrix(order, n: int, corrected: bool = False) -> OperationalMatrix:
    """Debug-only single-sum closed forms of the operational matrix.

    With corrected=False this is the naive arrangement

        S(i,j) = sum_k (-1)^{i+k} (2j+1) (i+k)! Gamma(k-j-a+1)
                 / ((i-k)! k! Gamma(k-a+1) Gamma(k+j-a+1)),

    retained purely as a reference: it does NOT reproduce the exact
    projection (measured max deviation 1.58e3 at alpha=0.5 and 3.59e4 at
    alpha=1.5, both at n=8; e.g. entry (1,0) comes out 2.2568 where the
    projection gives 8/(3 sqrt(pi)) = 1.5045).  With corrected=True the
    gamma factors are transposed per the moment identity
    int_0^1 x^mu L_{1,j} dx = Gamma(mu+1)^2 / (Gamma(mu-j+1) Gamma(mu+j+2)):

        S(i,j) = sum_k (-1)^{i+k} (2j+1) (i+k)! Gamma(k-a+1)
                 / ((i-k)! k! Gamma(k-j-a+1) Gamma(k+j-a+2)),

    which agrees with operational_matrix to 1e-12.  Only non-integer orders
    are accepted (integer orders put gamma poles in both forms).
    """
    order = _as_order(order)
    if n != int(n) or n < 0:
        raise ValueError(f"truncation degree must be a non-negative integer, got {n!r}")
    n = int(n)
    if float(order.alpha) == int(order.alpha):
        raise ValueError("single-sum forms are defined for non-integer orders only")
    m = order.m
    entries = np.zeros((n + 1, n + 1))
    with mpmath.mp.workdps(60):
        a = mpmath.mpf(order.alpha)
        for i in range(m, n + 1):
            for j in range(n + 1):
                total = mpmath.mpf(0)
                for k in range(m, i + 1):
                    lead = ((-1) ** (i + k) * (2 * j + 1) * mpmath.factorial(i + k)
                            / (mpmath.factorial(i - k) * mpmath.factorial(k)))
                    if corrected:
                        term = lead * mpmath.gamma(k - a + 1) / (
                            mpmath.gamma(k - j - a + 1) * mpmath.gamma(k + j - a + 2))
                    else:
                        term = lead * mpmath.gamma(k - j - a + 1) / (
                            mpmath.gamma(k - a + 1) * mpmath.gamma(k + j - a + 1))
                    total += term
                entries[i, j] = float(total)
    entries.flags.writeable = False
    return OperationalMatrix(alpha=order.alpha, m=m, n=n, entries=entries)


def apply_operational(matrix: OperationalMatrix, coeffs) -> np.ndarray:
    """Map Legendre coefficients of y to those of the projected D^alpha y."""
    c = np.asarray(coeffs, dtype=float)
    if c.shape != (matrix.n + 1,):
        raise ValueError(
            f"coefficient vector of length {c.size} does not match truncation {matrix.n}")
    return matrix.entries.T @ c
