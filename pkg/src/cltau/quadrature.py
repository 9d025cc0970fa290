"""Chebyshev-Gauss and Legendre-Gauss quadrature rules.

Chebyshev-Gauss nodes and weights are closed-form.  Legendre-Gauss nodes are
computed by Newton iteration on the Legendre recurrence from the classical
cosine initial guesses, then symmetrized; this is cheap and accurate for the
rule sizes a spectral solver on [0, 1] ever needs.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .orthopoly import shifted_legendre_table

__all__ = [
    "QuadratureRule",
    "chebyshev_gauss_rule",
    "legendre_gauss_rule",
    "integrate",
    "project_legendre",
]

_NEWTON_TOL = 1e-15
_NEWTON_MAX_ITERS = 100


@dataclass(frozen=True)
class QuadratureRule:
    """An (N+1)-point rule: family name, domain, strictly increasing nodes, positive weights."""

    family: str
    domain: tuple[float, float]
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.ndim != 1 or nodes.shape != weights.shape:
            raise ValueError("nodes and weights must be 1-d arrays of equal length")
        lo, hi = self.domain
        if np.any(nodes <= lo) or np.any(nodes >= hi):
            raise ValueError("quadrature nodes must lie strictly inside the domain")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("quadrature nodes must be strictly increasing")
        if np.any(weights <= 0):
            raise ValueError("quadrature weights must be positive")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def npoints(self) -> int:
        return self.nodes.size


def _check_rule_index(n: int) -> int:
    if n != int(n) or n < 0:
        raise ValueError(f"rule index must be a non-negative integer, got {n!r}")
    return int(n)


@lru_cache(maxsize=None)
def chebyshev_gauss_rule(n: int, shifted: bool = False) -> QuadratureRule:
    """(n+1)-point Chebyshev-Gauss rule for the weight (1-x^2)^(-1/2).

    Nodes x_j = -cos((2j+1)pi/(2n+2)), constant weights pi/(n+1); exact for
    polynomials of degree <= 2n+1 against the weight.  With shifted=True the
    rule lives on (0, 1) with weight (x - x^2)^(-1/2) (same weights).
    """
    n = _check_rule_index(n)
    j = np.arange(n + 1)
    nodes = -np.cos((2 * j + 1) * np.pi / (2 * n + 2))
    nodes = (nodes - nodes[::-1]) / 2.0  # enforce exact antisymmetry (exact 0 mid-node)
    weights = np.full(n + 1, np.pi / (n + 1))
    if shifted:
        rule = QuadratureRule("chebyshev_gauss", (0.0, 1.0), (nodes + 1.0) / 2.0, weights)
    else:
        rule = QuadratureRule("chebyshev_gauss", (-1.0, 1.0), nodes, weights)
    rule.nodes.flags.writeable = False
    rule.weights.flags.writeable = False
    return rule


def _legendre_and_derivative(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """P_n(x) and P_n'(x) for |x| < 1 by recurrence."""
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(1, n):
        p, p_prev = ((2 * k + 1) * x * p - k * p_prev) / (k + 1), p
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


@lru_cache(maxsize=None)
def legendre_gauss_rule(n: int, shifted: bool = False) -> QuadratureRule:
    """(n+1)-point Legendre-Gauss rule: nodes are the roots of P_{n+1}.

    Newton iteration from the initial guesses cos(pi(4j+3)/(4n+6)) with
    update tolerance 1e-15, then the symmetrization x_j <- (x_j - x_{n-j})/2
    to remove the last-bit asymmetry.  Weights 2/((1-x^2) P'_{n+1}(x)^2).
    Exact for polynomials of degree <= 2n+1.  With shifted=True the rule is
    mapped to (0, 1) (weights halved).
    """
    n = _check_rule_index(n)
    m = n + 1
    j = np.arange(m)
    x = np.cos(np.pi * (4 * j + 3) / (4 * n + 6))
    for _ in range(_NEWTON_MAX_ITERS):
        p, dp = _legendre_and_derivative(m, x)
        dx = p / dp
        x -= dx
        if np.max(np.abs(dx)) <= _NEWTON_TOL:
            break
    else:
        raise RuntimeError(f"Legendre-Gauss Newton iteration failed to converge for n={n}")
    x = (x - x[::-1]) / 2.0
    _, dp = _legendre_and_derivative(m, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    x, w = x[order], w[order]
    if shifted:
        rule = QuadratureRule("legendre_gauss", (0.0, 1.0), (x + 1.0) / 2.0, w / 2.0)
    else:
        rule = QuadratureRule("legendre_gauss", (-1.0, 1.0), x, w)
    rule.nodes.flags.writeable = False
    rule.weights.flags.writeable = False
    return rule


def integrate(rule: QuadratureRule, f) -> float:
    """sum_j w_j f(x_j).  Raises if f produces non-finite values on the nodes."""
    values = np.asarray([f(float(x)) for x in rule.nodes], dtype=float)
    if not np.all(np.isfinite(values)):
        bad = rule.nodes[~np.isfinite(values)][0]
        raise ValueError(f"integrand is not finite at node x={bad!r}")
    return float(np.dot(rule.weights, values))


def project_legendre(f, n: int, m: int | None = None) -> np.ndarray:
    """Shifted-Legendre coefficients a_j = (2j+1) int_0^1 f L_{1,j} dx, j <= n.

    The integrals use the (m+1)-point shifted Legendre-Gauss rule,
    m = n + 16 by default; exact whenever f is a polynomial of degree
    <= 2m + 1 - n.
    """
    n = _check_rule_index(n)
    if m is None:
        m = n + 16
    if m < n:
        raise ValueError(f"quadrature resolution m={m} must be >= n={n}")
    rule = legendre_gauss_rule(int(m), shifted=True)
    values = np.asarray([f(float(x)) for x in rule.nodes], dtype=float)
    if not np.all(np.isfinite(values)):
        raise ValueError("function is not finite on the projection nodes")
    table = shifted_legendre_table(n, rule.nodes)
    scale = 2.0 * np.arange(n + 1) + 1.0
    return scale * (table @ (rule.weights * values))
