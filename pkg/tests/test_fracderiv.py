"""Caputo derivatives and their shifted Legendre operational matrices.

The operational-matrix oracle here is deliberately independent of the
module under test: it expands each basis polynomial from its exact integer
monomial coefficients, differentiates term by term with the power rule
written out inline, and integrates against the basis with a Gauss rule made
exact by the substitution x = u^sigma (sigma chosen so every exponent in
the integrand becomes an integer)."""

import math

import mpmath
import numpy as np
import pytest

from cltau.fracderiv import (
    CaputoOrder,
    apply_operational,
    caputo_apply,
    caputo_power_rule,
    gamma,
    operational_matrix,
    single_sum_operational_matrix,
)
from cltau.orthopoly import MonomialSeries, monomial_form_legendre, shifted_legendre_table
from cltau.quadrature import legendre_gauss_rule

_SQRT_PI = math.sqrt(math.pi)


def test_gamma_against_mpmath():
    mpmath.mp.dps = 40
    xs = np.concatenate([np.linspace(0.05, 2.0, 40), np.linspace(2.0, 40.0, 77)])
    for x in xs:
        expected = float(mpmath.gamma(mpmath.mpf(float(x))))
        assert abs(gamma(float(x)) - expected) <= 1e-13 * abs(expected), f"x={x}"
    assert gamma(0.5) == pytest.approx(_SQRT_PI, rel=1e-15)
    assert gamma(5.0) == 24.0


def test_caputo_order_normalization():
    assert CaputoOrder(0.5).m == 1
    assert CaputoOrder(1.0).m == 1
    assert CaputoOrder(1.5).m == 2
    assert CaputoOrder(2.0).m == 2
    assert CaputoOrder(2.25).m == 3
    for bad in (0.0, -1.0, float("nan"), float("inf")):
        with pytest.raises(ValueError):
            CaputoOrder(bad)


def test_power_rule_classical_values():
    # D^(1/2) x = 2 sqrt(x / pi), the textbook half-derivative.
    coeff, expo = caputo_power_rule(1.0, 0.5)
    assert coeff == pytest.approx(2.0 / _SQRT_PI, rel=1e-15)
    assert expo == pytest.approx(0.5, abs=0)
    # D^alpha x^alpha = Gamma(alpha + 1), a constant.
    coeff, expo = caputo_power_rule(1.5, 1.5)
    assert coeff == pytest.approx(gamma(2.5), rel=1e-15)
    assert expo == 0.0
    # Integer order reduces to the classical derivative: D^2 x^5 = 20 x^3.
    coeff, expo = caputo_power_rule(5.0, 2.0)
    assert coeff == pytest.approx(20.0, rel=1e-15)
    assert expo == 3.0


def test_power_rule_annihilation_and_domain():
    # Integer powers below m vanish identically.
    assert caputo_power_rule(0.0, 0.5) == (0.0, 0.0)
    assert caputo_power_rule(0.0, 1.5) == (0.0, 0.0)
    assert caputo_power_rule(1.0, 1.5) == (0.0, 0.0)
    # Non-integer powers at or below m - 1 are outside the Caputo domain.
    with pytest.raises(ValueError):
        caputo_power_rule(0.5, 1.5)
    with pytest.raises(ValueError):
        caputo_power_rule(-0.5, 0.5)


def test_caputo_apply_drops_annihilated_terms():
    # D^(3/2) (8x + 3x^3) = 3 Gamma(4) / Gamma(5/2) x^(3/2) = (24 / sqrt(pi)) x^(3/2).
    series = MonomialSeries(((8.0, 1.0), (3.0, 3.0)))
    deriv = caputo_apply(series, 1.5)
    assert len(deriv.terms) == 1
    coeff, expo = deriv.terms[0]
    assert coeff == pytest.approx(24.0 / _SQRT_PI, rel=1e-14)
    assert expo == pytest.approx(1.5, abs=0)


def _oracle_matrix(alpha: float, n: int, sigma: int) -> np.ndarray:
    """(2j+1) int_0^1 D^alpha L_{1,i} L_{1,j} dx, all from first principles.

    After x = u^sigma every exponent sigma*(k - alpha) is an integer, so the
    integrand is a polynomial of degree <= sigma*(2n + 1) and the 64-point
    rule is exact with room to spare.  The derivative values are accumulated
    in mpmath because the monomial coefficients of L_{1,i} alternate and
    reach ~1e7 by i = 12, which costs float64 eight digits of cancellation.
    """
    m = math.ceil(alpha)
    entries = np.zeros((n + 1, n + 1))
    rule = legendre_gauss_rule(63, shifted=True)
    u, w = rule.nodes, rule.weights
    x = u ** sigma
    w = w * sigma * u ** (sigma - 1)
    basis = shifted_legendre_table(n, x)
    with mpmath.mp.workdps(40):
        a = mpmath.mpf(float(alpha))
        x_mp = [mpmath.mpf(float(up)) ** sigma for up in u]
        for i in range(m, n + 1):
            terms = [(q, k) for q, k in monomial_form_legendre(i).terms if k >= m]
            ratios = [mpmath.gamma(k + 1) / mpmath.gamma(k - a + 1) for _, k in terms]
            deriv = np.array([
                float(mpmath.fsum(q * r * xp ** (k - a)
                                  for (q, k), r in zip(terms, ratios)))
                for xp in x_mp])
            entries[i] = (2.0 * np.arange(n + 1) + 1.0) * ((w * deriv) @ basis.T)
    return entries


@pytest.mark.parametrize("alpha,sigma", [(0.25, 4), (0.5, 2), (0.75, 4), (1.5, 2), (2.5, 2)])
def test_operational_matrix_matches_first_principles_oracle(alpha, sigma):
    n = 12
    matrix = operational_matrix(alpha, n)
    oracle = _oracle_matrix(alpha, n, sigma)
    assert np.max(np.abs(matrix.entries - oracle)) <= 1e-9
    # Rows below m = ceil(alpha) are exactly zero, not merely small.
    m = math.ceil(alpha)
    assert np.all(matrix.entries[:m] == 0.0)
    assert matrix.m == m and matrix.n == n


def test_operational_matrix_integer_collapse():
    # alpha = 1: D L_1 = 2 L_0 and D L_2 = 6 L_1.
    first = operational_matrix(1.0, 2).entries
    assert np.allclose(first, [[0, 0, 0], [2, 0, 0], [0, 6, 0]], rtol=0, atol=1e-12)
    # alpha = 2: D^2 L_2 = 12 L_0 and D^2 L_3 = 60 L_1.
    second = operational_matrix(2.0, 3).entries
    expected = np.zeros((4, 4))
    expected[2, 0] = 12.0
    expected[3, 1] = 60.0
    assert np.allclose(second, expected, rtol=0, atol=1e-12)


def test_operational_matrix_half_order_known_entry():
    # D^(1/2) L_{1,1} = D^(1/2) (2x - 1) = (4 / sqrt pi) sqrt(x), whose L_0
    # coefficient is int_0^1 of it: 8 / (3 sqrt pi).
    matrix = operational_matrix(0.5, 2)
    assert matrix.entries[1, 0] == pytest.approx(8.0 / (3.0 * _SQRT_PI), rel=1e-13)


def test_operational_matrix_large_truncation_stays_finite():
    # The double sum cancels catastrophically in float64 by N ~ 20; the
    # extended-precision construction must stay bounded (entries grow like
    # the derivative norms, nothing worse) and keep the zero rows exact.
    matrix = operational_matrix(0.5, 32)
    assert np.all(np.isfinite(matrix.entries))
    assert np.all(matrix.entries[0] == 0.0)
    # Projection coefficients do not depend on the truncation, so the
    # top-left block must match the N = 12 oracle.
    oracle = _oracle_matrix(0.5, 12, 2)
    assert np.max(np.abs(matrix.entries[:13, :13] - oracle)) <= 1e-9


def test_apply_operational_projects_derivative():
    # y = 14x has Legendre coefficients (7, 7, 0, ...); apply_operational
    # must return the exact projection coefficients of D^(1/2) y =
    # (28 / sqrt pi) sqrt(x), whose closed form uses the beta integral
    # int x^(1/2) L_j = Gamma(3/2)^2 / (Gamma(3/2 - j) Gamma(j + 5/2)).
    n = 6
    matrix = operational_matrix(0.5, n)
    coeffs = np.zeros(n + 1)
    coeffs[0] = 7.0
    coeffs[1] = 7.0
    result = apply_operational(matrix, coeffs)
    g = math.gamma
    scale = 28.0 / _SQRT_PI
    for j in range(n + 1):
        expected = scale * (2 * j + 1) * g(1.5) ** 2 / (g(1.5 - j) * g(j + 2.5))
        assert result[j] == pytest.approx(expected, abs=1e-12)


def test_single_sum_printed_form_disagrees():
    # The closed-form single sum, transcribed as printed, is far from the
    # projection matrix; the corrected gamma placement reproduces it.  The
    # frozen magnitudes document how wrong the printed form is.
    for alpha, printed_dev in ((0.5, 1.58e3), (1.5, 3.59e4)):
        exact = operational_matrix(alpha, 8).entries
        printed = single_sum_operational_matrix(alpha, 8).entries
        corrected = single_sum_operational_matrix(alpha, 8, corrected=True).entries
        dev = np.max(np.abs(printed - exact))
        assert dev == pytest.approx(printed_dev, rel=0.01)
        assert np.max(np.abs(corrected - exact)) <= 1e-11


def test_single_sum_printed_value_spot_check():
    # Printed (1, 0) entry at alpha = 0.5 evaluates to 2.2568 where the
    # projection gives 8 / (3 sqrt pi) = 1.5045.
    printed = single_sum_operational_matrix(0.5, 2).entries
    assert printed[1, 0] == pytest.approx(2.2567583, rel=1e-6)
    assert operational_matrix(0.5, 2).entries[1, 0] == pytest.approx(1.5045055, rel=1e-6)


def test_operational_matrix_validation():
    with pytest.raises(ValueError):
        operational_matrix(-0.5, 4)
    with pytest.raises(ValueError):
        operational_matrix(0.5, -1)
