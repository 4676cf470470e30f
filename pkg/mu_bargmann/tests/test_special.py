import math

import mpmath
import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from scipy import special as sc

from mu_bargmann.common.errors import DomainError, NumericalOverflow
from mu_bargmann.model import DeformParams
from mu_bargmann.special import (
    e_mu,
    e_mu_integral,
    e_mu_parts,
    e_mu_series,
    gamma_mu,
    hermite_generating_coeffs,
    hermite_mu,
    hermite_mu_exact,
    log_abs_e_mu_parts,
    log_gamma_mu,
    log_macdonald_ratio,
    macdonald_k,
    macdonald_k_asymptotic,
    macdonald_k_oracle,
    macdonald_k_small,
)

COMPLEX_SAMPLE = (0.5, -1.2, 1 + 1j, -0.7 + 2j, 2.5j, 3 - 0.5j, -2.2 - 1.1j, 0.1 + 0.05j)


@pytest.mark.parametrize("mu, n, expected", [(0.0, 4, 24.0), (0.7, 0, 1.0), (1.0, 3, 30.0), (0.5, 2, 4.0)])
def test_gamma_mu(mu, n, expected):
    assert gamma_mu(DeformParams(mu), n) == expected


def test_gamma_mu_errors():
    with pytest.raises(DomainError):
        gamma_mu(DeformParams(1.0), -1)
    with pytest.raises(NumericalOverflow):
        gamma_mu(DeformParams(0.0), 200)


@settings(max_examples=60, deadline=None)
@given(st.floats(0, 5), st.integers(0, 60))
def test_gamma_mu_dominates_factorial(mu, n):
    assert gamma_mu(DeformParams(mu), n) >= math.factorial(n) * (1 - 1e-15)


def test_log_gamma_mu_matches_recursion():
    params = DeformParams(0.7)
    n = np.arange(25)
    expected = [math.log(gamma_mu(params, int(k))) for k in n]

    np.testing.assert_allclose(log_gamma_mu(params, n), expected, rtol=1e-12, atol=1e-12)


def test_e_mu_series_reduces_to_exp():
    assert complex(e_mu_series(DeformParams(0.0), 1.0)) == pytest.approx(math.e, rel=1e-14)
    assert complex(e_mu_series(DeformParams(2.3), 0.0)) == 1.0


@pytest.mark.parametrize("mu", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("z", COMPLEX_SAMPLE)
def test_e_mu_series_matches_integral_representation(mu, z):
    params = DeformParams(mu)
    oracle = e_mu_integral(params, z)

    assert complex(e_mu_series(params, z)) == pytest.approx(oracle.value, rel=1e-10, abs=1e-12)


def test_e_mu_integral_edge_cases():
    assert e_mu_integral(DeformParams(1.0), 0.0).value == pytest.approx(1.0, abs=1e-13)
    positive = e_mu_integral(DeformParams(0.5), 2.0).value
    assert positive.real > 0 and abs(positive.imag) < 1e-14
    with pytest.raises(DomainError):
        e_mu_integral(DeformParams(0.0), 1.0)


@pytest.mark.parametrize("mu", [0.0, 0.3, 1.5])
@pytest.mark.parametrize("z", [3.5, -4.0 + 1j, 2j + 2.5, -6.0])
def test_e_mu_bessel_branch_matches_series(mu, z):
    params = DeformParams(mu)
    even, odd = e_mu_parts(params, z)

    assert complex(e_mu(params, z)) == pytest.approx(complex(e_mu_series(params, z)), rel=1e-10)
    assert complex(even) == pytest.approx(complex(e_mu(params, z) + e_mu(params, -z)) / 2, rel=1e-10)
    assert complex(odd) == pytest.approx(complex(e_mu(params, z) - e_mu(params, -z)) / 2, rel=1e-10)


def test_log_abs_e_mu_parts_survives_overflow():
    params = DeformParams(0.5)
    log_even, log_odd = log_abs_e_mu_parts(params, np.array([1.0, 900.0]))
    even, odd = e_mu_parts(params, 1.0)

    assert log_even[0] == pytest.approx(math.log(abs(even)))
    assert log_odd[0] == pytest.approx(math.log(abs(odd)))
    assert log_even[1] == pytest.approx(float(mpmath.log(mpmath.besseli(0, 900))), rel=1e-12)
    assert log_odd[1] == pytest.approx(float(mpmath.log(mpmath.besseli(1, 900))), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.floats(0, 3), st.floats(0, 20))
def test_e_mu_bounded_by_exp_on_positive_axis(mu, x):
    assert complex(e_mu_series(DeformParams(mu), x)).real <= math.exp(x) * (1 + 1e-12)


@settings(max_examples=500, deadline=None)
@given(
    st.floats(0, 3),
    st.floats(1, 4),
    st.floats(-2, 3),
    st.floats(-2, 2),
)
def test_modulus_power_bound(mu, q, x, y):
    params = DeformParams(mu)
    z = complex(x, y)
    lhs = abs(complex(e_mu(params, z))) ** q
    rhs = complex(e_mu(params, q * x)).real

    assert lhs <= rhs * (1 + 1e-10) + 1e-10
    if mu == 0:
        assert lhs == pytest.approx(rhs, rel=1e-12)


@pytest.mark.parametrize("mu", [0.0, 0.5, 1.0, 2.3])
def test_hermite_low_degrees(mu):
    params = DeformParams(mu)

    assert hermite_mu(params, 0).coeffs == (1 + 0j,)
    assert hermite_mu(params, 1).coeffs == pytest.approx((0, 2 / (1 + 2 * mu)))
    assert hermite_mu(params, 2).coeffs == pytest.approx((-2, 0, 4 / (1 + 2 * mu)))
    assert hermite_mu(params, 7).degree == 7


@pytest.mark.parametrize("mu", [sympy.Rational(1, 2), sympy.Integer(1), sympy.Rational(3, 4)])
def test_hermite_matches_generating_function(mu):
    order = 6
    rows = hermite_generating_coeffs(mu, order)

    for n in range(order + 1):
        expected = [c / sympy.factorial(n) for c in hermite_mu_exact(mu, n)]
        assert [sympy.simplify(a - b) for a, b in zip(rows[n], expected)] == [0] * (n + 1)


def test_hermite_float_matches_exact():
    exact = hermite_mu_exact(sympy.Rational(3, 10), 9)
    approx = hermite_mu(DeformParams(0.3), 9).coeffs

    assert [complex(a) for a in approx] == pytest.approx([complex(float(c)) for c in exact], rel=1e-12)


def test_macdonald_half_order_closed_form():
    closed = math.sqrt(math.pi / 2) * math.exp(-1)

    assert macdonald_k(0.5, 1.0) == pytest.approx(closed, rel=1e-12)
    assert macdonald_k(0.5, 1.0, method="series") == pytest.approx(closed, rel=1e-10)
    assert macdonald_k_oracle(0.5, 1.0) == pytest.approx(closed, rel=1e-9)


def test_macdonald_is_even_in_order():
    assert macdonald_k(-0.7, 2.0) == pytest.approx(macdonald_k(0.7, 2.0), rel=1e-14)
    assert macdonald_k(-0.7, 2.0, method="series") == pytest.approx(macdonald_k(0.7, 2.0), rel=1e-10)


def test_macdonald_small_argument():
    # the correction to log(2/x) - euler_gamma is of order x^2 log x
    assert macdonald_k(0.0, 1e-4) == pytest.approx(macdonald_k_small(0.0, 1e-4), rel=1e-6)
    assert macdonald_k(0.0, 1e-30) == pytest.approx(math.log(2 / 1e-30), rel=1e-2)
    assert macdonald_k(2.5, 1e-3) == pytest.approx(macdonald_k_small(2.5, 1e-3), rel=1e-4)


@pytest.mark.parametrize("alpha", [0.0, 0.3, 0.5, 1.5, 3.0])
@pytest.mark.parametrize("x", list(np.geomspace(1e-3, 30, 9)))
def test_macdonald_against_integral_representation(alpha, x):
    oracle = macdonald_k_oracle(alpha, float(x))

    assert macdonald_k(alpha, x) == pytest.approx(oracle, rel=1e-8)
    assert oracle == pytest.approx(float(mpmath.besselk(alpha, x)), rel=1e-9)


@pytest.mark.parametrize("alpha", [0.3, 1.0, 2.0])
@pytest.mark.parametrize("x", [0.05, 1.0, 5.0])
def test_macdonald_series_path(alpha, x):
    assert macdonald_k(alpha, x, method="series") == pytest.approx(float(mpmath.besselk(alpha, x)), rel=1e-6)


@pytest.mark.parametrize("alpha, x", [(0.3, 2.0), (0.3, 12.0), (1.5, 20.0), (0.5, 9.0)])
def test_macdonald_switchover(alpha, x):
    assert macdonald_k(alpha, x, method="switchover") == pytest.approx(sc.kv(alpha, x), rel=1e-7)


def test_macdonald_monotone_and_positive():
    x = np.geomspace(1e-3, 40, 200)
    for alpha in (0.0, 0.7, 2.0):
        values = macdonald_k(alpha, x)
        assert np.all(values > 0)
        assert np.all(np.diff(values) < 0)


def test_macdonald_rejects_non_positive_argument():
    with pytest.raises(DomainError):
        macdonald_k(0.5, 0.0)
    with pytest.raises(DomainError):
        macdonald_k(0.5, np.array([1.0, -2.0]))
    with pytest.raises(DomainError):
        macdonald_k(0.5, 1.0, method="chebyshev")
    with pytest.raises(DomainError):
        macdonald_k_oracle(0.5, -1.0)


def test_macdonald_asymptotic():
    value, bound = macdonald_k_asymptotic(0.5, 5.0, n_terms=0)
    assert value == pytest.approx(math.sqrt(math.pi / 10) * math.exp(-5), rel=1e-15)
    assert bound == 0.0

    value, bound = macdonald_k_asymptotic(1.5, 20.0)
    assert abs(value - macdonald_k_oracle(1.5, 20.0)) <= bound + 1e-11 * value

    value, bound = macdonald_k_asymptotic(2.0, 10.0)
    assert value == pytest.approx(macdonald_k_oracle(2.0, 10.0), rel=1e-2)
    assert abs(value - sc.kv(2.0, 10.0)) <= bound

    leading = math.sqrt(math.pi / 100) * math.exp(-50)
    assert macdonald_k(0.0, 50.0) / leading == pytest.approx(1.0, abs=3e-3)

    with pytest.raises(DomainError):
        macdonald_k_asymptotic(-0.6, 1.0)
    with pytest.raises(DomainError):
        macdonald_k_asymptotic(4.0, 1.0, n_terms=1)


def test_log_macdonald_ratio():
    assert log_macdonald_ratio(0.7, 1.0, 2.0) == pytest.approx(math.log(sc.kv(0.7, 1.0) / sc.kv(0.7, 2.0)))
    assert log_macdonald_ratio(0.7, 400.0, 3.0) == pytest.approx(
        float(mpmath.log(mpmath.besselk(0.7, 400) / mpmath.besselk(0.7, 1200))), rel=1e-10
    )
    assert log_macdonald_ratio(-1.5, 0.0, 2.0) == pytest.approx(1.5 * math.log(2.0))
    assert log_macdonald_ratio(0.0, 0.0, 2.0) == 0.0
    assert log_macdonald_ratio(0.7, 1e-60, 2.0) == pytest.approx(0.7 * math.log(2.0), rel=1e-8)
    with pytest.raises(DomainError):
        log_macdonald_ratio(0.7, -1.0, 2.0)
