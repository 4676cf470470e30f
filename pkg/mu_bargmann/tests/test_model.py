import numpy as np
import orjson
import pytest
from hypothesis import given, settings, strategies as st
from pydantic import ValidationError

from mu_bargmann.common.errors import DomainError
from mu_bargmann.model import (
    BasisTag,
    CheckReport,
    ComplexPoly,
    DeformParams,
    FockCoeffs,
    ParityPair,
    QuadratureSpec,
    RegionQuery,
)

coefficient = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


@pytest.mark.parametrize("mu, lam", [(-0.1, 1.0), (0.0, 0.0), (1.0, -2.0), (float("nan"), 1.0)])
def test_deform_params_rejects_out_of_range(mu, lam):
    with pytest.raises(DomainError):
        DeformParams(mu, lam)


def test_deform_params_helpers():
    params = DeformParams(1, 2)

    assert params.as_dict() == {"mu": 1.0, "lambda": 2.0}
    assert params.unweighted() == DeformParams(1.0, 1.0)
    assert params.with_lambda(3.0).lam == 3.0
    assert hash(params) == hash(DeformParams(1.0, 2.0))


def test_complex_poly_trims_trailing_zeros():
    assert ComplexPoly((1, 0, 0)).coeffs == (1 + 0j,)
    assert ComplexPoly((0, 0)).is_zero
    assert ComplexPoly().degree == -1
    assert ComplexPoly.monomial(3, 2.0).coeffs == (0j, 0j, 0j, 2 + 0j)


def test_complex_poly_arithmetic_and_json():
    f = ComplexPoly((1, 2))
    g = ComplexPoly((0, 0, 1j))

    assert (f * g).coeffs == (0j, 0j, 1j, 2j)
    assert (f - f).is_zero
    assert (f + g)(1.0) == pytest.approx(3 + 1j)
    assert f.derivative().coeffs == (2 + 0j,)
    assert f.scale_argument(2.0).coeffs == (1 + 0j, 4 + 0j)
    assert f.reflect().coeffs == (1 + 0j, -2 + 0j)
    assert orjson.loads(g.to_json()) == [[0.0, 0.0], [0.0, 0.0], [0.0, 1.0]]
    assert ComplexPoly.from_json(g.to_json()) == g


@settings(max_examples=50, deadline=None)
@given(st.lists(coefficient, max_size=7), coefficient)
def test_parity_split_of_polynomials(coeffs, z):
    f = ComplexPoly(tuple(coeffs))
    pair = ParityPair(even=f.even_part(), odd=f.odd_part())

    assert pair.check_parity([z, 0.3 - 1.2j, 2.0])
    scale = sum(abs(a) * abs(z) ** n for n, a in enumerate(f.coeffs))
    assert complex(pair(z)) == pytest.approx(complex(f(z)), abs=1e-12 * (1.0 + scale))


def test_parity_pair_from_function():
    pair = ParityPair.from_function(np.exp)

    assert pair.check_parity(np.array([0.5, 1j, -1 + 2j]))
    assert pair.even(1.0) == pytest.approx(np.cosh(1.0))
    assert pair.odd(1.0) == pytest.approx(np.sinh(1.0))


def test_fock_coeffs_norm():
    c = FockCoeffs(BasisTag.XI, (0.6, 0.8j))

    assert c.basis is BasisTag.XI
    assert c.norm_sq() == pytest.approx(1.0)
    assert FockCoeffs.basis_vector("zeta", 2, DeformParams(0.5)).coeffs == (0, 0, 1)


def test_quadrature_spec_validation_and_refinement():
    with pytest.raises(ValidationError):
        QuadratureSpec(n_angular=30)
    with pytest.raises(ValidationError):
        QuadratureSpec(rel_tol=0)

    spec = QuadratureSpec.from_mapping({"r_max": 6.0, "unknown": 1})
    refined = spec.refined()
    tightened = spec.tightened(100)

    assert spec.r_max == 6.0
    assert refined.r_max == pytest.approx(9.0)
    assert refined.n_kernel_nodes == 2 * spec.n_kernel_nodes
    assert tightened.abs_tol == pytest.approx(spec.abs_tol / 100)


@pytest.mark.parametrize(
    "relation, lhs, rhs, quad_err, tolerance, passed",
    [
        ("le", 1.0, 2.0, 0.0, None, True),
        ("le", 2.0 + 1e-9, 2.0, 1e-8, None, True),
        ("le", 3.0, 2.0, 1e-8, None, False),
        ("eq", 1.0, 1.0 + 1e-9, 1e-8, None, True),
        ("eq", 1.0, 1.1, 1e-8, 1e-3, False),
        ("ne", 0.5, 1.0, 0.0, 1e-12, True),
        ("ne", 1.0, 1.0, 0.0, 1e-12, False),
    ],
)
def test_check_report_pass_rules(relation, lhs, rhs, quad_err, tolerance, passed):
    report = CheckReport.build("probe", {"mu": 1}, lhs, rhs, quad_err, relation=relation, tolerance=tolerance)

    assert report.passed is passed
    assert report.margin == pytest.approx(rhs - lhs)
    assert orjson.loads(report.to_json())["relation"] == relation


def test_region_query_accepts_lambda_alias():
    assert RegionQuery(p_inv=0.25, q_inv=0.4, **{"lambda": 2.0}).lam == 2.0
    with pytest.raises(ValidationError):
        RegionQuery(p_inv=1.0, q_inv=0.4, lam=2.0)
