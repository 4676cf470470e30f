import math

import numpy as np
import pytest
import sympy

from mu_bargmann.common.errors import DomainError
from mu_bargmann.model import BasisTag, ComplexPoly, DeformParams, FockCoeffs
from mu_bargmann.transform import (
    apply_B_poly,
    apply_B_quadrature,
    dilation_energy,
    dilation_T,
    dirichlet_energy,
    dunkl_D,
    energy_E_mu,
    fock_from_poly,
    fock_to_poly,
    gaussian_dilation_energy,
    ground_state_map,
    kernel_B,
    ladder_ops,
    monomial_image_exact,
    plane_norm_sq,
    rho_ratio_range,
    rho_remainder,
    xi_poly,
    zeta_poly,
)

LOG_SQRT2 = 0.5 * math.log(2.0)


def test_kernel_B_undeformed():
    params = DeformParams(0.0)

    assert complex(kernel_B(params, 1.0, 0.5)) == pytest.approx(math.exp(-0.5 + math.sqrt(2) / 2))
    assert complex(kernel_B(params, 1.0, 0.5, parity=1)) == pytest.approx(math.exp(-0.5) * math.cosh(math.sqrt(2) / 2))
    assert complex(kernel_B(params, 1.0, 0.5, parity=-1)) == pytest.approx(math.exp(-0.5) * math.sinh(math.sqrt(2) / 2))
    with pytest.raises(DomainError):
        kernel_B(params, 1.0, 0.5, parity=2)


def test_kernel_B_at_origin_is_one():
    assert complex(kernel_B(DeformParams(1.3), 0.0, 2.0)) == pytest.approx(1.0)


@pytest.mark.parametrize("mu", [0.0, 1.0])
def test_apply_B_quadrature_on_low_monomials(mu):
    params = DeformParams(mu)
    z = 0.7 + 0.4j

    constant = apply_B_quadrature(params, ComplexPoly((1,)), z)
    linear = apply_B_quadrature(params, ComplexPoly((0, 1)), z)
    quadratic = apply_B_quadrature(params, ComplexPoly((0, 0, 1)), z)

    assert constant.value == pytest.approx(1.0, abs=1e-8)
    assert linear.value == pytest.approx(z / math.sqrt(2), abs=1e-8)
    assert quadratic.value == pytest.approx(z**2 / 2 + (1 + 2 * mu) / 2, abs=1e-8)


def _disc_points(n: int, radius: float, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return radius * np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))


def test_apply_B_quadrature_agrees_with_closed_form():
    params = DeformParams(0.6)
    f = ComplexPoly((1, -2j, 0, 0.5))
    closed = apply_B_poly(params, f)

    for z in (0.3, -1.1 + 0.8j, 2j):
        assert apply_B_quadrature(params, f, z).value == pytest.approx(complex(closed(z)), abs=1e-8)


@pytest.mark.slow
@pytest.mark.parametrize("n", range(9))
@pytest.mark.parametrize("mu", [0.0, 1.0])
def test_apply_B_quadrature_on_monomials_over_disc(mu, n):
    params = DeformParams(mu)
    monomial = ComplexPoly.monomial(n)
    closed = apply_B_poly(params, monomial)

    for z in _disc_points(20, 2.0, seed=n):
        assert apply_B_quadrature(params, monomial, complex(z)).value == pytest.approx(
            complex(closed(z)), rel=1e-7, abs=1e-7
        )


def test_apply_B_poly_examples():
    assert apply_B_poly(DeformParams(1.0), ComplexPoly((0, 0, 1))).coeffs == pytest.approx((1.5, 0, 0.5))
    assert apply_B_poly(DeformParams(0.3), ComplexPoly((2,))).coeffs == (2 + 0j,)
    assert apply_B_poly(DeformParams(0.3), ComplexPoly()).is_zero
    image = apply_B_poly(DeformParams(0.3), ComplexPoly((0, 1, 0, 1)))
    assert image.degree == 3 and image.even_part().is_zero


def test_monomial_image_exact():
    assert monomial_image_exact(1, 2) == [sympy.Rational(3, 2), 0, sympy.Rational(1, 2)]
    assert monomial_image_exact(0, 1) == [0, sympy.sqrt(2) / 2]


@pytest.mark.parametrize("mu", [0.0, 0.5, 1.7])
def test_transform_maps_zeta_basis_to_xi_basis(mu):
    params = DeformParams(mu)

    for n in range(9):
        image = apply_B_poly(params, zeta_poly(params, n))
        expected = xi_poly(params, n)
        assert image.degree == n
        assert image.coeffs == pytest.approx(expected.coeffs, abs=1e-10)


def test_ground_state_map_round_trip():
    params = DeformParams(0.8)
    f = ComplexPoly((1, 2, 3))
    to_gs = ground_state_map(params, f, "to_gs")
    back = ground_state_map(params, to_gs, "from_gs")
    t = np.linspace(-3, 3, 7)

    np.testing.assert_allclose(back(t), f(t))
    assert complex(to_gs(0.0)) == pytest.approx(math.sqrt(math.gamma(1.3)))
    with pytest.raises(DomainError):
        ground_state_map(params, f, "sideways")


def test_dilation_T():
    params = DeformParams(1.0, 2.0)
    f = ComplexPoly((1, 0, 0, 1))

    assert dilation_T(1.0, f) == f
    assert dilation_T(4.0, f).coeffs == (1 + 0j, 0j, 0j, 8 + 0j)
    chi_2 = fock_to_poly(FockCoeffs.basis_vector(BasisTag.CHI, 2, params))
    assert dilation_T(2.0, xi_poly(params, 2)).coeffs == pytest.approx(chi_2.coeffs)
    with pytest.raises(DomainError):
        dilation_T(0.0, f)


def test_dilation_is_isometric_onto_weighted_space():
    f = ComplexPoly((1, 0, 0, 1))
    unweighted = plane_norm_sq(DeformParams(1.0), f)
    weighted = plane_norm_sq(DeformParams(1.0, 2.0), dilation_T(2.0, f))

    # 1 + gamma_1(3) = 31
    assert unweighted.value == pytest.approx(31.0, rel=1e-8)
    assert weighted.value == pytest.approx(unweighted.value, rel=1e-8)


def test_dunkl_D():
    params = DeformParams(1.0)

    assert dunkl_D(params, ComplexPoly((5,))).is_zero
    assert dunkl_D(params, ComplexPoly((0, 1))).coeffs == (3 + 0j,)
    assert dunkl_D(params, ComplexPoly((0, 0, 1))).coeffs == (0j, 2 + 0j)
    assert dunkl_D(params, ComplexPoly((0, 0, 0, 1))).coeffs == (0j, 0j, 5 + 0j)
    assert dunkl_D(DeformParams(0.0), ComplexPoly((1, 1, 1))) == ComplexPoly((1, 2))


def test_ladder_operators_float():
    params = DeformParams(1.0)
    vacuum = FockCoeffs(BasisTag.XI, (1.0,), params)

    assert ladder_ops(params, vacuum, "create").coeffs == pytest.approx((0, math.sqrt(3)))
    assert ladder_ops(params, vacuum, "annihilate").coeffs == ()
    first = FockCoeffs(BasisTag.ZETA, (0.0, 1.0), params)
    assert ladder_ops(params, first, "annihilate").coeffs == pytest.approx((math.sqrt(3),))
    assert ladder_ops(params, FockCoeffs(BasisTag.XI, (1.0, 1.0, 1.0), params), "number").coeffs == (0, 3, 2)


def test_number_operator_is_create_after_annihilate_exactly():
    params = DeformParams(1.0)
    c = FockCoeffs(BasisTag.XI, (sympy.Integer(1), sympy.Rational(1, 2), sympy.Integer(2)), params)

    composed = ladder_ops(params, ladder_ops(params, c, "annihilate"), "create")
    number = ladder_ops(params, c, "number")

    assert composed.coeffs == number.coeffs
    assert number.coeffs == (0, sympy.Rational(3, 2), 4)


def test_ladder_operator_errors():
    params = DeformParams(1.0, 2.0)

    with pytest.raises(DomainError):
        ladder_ops(params, FockCoeffs(BasisTag.CHI, (1.0,), params), "create")
    with pytest.raises(DomainError):
        ladder_ops(params, FockCoeffs(BasisTag.XI, (1.0,), params), "lower")


def test_fock_from_poly():
    params = DeformParams(0.4)

    zeta = fock_from_poly(zeta_poly(params, 3), BasisTag.ZETA, params)
    assert [complex(a) for a in zeta.coeffs] == pytest.approx([0, 0, 0, 1], abs=1e-12)

    weighted = DeformParams(0.4, 3.0)
    chi = FockCoeffs(BasisTag.CHI, (0.5, 0, 2j), weighted)
    back = fock_from_poly(fock_to_poly(chi), BasisTag.CHI, weighted)
    assert [complex(a) for a in back.coeffs] == pytest.approx([0.5, 0, 2j])


def test_dirichlet_energy():
    assert dirichlet_energy(DeformParams(1.0), FockCoeffs(BasisTag.XI, (1.0,))) == 0.0
    assert dirichlet_energy(DeformParams(1.0), FockCoeffs(BasisTag.XI, (1.0, 1.0))) == pytest.approx(3.0)
    assert dirichlet_energy(DeformParams(0.0), FockCoeffs(BasisTag.ZETA, (0, math.sqrt(0.5)))) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        dirichlet_energy(DeformParams(0.0), FockCoeffs(BasisTag.CHI, (1.0,)))


def test_energy_E_mu():
    params = DeformParams(0.0, 5.0)

    assert energy_E_mu(params, ComplexPoly((1,))).value == pytest.approx(1.0, rel=1e-8)
    assert energy_E_mu(params, ComplexPoly((0, 1))).value == pytest.approx(2.0, rel=1e-8)
    assert energy_E_mu(params, ComplexPoly()).value == 0.0


def test_dilation_energy_undeformed_closed_forms():
    params = DeformParams(0.0, 2.0)

    assert dilation_energy(params.with_lambda(1.0), ComplexPoly((1,))) == (0.0, 0.0)
    assert dilation_energy(params, ComplexPoly((1,))).value == pytest.approx(LOG_SQRT2 + 1, rel=1e-8)
    assert dilation_energy(params, ComplexPoly((0, 1))).value == pytest.approx(LOG_SQRT2 + 2, rel=1e-8)
    assert LOG_SQRT2 + 1 == pytest.approx(1.3465736, abs=1e-7)


def test_dilation_energy_matches_gaussian_closed_form():
    params = DeformParams(0.0, 3.0)
    f = ComplexPoly((1, 2, 1j))
    c = fock_from_poly(f, BasisTag.XI, params)

    assert dilation_energy(params, f).value == pytest.approx(gaussian_dilation_energy(3.0, c), rel=1e-8)


def test_dilation_energy_rejects_small_lambda():
    with pytest.raises(DomainError):
        dilation_energy(DeformParams(1.0, 0.5), ComplexPoly((1,)))
    with pytest.raises(DomainError):
        gaussian_dilation_energy(2.0, FockCoeffs(BasisTag.XI, (1.0,), DeformParams(1.0)))


def test_rho_vanishes_without_deformation():
    params = DeformParams(0.0, 2.5)

    assert rho_remainder(params, ComplexPoly((1, 1, 0.5))).value == pytest.approx(0.0, abs=1e-7)
    assert rho_remainder(params, ComplexPoly()) == (0.0, 0.0)


def test_rho_is_quadratic():
    params = DeformParams(0.7, 2.0)
    f = ComplexPoly((1, 0.5j, 0, 0.2))

    single = rho_remainder(params, f).value
    double = rho_remainder(params, f * 2.0).value

    assert double == pytest.approx(4 * single, rel=1e-7, abs=1e-9)


def test_rho_ratio_range():
    family = [ComplexPoly((1,)), ComplexPoly((0, 1)), ComplexPoly(), ComplexPoly((1, 0, 1))]
    low, high = rho_ratio_range(DeformParams(0.0, 2.0), family)

    assert low <= high
    assert low == pytest.approx(0.0, abs=1e-7) and high == pytest.approx(0.0, abs=1e-7)
    with pytest.raises(DomainError):
        rho_ratio_range(DeformParams(0.0, 2.0), [ComplexPoly()])
    with pytest.raises(DomainError):
        rho_remainder(DeformParams(1.0, 1.0), ComplexPoly((1,)))
