import math

import numpy as np
import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from mu_bargmann.common.errors import DomainError
from mu_bargmann.constants import DEFAULT_ADMISSIBLE_SAMPLE, GRAM_TOL
from mu_bargmann.inequality import (
    check_eq_3_3,
    check_gram,
    check_hausdorff_young,
    check_hirschman,
    check_isometry,
    check_lemma_2_1,
    check_log_sobolev,
    check_masses,
    check_unitarity_lambda,
    check_weighted_hy,
    lambda_threshold,
    region_boundary_csv,
    region_holds,
)
from mu_bargmann.model import BasisTag, ComplexPoly, DeformParams, FockCoeffs, RegionQuery
from mu_bargmann.suites import default_family

ONE = ComplexPoly((1,))
T = ComplexPoly((0, 1))


@pytest.mark.parametrize(
    "p_inv, q_inv, lam, expected",
    [
        (0.25, 0.4, 2.0, True),
        (0.25, 0.2, 2.0, False),
        (0.5, 0.6, 1.0, True),
        (0.75, 1.0, 1.0, False),
        (0.0, 1.0, 0.6, True),
        (0.0, 0.5, 1.0, False),
    ],
)
def test_region_holds(p_inv, q_inv, lam, expected):
    assert region_holds(RegionQuery(p_inv=p_inv, q_inv=q_inv, lam=lam)) is expected


def test_lambda_threshold():
    assert lambda_threshold(0.25, 0.4) == pytest.approx(1.25)
    assert lambda_threshold(0.8, 1.0) == pytest.approx(2.0)
    with pytest.raises(DomainError):
        lambda_threshold(1.0, 0.5)
    with pytest.raises(DomainError):
        lambda_threshold(0.5, 0.0)


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 0.95), st.floats(0.05, 1.0), st.floats(1e-3, 0.5))
def test_lambda_threshold_separates_region(p_inv, q_inv, margin):
    threshold = lambda_threshold(p_inv, q_inv)
    assume(threshold * (1 - margin) > 0)

    assert region_holds(RegionQuery(p_inv=p_inv, q_inv=q_inv, lam=threshold * (1 + margin)))
    assert not region_holds(RegionQuery(p_inv=p_inv, q_inv=q_inv, lam=threshold * (1 - margin)))


@settings(max_examples=1000, deadline=None)
@given(st.floats(0, 0.99), st.floats(0.01, 1.0), st.floats(0.05, 20.0), st.floats(1.0, 10.0))
def test_region_grows_with_lambda(p_inv, q_inv, lam, factor):
    if region_holds(RegionQuery(p_inv=p_inv, q_inv=q_inv, lam=lam)):
        assert region_holds(RegionQuery(p_inv=p_inv, q_inv=q_inv, lam=lam * factor))

@pytest.mark.parametrize("lam", [1.0, 2.0, 2 / 3])
def test_region_boundary_csv(lam):
    frame = region_boundary_csv(lam, 5)

    assert list(frame.columns) == ["p_inv", "q_inv_boundary", "q_inv_cut"]
    assert len(frame) == 5
    assert frame["p_inv"].iloc[0] == 0.0
    assert frame["q_inv_boundary"].iloc[-1] == pytest.approx(1.0)
    assert frame["q_inv_cut"].eq(1 / (2 * lam)).all()
    assert frame["q_inv_boundary"].is_monotonic_increasing


def test_region_boundary_csv_rejects_bad_input():
    with pytest.raises(DomainError):
        region_boundary_csv(0.0, 5)
    with pytest.raises(DomainError):
        region_boundary_csv(1.0, 1)


def test_check_lemma_2_1():
    report = check_lemma_2_1(DeformParams(1.0), 1 + 1j, 2.0)
    equality = check_lemma_2_1(DeformParams(0.0), -0.5 + 2j, 3.0)

    assert report.passed and report.margin > 0
    assert report.params == {"mu": 1.0, "lambda": 1.0, "q": 2.0, "re_z": 1.0, "im_z": 1.0}
    assert equality.passed
    assert equality.margin == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(DomainError):
        check_lemma_2_1(DeformParams(1.0), 1.0, 0.5)


@pytest.mark.parametrize("mu, pprime, x", [(0.0, 2.0, 1.0), (0.5, 1.5, 0.7), (2.0, 3.0, -1.2)])
def test_check_eq_3_3(mu, pprime, x):
    report = check_eq_3_3(DeformParams(mu), pprime, x)

    assert report.relation == "eq"
    assert report.passed, report


@pytest.mark.parametrize("params", [DeformParams(0.0), DeformParams(1.0, 2.0), DeformParams(2.5, 0.5)])
def test_check_masses(params):
    assert check_masses(params, 1).passed
    assert check_masses(params, -1).passed


def test_check_isometry():
    report = check_isometry(DeformParams(0.7, 3.0), ComplexPoly((1, 1, 0, -0.5)))

    assert report.passed
    assert report.params["lambda"] == 1.0
    assert report.params["degree"] == 3.0


def _random_polys(count: int, max_degree: int, seed: int) -> list[ComplexPoly]:
    rng = np.random.default_rng(seed)
    polys = []
    for _ in range(count):
        size = rng.integers(1, max_degree + 2)
        coeffs = rng.normal(size=size) + 1j * rng.normal(size=size)
        polys.append(ComplexPoly(tuple(complex(c) for c in coeffs)))
    return polys


@pytest.mark.parametrize("mu", [0.0, 0.5, 1.0])
def test_check_isometry_on_random_polynomials(mu):
    params = DeformParams(mu)

    for f in _random_polys(10, 6, seed=11):
        report = check_isometry(params, f)
        assert report.passed, (f.coeffs, report)


@pytest.mark.parametrize("mu", [0.0, 0.5, 1.0])
def test_check_gram(mu):
    report = check_gram(DeformParams(mu), n_max=8)

    assert report.passed
    assert report.lhs < GRAM_TOL
    assert "max_quad_err" in report.details


def test_hausdorff_young_at_zero_is_isometry():
    report = check_hausdorff_young(DeformParams(0.5), 4.0, 1.0, 0.0, ComplexPoly((0, 1, 1)))

    assert report.relation == "eq"
    assert report.passed


def test_hausdorff_young_constant_function():
    report = check_hausdorff_young(DeformParams(0.5), 4.0, 1.0, 0.5, ONE)

    assert report.passed
    assert report.lhs == pytest.approx(1.0, rel=1e-8)
    assert report.details["hille_tamarkin"] >= 1.0
    assert report.rhs >= 1.0
    assert report.details["p_s"] == pytest.approx(8 / 3)


def test_hausdorff_young_polynomial():
    report = check_hausdorff_young(DeformParams(0.5), 4.0, 1.0, 1.0, ComplexPoly((0, 1, 1)))

    assert report.passed
    assert report.details["trial_ratio"] <= report.details["hille_tamarkin"]


def test_hausdorff_young_domain():
    with pytest.raises(DomainError):
        check_hausdorff_young(DeformParams(0.5, 2.0), 4.0, 1.0, 0.5, ONE)
    with pytest.raises(DomainError):
        check_hausdorff_young(DeformParams(0.5), 1.2, 1.0, 0.5, ONE)
    with pytest.raises(DomainError):
        check_hausdorff_young(DeformParams(0.5), 4.0, 2.0, 0.5, ONE)


def test_hirschman_zero_function():
    report = check_hirschman(DeformParams(0.5), 4.0, 1.0, ComplexPoly())

    assert report.passed
    assert (report.lhs, report.rhs) == (0.0, 0.0)


def test_hirschman_constant_function():
    report = check_hirschman(DeformParams(0.5), 4.0, 1.0, ONE)

    assert report.passed
    assert report.lhs == pytest.approx(0.0, abs=1e-8)
    assert report.rhs == pytest.approx(math.log(report.details["hille_tamarkin"]), abs=1e-8)


def test_hirschman_linear_function():
    report = check_hirschman(DeformParams(0.5), 4.0, 1.0, T)

    assert report.passed
    assert report.details["entropy_f"] != 0


def test_weighted_hy_at_zero_is_isometry():
    report = check_weighted_hy(DeformParams(1.0, 2.0), 2.0, 2.0, 0.0, ComplexPoly((0, 0, 1)))

    assert report.relation == "eq"
    assert report.passed


def test_weighted_hy_interior():
    report = check_weighted_hy(DeformParams(1.0, 2.0), 2.0, 2.0, 0.5, ComplexPoly((0, 0, 1)))

    assert report.passed
    assert report.details["density_route"] == pytest.approx(report.lhs, rel=1e-6)
    assert report.details["q_s"] == pytest.approx(2.0)


def test_weighted_hy_endpoint_is_weighted_norm():
    report = check_weighted_hy(DeformParams(1.0, 2.0), 2.0, 2.0, 1.0, ComplexPoly((1, 1)))

    assert report.passed
    assert report.details["weighted_space_norm"] == pytest.approx(report.lhs, rel=1e-6)


def test_weighted_hy_domain():
    with pytest.raises(DomainError):
        check_weighted_hy(DeformParams(1.0, 0.5), 2.0, 2.0, 0.5, ONE)
    with pytest.raises(DomainError):
        check_weighted_hy(DeformParams(1.0, 1.0), 4.0, 3.0, 0.5, ONE)


def test_log_sobolev_reduces_to_hirschman_without_weight():
    params = DeformParams(0.5)

    lsi = check_log_sobolev(params, 4.0, 1.0, T)
    hirschman = check_hirschman(params, 4.0, 1.0, T)

    assert lsi.lhs == pytest.approx(hirschman.lhs, abs=1e-12)
    assert lsi.rhs == pytest.approx(hirschman.rhs, abs=1e-12)
    assert lsi.details["dilation_energy"] == 0.0


def test_log_sobolev_gaussian_dilation_energy():
    report = check_log_sobolev(DeformParams(0.0, 2.0), 2.0, 2.0, ComplexPoly((1, 1)))

    assert report.passed
    assert report.details["dilation_energy_residual"] < 1e-7
    assert report.margin == pytest.approx(report.details["stated_rhs"] - report.details["stated_lhs"], abs=1e-9)


def test_log_sobolev_deformed_constant():
    report = check_log_sobolev(DeformParams(1.0, 2.0), 2.0, 2.0, ONE)

    # E(1) = log(sqrt 2) + 2 for mu = 1
    assert report.details["dilation_energy"] == pytest.approx(0.5 * math.log(2) + 2, rel=1e-8)
    assert report.passed
    assert "dilation_energy_closed_form" not in report.details


def test_log_sobolev_zero_function():
    report = check_log_sobolev(DeformParams(1.0, 2.0), 2.0, 2.0, ComplexPoly())

    assert report.passed and report.lhs == 0.0


def test_unitarity_vacuum_is_preserved():
    report = check_unitarity_lambda(DeformParams(0.3, 2.0), FockCoeffs(BasisTag.XI, (1,)))

    assert report.relation == "eq"
    assert report.passed
    assert report.details["exact"] == "1"


def test_unitarity_fails_for_excited_states():
    report = check_unitarity_lambda(DeformParams(0.3, 2.0), FockCoeffs(BasisTag.XI, (0, 1)))
    half = sympy.sqrt(2) / 2
    mixed = check_unitarity_lambda(DeformParams(0.3, 2.0), FockCoeffs(BasisTag.XI, (half, 0, half)))

    assert report.relation == "ne"
    assert report.passed
    assert report.details["exact"] == "1/2"
    assert mixed.details["exact"] == "5/8"


def test_unitarity_without_weight():
    report = check_unitarity_lambda(DeformParams(0.3), FockCoeffs(BasisTag.XI, (0, 1)))

    assert report.relation == "eq"
    assert report.passed and report.lhs == 1.0


def test_unitarity_domain():
    with pytest.raises(DomainError):
        check_unitarity_lambda(DeformParams(0.3, 2.0), FockCoeffs(BasisTag.CHI, (1,)))
    with pytest.raises(DomainError):
        check_unitarity_lambda(DeformParams(0.3, 2.0), FockCoeffs(BasisTag.XI, (1, 1)))


@pytest.mark.slow
@pytest.mark.parametrize("mu", [0.0, 0.5, 1.0])
def test_hirschman_and_log_sobolev_over_samples(mu):
    for p, q, lam in DEFAULT_ADMISSIBLE_SAMPLE:
        params = DeformParams(mu, lam)
        for f in default_family(params):
            lsi = check_log_sobolev(params, p, q, f)
            assert lsi.passed, (p, q, lam, f.coeffs, lsi)
            if lam == 1.0:
                hirschman = check_hirschman(params, p, q, f)
                assert hirschman.passed, (p, q, f.coeffs, hirschman)
                assert lsi.lhs == pytest.approx(hirschman.lhs, abs=1e-12)
                assert lsi.rhs == pytest.approx(hirschman.rhs, abs=1e-12)
