"""
The deformed Segal-Bargmann transform and the operators around it.

The transform B maps L^2(R, dg_mu) onto the holomorphic space on the plane with kernel
exp(-z^2/2) e_mu(sqrt(2) t z). It is available as a quadrature (any integrable f, one point at a time)
and in closed form on polynomials, where the image of t^n is the polynomial

    sum_j gamma(n) / (gamma(n - 2j) j!) 2^((n - 2j)/2 - n) z^(n - 2j).

Coefficient sequences against the orthonormal bases zeta (line), xi (plane) and chi (weighted plane)
convert to and from polynomials; B sends zeta_n to xi_n, so B acts as the identity on coefficients.

Functions:
    kernel_B(params, z, t, parity) -> complex
    apply_B_quadrature(params, f, z, spec) -> Estimate
    apply_B_poly(params, f) -> ComplexPoly
    monomial_image_exact(mu, n) -> list[sympy.Expr]
    ground_state_map(params, f, direction) -> Callable
    dilation_T(lam, f) -> ComplexPoly
    dunkl_D(params, f) -> ComplexPoly
    ladder_ops(params, c, which) -> FockCoeffs
    zeta_poly(params, n) / xi_poly(params, n) -> ComplexPoly
    fock_to_poly(c) / fock_from_poly(f, basis, params)
    dirichlet_energy(params, c) -> float
    plane_norm_sq(params, f, spec) -> Estimate
    energy_E_mu(params, f, spec) -> Estimate
    dilation_energy(params, f, spec) -> Estimate
    gaussian_dilation_energy(lam, c) -> float
    rho_remainder(params, f, spec) -> Estimate
    rho_ratio_range(params, family, spec) -> (min, max)
"""

import functools
import math
from typing import Callable, Iterable, Literal

import numpy as np
import sympy
from scipy import special as sc

from mu_bargmann.common.errors import DomainError
from mu_bargmann.constants import SMALL_ARGUMENT
from mu_bargmann.measure_quad import LineWeight, as_parity_pair, integrate_line, integrate_plane
from mu_bargmann.model import BasisTag, ComplexPoly, DeformParams, Estimate, FockCoeffs, ParityPair, QuadratureSpec
from mu_bargmann.special import (
    e_mu,
    e_mu_parts,
    gamma_mu,
    gamma_mu_exact,
    hermite_mu,
    log_gamma_mu,
    log_macdonald_ratio,
)

SQRT2 = math.sqrt(2.0)


def kernel_B(params: DeformParams, z, t, parity: int | None = None):
    """
    The transform kernel exp(-z^2/2) e_mu(sqrt(2) t z), or its even (+1) / odd (-1) part in z.

    Example:
        >>> kernel_B(DeformParams(0.0), 1.0, 0.5)  # exp(-1/2 + sqrt(2)/2)
    """
    z = np.asarray(z, dtype=complex)
    gauss = np.exp(-(z**2) / 2)
    w = SQRT2 * np.asarray(t) * z
    if parity is None:
        return (gauss * e_mu(params, w))[()]
    even, odd = e_mu_parts(params, w)
    if parity == 1:
        return (gauss * even)[()]
    if parity == -1:
        return (gauss * odd)[()]
    raise DomainError(f"parity must be +1, -1 or None, got {parity}")


def apply_B_quadrature(params: DeformParams, f: Callable, z: complex, spec: QuadratureSpec | None = None) -> Estimate:
    """
    (B f)(z) as the line integral of kernel_B(z, t) f(t) against dg_mu.

    Args:
        params (DeformParams): Only ``mu`` is used.
        f (Callable): Vectorised function of real t, e.g. a ``ComplexPoly``.
        z (complex): Evaluation point.
        spec (QuadratureSpec, optional): Quadrature settings.

    Returns:
        Estimate: Complex value and absolute error.

    Raises:
        ToleranceNotMet: If the line quadrature cannot reach its tolerance.
    """
    z = complex(z)

    def integrand(t):
        return kernel_B(params, z, t) * np.asarray(f(t), dtype=complex)

    return integrate_line(integrand, LineWeight.ground_state(params), spec, shift=abs(z) / SQRT2)


@functools.lru_cache(maxsize=256)
def _monomial_image(mu: float, n: int) -> tuple[float, ...]:
    params = DeformParams(mu)
    coeffs = [0.0] * (n + 1)
    ratio = 1.0
    for j in range(n // 2 + 1):
        k = n - 2 * j
        if j:
            # gamma(n) / gamma(k) grows by the two factors dropped from the bottom
            ratio *= (k + 2 + 2 * mu * ((k + 2) % 2)) * (k + 1 + 2 * mu * ((k + 1) % 2)) / j
        coeffs[k] = ratio * 2.0 ** (k / 2 - n)
    if not all(math.isfinite(c) for c in coeffs):
        scale = log_gamma_mu(params, n)
        for j in range(n // 2 + 1):
            k = n - 2 * j
            log_c = scale - log_gamma_mu(params, k) - sc.gammaln(j + 1) + (k / 2 - n) * math.log(2.0)
            coeffs[k] = math.exp(log_c)
    return tuple(coeffs)


def apply_B_poly(params: DeformParams, f: ComplexPoly) -> ComplexPoly:
    """
    Closed-form image of a polynomial under B; degree and parity are preserved.

    Example:
        >>> apply_B_poly(DeformParams(1.0), ComplexPoly((0, 0, 1))).coeffs
        ((1.5+0j), 0j, (0.5+0j))
    """
    total = [0j] * (f.degree + 1)
    for n, a in enumerate(f.coeffs):
        if a == 0:
            continue
        for k, c in enumerate(_monomial_image(params.mu, n)):
            total[k] += a * c
    return ComplexPoly(tuple(total))


def monomial_image_exact(mu, n: int) -> list:
    """Exact coefficients (degree-ascending) of B t^n, with ``mu`` rationalised by sympy."""
    mu = sympy.nsimplify(mu, rational=True)
    coeffs = [sympy.Integer(0)] * (n + 1)
    top = gamma_mu_exact(mu, n)
    for j in range(n // 2 + 1):
        k = n - 2 * j
        coeffs[k] = sympy.simplify(
            top / (gamma_mu_exact(mu, k) * sympy.factorial(j)) * sympy.sqrt(2) ** k / sympy.Integer(2) ** n
        )
    return coeffs


def ground_state_map(params: DeformParams, f: Callable, direction: Literal["to_gs", "from_gs"]) -> Callable:
    """
    The unitary map between L^2(R, |t|^(2 mu) dt) and L^2(R, dg_mu): ``to_gs`` divides by the ground state
    phi_0(t) = Gamma(mu + 1/2)^(-1/2) exp(-t^2/2), ``from_gs`` multiplies by it.
    """
    log_norm = 0.5 * sc.gammaln(params.mu + 0.5)

    def phi0(t):
        t = np.asarray(t, dtype=float)
        return np.exp(-(t**2) / 2 - log_norm)

    if direction == "to_gs":
        return lambda t: f(t) / phi0(t)
    if direction == "from_gs":
        return lambda t: f(t) * phi0(t)
    raise DomainError(f"direction must be 'to_gs' or 'from_gs', got {direction!r}")


def dilation_T(lam: float, f: ComplexPoly) -> ComplexPoly:
    if lam <= 0:
        raise DomainError(f"lambda must be > 0, got {lam}")
    return f.scale_argument(math.sqrt(lam))


def dunkl_D(params: DeformParams, f: ComplexPoly) -> ComplexPoly:
    """f'(t) + (mu / t)(f(t) - f(-t)), acting on monomials as t^n -> (n + 2 mu theta(n)) t^(n-1)."""
    return ComplexPoly(tuple((n + 2 * params.mu * (n % 2)) * a for n, a in enumerate(f.coeffs) if n >= 1))


def _eigenvalue(mu, n: int):
    return n + 2 * mu * (n % 2)


def ladder_ops(params: DeformParams, c: FockCoeffs, which: Literal["create", "annihilate", "number"]) -> FockCoeffs:
    """
    Creation, annihilation and number operators on coefficient sequences against zeta or xi.

    Coefficients that are sympy numbers are processed exactly (with ``mu`` rationalised), floats in
    floating point. The number operator is create after annihilate and is diagonal with eigenvalue
    n + 2 mu theta(n).

    Raises:
        DomainError: For a chi-tagged sequence or an unknown operator name.
    """
    if c.basis not in (BasisTag.ZETA, BasisTag.XI):
        raise DomainError(f"ladder operators act on zeta or xi coefficients, got {c.basis.value}")
    exact = any(isinstance(a, sympy.Basic) for a in c.coeffs)
    mu = sympy.nsimplify(params.mu, rational=True) if exact else params.mu
    root = sympy.sqrt if exact else math.sqrt
    a = list(c.coeffs)
    if which == "create":
        out = [0] + [root(_eigenvalue(mu, n + 1)) * a_n for n, a_n in enumerate(a)]
    elif which == "annihilate":
        out = [root(_eigenvalue(mu, n)) * a[n] for n in range(1, len(a))]
    elif which == "number":
        out = [_eigenvalue(mu, n) * a_n for n, a_n in enumerate(a)]
    else:
        raise DomainError(f"unknown ladder operator {which!r}")
    if exact:
        out = [sympy.expand(v) for v in out]
    return FockCoeffs(c.basis, tuple(out), c.params)


def zeta_poly(params: DeformParams, n: int) -> ComplexPoly:
    """zeta_n(t) = 2^(-n/2) (n!)^(-1) gamma(n)^(1/2) H_n(t)."""
    log_scale = -0.5 * n * math.log(2.0) - sc.gammaln(n + 1) + 0.5 * float(log_gamma_mu(params, n))
    return hermite_mu(params, n) * math.exp(log_scale)


def _xi_scale(params: DeformParams, n: int) -> float:
    return math.exp(-0.5 * float(log_gamma_mu(params, n)))


def fock_to_poly(c: FockCoeffs) -> ComplexPoly:
    """Sum of a_n times the n-th basis function: a polynomial in t for zeta, in z for xi and chi."""
    params = c.params
    if c.basis is BasisTag.ZETA:
        total = ComplexPoly()
        for n, a in enumerate(c.coeffs):
            if a != 0:
                total = total + zeta_poly(params, n) * complex(a)
        return total
    lam_root = math.sqrt(params.lam) if c.basis is BasisTag.CHI else 1.0
    return ComplexPoly(tuple(complex(a) * lam_root**n * _xi_scale(params, n) for n, a in enumerate(c.coeffs)))


def fock_from_poly(f: ComplexPoly, basis: BasisTag, params: DeformParams) -> FockCoeffs:
    """
    Coefficients of ``f`` against the requested basis. For zeta the triangular system is solved from the
    top degree down.
    """
    basis = BasisTag(basis)
    if basis is BasisTag.ZETA:
        remainder = f
        coeffs = [0j] * (f.degree + 1)
        for n in range(f.degree, -1, -1):
            zeta_n = zeta_poly(params, n)
            a_n = remainder.coefficient(n) / zeta_n.coefficient(n)
            coeffs[n] = a_n
            remainder = remainder - zeta_n * a_n
        return FockCoeffs(basis, tuple(coeffs), params)
    lam_root = math.sqrt(params.lam) if basis is BasisTag.CHI else 1.0
    return FockCoeffs(
        basis, tuple(a / (lam_root**n * _xi_scale(params, n)) for n, a in enumerate(f.coeffs)), params
    )


def dirichlet_energy(params: DeformParams, c: FockCoeffs) -> float:
    """<f, N f> = sum (n + 2 mu theta(n)) |a_n|^2 for coefficients against zeta or xi."""
    if c.basis not in (BasisTag.ZETA, BasisTag.XI):
        raise DomainError(f"dirichlet energy needs zeta or xi coefficients, got {c.basis.value}")
    return float(sum(_eigenvalue(params.mu, n) * abs(complex(a)) ** 2 for n, a in enumerate(c.coeffs)))


def _abs2_times(part: Callable, factor: Callable) -> Callable:
    return lambda z: np.abs(part(z)) ** 2 * factor(z)


def _weighted_pair(f, factor_even: Callable, factor_odd: Callable) -> ParityPair:
    parts = dict(as_parity_pair(f).parts())
    even, odd = parts.get(1), parts.get(-1)
    return ParityPair(
        even=None if even is None else _abs2_times(even, factor_even),
        odd=None if odd is None else _abs2_times(odd, factor_odd),
    )


def _one(z):
    return np.ones(np.shape(z))


def plane_norm_sq(params: DeformParams, f, spec: QuadratureSpec | None = None) -> Estimate:
    """||f||^2 = int |f_e|^2 dnu(., +1) + int |f_o|^2 dnu(., -1) at the weight ``params.lam``."""
    return integrate_plane(_weighted_pair(f, _one, _one), params, spec)


def energy_E_mu(params: DeformParams, f, spec: QuadratureSpec | None = None) -> Estimate:
    """
    The energy int |f_e|^2 |z|^2 dnu(., +1) + int |f_o|^2 |z|^2 dnu(., -1) in the unweighted space.

    Args:
        params (DeformParams): ``lam`` is ignored.
        f (ParityPair | ComplexPoly | Callable): Function on the plane.
        spec (QuadratureSpec, optional): Quadrature settings.

    Returns:
        Estimate: Non-negative value and its error.
    """

    def abs2(z):
        return np.abs(z) ** 2

    return integrate_plane(_weighted_pair(f, abs2, abs2), params.unweighted(), spec)


def _log_k_ratio(nu: float, lam: float) -> Callable:
    def ratio(z):
        x = np.abs(np.asarray(z, dtype=complex)) ** 2
        return log_macdonald_ratio(nu, x, lam)

    return ratio


def dilation_energy(params: DeformParams, f, spec: QuadratureSpec | None = None) -> Estimate:
    """
    The dilation energy int |f_e|^2 log(K_{mu-1/2}(|z|^2) / K_{mu-1/2}(lam |z|^2)) dnu(., +1) plus the odd
    counterpart with K_{mu+1/2}, both against the unweighted measures.

    Raises:
        DomainError: If lam < 1.
    """
    if params.lam < 1:
        raise DomainError(f"dilation energy needs lambda >= 1, got {params.lam}")
    if params.lam == 1:
        return Estimate(0.0, 0.0)
    pair = _weighted_pair(
        f, _log_k_ratio(params.mu - 0.5, params.lam), _log_k_ratio(params.mu + 0.5, params.lam)
    )
    return integrate_plane(pair, params.unweighted(), spec)


def gaussian_dilation_energy(lam: float, c: FockCoeffs) -> float:
    """
    Closed form of the dilation energy in the undeformed case,
    (log sqrt(lam) + lam - 1) ||f||^2 + (lam - 1) <f, N f>, from xi or zeta coefficients.
    """
    if lam < 1:
        raise DomainError(f"dilation energy needs lambda >= 1, got {lam}")
    if c.params.mu != 0:
        raise DomainError("the closed form holds for mu = 0 only")
    norm_sq = float(c.norm_sq())
    return (0.5 * math.log(lam) + lam - 1) * norm_sq + (lam - 1) * dirichlet_energy(c.params, c)


def rho_remainder(params: DeformParams, f, spec: QuadratureSpec | None = None) -> Estimate:
    """
    The remainder of the expansion of the dilation energy:
    E_{mu,lam}(f) - log(sqrt(lam)) ||f||^2 - (lam - 1) E_mu(f).

    Raises:
        DomainError: If lam <= 1.
    """
    if params.lam <= 1:
        raise DomainError(f"the dilation energy remainder needs lambda > 1, got {params.lam}")
    energy = dilation_energy(params, f, spec)
    norm_sq = plane_norm_sq(params.unweighted(), f, spec)
    e_mu_value = energy_E_mu(params, f, spec)
    value = energy.value - 0.5 * math.log(params.lam) * norm_sq.value - (params.lam - 1) * e_mu_value.value
    error = energy.error + 0.5 * math.log(params.lam) * norm_sq.error + (params.lam - 1) * e_mu_value.error
    return Estimate(float(value), float(error))


def rho_ratio_range(params: DeformParams, family: Iterable, spec: QuadratureSpec | None = None) -> tuple[float, float]:
    """Empirical (min, max) of rho / ||f||^2 over the non-zero members of ``family``."""
    ratios = []
    for f in family:
        norm_sq = plane_norm_sq(params.unweighted(), f, spec).value
        if norm_sq <= SMALL_ARGUMENT:
            continue
        ratios.append(rho_remainder(params, f, spec).value / norm_sq)
    if not ratios:
        raise DomainError("rho_ratio_range needs at least one non-zero function")
    return min(ratios), max(ratios)


def xi_poly(params: DeformParams, n: int) -> ComplexPoly:
    return ComplexPoly.monomial(n, 1.0 / math.sqrt(gamma_mu(params, n)))
