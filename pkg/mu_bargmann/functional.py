"""
Norms, entropies and kernel norms on the line (R, dg_mu) and on the two-copy plane (C x Z_2, dnu_{mu,lambda}).

Classes:
    MeasureSpace: Abstract base exposing integrals of functions of |f| over the space.
    LineSpace: L^p(R, dg_mu).
    PlaneSpace: L^p(C x Z_2, dnu_{mu,lambda}); a function is split into its even and odd parts, which live
        on the +1 and -1 copy respectively.

Functions:
    conjugate_index(p) -> float
    lp_norm_line(params, f, p, spec) / lp_norm_plane(params, f, p, spec) -> Estimate
    plane_inner(params, f, g, spec) -> Estimate
    entropy(f, space, spec) -> Estimate
    hille_tamarkin_parts(params, p, q, spec) -> (Estimate, Estimate)
    hille_tamarkin_norm(params, p, q, spec) -> Estimate
    divergence_predicted(p, q, lam) -> bool
    interp_scale(theta, s) -> float
    entropy_derivative_check(f, theta, space, spec) -> CheckReport
    kappa(params, q, s, z, parity) / nu_s_density(params, q, s, z, parity)
    trial_ratio(params, p, q, f, spec) -> float
"""

import functools
import math
from abc import ABC, abstractmethod
from typing import Callable, NamedTuple

import numpy as np
from scipy import special as sc
from scipy.special import logsumexp

from mu_bargmann.common.errors import DomainError, NonConvergent, ToleranceNotMet
from mu_bargmann.common.ioc_container import Container
from mu_bargmann.common.trace_logger import trace_on
from mu_bargmann.constants import (
    DERIVATIVE_ABS_TOL,
    DERIVATIVE_ERR_FACTOR,
    ENTROPY_FLOOR,
    FD_STEPS,
    HT_TAIL_REL_TOL,
)
from mu_bargmann.measure_quad import (
    LineWeight,
    as_parity_pair,
    effective_s_max,
    integrate_line,
    integrate_plane,
    integrate_radial,
    log_radial_weight,
    nu_density,
    outer_shell_growth,
    plane_mass,
    truncation_tail,
)
from mu_bargmann.model import CheckReport, ComplexPoly, DeformParams, Estimate, ParityPair, QuadratureSpec
from mu_bargmann.special import log_abs_e_mu_parts, log_macdonald_ratio
from mu_bargmann.transform import SQRT2, apply_B_poly

SUP_GRID_POINTS = 4097


def conjugate_index(p: float) -> float:
    """Hoelder conjugate p' = p / (p - 1), with 1 <-> infinity."""
    if p < 1:
        raise DomainError(f"Lebesgue index must be >= 1, got {p}")
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1)


def _power_estimate(integral: Estimate, p: float) -> Estimate:
    value = max(float(integral.value), 0.0)
    if value == 0.0:
        return Estimate(0.0, float(integral.error) ** (1 / p))
    root = value ** (1 / p)
    return Estimate(root, root * float(integral.error) / (p * value))


def _modulus_map(part: Callable, g: Callable) -> Callable:
    return lambda x: g(np.abs(part(x)))


def _sup_norm(f, grid: np.ndarray) -> float:
    if isinstance(f, ComplexPoly):
        if f.degree >= 1:
            raise DomainError("a non-constant polynomial is unbounded, its sup norm is infinite")
        return abs(f.coefficient(0))
    return float(np.max(np.abs(f(grid))))


class MeasureSpace(ABC):
    """
    Base class of the two measure spaces.

    Subclasses implement ``integrate_modulus``, which integrates g(|f|) over the space, ``total_mass`` and
    ``sup_norm``; norms and entropies are derived here.
    """

    def __init__(self, params: DeformParams):
        self.params = params

    @abstractmethod
    def integrate_modulus(self, f, g: Callable, spec: QuadratureSpec | None = None) -> Estimate:
        pass

    @abstractmethod
    def total_mass(self) -> float:
        pass

    @abstractmethod
    def sup_norm(self, f, spec: QuadratureSpec | None = None) -> float:
        pass

    def lp_norm(self, f, p: float, spec: QuadratureSpec | None = None) -> Estimate:
        if p < 1:
            raise DomainError(f"Lebesgue index must be >= 1, got {p}")
        if math.isinf(p):
            return Estimate(self.sup_norm(f, spec), 0.0)
        return _power_estimate(self.integrate_modulus(f, lambda a: a**p, spec), p)

    def norm_sq(self, f, spec: QuadratureSpec | None = None) -> Estimate:
        return self.integrate_modulus(f, lambda a: a**2, spec)

    def entropy(self, f, spec: QuadratureSpec | None = None) -> Estimate:
        """
        int |f|^2 log|f|^2 - ||f||^2 log ||f||^2, with 0 log 0 = 0.

        The zero function has entropy 0.
        """

        def density(a):
            a2 = a**2
            return a2 * np.log(np.maximum(a2, ENTROPY_FLOOR))

        first = self.integrate_modulus(f, density, spec)
        norm_sq = self.norm_sq(f, spec)
        if norm_sq.value <= 0:
            return Estimate(0.0, float(first.error))
        log_norm = math.log(norm_sq.value)
        value = first.value - norm_sq.value * log_norm
        error = first.error + abs(log_norm + 1) * norm_sq.error
        return Estimate(float(value), float(error))


class LineSpace(MeasureSpace):
    """L^p(R, dg_mu); functions are vectorised callables of real t."""

    def integrate_modulus(self, f, g: Callable, spec: QuadratureSpec | None = None) -> Estimate:
        return integrate_line(_modulus_map(f, g), LineWeight.ground_state(self.params), spec)

    def total_mass(self) -> float:
        return 1.0

    def sup_norm(self, f, spec: QuadratureSpec | None = None) -> float:
        spec = spec or Container.quadrature()
        return _sup_norm(f, np.linspace(-spec.t_max, spec.t_max, SUP_GRID_POINTS))


class PlaneSpace(MeasureSpace):
    """
    L^p(C x Z_2, dnu_{mu,lambda}). The norm is ||f||^p = ||f_e||^p_{dnu(., +1)} + ||f_o||^p_{dnu(., -1)}.
    """

    def integrate_modulus(self, f, g: Callable, spec: QuadratureSpec | None = None) -> Estimate:
        parts = dict(as_parity_pair(f).parts())
        pair = ParityPair(
            even=_modulus_map(parts[1], g) if 1 in parts else None,
            odd=_modulus_map(parts[-1], g) if -1 in parts else None,
        )
        return integrate_plane(pair, self.params, spec)

    def total_mass(self) -> float:
        return plane_mass(self.params, 1) + plane_mass(self.params, -1)

    def sup_norm(self, f, spec: QuadratureSpec | None = None) -> float:
        spec = spec or Container.quadrature()
        pair = as_parity_pair(f)
        radii = np.linspace(0.0, spec.r_max, SUP_GRID_POINTS // 16)
        grid = np.outer(radii, np.exp(2j * np.pi * np.arange(spec.n_angular) / spec.n_angular)).ravel()
        return max((_sup_norm(part, grid) for _, part in pair.parts()), default=0.0)


def lp_norm_line(params: DeformParams, f, p: float, spec: QuadratureSpec | None = None) -> Estimate:
    """
    (int |f|^p dg_mu)^(1/p) on the probability space (R, dg_mu).

    Raises:
        DomainError: For p < 1, or p = infinity with a non-constant polynomial.
        ToleranceNotMet: From the line quadrature.
    """
    return LineSpace(params).lp_norm(f, p, spec)


def lp_norm_plane(params: DeformParams, f, p: float, spec: QuadratureSpec | None = None) -> Estimate:
    return PlaneSpace(params).lp_norm(f, p, spec)


def plane_inner(params: DeformParams, f, g, spec: QuadratureSpec | None = None) -> Estimate:
    """<f, g> = int f_e conj(g_e) dnu(., +1) + int f_o conj(g_o) dnu(., -1)."""
    f_parts = dict(as_parity_pair(f).parts())
    g_parts = dict(as_parity_pair(g).parts())

    def product(parity):
        if parity not in f_parts or parity not in g_parts:
            return None
        a, b = f_parts[parity], g_parts[parity]
        return lambda z: np.asarray(a(z), dtype=complex) * np.conj(b(z))

    return integrate_plane(ParityPair(even=product(1), odd=product(-1)), params, spec)


def entropy(f, space: MeasureSpace, spec: QuadratureSpec | None = None) -> Estimate:
    return space.entropy(f, spec)


class GaussRule(NamedTuple):
    nodes: np.ndarray
    log_weights: np.ndarray


@functools.lru_cache(maxsize=64)
def _laguerre_rule(n: int, alpha: float) -> GaussRule:
    nodes, weights = sc.roots_genlaguerre(n, alpha)
    with np.errstate(divide="ignore"):
        return GaussRule(nodes, np.log(weights))


def _log_inner(params: DeformParams, p_dual: float, z: np.ndarray, even_rule: GaussRule, odd_rule: GaussRule):
    """
    log int |B_e(z, t)|^p' dg_mu(t) and the odd counterpart, for an array of z.

    With v = t^2 the even integral has the generalised Laguerre weight v^(mu - 1/2) exp(-v); the odd kernel
    vanishes linearly at t = 0, so |B_o / t|^p' is integrated against v^(mu - 1/2 + p'/2) exp(-v).
    """
    log_gauss = (-(z**2).real / 2)[:, None]
    log_norm = sc.gammaln(params.mu + 0.5)
    t_even = np.sqrt(even_rule.nodes)
    log_even, _ = log_abs_e_mu_parts(params, SQRT2 * np.outer(z, t_even))
    log_j_even = logsumexp(even_rule.log_weights + p_dual * (log_gauss + log_even), axis=1) - log_norm
    t_odd = np.sqrt(odd_rule.nodes)
    _, log_odd = log_abs_e_mu_parts(params, SQRT2 * np.outer(z, t_odd))
    log_j_odd = logsumexp(odd_rule.log_weights + p_dual * (log_gauss + log_odd - np.log(t_odd)), axis=1) - log_norm
    return log_j_even, log_j_odd


def _log_mean(values: np.ndarray) -> float:
    return logsumexp(values) - math.log(len(values))


def divergence_predicted(p: float, q: float, lam: float) -> bool:
    """Whether the exponents of the kernel norm integrand, q (p' - 1) / 2 and q / 2, reach lambda."""
    p_dual = conjugate_index(p)
    return q * (p_dual - 1) / 2 - lam >= 0 or q / 2 - lam >= 0


@trace_on("Hille-Tamarkin norm", measure_time=True)
@functools.lru_cache(maxsize=128)
def hille_tamarkin_parts(
    params: DeformParams, p: float, q: float, spec: QuadratureSpec | None = None
) -> tuple[Estimate, Estimate]:
    """
    Hille-Tamarkin norms of the even and odd kernels,
    { int ( int |B_par(z, t)|^p' dg_mu(t) )^(q/p') dnu_{mu,lambda}(z, par) }^(1/q).

    The inner integral uses generalised Gauss-Laguerre rules in v = t^2 evaluated in the log domain, the
    angular mean uses midpoint nodes on the first quadrant (|B_par| is symmetric under z -> -z and
    z -> conj(z)) and the outer integral runs in s = lambda r^2. Halved kernel and angular rules give the
    discretisation error.

    Args:
        params (DeformParams): mu and lambda.
        p (float): 1 < p <= infinity.
        q (float): 1 <= q < infinity.
        spec (QuadratureSpec, optional): Quadrature settings.

    Returns:
        tuple[Estimate, Estimate]: Even and odd norms with their errors.

    Raises:
        DomainError: For indices outside their ranges.
        NonConvergent: If the exponents predict divergence and the outer integrand grows on the outer shells.
        ToleranceNotMet: If the two divergence tests disagree, refinement stalls or the tail is too large.
    """
    if not (p > 1) or not (1 <= q < math.inf):
        raise DomainError(f"Hille-Tamarkin norm needs 1 < p <= inf and 1 <= q < inf, got p={p}, q={q}")
    spec = spec or Container.quadrature()
    lam = params.lam
    p_dual = conjugate_index(p)
    exponent = q / p_dual
    n_quadrant = spec.n_angular // 4
    angles = np.exp(1j * (np.arange(n_quadrant) + 0.5) * (np.pi / 2) / n_quadrant)
    alpha = params.mu - 0.5
    rules = (
        (_laguerre_rule(spec.n_kernel_nodes, alpha), _laguerre_rule(spec.n_kernel_nodes, alpha + p_dual / 2)),
        (
            _laguerre_rule(spec.n_kernel_nodes // 2, alpha),
            _laguerre_rule(spec.n_kernel_nodes // 2, alpha + p_dual / 2),
        ),
    )

    def radial(s):
        z = math.sqrt(s / lam) * angles
        log_w = (log_radial_weight(params, s, 1), log_radial_weight(params, s, -1))
        full = _log_inner(params, p_dual, z, *rules[0])
        coarse = _log_inner(params, p_dual, z, *rules[1])
        out = []
        for k in range(2):
            out.append(_log_mean(exponent * full[k]) + log_w[k])
            out.append(_log_mean(exponent * full[k][::2]) + log_w[k])
            out.append(_log_mean(exponent * coarse[k]) + log_w[k])
        with np.errstate(over="ignore"):
            return np.exp(np.array(out))

    s_max = effective_s_max(params, spec)
    predicted = divergence_predicted(p, q, lam)
    magnitudes, growing = outer_shell_growth(radial, s_max, lam)
    if predicted and growing:
        Container.logger().warning(msg=f"Hille-Tamarkin norm diverges at p={p}, q={q}, {params.as_dict()}")
        raise NonConvergent("Hille-Tamarkin integrand grows towards r_max", growth=magnitudes)
    if predicted or growing:
        raise ToleranceNotMet(
            f"Hille-Tamarkin divergence tests disagree (exponents: {predicted}, outer shells: {growing})"
        )

    result, error, info = integrate_radial(radial, s_max, spec)
    if info.status != 0:
        raise ToleranceNotMet(f"Hille-Tamarkin outer quadrature: {info.message}", estimate=result[0], error=error)
    tail = truncation_tail(magnitudes, s_max, lam)
    parts = []
    for k in range(2):
        value, half_angular, half_kernel = result[3 * k : 3 * k + 3]
        if value <= 0 or tail > HT_TAIL_REL_TOL * value:
            raise ToleranceNotMet(f"Hille-Tamarkin truncation tail {tail:.3e} against {value:.3e}", estimate=value)
        total_error = error + abs(value - half_angular) + abs(value - half_kernel) + tail
        parts.append(_power_estimate(Estimate(float(value), float(total_error)), q))
    return parts[0], parts[1]


def hille_tamarkin_norm(params: DeformParams, p: float, q: float, spec: QuadratureSpec | None = None) -> Estimate:
    """Sum of the even and odd Hille-Tamarkin norms, an upper bound for the operator norm of B from L^p to L^q."""
    even, odd = hille_tamarkin_parts(params, p, q, spec)
    return Estimate(even.value + odd.value, even.error + odd.error)


def interp_scale(theta: float, s: float) -> float:
    """
    T(s) with 1/T(s) = s / theta + (1 - s) / 2, so T(0) = 2 and T(1) = theta; theta = infinity is allowed.

    Example:
        >>> interp_scale(4.0, 0.5)
        2.6666666666666665
    """
    if not 0 <= s <= 1:
        raise DomainError(f"interpolation parameter must lie in [0, 1], got {s}")
    if theta < 1:
        raise DomainError(f"interpolation endpoint must be >= 1, got {theta}")
    inverse = s / theta + (1 - s) / 2
    if inverse < 0:
        raise DomainError("interpolation scale has a negative denominator")
    return math.inf if inverse == 0 else 1 / inverse


def entropy_derivative_check(f, theta: float, space: MeasureSpace, spec: QuadratureSpec | None = None) -> CheckReport:
    """
    Compares the right derivative at s = 0 of s -> ||f||_{T(s)} with (1/2 - 1/theta) S(f) / ||f||_2.

    The derivative is the Richardson combination (8 D(h/4) - 6 D(h/2) + D(h)) / 3 of forward differences
    D(h) over ``FD_STEPS``. The report has relation ``eq`` and tolerance max(1e-4, 50 quad_err).
    """
    base = space.lp_norm(f, 2.0, spec)
    values = {step: space.lp_norm(f, interp_scale(theta, step), spec) for step in FD_STEPS}
    differences = [(values[step].value - base.value) / step for step in FD_STEPS]
    derivative = (8 * differences[2] - 6 * differences[1] + differences[0]) / 3
    fd_error = sum(weight * (values[step].error + base.error) / step for weight, step in zip((1, 6, 8), FD_STEPS)) / 3

    s_f = space.entropy(f, spec)
    if base.value > 0:
        closed = (0.5 - 1 / theta) * s_f.value / base.value
        closed_error = abs(0.5 - 1 / theta) * (s_f.error / base.value + abs(s_f.value) * base.error / base.value**2)
    else:
        closed, closed_error = 0.0, 0.0
    quad_err = fd_error + closed_error
    return CheckReport.build(
        "entropy_derivative",
        {**space.params.as_dict(), "theta": theta},
        derivative,
        closed,
        quad_err,
        relation="eq",
        tolerance=max(DERIVATIVE_ABS_TOL, DERIVATIVE_ERR_FACTOR * quad_err),
        steps=list(FD_STEPS),
        space=type(space).__name__,
    )


def _check_kappa_domain(params: DeformParams, q: float, s: float):
    if params.lam < 1:
        raise DomainError(f"kappa needs lambda >= 1, got {params.lam}")
    if not 1 <= q < 2 * params.lam:
        raise DomainError(f"kappa needs 1 <= q < 2 lambda, got q={q}, lambda={params.lam}")
    if not 0 <= s <= 1:
        raise DomainError(f"kappa needs s in [0, 1], got {s}")


def kappa(params: DeformParams, q: float, s: float, z, parity: int):
    """
    (lambda^((2 mu + 3)/2) K_nu(lambda |z|^2) / K_nu(|z|^2))^(s/q), nu = mu - 1/2 for parity +1 and
    mu + 1/2 for parity -1. The value at z = 0 is the limit.
    """
    _check_kappa_domain(params, q, s)
    if parity not in (1, -1):
        raise DomainError(f"parity must be +1 or -1, got {parity}")
    nu = params.mu - 0.5 * parity
    x = np.abs(np.asarray(z, dtype=complex)) ** 2
    log_ratio = log_macdonald_ratio(nu, x, params.lam)
    log_kappa = (s / q) * ((params.mu + 1.5) * math.log(params.lam) - log_ratio)
    return np.exp(log_kappa)[()]


def nu_s_density(params: DeformParams, q: float, s: float, z, parity: int):
    """kappa^(q_s) times the unweighted plane density, q_s = interp_scale(q, s)."""
    q_s = interp_scale(q, s)
    return (kappa(params, q, s, z, parity) ** q_s * nu_density(params.unweighted(), z, parity))[()]


def trial_ratio(params: DeformParams, p: float, q: float, f: ComplexPoly, spec: QuadratureSpec | None = None) -> float:
    """||B f||_{L^q(dnu_{mu,lambda})} / ||f||_{L^p(dg_mu)}, a lower bound for the operator norm."""
    denominator = lp_norm_line(params, f, p, spec).value
    if denominator == 0:
        raise DomainError("trial_ratio needs a non-zero function")
    return lp_norm_plane(params, apply_B_poly(params, f), q, spec).value / denominator
