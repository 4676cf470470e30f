"""
Measures of the deformed setting and deterministic adaptive quadrature over each of them.

* ``dg_mu`` on the line: exp(-t^2) |t|^(2 mu) dt / Gamma(mu + 1/2), a probability measure.
* ``dnu_{mu,lambda}(., +1)`` / ``(., -1)`` on the plane: radial densities built from K_{mu -+ 1/2}.

Plane integrals run in the variable s = lambda r^2, where the measure factorises as
``mean over the circle of F`` times ``w(s) ds`` with the bounded radial weight
w(s) = 2^(1/2 - mu) / Gamma(mu + 1/2) K_nu(s) s^(mu + 1/2). The angular mean uses uniform midpoint
nodes; the coarse half-grid mean is carried alongside so the angular error enters the estimate.

Functions:
    parity_split(f) -> ParityPair
    as_parity_pair(f) -> ParityPair
    ground_state_density(params, t) -> float | ndarray
    radial_weight(params, s, parity) / log_radial_weight(params, s, parity)
    nu_density(params, z, parity) -> float | ndarray
    plane_mass(params, parity) -> float
    integrate_line(f, weight, spec, shift) -> Estimate
    integrate_plane(pair, params, spec) -> Estimate
    integrate_plane_with_density(pair, densities, spec) -> Estimate
    outer_shell_growth(radial, s_max, lam) -> (magnitudes, growing)
    integrate_radial(radial, s_max, spec) / truncation_tail(magnitudes, s_max, lam)
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np
from scipy import integrate, special as sc

from mu_bargmann.common.errors import DomainError, NonConvergent, ToleranceNotMet
from mu_bargmann.common.ioc_container import Container
from mu_bargmann.constants import OUTER_SHELLS, RADIAL_BREAKPOINTS, SMALL_ARGUMENT
from mu_bargmann.model import ComplexPoly, DeformParams, Estimate, ParityPair, QuadratureSpec
from mu_bargmann.special import macdonald_k_small


def parity_split(f: ComplexPoly) -> ParityPair:
    return ParityPair(even=f.even_part(), odd=f.odd_part())


def ground_state_density(params: DeformParams, t):
    t = np.asarray(t, dtype=float)
    return (np.exp(-(t**2) - sc.gammaln(params.mu + 0.5)) * np.abs(t) ** (2 * params.mu))[()]


def _order(params: DeformParams, parity: int) -> float:
    if parity not in (1, -1):
        raise DomainError(f"parity must be +1 or -1, got {parity}")
    return params.mu - 0.5 * parity


def log_radial_weight(params: DeformParams, s, parity: int):
    """
    log w(s) with w(s) = 2^(1/2 - mu) / Gamma(mu + 1/2) K_nu(s) s^(mu + 1/2), nu = mu -+ 1/2.

    Below ``SMALL_ARGUMENT`` the small-argument form of K_nu is used; at s = 0 the limit is returned
    (0 for parity -1, for parity +1 it is 0 at mu = 0 and -inf otherwise).
    """
    mu = params.mu
    nu = _order(params, parity)
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise DomainError("radial weight is defined for s >= 0")
    constant = (0.5 - mu) * math.log(2.0) - sc.gammaln(mu + 0.5)
    out = np.empty(s.shape)
    with np.errstate(divide="ignore"):
        regular = s >= SMALL_ARGUMENT
        sr = s[regular]
        out[regular] = constant + np.log(sc.kve(nu, sr)) - sr + (mu + 0.5) * np.log(sr)
        tiny = (s > 0) & ~regular
        if np.any(tiny):
            st = s[tiny]
            out[tiny] = constant + np.log(macdonald_k_small(nu, st)) + (mu + 0.5) * np.log(st)
        zero = s == 0
        if np.any(zero):
            out[zero] = 0.0 if (parity == -1 or mu == 0) else -np.inf
    return out[()]


def radial_weight(params: DeformParams, s, parity: int):
    return np.exp(log_radial_weight(params, s, parity))


def nu_density(params: DeformParams, z, parity: int):
    """
    Density of dnu_{mu,lambda}(., parity) with respect to area measure:
    lambda 2^(1/2 - mu) / (pi Gamma(mu + 1/2)) K_nu(lambda |z|^2) |lambda^(1/2) z|^(2 mu + 1).

    The value at z = 0 is the finite limit lambda / pi for parity -1 and for mu = 0, and 0 otherwise.

    Example:
        >>> nu_density(DeformParams(0.0, 2.0), 0.5, 1)  # (2 / pi) exp(-0.5)
    """
    s = params.lam * np.abs(np.asarray(z, dtype=complex)) ** 2
    return (params.lam / np.pi * radial_weight(params, s, parity))[()]


def plane_mass(params: DeformParams, parity: int) -> float:
    if parity == 1:
        return 1.0
    _order(params, parity)
    return math.exp(0.5 * math.log(math.pi) + sc.gammaln(params.mu + 1) - sc.gammaln(params.mu + 0.5))


class LineWeightKind(str, Enum):
    LEBESGUE = "lebesgue"
    GROUND_STATE = "ground_state"
    ABS2MU = "abs2mu"


@dataclass(frozen=True)
class LineWeight:
    """Weight of a line integral: Lebesgue, the ground state density dg_mu or |t|^(2 mu)."""

    kind: LineWeightKind = LineWeightKind.LEBESGUE
    params: DeformParams | None = None

    @classmethod
    def lebesgue(cls) -> "LineWeight":
        return cls()

    @classmethod
    def ground_state(cls, params: DeformParams) -> "LineWeight":
        return cls(LineWeightKind.GROUND_STATE, params)

    @classmethod
    def abs2mu(cls, params: DeformParams) -> "LineWeight":
        return cls(LineWeightKind.ABS2MU, params)

    def __call__(self, t):
        if self.kind is LineWeightKind.GROUND_STATE:
            return ground_state_density(self.params, t)
        if self.kind is LineWeightKind.ABS2MU:
            return np.abs(t) ** (2 * self.params.mu)
        return np.ones_like(np.asarray(t, dtype=float))[()]


def quadrature_workers():
    if Container.config.get("quadrature_workers", 1) > 1:
        return Container.executor().map
    return 1


def _pack(values: np.ndarray, complex_valued: bool) -> np.ndarray:
    values = np.atleast_1d(values)
    return np.concatenate([values.real, values.imag]) if complex_valued else values.real.astype(float)


def _unpack(vector: np.ndarray, complex_valued: bool):
    if not complex_valued:
        return vector
    half = len(vector) // 2
    return vector[:half] + 1j * vector[half:]


def integrate_line(
    f: Callable, weight: LineWeight, spec: QuadratureSpec | None = None, shift: float = 0.0
) -> Estimate:
    """
    Adaptive quadrature of f(t) weight(t) over [-(t_max + |shift|), t_max + |shift|].

    ``shift`` is the centre of a Gaussian-tilted integrand such as e_mu(c t) exp(-t^2); it widens the
    window and adds breakpoints at +-shift. The tail beyond the window must be below ``abs_tol``.

    Returns:
        Estimate: Float value for real integrands, complex otherwise.

    Raises:
        ToleranceNotMet: If the error estimate exceeds max(abs_tol, rel_tol |value|) at ``max_depth``.
    """
    spec = spec or Container.quadrature()
    half_width = spec.t_max + abs(shift)
    complex_valued = np.iscomplexobj(f(np.float64(0.5)))
    points = sorted({0.0, abs(shift), -abs(shift)} - {-half_width, half_width})

    def integrand(t):
        return _pack(np.asarray(f(t)) * weight(t), complex_valued)

    result, error, info = integrate.quad_vec(
        integrand,
        -half_width,
        half_width,
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        limit=spec.max_depth,
        points=points,
        workers=quadrature_workers(),
        full_output=True,
    )
    value = _unpack(result, complex_valued)[0]
    if info.status != 0:
        raise ToleranceNotMet(f"line quadrature: {info.message}", estimate=value, error=error)
    return Estimate(value if complex_valued else float(value), float(error))


def _angular_nodes(n: int) -> np.ndarray:
    return 2 * np.pi * (np.arange(n) + 0.5) / n


def effective_s_max(params: DeformParams, spec: QuadratureSpec) -> float:
    # the radial weights decay like exp(-s) whatever lambda is
    return spec.r_max**2 * max(params.lam, 1.0)


def outer_shell_growth(radial: Callable, s_max: float, lam: float) -> tuple[tuple[float, ...], bool]:
    """
    Magnitudes of the per-unit-radius integrand r |radial(lambda r^2)| on the outermost shells
    r = r_cut * OUTER_SHELLS, and whether they are non-decreasing.
    """
    r_cut = math.sqrt(s_max / lam)
    magnitudes = []
    for fraction in OUTER_SHELLS:
        r = r_cut * fraction
        magnitudes.append(float(r * np.max(np.abs(radial(lam * r**2)))))
    growing = all(b >= a for a, b in zip(magnitudes, magnitudes[1:])) and magnitudes[-1] > 0
    return tuple(magnitudes), growing


def integrate_radial(radial: Callable, s_max: float, spec: QuadratureSpec):
    points = [p for p in RADIAL_BREAKPOINTS if p < s_max]
    result, error, info = integrate.quad_vec(
        radial,
        0.0,
        s_max,
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        limit=spec.max_depth,
        points=points,
        workers=quadrature_workers(),
        full_output=True,
    )
    return result, float(error), info


def truncation_tail(magnitudes: tuple[float, ...], s_max: float, lam: float) -> float:
    """Size of the outermost shell contribution, used as the estimate of the neglected tail."""
    r_cut = math.sqrt(s_max / lam)
    return 2 * lam * magnitudes[-1] * r_cut * (1 - OUTER_SHELLS[-2])


def _tail_check(radial, s_max, lam, value, spec, what):
    magnitudes, growing = outer_shell_growth(radial, s_max, lam)
    tail = truncation_tail(magnitudes, s_max, lam)
    if tail > max(spec.abs_tol, spec.rel_tol * abs(value)):
        if growing:
            raise NonConvergent(f"{what}: radial integrand grows towards r_max", growth=magnitudes)
        raise ToleranceNotMet(f"{what}: truncation tail {tail:.3e} exceeds tolerance", estimate=value, error=tail)
    return tail


def integrate_plane(pair: ParityPair, params: DeformParams, spec: QuadratureSpec | None = None) -> Estimate:
    """
    int F_e dnu_{mu,lambda}(., +1) + int F_o dnu_{mu,lambda}(., -1) in polar coordinates.

    Args:
        pair (ParityPair): Integrands for the even and odd copies of the plane.
        params (DeformParams): Measure parameters.
        spec (QuadratureSpec, optional): Defaults to ``Container.quadrature()``.

    Returns:
        Estimate: Float value for real integrands, complex otherwise; the error combines the radial
        quadrature estimate, the full/half angular grid difference and the truncation tail.

    Raises:
        ToleranceNotMet: On stalled refinement or a non-negligible truncation tail.
        NonConvergent: If the radial integrand grows towards the truncation radius.
    """
    spec = spec or Container.quadrature()
    parts = pair.parts()
    if not parts:
        return Estimate(0.0, 0.0)
    angles = np.exp(1j * _angular_nodes(spec.n_angular))
    probe = angles * 0.5
    complex_valued = any(np.iscomplexobj(part(probe)) for _, part in parts)
    s_max = effective_s_max(params, spec)

    def radial(s):
        z = math.sqrt(s / params.lam) * angles
        full = 0j
        half = 0j
        for parity, part in parts:
            values = np.broadcast_to(np.asarray(part(z)), z.shape)
            w = radial_weight(params, s, parity)
            full += values.mean() * w
            half += values[::2].mean() * w
        return _pack(np.array([full, half]), complex_valued)

    result, error, info = integrate_radial(radial, s_max, spec)
    pair_values = _unpack(result, complex_valued)
    value = pair_values[0] if complex_valued else float(pair_values[0])
    if info.status != 0:
        magnitudes, growing = outer_shell_growth(radial, s_max, params.lam)
        if growing:
            raise NonConvergent("plane quadrature: radial integrand grows towards r_max", growth=magnitudes)
        raise ToleranceNotMet(f"plane quadrature: {info.message}", estimate=value, error=error)
    tail = _tail_check(radial, s_max, params.lam, value, spec, "plane quadrature")
    angular = abs(pair_values[0] - pair_values[1])
    return Estimate(value, error + angular + tail)


def integrate_plane_with_density(
    pair: ParityPair, densities: ParityPair, spec: QuadratureSpec | None = None, lam: float = 1.0
) -> Estimate:
    """
    Direct polar quadrature of int F_e rho_e dA + int F_o rho_o dA for explicit area densities.

    This path integrates in r rather than s and evaluates the densities pointwise; it serves as an
    independent route for identities between weighted plane integrals. ``lam`` only sets the radial cut.

    Returns:
        Estimate: Float value for real integrands, complex otherwise.
    """
    spec = spec or Container.quadrature()
    angles = np.exp(1j * _angular_nodes(spec.n_angular))
    densities_by_parity = {1: densities.even, -1: densities.odd}
    parts = [(parity, part) for parity, part in pair.parts() if densities_by_parity[parity] is not None]
    if not parts:
        return Estimate(0.0, 0.0)
    r_max = spec.r_max / math.sqrt(min(lam, 1.0))
    sample_point = np.complex128(0.5 + 0.25j)
    complex_valued = any(np.iscomplexobj(np.asarray(part(sample_point))) for _, part in parts)

    def radial(r):
        z = r * angles
        full = 0.0
        half = 0.0
        for parity, part in parts:
            values = np.broadcast_to(np.asarray(part(z)), z.shape) * densities_by_parity[parity](z)
            full += 2 * np.pi * r * values.mean()
            half += 2 * np.pi * r * values[::2].mean()
        return _pack(np.array([full, half]), complex_valued)

    points = [p for p in (1e-4, 1e-2, 0.1, 0.5, 1.0, 2.0, 4.0) if p < r_max]
    result, error, info = integrate.quad_vec(
        radial,
        0.0,
        r_max,
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        limit=spec.max_depth,
        points=points,
        workers=quadrature_workers(),
        full_output=True,
    )
    full, half = _unpack(result, complex_valued)
    if info.status != 0:
        raise ToleranceNotMet(f"density quadrature: {info.message}", estimate=full, error=error)
    value = full if complex_valued else float(full)
    return Estimate(value, float(error) + abs(full - half))


def as_parity_pair(f) -> ParityPair:
    if isinstance(f, ParityPair):
        return f
    if isinstance(f, ComplexPoly):
        return parity_split(f)
    return ParityPair.from_function(f)
