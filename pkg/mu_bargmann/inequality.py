"""
Admissible index region of the transform and the verification checks built on the numerical layers.

Every check returns a ``CheckReport``. Operator norms of B are replaced by the Hille-Tamarkin upper bound
throughout, so each checked inequality is a consequence of the corresponding statement with a possibly
larger right-hand side.

Functions:
    region_holds(rq) -> bool
    lambda_threshold(p_inv, q_inv) -> float
    region_boundary_csv(lam, n_samples) -> pandas.DataFrame
    check_lemma_2_1(params, z, q) -> CheckReport
    check_eq_3_3(params, pprime, x, spec) -> CheckReport
    check_masses(params, parity, spec) -> CheckReport
    check_isometry(params, f, spec) -> CheckReport
    check_gram(params, n_max, spec) -> CheckReport
    check_hausdorff_young(params, p, q, s, f, spec) -> CheckReport
    check_hirschman(params, p, q, f, spec) -> CheckReport
    check_weighted_hy(params, p, q, s, f, spec) -> CheckReport
    check_log_sobolev(params, p, q, f, spec) -> CheckReport
    check_unitarity_lambda(params, c) -> CheckReport
"""

import math
from dataclasses import dataclass

import numpy as np
import pandas as pd
import sympy
from scipy import special as sc

from mu_bargmann.common.errors import DomainError, ToleranceNotMet
from mu_bargmann.common.ioc_container import Container
from mu_bargmann.constants import GRAM_TOL, LEMMA_REL_TOL, UNIT_NORM_TOL
from mu_bargmann.functional import (
    LineSpace,
    PlaneSpace,
    divergence_predicted,
    hille_tamarkin_norm,
    interp_scale,
    kappa,
    lp_norm_line,
    lp_norm_plane,
    nu_s_density,
    plane_inner,
)
from mu_bargmann.measure_quad import (
    LineWeight,
    integrate_line,
    integrate_plane,
    integrate_plane_with_density,
    parity_split,
    plane_mass,
)
from mu_bargmann.model import (
    BasisTag,
    CheckReport,
    ComplexPoly,
    DeformParams,
    Estimate,
    FockCoeffs,
    ParityPair,
    QuadratureSpec,
    RegionQuery,
)
from mu_bargmann.special import e_mu
from mu_bargmann.transform import (
    SQRT2,
    apply_B_poly,
    dilation_energy,
    fock_from_poly,
    gaussian_dilation_energy,
    plane_norm_sq,
    xi_poly,
)


def region_holds(rq: RegionQuery) -> bool:
    """
    Whether (1/p, 1/q) is admissible for lambda: q^-1 > p^-1 / (2 lambda (1 - p^-1)) and 1/(2 lambda) < q^-1 <= 1.

    Example:
        >>> region_holds(RegionQuery(p_inv=0.25, q_inv=0.4, lam=2.0))
        True
    """
    hyperbola = rq.p_inv / (2 * rq.lam * (1 - rq.p_inv))
    return bool(rq.q_inv > hyperbola and 1 / (2 * rq.lam) < rq.q_inv <= 1)


def lambda_threshold(p_inv: float, q_inv: float) -> float:
    """Smallest lambda beyond which (p_inv, q_inv) is admissible."""
    if not (0 <= p_inv < 1 and 0 < q_inv <= 1):
        raise DomainError(f"need 0 <= p_inv < 1 and 0 < q_inv <= 1, got ({p_inv}, {q_inv})")
    return max(1 / (2 * q_inv), p_inv / (2 * q_inv * (1 - p_inv)))


def region_boundary_csv(lam: float, n_samples: int) -> pd.DataFrame:
    """
    Boundary of the admissible region for ``lam``: the hyperbola q^-1 = p^-1 / (2 lam (1 - p^-1)) sampled on
    0 <= p^-1 <= 2 lam / (2 lam + 1), where it meets q^-1 = 1, together with the horizontal cut q^-1 = 1/(2 lam).

    Returns:
        pd.DataFrame: Columns ``p_inv``, ``q_inv_boundary``, ``q_inv_cut``.
    """
    if lam <= 0:
        raise DomainError(f"lambda must be > 0, got {lam}")
    if n_samples < 2:
        raise DomainError(f"need at least 2 samples, got {n_samples}")
    p_inv = np.linspace(0.0, 2 * lam / (2 * lam + 1), n_samples)
    return pd.DataFrame(
        {
            "p_inv": p_inv,
            "q_inv_boundary": p_inv / (2 * lam * (1 - p_inv)),
            "q_inv_cut": np.full(n_samples, 1 / (2 * lam)),
        }
    )


def _index_params(params: DeformParams, **indices) -> dict[str, float]:
    return {**params.as_dict(), **{k: v for k, v in indices.items() if v is not None}}


def check_lemma_2_1(params: DeformParams, z: complex, q: float, spec: QuadratureSpec | None = None) -> CheckReport:
    """|e_mu(z)|^q <= e_mu(q Re z); equality at mu = 0."""
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    z = complex(z)
    lhs = abs(complex(e_mu(params, z))) ** q
    rhs = complex(e_mu(params, q * z.real)).real
    return CheckReport.build(
        "lemma_2_1",
        _index_params(params, q=q, re_z=z.real, im_z=z.imag),
        lhs,
        rhs,
        LEMMA_REL_TOL * max(1.0, abs(lhs), abs(rhs)),
    )


def check_eq_3_3(params: DeformParams, pprime: float, x: float, spec: QuadratureSpec | None = None) -> CheckReport:
    """int e_mu(sqrt(2) p' x t) exp(-t^2) |t|^(2 mu) dt = Gamma(mu + 1/2) exp(p'^2 x^2 / 2)."""
    spec = spec or Container.quadrature()
    c = SQRT2 * pprime * x

    def integrand(t):
        t = np.asarray(t, dtype=float)
        return np.real(e_mu(params, c * t)) * np.exp(-(t**2))

    lhs = integrate_line(integrand, LineWeight.abs2mu(params), spec, shift=pprime * x / SQRT2)
    rhs = math.exp(sc.gammaln(params.mu + 0.5) + (pprime * x) ** 2 / 2)
    return CheckReport.build(
        "eq_3_3",
        _index_params(params, pprime=pprime, x=x),
        lhs.value,
        rhs,
        lhs.error,
        relation="eq",
        tolerance=spec.budget(lhs),
    )


def check_masses(params: DeformParams, parity: int, spec: QuadratureSpec | None = None) -> CheckReport:
    """Total mass of dnu_{mu,lambda}(., parity) by quadrature against its closed form."""
    spec = spec or Container.quadrature()

    def one(z):
        return np.ones(np.shape(z))

    pair = ParityPair(even=one) if parity == 1 else ParityPair(odd=one)
    numeric = integrate_plane(pair, params, spec)
    closed = plane_mass(params, parity)
    return CheckReport.build(
        "masses",
        _index_params(params, parity=parity),
        numeric.value,
        closed,
        numeric.error,
        relation="eq",
        tolerance=spec.budget(numeric),
    )


def check_isometry(params: DeformParams, f: ComplexPoly, spec: QuadratureSpec | None = None) -> CheckReport:
    """||B f||^2 on the unweighted plane against ||f||^2 in L^2(dg_mu)."""
    params = params.unweighted()
    image = plane_norm_sq(params, apply_B_poly(params, f), spec)
    line = LineSpace(params).norm_sq(f, spec)
    quad_err = image.error + line.error
    return CheckReport.build(
        "isometry",
        _index_params(params, degree=f.degree),
        image.value,
        line.value,
        quad_err,
        relation="eq",
        tolerance=max(quad_err, GRAM_TOL * max(1.0, line.value)),
    )


def check_gram(params: DeformParams, n_max: int = 8, spec: QuadratureSpec | None = None) -> CheckReport:
    """Largest deviation of the Gram matrix of xi_0 .. xi_{n_max} from the identity."""
    params = params.unweighted()
    basis = [xi_poly(params, n) for n in range(n_max + 1)]
    deviation = 0.0
    max_err = 0.0
    for m in range(n_max + 1):
        for n in range(m, n_max + 1):
            if (m - n) % 2:
                continue
            entry = plane_inner(params, basis[m], basis[n], spec)
            deviation = max(deviation, abs(entry.value - (1.0 if m == n else 0.0)))
            max_err = max(max_err, entry.error)
    return CheckReport.build(
        "gram", _index_params(params, n_max=n_max), deviation, GRAM_TOL, 0.0, max_quad_err=max_err
    )


def _check_theorem_indices(p: float, q: float, lam: float):
    if not 1 <= q < 2 * lam or not p > 1 + q / (2 * lam):
        raise DomainError(f"need 1 <= q < 2 lambda and p > 1 + q / (2 lambda), got p={p}, q={q}, lambda={lam}")


def _require_unit_lambda(params: DeformParams, name: str):
    if params.lam != 1:
        raise DomainError(f"{name} is stated for lambda = 1, got {params.lam}")


def check_hausdorff_young(
    params: DeformParams, p: float, q: float, s: float, f: ComplexPoly, spec: QuadratureSpec | None = None
) -> CheckReport:
    """
    ||B f||_{L^{q_s}(dnu_mu)} <= A^s ||f||_{L^{p_s}(dg_mu)} with A the Hille-Tamarkin norm at (p, q).

    At s = 0 both indices are 2 and the report checks the isometric equality instead.
    """
    _require_unit_lambda(params, "the Hausdorff-Young check")
    _check_theorem_indices(p, q, 1.0)
    spec = spec or Container.quadrature()
    p_s, q_s = interp_scale(p, s), interp_scale(q, s)
    image = lp_norm_plane(params, apply_B_poly(params, f), q_s, spec)
    norm = lp_norm_line(params, f, p_s, spec)
    indices = _index_params(params, p=p, q=q, s=s)
    if s == 0:
        return CheckReport.build(
            "hausdorff_young",
            indices,
            image.value,
            norm.value,
            image.error + norm.error,
            relation="eq",
            tolerance=max(spec.budget(image), spec.budget(norm)),
        )
    bound = hille_tamarkin_norm(params, p, q, spec)
    scale = bound.value**s
    quad_err = image.error + scale * norm.error + s * bound.value ** (s - 1) * bound.error * norm.value
    return CheckReport.build(
        "hausdorff_young",
        indices,
        image.value,
        scale * norm.value,
        quad_err,
        p_s=p_s,
        q_s=q_s,
        hille_tamarkin=bound.value,
        trial_ratio=image.value / norm.value if norm.value else None,
    )


@dataclass
class EntropyBalance:
    """The terms shared by the entropy inequalities."""

    entropy_f: Estimate
    entropy_image: Estimate
    norm_sq: Estimate
    bound: Estimate

    def hirschman_sides(self, p: float, q: float) -> tuple[float, float, float]:
        lhs = (1 / p - 0.5) * self.entropy_f.value
        rhs = (1 / q - 0.5) * self.entropy_image.value + math.log(self.bound.value) * self.norm_sq.value
        quad_err = (
            abs(1 / p - 0.5) * self.entropy_f.error
            + abs(1 / q - 0.5) * self.entropy_image.error
            + abs(math.log(self.bound.value)) * self.norm_sq.error
            + self.norm_sq.value * self.bound.error / self.bound.value
        )
        return lhs, rhs, quad_err


def _entropy_balance(params: DeformParams, p: float, q: float, f: ComplexPoly, image: ComplexPoly, spec):
    unweighted = params.unweighted()
    line = LineSpace(unweighted)
    return EntropyBalance(
        entropy_f=line.entropy(f, spec),
        entropy_image=PlaneSpace(unweighted).entropy(image, spec),
        norm_sq=line.norm_sq(f, spec),
        bound=hille_tamarkin_norm(params, p, q, spec),
    )


def check_hirschman(
    params: DeformParams, p: float, q: float, f: ComplexPoly, spec: QuadratureSpec | None = None
) -> CheckReport:
    """
    (1/p - 1/2) S(f) <= (1/q - 1/2) S(B f) + log(A) ||f||^2, entropies on L^2(dg_mu) and L^2(dnu_mu).
    """
    _require_unit_lambda(params, "the Hirschman check")
    _check_theorem_indices(p, q, 1.0)
    indices = _index_params(params, p=p, q=q)
    if f.is_zero:
        return CheckReport.build("hirschman", indices, 0.0, 0.0, 0.0)
    balance = _entropy_balance(params, p, q, f, apply_B_poly(params, f), spec)
    lhs, rhs, quad_err = balance.hirschman_sides(p, q)
    return CheckReport.build(
        "hirschman",
        indices,
        lhs,
        rhs,
        quad_err,
        entropy_f=balance.entropy_f.value,
        entropy_image=balance.entropy_image.value,
        hille_tamarkin=balance.bound.value,
    )


def check_weighted_hy(
    params: DeformParams, p: float, q: float, s: float, f: ComplexPoly, spec: QuadratureSpec | None = None
) -> CheckReport:
    """
    ||B f||_{L^{q_s}(dnu^s)} <= A_1^s ||f||_{L^{p_s}(dg_mu)} with A_1 the Hille-Tamarkin norm at (p, q, lambda).

    The left side is computed as ||(B f) kappa_s||_{L^{q_s}(dnu_mu)} and cross-checked against a direct
    quadrature with the density of dnu^s.

    Raises:
        DomainError: For lambda < 1 or (p, q, lambda) outside the admissible region.
        ToleranceNotMet: If the two routes disagree beyond their combined error budget.
    """
    if params.lam < 1:
        raise DomainError(f"the weighted Hausdorff-Young check needs lambda >= 1, got {params.lam}")
    _check_theorem_indices(p, q, params.lam)
    if divergence_predicted(p, q, params.lam):
        raise DomainError(f"(p, q, lambda) = ({p}, {q}, {params.lam}) is outside the admissible region")
    spec = spec or Container.quadrature()
    unweighted = params.unweighted()
    image = apply_B_poly(params, f)
    p_s, q_s = interp_scale(p, s), interp_scale(q, s)
    norm = lp_norm_line(params, f, p_s, spec)
    indices = _index_params(params, p=p, q=q, s=s)
    if s == 0:
        lhs = lp_norm_plane(unweighted, image, 2.0, spec)
        return CheckReport.build(
            "weighted_hy",
            indices,
            lhs.value,
            norm.value,
            lhs.error + norm.error,
            relation="eq",
            tolerance=max(spec.budget(lhs), spec.budget(norm)),
        )

    def weighted(part, parity):
        return lambda z: np.abs(part(z) * kappa(params, q, s, z, parity)) ** q_s

    def plain(part):
        return lambda z: np.abs(part(z)) ** q_s

    pair = parity_split(image)
    parts = dict(pair.parts())
    by_weight = integrate_plane(
        ParityPair(**{name: weighted(parts[k], k) for name, k in (("even", 1), ("odd", -1)) if k in parts}),
        unweighted,
        spec,
    )
    by_density = integrate_plane_with_density(
        ParityPair(**{name: plain(parts[k]) for name, k in (("even", 1), ("odd", -1)) if k in parts}),
        ParityPair(
            even=lambda z: nu_s_density(params, q, s, z, 1),
            odd=lambda z: nu_s_density(params, q, s, z, -1),
        ),
        spec,
        lam=params.lam,
    )
    agreement = max(spec.budget(by_weight), spec.budget(by_density)) + by_weight.error + by_density.error
    if abs(by_weight.value - by_density.value) > agreement:
        raise ToleranceNotMet(
            f"weighted norm routes disagree: {by_weight.value!r} vs {by_density.value!r}",
            estimate=by_weight.value,
            error=abs(by_weight.value - by_density.value),
        )
    lhs_value = max(by_weight.value, 0.0) ** (1 / q_s)
    lhs_error = lhs_value * by_weight.error / (q_s * by_weight.value) if by_weight.value > 0 else 0.0
    bound = hille_tamarkin_norm(params, p, q, spec)
    scale = bound.value**s
    quad_err = lhs_error + scale * norm.error + s * bound.value ** (s - 1) * bound.error * norm.value
    details = {
        "p_s": p_s,
        "q_s": q_s,
        "hille_tamarkin": bound.value,
        "density_route": max(by_density.value, 0.0) ** (1 / q_s),
    }
    if s == 1:
        details["weighted_space_norm"] = lp_norm_plane(params, image, q, spec).value
    return CheckReport.build("weighted_hy", indices, lhs_value, scale * norm.value, quad_err, **details)


def check_log_sobolev(
    params: DeformParams, p: float, q: float, f: ComplexPoly, spec: QuadratureSpec | None = None
) -> CheckReport:
    """
    The logarithmic Sobolev inequality

        (1/2 - 1/q) S(B f) - (1/2 - 1/p) S(f) <= (1/q) E_{mu,lam}(B f) + (log A - (2 mu + 3)/(2q) log lam) ||f||^2.

    The report arranges both sides like the Hirschman check, lhs = (1/p - 1/2) S(f) and
    rhs = (1/q - 1/2) S(B f) + (1/q) E_{mu,lam}(B f) + (log A - (2 mu + 3)/(2q) log lam) ||f||^2, so the
    margin is that of the inequality above and lambda = 1 reproduces the Hirschman numbers exactly. The
    sides in the stated arrangement are kept in ``details``.
    """
    if params.lam < 1:
        raise DomainError(f"the log-Sobolev check needs lambda >= 1, got {params.lam}")
    _check_theorem_indices(p, q, params.lam)
    spec = spec or Container.quadrature()
    indices = _index_params(params, p=p, q=q)
    if f.is_zero:
        return CheckReport.build("log_sobolev", indices, 0.0, 0.0, 0.0)
    image = apply_B_poly(params, f)
    balance = _entropy_balance(params, p, q, f, image, spec)
    lhs, rhs, quad_err = balance.hirschman_sides(p, q)
    energy = dilation_energy(params, image, spec)
    log_lam = math.log(params.lam)
    rhs += energy.value / q - (2 * params.mu + 3) / (2 * q) * log_lam * balance.norm_sq.value
    quad_err += energy.error / q + (2 * params.mu + 3) / (2 * q) * log_lam * balance.norm_sq.error
    details = {
        "entropy_f": balance.entropy_f.value,
        "entropy_image": balance.entropy_image.value,
        "hille_tamarkin": balance.bound.value,
        "dilation_energy": energy.value,
        "stated_lhs": (0.5 - 1 / q) * balance.entropy_image.value - (0.5 - 1 / p) * balance.entropy_f.value,
        "stated_rhs": energy.value / q
        + (math.log(balance.bound.value) - (2 * params.mu + 3) / (2 * q) * log_lam) * balance.norm_sq.value,
    }
    if params.mu == 0 and params.lam > 1:
        closed = gaussian_dilation_energy(params.lam, fock_from_poly(image, BasisTag.XI, params.unweighted()))
        details["dilation_energy_closed_form"] = closed
        details["dilation_energy_residual"] = abs(closed - energy.value)
    return CheckReport.build("log_sobolev", indices, lhs, rhs, quad_err, **details)


def _exact_modulus_sq(a):
    if isinstance(a, sympy.Basic):
        return sympy.Abs(a) ** 2
    return sympy.nsimplify(abs(complex(a)) ** 2, tolerance=1e-15, rational=True)


def check_unitarity_lambda(params: DeformParams, c: FockCoeffs, spec: QuadratureSpec | None = None) -> CheckReport:
    """
    ||B f||^2 in the lambda-weighted space, sum lambda^-n |a_n|^2 in exact arithmetic, for a unit vector of
    xi coefficients. The report expects equality with 1 for lambda = 1 or a vacuum-only vector and a strict
    difference otherwise.

    Raises:
        DomainError: If the coefficients are not xi coefficients of a unit vector.
    """
    if c.basis is not BasisTag.XI:
        raise DomainError(f"unitarity witness needs xi coefficients, got {c.basis.value}")
    squares = [_exact_modulus_sq(a) for a in c.coeffs]
    total = sympy.nsimplify(sum(squares, sympy.Integer(0)))
    if abs(float(total) - 1) > UNIT_NORM_TOL:
        raise DomainError(f"coefficients must have unit norm, got {float(total)}")
    lam = sympy.nsimplify(params.lam, rational=True)
    value = sympy.nsimplify(sum((lam ** (-n) * a2 for n, a2 in enumerate(squares)), sympy.Integer(0)))
    excited = any(a2 != 0 for a2 in squares[1:])
    relation = "ne" if params.lam != 1 and excited else "eq"
    return CheckReport.build(
        "unitarity_lambda",
        _index_params(params, levels=len(c.coeffs)),
        float(value),
        1.0,
        0.0,
        relation=relation,
        tolerance=UNIT_NORM_TOL,
        exact=str(value),
    )
