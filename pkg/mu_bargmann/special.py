"""
Deformed and classical special functions.

The deformed factorial ``gamma_mu`` and the deformed exponential ``e_mu`` come with an exact (sympy)
counterpart for identity checks, a power series with a certified geometric tail and a Bessel-function
form for large arguments. The Macdonald function K_alpha is available through the library evaluator,
the I_{+-alpha} series with a Richardson limit at integer order, the large-argument expansion with its
remainder bound and a direct quadrature of its integral representation.

Functions:
    gamma_mu(params, n) -> float
    log_gamma_mu(params, n) -> float | ndarray
    gamma_mu_exact(mu, n) -> sympy.Expr
    e_mu_series(params, z, tol) -> complex | ndarray
    e_mu_parts(params, z) -> (even, odd)
    e_mu(params, z) -> complex | ndarray
    log_abs_e_mu_parts(params, w) -> (log|even|, log|odd|)
    log_macdonald_ratio(alpha, x, lam) -> float | ndarray
    e_mu_integral(params, z, tol) -> Estimate
    hermite_mu(params, n) -> ComplexPoly
    hermite_mu_exact(mu, n) -> list[sympy.Expr]
    hermite_generating_coeffs(mu, order) -> list[list[sympy.Expr]]
    macdonald_k(alpha, x, method) -> float | ndarray
    macdonald_k_series(alpha, x) -> float | ndarray
    macdonald_k_asymptotic(alpha, x, n_terms) -> (value, error_bound)
    macdonald_k_oracle(alpha, x, tol) -> float
    macdonald_k_small(alpha, x) / macdonald_k_large(alpha, x): leading-order forms.
"""

import math

import numpy as np
import sympy
from scipy import integrate, special as sc

from mu_bargmann.common.errors import DomainError, NumericalOverflow, ToleranceNotMet
from mu_bargmann.constants import (
    E_MU_SERIES_RADIUS,
    INTEGER_ORDER_GAP,
    K_SWITCHOVER,
    MAX_SERIES_TERMS,
    RICHARDSON_OFFSETS,
    SERIES_TAIL_TOL,
    SMALL_ARGUMENT,
)
from mu_bargmann.model import ComplexPoly, DeformParams, Estimate


def gamma_mu(params: DeformParams, n: int) -> float:
    """
    The deformed factorial by its recursion gamma(n) = (n + 2 mu theta(n)) gamma(n - 1), gamma(0) = 1.

    Raises:
        DomainError: If n is negative.
        NumericalOverflow: If the value leaves the double range.

    Example:
        >>> gamma_mu(DeformParams(1.0), 3)
        30.0
    """
    if n < 0:
        raise DomainError(f"gamma_mu needs n >= 0, got {n}")
    value = 1.0
    for k in range(1, n + 1):
        value *= k + 2.0 * params.mu * (k % 2)
        if not math.isfinite(value):
            raise NumericalOverflow(f"gamma_mu({params.mu}, {n}) overflows at step {k}")
    return value


def log_gamma_mu(params: DeformParams, n):
    """Logarithm of gamma_mu from its closed form in Gamma functions; vectorised over n."""
    n = np.asarray(n)
    if np.any(n < 0):
        raise DomainError("log_gamma_mu needs n >= 0")
    m = n // 2
    odd = n % 2
    shift = params.mu + 0.5 + odd
    return n * math.log(2.0) + sc.gammaln(m + 1) + sc.gammaln(m + shift) - sc.gammaln(params.mu + 0.5)


def gamma_mu_exact(mu, n: int):
    mu = sympy.nsimplify(mu, rational=True)
    value = sympy.Integer(1)
    for k in range(1, n + 1):
        value *= k + 2 * mu * (k % 2)
    return value


def _series_parts(mu: float, z: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    absz = np.abs(z)
    term = np.ones_like(z)
    even = term.copy()
    odd = np.zeros_like(z)
    tiny = np.finfo(float).tiny
    n = 0
    while True:
        n += 1
        term = term * z / (n + 2.0 * mu * (n % 2))
        if n % 2:
            odd = odd + term
        else:
            even = even + term
        if not (np.all(np.isfinite(even)) and np.all(np.isfinite(odd))):
            raise NumericalOverflow("e_mu series overflows; use e_mu for large arguments")
        ratio = absz / (n + 1)
        if np.all(ratio < 1):
            tail = np.abs(term) * ratio / (1 - ratio)
            if np.all(tail <= tol * np.maximum(np.abs(even) + np.abs(odd), tiny)):
                return even, odd
        if n >= MAX_SERIES_TERMS:
            raise ToleranceNotMet(f"e_mu series did not reach tail tolerance {tol} in {n} terms")


def e_mu_series(params: DeformParams, z, tol: float = SERIES_TAIL_TOL):
    """
    Partial sum of sum_n z^n / gamma_mu(n), truncated once the geometric tail bound drops below
    ``tol`` relative to the partial sum.

    Args:
        params (DeformParams): Only ``mu`` is used.
        z (complex | array_like): Evaluation point(s).
        tol (float): Relative tail tolerance.

    Returns:
        complex | ndarray: Same shape as ``z``.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    z = np.asarray(z, dtype=complex)
    even, odd = _series_parts(params.mu, z, tol)
    return (even + odd)[()]


def _bessel_parts(mu: float, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # valid for Re w >= 0 on the principal branch
    prefactor = sc.gamma(mu + 0.5) * (w / 2) ** (0.5 - mu) * np.exp(w.real)
    return prefactor * sc.ive(mu - 0.5, w), prefactor * sc.ive(mu + 0.5, w)


def e_mu_parts(params: DeformParams, z) -> tuple:
    """
    Even and odd parts of e_mu.

    Small arguments use the power series; larger ones the Bessel form
    Gamma(mu + 1/2) (w/2)^(1/2 - mu) I_{mu -+ 1/2}(w) on Re w >= 0, extended by parity.
    """
    z = np.asarray(z, dtype=complex)
    if params.mu == 0:
        return np.cosh(z)[()], np.sinh(z)[()]
    even = np.empty_like(z)
    odd = np.empty_like(z)
    small = np.abs(z) <= E_MU_SERIES_RADIUS
    if np.any(small):
        even[small], odd[small] = _series_parts(params.mu, z[small], SERIES_TAIL_TOL)
    large = ~small
    if np.any(large):
        sign = np.where(z[large].real < 0, -1.0, 1.0)
        big_even, big_odd = _bessel_parts(params.mu, z[large] * sign)
        even[large], odd[large] = big_even, sign * big_odd
    return even[()], odd[()]


def e_mu(params: DeformParams, z):
    even, odd = e_mu_parts(params, z)
    return even + odd


def log_abs_e_mu_parts(params: DeformParams, w) -> tuple[np.ndarray, np.ndarray]:
    """
    Logarithms of |even part| and |odd part| of e_mu, computed with exponentially scaled Bessel
    functions so that arguments far beyond the overflow threshold of ``exp`` remain usable.
    """
    w = np.asarray(w, dtype=complex)
    log_even = np.empty(w.shape)
    log_odd = np.empty(w.shape)
    small = np.abs(w) <= E_MU_SERIES_RADIUS
    with np.errstate(divide="ignore"):
        if np.any(small):
            even, odd = _series_parts(params.mu, w[small], SERIES_TAIL_TOL)
            log_even[small], log_odd[small] = np.log(np.abs(even)), np.log(np.abs(odd))
        large = ~small
        if np.any(large):
            wl = w[large]
            base = sc.gammaln(params.mu + 0.5) + (0.5 - params.mu) * np.log(np.abs(wl) / 2) + np.abs(wl.real)
            log_even[large] = base + np.log(np.abs(sc.ive(params.mu - 0.5, wl)))
            log_odd[large] = base + np.log(np.abs(sc.ive(params.mu + 0.5, wl)))
    return log_even, log_odd


def e_mu_integral(params: DeformParams, z: complex, tol: float = 1e-12) -> Estimate:
    """
    e_mu(z) as the integral of exp(t z) against the probability measure
    (1 - t)^(mu - 1) (1 + t)^mu / B(1/2, mu) dt on [-1, 1].

    For mu < 1 the endpoint singularity at t = 1 is removed by t = 1 - u^(1/mu), which turns the
    integrand into (1/mu) (2 - u^(1/mu))^mu exp((1 - u^(1/mu)) z) on [0, 2^mu].

    Raises:
        DomainError: If mu <= 0.
        ToleranceNotMet: If adaptive refinement stalls.
    """
    mu = params.mu
    if mu <= 0:
        raise DomainError(f"e_mu_integral needs mu > 0, got {mu}")
    z = complex(z)
    log_beta = sc.betaln(0.5, mu)

    if mu < 1:

        def integrand(u):
            t = 1.0 - u ** (1.0 / mu)
            with np.errstate(divide="ignore"):
                value = np.exp(mu * np.log(max(1.0 + t, 0.0)) + t * z - log_beta) / mu
            return np.array([value.real, value.imag])

        lower, upper = 0.0, 2.0**mu
    else:

        def integrand(t):
            value = np.exp((mu - 1) * np.log1p(-t) + mu * np.log1p(t) + t * z - log_beta) if abs(t) < 1 else 0j
            return np.array([value.real, value.imag])

        lower, upper = -1.0, 1.0

    result, error, info = integrate.quad_vec(
        integrand, lower, upper, epsabs=tol * 1e-3, epsrel=tol, limit=2000, full_output=True
    )
    value = complex(result[0], result[1])
    if info.status != 0:
        raise ToleranceNotMet(f"e_mu_integral stalled: {info.message}", estimate=value, error=error)
    return Estimate(value, float(error))


def hermite_mu(params: DeformParams, n: int) -> ComplexPoly:
    """
    The deformed Hermite polynomial H_n(t) = n! sum_{2j + k = n} (-1)^j (2t)^k / (j! gamma_mu(k)).

    Example:
        >>> hermite_mu(DeformParams(0.5), 2).coeffs
        ((-2+0j), 0j, (2+0j))
    """
    if n < 0:
        raise DomainError(f"hermite_mu needs n >= 0, got {n}")
    coeffs = [0.0] * (n + 1)
    for k in range(n % 2, n + 1, 2):
        j = (n - k) // 2
        try:
            magnitude = float(math.factorial(n)) * 2.0**k / (math.factorial(j) * gamma_mu(params, k))
        except (OverflowError, NumericalOverflow):
            magnitude = math.exp(
                sc.gammaln(n + 1) + k * math.log(2.0) - sc.gammaln(j + 1) - log_gamma_mu(params, k)
            )
        coeffs[k] = (-1) ** j * magnitude
    return ComplexPoly(tuple(coeffs))


def hermite_mu_exact(mu, n: int) -> list:
    """Coefficients of H_n in exact rational arithmetic (degree ascending)."""
    coeffs = [sympy.Integer(0)] * (n + 1)
    for k in range(n % 2, n + 1, 2):
        j = (n - k) // 2
        coeffs[k] = sympy.factorial(n) * (-1) ** j * 2**k / (sympy.factorial(j) * gamma_mu_exact(mu, k))
    return coeffs


def hermite_generating_coeffs(mu, order: int) -> list[list]:
    """
    Coefficients of z^n (n <= order) in exp(-z^2) e_mu(2 t z), each as a degree-ascending list in t.

    Both series are truncated at ``order`` and multiplied symbolically, which gives an independent
    route to H_n / n!.
    """
    t, z = sympy.symbols("t z")
    gaussian = sum((-1) ** j * z ** (2 * j) / sympy.factorial(j) for j in range(order // 2 + 1))
    deformed = sum((2 * t * z) ** k / gamma_mu_exact(mu, k) for k in range(order + 1))
    product = sympy.Poly(sympy.expand(gaussian * deformed), z)
    rows = []
    for n in range(order + 1):
        coefficient = sympy.Poly(product.coeff_monomial(z**n), t)
        rows.append([coefficient.coeff_monomial(t**k) for k in range(n + 1)])
    return rows


def _check_positive(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("Macdonald functions are evaluated for x > 0 only")
    return x


def macdonald_k_series(alpha: float, x):
    """
    K_alpha(x) = (pi / 2) (I_{-alpha}(x) - I_alpha(x)) / sin(alpha pi).

    Within ``INTEGER_ORDER_GAP`` of an integer the value is the limit of symmetric averages
    (K_{alpha+h} + K_{alpha-h}) / 2, extrapolated in h^2 by Richardson's scheme.
    """
    x = _check_positive(x)
    alpha = abs(float(alpha))

    def off_integer(beta):
        return np.pi / 2 * (sc.iv(-beta, x) - sc.iv(beta, x)) / np.sin(beta * np.pi)

    if abs(alpha - round(alpha)) > INTEGER_ORDER_GAP:
        return off_integer(alpha)[()]

    table = [[(off_integer(alpha + h) + off_integer(alpha - h)) / 2] for h in RICHARDSON_OFFSETS]
    for level in range(1, len(RICHARDSON_OFFSETS)):
        factor = 4.0**level
        for row in range(level, len(RICHARDSON_OFFSETS)):
            table[row].append((factor * table[row][level - 1] - table[row - 1][level - 1]) / (factor - 1))
    return table[-1][-1][()]


def macdonald_k_asymptotic(alpha: float, x, n_terms: int | None = None) -> tuple:
    """
    Large-argument expansion
    K_nu(x) = sqrt(pi / 2x) e^-x [sum_{k <= n} a_k(nu) / x^k + eta a_{n+1}(nu) / x^{n+1}], eta in [0, 1],
    with a_k(nu) / x^k = prod_{j=1..k} (nu^2 - (j - 1/2)^2) / (k! (2x)^k).

    Args:
        alpha (float): Order, alpha > -1/2.
        x (float | array_like): Positive argument.
        n_terms (int, optional): Terms kept beyond the leading one. Defaults to the smallest n with
            alpha - 1/2 <= n; the remainder bound needs n + 1 >= alpha - 1/2.

    Returns:
        tuple: (value, error_bound), the bound being the magnitude of the first omitted term.
    """
    x = _check_positive(x)
    if alpha <= -0.5:
        raise DomainError(f"asymptotic expansion needs alpha > -1/2, got {alpha}")
    nu = float(alpha)
    if n_terms is None:
        n_terms = max(0, math.ceil(nu - 0.5))
    if n_terms < 0 or n_terms + 1 < nu - 0.5:
        raise DomainError(f"n_terms={n_terms} leaves the remainder unbounded for alpha={alpha}")
    leading = np.sqrt(np.pi / (2 * x)) * np.exp(-x)
    term = np.ones_like(x)
    total = term.copy()
    for k in range(1, n_terms + 2):
        term = term * (nu**2 - (k - 0.5) ** 2) / (k * 2 * x)
        if k <= n_terms:
            total = total + term
    return (leading * total)[()], (leading * np.abs(term))[()]


def macdonald_k(alpha: float, x, method: str = "library"):
    """
    The Macdonald function K_alpha(x) for x > 0; even in alpha.

    Args:
        alpha (float): Real order.
        x (float | array_like): Positive argument.
        method (str): ``library`` (scipy.special.kv), ``series`` (I_{+-alpha} formula) or ``switchover``
            (series below ``K_SWITCHOVER``, asymptotic expansion above).

    Raises:
        DomainError: If any x <= 0 or the method is unknown.
    """
    x = _check_positive(x)
    if method == "library":
        return sc.kv(alpha, x)[()]
    if method == "series":
        return macdonald_k_series(alpha, x)
    if method == "switchover":
        near = x < K_SWITCHOVER
        result = np.empty_like(x)
        if np.any(near):
            result[near] = macdonald_k_series(alpha, x[near])
        if np.any(~near):
            nu = abs(alpha)
            result[~near] = macdonald_k_asymptotic(nu, x[~near], n_terms=max(0, math.ceil(nu - 0.5)) + 8)[0]
        return result[()]
    raise DomainError(f"unknown Macdonald evaluation method {method!r}")


def macdonald_k_small(alpha: float, x):
    """Leading small-argument form: log(2/x) - Euler gamma at order 0, Gamma(|alpha|)/2 (2/x)^|alpha| otherwise."""
    x = _check_positive(x)
    alpha = abs(alpha)
    if alpha == 0:
        return (np.log(2 / x) - np.euler_gamma)[()]
    return (0.5 * sc.gamma(alpha) * np.exp(alpha * np.log(2 / x)))[()]


def macdonald_k_large(alpha: float, x):
    x = _check_positive(x)
    return (np.sqrt(np.pi / (2 * x)) * np.exp(-x))[()]


def macdonald_k_oracle(alpha: float, x: float, tol: float = 1e-12) -> float:
    """
    Quadrature of K_alpha(x) = int_0^inf exp(-x cosh u) cosh(alpha u) du.

    The exponent is shifted by its maximum so that the integrand peaks at 1, and the range is cut where
    the integrand has fallen below ``tol`` times that peak.

    Raises:
        DomainError: If x <= 0.
        ToleranceNotMet: On stalled refinement.
    """
    if not x > 0:
        raise DomainError("Macdonald functions are evaluated for x > 0 only")
    a = abs(float(alpha))
    peak_at = math.asinh(a / x)
    peak = -x * math.cosh(peak_at) + a * peak_at
    cutoff = peak_at + 1.0
    while -x * math.cosh(cutoff) + a * cutoff - peak > math.log(tol) - 10:
        cutoff *= 1.5

    def integrand(u):
        grow = np.exp(-x * np.cosh(u) + a * u - peak)
        decay = np.exp(-x * np.cosh(u) - a * u - peak)
        return np.array([0.5 * (grow + decay)])

    points = [peak_at] if 0 < peak_at < cutoff else None
    result, error, info = integrate.quad_vec(
        integrand, 0.0, cutoff, epsabs=0.0, epsrel=tol, points=points, limit=2000, full_output=True
    )
    if info.status != 0:
        raise ToleranceNotMet(f"macdonald_k_oracle stalled: {info.message}", estimate=result[0], error=error)
    return float(result[0] * math.exp(peak))


def log_macdonald_ratio(alpha: float, x, lam: float):
    """
    log(K_alpha(x) / K_alpha(lam x)) for x >= 0, using exponentially scaled K so that large x is safe.

    At x = 0 the limit |alpha| log(lam) is returned (0 at alpha = 0).
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or lam <= 0:
        raise DomainError("log_macdonald_ratio needs x >= 0 and lam > 0")
    out = np.empty(x.shape)
    regular = x * min(lam, 1.0) >= SMALL_ARGUMENT
    xr = x[regular]
    out[regular] = np.log(sc.kve(alpha, xr)) - np.log(sc.kve(alpha, lam * xr)) + (lam - 1.0) * xr
    tiny = (x > 0) & ~regular
    if np.any(tiny):
        xt = x[tiny]
        out[tiny] = np.log(macdonald_k_small(alpha, xt)) - np.log(macdonald_k_small(alpha, lam * xt))
    zero = x == 0
    out[zero] = abs(alpha) * math.log(lam) if alpha != 0 else 0.0
    return out[()]
