"""
Defines the data models shared by the numerical modules and the command line.

This module provides the following:

* **Parameters and test functions:**
    * `DeformParams`: the deformation pair (mu, lambda) parametrising every measure and kernel.
    * `ComplexPoly`: a finite complex polynomial, the canonical test function on the line and the plane.
    * `ParityPair`: even/odd parts of a function on the plane (or of a plane integrand).
    * `FockCoeffs`: coefficients against one of the orthonormal bases zeta, xi or chi.
    * `Estimate`: a value together with its absolute error estimate.

* **I/O models (pydantic):**
    * `QuadratureSpec`: tolerances and truncations for every quadrature.
    * `CheckReport`: the outcome of a single inequality or identity verification.
    * `RegionQuery`: a point of the (1/p, 1/q) plane together with lambda.
    * `RunConfig`: the resolved settings of one command line invocation.
"""

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Callable, Literal, NamedTuple

import numpy as np
import orjson
from numpy.polynomial import polynomial as P
from pydantic import BaseModel, ConfigDict, Field, field_validator

from mu_bargmann.common.errors import DomainError


class Estimate(NamedTuple):
    value: Any
    error: float


@dataclass(frozen=True)
class DeformParams:
    """
    The pair (mu, lambda) with mu >= 0 and lambda > 0.

    Attributes:
        mu (float): Deformation parameter; mu = 0 recovers the undeformed Gaussian setting.
        lam (float): Weight parameter of the plane measure; lam = 1 is the unweighted space.
    """

    mu: float
    lam: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "lam", float(self.lam))
        if not math.isfinite(self.mu) or self.mu < 0:
            raise DomainError(f"mu must be a finite number >= 0, got {self.mu}")
        if not math.isfinite(self.lam) or self.lam <= 0:
            raise DomainError(f"lambda must be a finite number > 0, got {self.lam}")

    def with_lambda(self, lam: float) -> "DeformParams":
        return replace(self, lam=lam)

    def unweighted(self) -> "DeformParams":
        return self if self.lam == 1.0 else replace(self, lam=1.0)

    def as_dict(self) -> dict[str, float]:
        return {"mu": self.mu, "lambda": self.lam}


def theta(n):
    """Indicator of the odd positive integers."""
    return np.asarray(n) % 2


@dataclass(frozen=True)
class ComplexPoly:
    """
    Degree-ascending complex polynomial; trailing zero coefficients are trimmed so that the zero
    polynomial has an empty coefficient sequence and degree -1.
    """

    coeffs: tuple[complex, ...] = ()

    def __post_init__(self):
        values = [complex(c) for c in self.coeffs]
        while values and values[-1] == 0:
            values.pop()
        object.__setattr__(self, "coeffs", tuple(values))

    @classmethod
    def monomial(cls, n: int, coefficient: complex = 1.0) -> "ComplexPoly":
        return cls((0.0,) * n + (coefficient,))

    @classmethod
    def from_json(cls, text: str | bytes) -> "ComplexPoly":
        from mu_bargmann.common.common import parse_poly_json

        return cls(tuple(parse_poly_json(text)))

    def to_json(self) -> bytes:
        return orjson.dumps([[c.real, c.imag] for c in self.coeffs])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, n: int) -> complex:
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else 0j

    def __call__(self, z):
        if self.is_zero:
            return np.zeros_like(np.asarray(z, dtype=complex))
        return P.polyval(z, np.asarray(self.coeffs))

    def __add__(self, other: "ComplexPoly") -> "ComplexPoly":
        return ComplexPoly(tuple(P.polyadd(self._array(), other._array())))

    def __sub__(self, other: "ComplexPoly") -> "ComplexPoly":
        return ComplexPoly(tuple(P.polysub(self._array(), other._array())))

    def __mul__(self, other):
        if isinstance(other, ComplexPoly):
            if self.is_zero or other.is_zero:
                return ComplexPoly()
            return ComplexPoly(tuple(P.polymul(self._array(), other._array())))
        return ComplexPoly(tuple(complex(other) * c for c in self.coeffs))

    __rmul__ = __mul__

    def __neg__(self) -> "ComplexPoly":
        return self * -1.0

    def scale_argument(self, c: complex) -> "ComplexPoly":
        """Returns z -> f(c z)."""
        return ComplexPoly(tuple(a * complex(c) ** n for n, a in enumerate(self.coeffs)))

    def reflect(self) -> "ComplexPoly":
        return self.scale_argument(-1.0)

    def derivative(self) -> "ComplexPoly":
        if self.degree < 1:
            return ComplexPoly()
        return ComplexPoly(tuple(P.polyder(self._array())))

    def even_part(self) -> "ComplexPoly":
        return ComplexPoly(tuple(a if n % 2 == 0 else 0j for n, a in enumerate(self.coeffs)))

    def odd_part(self) -> "ComplexPoly":
        return ComplexPoly(tuple(a if n % 2 == 1 else 0j for n, a in enumerate(self.coeffs)))

    def _array(self) -> np.ndarray:
        return np.asarray(self.coeffs or (0j,), dtype=complex)


@dataclass(frozen=True)
class ParityPair:
    """
    Even and odd parts of a function on the complex plane.

    Either part may be ``None`` (identically zero), a ``ComplexPoly`` or any vectorised callable.
    """

    even: Callable | None = None
    odd: Callable | None = None

    @classmethod
    def from_function(cls, f: Callable) -> "ParityPair":
        return cls(even=lambda z: (f(z) + f(-z)) / 2, odd=lambda z: (f(z) - f(-z)) / 2)

    def parts(self) -> tuple[tuple[int, Callable], ...]:
        """Returns the non-zero parts tagged with their parity (+1 even, -1 odd)."""
        tagged = []
        for parity, part in ((1, self.even), (-1, self.odd)):
            if part is None or (isinstance(part, ComplexPoly) and part.is_zero):
                continue
            tagged.append((parity, part))
        return tuple(tagged)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        total = np.zeros_like(z)
        for _, part in self.parts():
            total = total + part(z)
        return total

    def check_parity(self, points, atol: float = 1e-12) -> bool:
        points = np.asarray(points, dtype=complex)
        even_ok = self.even is None or np.allclose(self.even(-points), self.even(points), rtol=0, atol=atol)
        odd_ok = self.odd is None or np.allclose(self.odd(-points), -self.odd(points), rtol=0, atol=atol)
        return bool(even_ok and odd_ok)


class BasisTag(str, Enum):
    ZETA = "zeta"
    XI = "xi"
    CHI = "chi"


@dataclass(frozen=True)
class FockCoeffs:
    """
    Finite coefficient sequence a_n against an orthonormal basis.

    ``zeta`` lives in L^2(R, dg_mu), ``xi`` in the unweighted Segal-Bargmann space and ``chi`` in the
    lambda-weighted one; the squared norm is sum |a_n|^2 in every case. Coefficients may be floats or
    sympy numbers for exact arithmetic.
    """

    basis: BasisTag
    coeffs: tuple = ()
    params: DeformParams = field(default_factory=lambda: DeformParams(0.0))

    def __post_init__(self):
        object.__setattr__(self, "basis", BasisTag(self.basis))
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @classmethod
    def basis_vector(cls, basis: BasisTag, n: int, params: DeformParams) -> "FockCoeffs":
        return cls(basis, (0,) * n + (1,), params)

    def norm_sq(self):
        return sum(abs(a) ** 2 for a in self.coeffs)


class QuadratureSpec(BaseModel):
    """
    Tolerances and truncations used by every quadrature in the package.

    Attributes:
        abs_tol (float): Absolute error target.
        rel_tol (float): Relative error target.
        r_max (float): Radial truncation on the complex plane.
        t_max (float): Truncation of the real line (shifted by the integrand's centre when needed).
        n_angular (int): Uniform angular panels on circles; a multiple of 4.
        n_kernel_nodes (int): Gauss nodes for the inner kernel integral of the Hille-Tamarkin norm.
        max_depth (int): Maximum number of adaptive subintervals before ``ToleranceNotMet``.
    """

    model_config = ConfigDict(frozen=True)

    abs_tol: float = Field(1e-10, gt=0)
    rel_tol: float = Field(1e-9, gt=0)
    r_max: float = Field(8.0, gt=0)
    t_max: float = Field(10.0, gt=0)
    n_angular: int = Field(64, ge=8)
    n_kernel_nodes: int = Field(128, ge=8)
    max_depth: int = Field(200, ge=1)

    @field_validator("n_angular", "n_kernel_nodes")
    @classmethod
    def _multiple_of_four(cls, value: int) -> int:
        if value % 4:
            raise ValueError("angular and kernel node counts must be multiples of 4")
        return value

    @classmethod
    def from_mapping(cls, mapping: dict) -> "QuadratureSpec":
        return cls(**{k: v for k, v in mapping.items() if k in cls.model_fields})

    def refined(self) -> "QuadratureSpec":
        return self.model_copy(
            update={
                "r_max": self.r_max * 1.5,
                "n_angular": self.n_angular * 2,
                "n_kernel_nodes": self.n_kernel_nodes * 2,
                "max_depth": self.max_depth * 2,
            }
        )

    def tightened(self, factor: float = 10.0) -> "QuadratureSpec":
        refined = self.refined()
        return refined.model_copy(update={"abs_tol": self.abs_tol / factor, "rel_tol": self.rel_tol / factor})

    def budget(self, estimate: Estimate) -> float:
        """Error budget of an estimate: its own error or the requested tolerance, whichever is larger."""
        return max(float(estimate.error), self.abs_tol, self.rel_tol * abs(estimate.value))


class CheckReport(BaseModel):
    """
    Outcome record of one inequality or identity verification.

    ``relation`` selects the pass rule: ``le`` passes when ``margin >= -quad_err``, ``eq`` when
    ``|margin| <= tolerance`` and ``ne`` when ``|margin| > tolerance``; the tolerance defaults to ``quad_err``.
    """

    name: str
    params: dict[str, float]
    lhs: float
    rhs: float
    margin: float
    quad_err: float
    passed: bool
    relation: Literal["le", "eq", "ne"] = "le"
    details: dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def build(
        cls,
        name: str,
        params: dict[str, float],
        lhs: float,
        rhs: float,
        quad_err: float,
        relation: str = "le",
        tolerance: float | None = None,
        **details,
    ) -> "CheckReport":
        lhs, rhs, quad_err = float(lhs), float(rhs), float(quad_err)
        margin = rhs - lhs
        budget = quad_err if tolerance is None else float(tolerance)
        if relation == "le":
            passed = margin >= -quad_err
        elif relation == "eq":
            passed = abs(margin) <= budget
        else:
            passed = abs(margin) > budget
        if tolerance is not None:
            details["tolerance"] = budget
        return cls(
            name=name,
            params={k: float(v) for k, v in params.items()},
            lhs=lhs,
            rhs=rhs,
            margin=margin,
            quad_err=quad_err,
            passed=bool(passed),
            relation=relation,
            details=details,
        )

    def to_json(self) -> bytes:
        return orjson.dumps(self.model_dump(), option=orjson.OPT_SERIALIZE_NUMPY)


class RegionQuery(BaseModel):
    """A point (1/p, 1/q) of the index plane with the weight lambda."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    p_inv: float = Field(ge=0, lt=1)
    q_inv: float = Field(gt=0, le=1)
    lam: float = Field(gt=0, alias="lambda")


class RunConfig(BaseModel):
    """Resolved settings of one command line invocation."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    command: Literal["eval", "transform", "region", "verify", "sweep"]
    params: DeformParams
    quadrature: QuadratureSpec = Field(default_factory=QuadratureSpec)
    output_path: str | None = None
    format: Literal["json", "csv", "text"] = "json"
