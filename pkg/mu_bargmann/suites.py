"""
Verification batteries run by the ``verify`` and ``sweep`` commands.

Each battery is a ``BaseSuite`` subclass registered in ``SUITES_MAP`` under its command line name. A suite
only lists its checks; ``SuiteRunner`` executes them concurrently, wraps every check in the tolerance
escalation path and returns the reports in listing order, so output never depends on completion order.

Classes:
    SuiteContext: Parameters, quadrature settings, test functions and index samples shared by all suites.
    BaseSuite: Abstract battery.
    SuiteRunner: Callable executing one named suite (or ``all``).

Functions:
    default_family(params) -> tuple[ComplexPoly, ...]
    run_sweep(name, grid, context) -> list[CheckReport]
"""

import functools
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, replace
from typing import Callable

import sympy

from mu_bargmann.common.errors import DomainError
from mu_bargmann.common.escalation import retry_with_refinement
from mu_bargmann.common.ioc_container import Container
from mu_bargmann.common.trace_logger import trace_on
from mu_bargmann.constants import (
    DEFAULT_ADMISSIBLE_SAMPLE,
    DEFAULT_S_VALUES,
    DEFAULT_THETAS,
)
from mu_bargmann.functional import LineSpace, PlaneSpace, entropy_derivative_check
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
)
from mu_bargmann.model import BasisTag, CheckReport, ComplexPoly, DeformParams, FockCoeffs, QuadratureSpec
from mu_bargmann.transform import zeta_poly

Task = Callable[[], CheckReport]

LEMMA_POINTS = (0.5 + 0.5j, 1 + 2j, -1.5 + 0.3j, 2j, 3.0, -2.5 - 1j)
LEMMA_QS = (1.0, 2.0, 3.5)
EQ_3_3_POINTS = ((2.0, 0.0), (2.0, 1.0), (1.5, 0.7), (4 / 3, -0.5), (3.0, 1.2))
DERIVATIVE_FAMILY = (ComplexPoly((0, 1)), ComplexPoly((0, 0, 1)), ComplexPoly((1, 0, 0, 1)))


def default_family(params: DeformParams) -> tuple[ComplexPoly, ...]:
    """The test functions 1, t, t^2, t + i t^3 and zeta_3."""
    return (
        ComplexPoly((1,)),
        ComplexPoly((0, 1)),
        ComplexPoly((0, 0, 1)),
        ComplexPoly((0, 1, 0, 1j)),
        zeta_poly(params, 3),
    )


def unit_vectors() -> tuple[tuple, ...]:
    half = sympy.sqrt(2) / 2
    return (
        (sympy.Integer(1),),
        (sympy.Integer(0), sympy.Integer(1)),
        (half, sympy.Integer(0), half),
        (sympy.Rational(3, 5), sympy.Integer(0), sympy.Integer(0), sympy.Rational(4, 5) * sympy.I),
    )


@dataclass(frozen=True)
class SuiteContext:
    """
    Inputs shared by the suites.

    Attributes:
        params (DeformParams): mu and lambda of the run.
        spec (QuadratureSpec): Base quadrature settings; escalation tightens from here.
        family (tuple[ComplexPoly, ...]): Test functions; defaults to ``default_family(params)``.
        indices (tuple[tuple[float, float], ...] | None): (p, q) pairs given on the command line; they are
            used with the run's lambda instead of the default admissible sample.
        s_values (tuple[float, ...]): Interpolation parameters.
        thetas (tuple[float, ...]): Endpoints for the entropy derivative.
    """

    params: DeformParams
    spec: QuadratureSpec
    family: tuple[ComplexPoly, ...] = ()
    indices: tuple[tuple[float, float], ...] | None = None
    s_values: tuple[float, ...] = DEFAULT_S_VALUES
    thetas: tuple[float, ...] = DEFAULT_THETAS
    max_workers: int | None = None

    def __post_init__(self):
        if not self.family:
            object.__setattr__(self, "family", default_family(self.params))

    def samples(self, unit_lambda: bool = False) -> tuple[tuple[DeformParams, float, float], ...]:
        """
        (params, p, q) triples: the command line indices at the run's lambda, else the admissible sample
        (restricted to lambda = 1 for the unweighted theorems).
        """
        if self.indices:
            return tuple((self.params, p, q) for p, q in self.indices)
        return tuple(
            (self.params.with_lambda(lam), p, q)
            for p, q, lam in DEFAULT_ADMISSIBLE_SAMPLE
            if not unit_lambda or lam == 1.0
        )


class BaseSuite(ABC):
    """
    A battery of checks.

    Args:
        context (SuiteContext): Shared inputs.

    Attributes:
        name (str): Command line name.
    """

    name = ""

    def __init__(self, context: SuiteContext):
        self.context = context

    def task(self, check: Callable, *args) -> Task:
        refined = retry_with_refinement()(check)
        return functools.partial(refined, *args, spec=self.context.spec)

    @abstractmethod
    def tasks(self) -> list[Task]:
        pass


class Lemma21Suite(BaseSuite):
    name = "lemma21"

    def tasks(self) -> list[Task]:
        return [self.task(check_lemma_2_1, self.context.params, z, q) for z in LEMMA_POINTS for q in LEMMA_QS]


class Eq33Suite(BaseSuite):
    name = "eq33"

    def tasks(self) -> list[Task]:
        return [self.task(check_eq_3_3, self.context.params, pprime, x) for pprime, x in EQ_3_3_POINTS]


class MassesSuite(BaseSuite):
    name = "masses"

    def tasks(self) -> list[Task]:
        return [self.task(check_masses, self.context.params, parity) for parity in (1, -1)]


class UnitaritySuite(BaseSuite):
    name = "unitarity"

    def tasks(self) -> list[Task]:
        params = self.context.params
        tasks = [
            self.task(check_unitarity_lambda, params, FockCoeffs(BasisTag.XI, coeffs, params))
            for coeffs in unit_vectors()
        ]
        tasks.append(self.task(check_gram, params))
        tasks.extend(self.task(check_isometry, params, f) for f in self.context.family)
        return tasks


class HausdorffYoungSuite(BaseSuite):
    name = "hy"

    def tasks(self) -> list[Task]:
        return [
            self.task(check_hausdorff_young, params, p, q, s, f)
            for params, p, q in self.context.samples(unit_lambda=True)
            for s in self.context.s_values
            for f in self.context.family
        ]


class HirschmanSuite(BaseSuite):
    name = "hirschman"

    def tasks(self) -> list[Task]:
        return [
            self.task(check_hirschman, params, p, q, f)
            for params, p, q in self.context.samples(unit_lambda=True)
            for f in self.context.family
        ]


class WeightedHausdorffYoungSuite(BaseSuite):
    name = "weighted_hy"

    def tasks(self) -> list[Task]:
        return [
            self.task(check_weighted_hy, params, p, q, s, f)
            for params, p, q in self.context.samples()
            for s in self.context.s_values
            for f in self.context.family
        ]


class LogSobolevSuite(BaseSuite):
    name = "lsi"

    def tasks(self) -> list[Task]:
        return [
            self.task(check_log_sobolev, params, p, q, f)
            for params, p, q in self.context.samples()
            for f in self.context.family
        ]


class DerivativeSuite(BaseSuite):
    name = "derivative"

    def tasks(self) -> list[Task]:
        params = self.context.params
        spaces = (LineSpace(params.unweighted()), PlaneSpace(params.unweighted()))
        return [
            self.task(entropy_derivative_check, f, theta, space)
            for space in spaces
            for theta in self.context.thetas
            for f in DERIVATIVE_FAMILY
        ]


SUITES_MAP: dict[str, type[BaseSuite]] = {
    suite.name: suite
    for suite in (
        Lemma21Suite,
        Eq33Suite,
        MassesSuite,
        UnitaritySuite,
        HausdorffYoungSuite,
        HirschmanSuite,
        WeightedHausdorffYoungSuite,
        LogSobolevSuite,
        DerivativeSuite,
    )
}
SUITE_NAMES = tuple(SUITES_MAP) + ("all",)


class SuiteRunner:
    """
    Runs one named suite, or every suite for ``all``.

    Args:
        name (str): A key of ``SUITES_MAP`` or ``all``.
        context (SuiteContext): Shared inputs.

    Raises:
        DomainError: For an unknown suite name.
    """

    def __init__(self, name: str, context: SuiteContext):
        if name == "all":
            classes = list(SUITES_MAP.values())
        elif name in SUITES_MAP:
            classes = [SUITES_MAP[name]]
        else:
            raise DomainError(f"unknown suite {name!r}, expected one of {', '.join(SUITE_NAMES)}")
        self.name = name
        self.context = context
        self.suites = [cls(context) for cls in classes]

    def __call__(self) -> list[CheckReport]:
        """
        Executes the checks on a local thread pool.

        Returns:
            list[CheckReport]: Reports in listing order.

        Raises:
            MuBargmannError: The first numerical or domain error raised by a check.
        """
        tasks = [task for suite in self.suites for task in suite.tasks()]
        Container.logger().info(msg=f"suite {self.name}: {len(tasks)} checks at {self.context.params.as_dict()}")
        reports: list[CheckReport | None] = [None] * len(tasks)
        workers = self.context.max_workers or Container.config.get("max_workers", 4)
        with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="suite") as executor:
            future_to_index = {executor.submit(task): i for i, task in enumerate(tasks)}
            for future in as_completed(future_to_index):
                reports[future_to_index[future]] = future.result()
        for report in reports:
            if not report.passed:
                Container.logger().warning(msg=f"{report.name} failed at {report.params}: margin {report.margin:.3e}")
        return reports


def _sweep_key(params: DeformParams) -> tuple[float, float]:
    return params.mu, params.lam


@trace_on("parameter sweep", measure_time=True)
def run_sweep(name: str, grid: list[DeformParams], context: SuiteContext) -> list[CheckReport]:
    """
    Runs suite ``name`` at every point of ``grid`` concurrently.

    Args:
        name (str): Suite name.
        grid (list[DeformParams]): Parameter points; duplicates are dropped.
        context (SuiteContext): Template context; its ``params`` and ``family`` are replaced per point.

    Returns:
        list[CheckReport]: Reports sorted by (mu, lambda), each block in listing order.
    """
    points = sorted(set(grid), key=_sweep_key)
    runners = [SuiteRunner(name, replace(context, params=params, family=())) for params in points]
    blocks: list[list[CheckReport] | None] = [None] * len(runners)
    if not runners:
        return []
    workers = context.max_workers or Container.config.get("max_workers", 4)
    with ThreadPoolExecutor(max_workers=max(1, min(len(runners), workers)), thread_name_prefix="sweep") as executor:
        future_to_index = {executor.submit(runner): i for i, runner in enumerate(runners)}
        for future in as_completed(future_to_index):
            blocks[future_to_index[future]] = future.result()
    return [report for block in blocks for report in block]
