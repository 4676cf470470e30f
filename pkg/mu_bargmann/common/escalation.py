"""
This module implements the numerical escalation path: a computation whose error budget cannot be
certified, or whose report fails by more than its budget, is rerun with tightened quadrature
settings before the outcome is accepted.

Functions:
    retry_with_refinement(max_retries=None, tolerance_factor=None): Decorator for functions taking a
        ``spec: QuadratureSpec`` keyword argument. On ``ToleranceNotMet`` or on a returned report with
        ``passed == False`` the call is repeated, the k-th rerun using
        ``spec.tightened(tolerance_factor ** k)``.

Example:
    @retry_with_refinement(max_retries=2, tolerance_factor=10)
    def check(params, f, spec=None):
        ...
"""

import functools

from mu_bargmann.common.errors import ToleranceNotMet
from mu_bargmann.common.ioc_container import Container


def retry_with_refinement(max_retries: int | None = None, tolerance_factor: float | None = None):
    """
    A decorator adding tolerance escalation to a quadrature-backed function.

    Args:
        max_retries (int, optional): Number of refined reruns after the first attempt. Defaults to the
            ``escalation.max_retries`` configuration value.
        tolerance_factor (float, optional): Factor by which tolerances shrink per attempt. Defaults to the
            ``escalation.tolerance_factor`` configuration value.

    Returns:
        function: A wrapper with the same signature as the decorated function.

    Raises:
        ToleranceNotMet: If the last refined attempt still cannot certify its error budget.
    """
    settings = Container.config.get("escalation", {})
    retries = settings.get("max_retries", 2) if max_retries is None else max_retries
    factor = settings.get("tolerance_factor", 10.0) if tolerance_factor is None else tolerance_factor

    def decorator_retry(func):
        @functools.wraps(func)
        def wrapper(*args, spec=None, **kwargs):
            base = spec or Container.quadrature()
            current = base
            for attempt in range(retries + 1):
                try:
                    result = func(*args, spec=current, **kwargs)
                except ToleranceNotMet as e:
                    if attempt == retries:
                        raise
                    Container.logger().warning(msg=f"{func.__name__}: attempt {attempt + 1} failed with {e}")
                else:
                    if getattr(result, "passed", True) or attempt == retries:
                        if attempt and hasattr(result, "details"):
                            result.details["escalations"] = attempt
                        return result
                    Container.logger().warning(
                        msg=f"{func.__name__}: report {getattr(result, 'name', '?')} failed, refining quadrature"
                    )
                current = base.tightened(factor ** (attempt + 1))
            raise ToleranceNotMet(f"{func.__name__} failed after {retries} refinements")

        return wrapper

    return decorator_retry
