"""
Decorator adding optional execution logging to the expensive numerical entry points.

Functions:
    trace_on(msg: str, measure_time: bool = False): Logs ``msg`` (and the elapsed wall time) after each call
        when ``print_system_metrics`` is enabled in the container configuration.

Example:
    @trace_on("Hille-Tamarkin norm", measure_time=True)
    def hille_tamarkin_norm(params, p, q, spec):
        ...
"""

import functools
from timeit import default_timer

from mu_bargmann.common.ioc_container import Container


def trace_on(msg: str, measure_time: bool = False):
    """Decorates a function to log its execution, with an optional execution time measurement.

    Args:
        msg: A string message to log after the decorated function returns.
        measure_time: Whether the elapsed time should be appended to the message. Defaults to False.

    Returns:
        A decorator that preserves the wrapped function's name and docstring.
    """

    def decorator(function):
        @functools.wraps(function)
        def traced(*args, **kwargs):
            start = default_timer()
            result = function(*args, **kwargs)
            end = default_timer()

            output_msg = msg
            if measure_time:
                output_msg = f"{output_msg} took {end - start:.3f} seconds"

            if Container.config.get("print_system_metrics"):
                Container.logger().info(msg=output_msg)
            return result

        return traced

    return decorator
