#!/usr/bin/env python3
"""
Command line front end.

Commands:
    eval       Evaluates one special function or density.
    transform  Maps a polynomial through B in closed form, optionally against quadrature at given points.
    region     Emits the boundary of the admissible index region.
    verify     Runs one verification suite (or ``all``) and prints one report per line.
    sweep      Runs a suite over a grid of (mu, lambda) points.

Every option can also be set through an environment variable ``MU_BARGMANN_<OPTION>`` or through a
``key=value`` file given with ``--config``; flags take precedence over the environment, which takes
precedence over the file. Machine-readable output goes to stdout (or ``--out``), logs and the summary to
stderr.

Exit codes:
    0 every report passed, 1 a report failed, 2 invalid arguments or parameters, 3 a numerical tolerance
    could not be met or an integral diverged.
"""

import sys

import click
import numpy as np
import orjson
import pandas as pd
from pydantic import ValidationError
from tabulate import tabulate

import mu_bargmann.common.common as common
from mu_bargmann.common.errors import DomainError, NonConvergent, NumericalOverflow, ToleranceNotMet
from mu_bargmann.common.ioc_container import Container
from mu_bargmann.constants import (
    DEFAULT_MUS,
    DEFAULT_S_VALUES,
    ENV_PREFIX,
    EXIT_DOMAIN,
    EXIT_FAIL,
    EXIT_PASS,
    EXIT_TOLERANCE,
)
from mu_bargmann.inequality import region_boundary_csv
from mu_bargmann.measure_quad import ground_state_density, nu_density
from mu_bargmann.model import CheckReport, ComplexPoly, DeformParams, QuadratureSpec, RunConfig
from mu_bargmann.special import e_mu, e_mu_integral, gamma_mu, hermite_mu, macdonald_k, macdonald_k_oracle
from mu_bargmann.suites import SUITE_NAMES, SuiteContext, SuiteRunner, run_sweep
from mu_bargmann.transform import apply_B_poly, apply_B_quadrature

EVAL_FUNCTIONS = ("gamma_mu", "e_mu", "hermite_mu", "macdonald_k", "nu_density", "ground_state_density")
OPTION_ALIASES = {"lambda": "lam", "out": "output_path", "format": "fmt"}


def _env(name: str) -> str:
    return f"{ENV_PREFIX}_{name.upper()}"


def _config_callback(ctx: click.Context, param: click.Parameter, value: str | None):
    """Loads a key=value file: quadrature keys feed the quadrature settings, the rest become option defaults."""
    if not value:
        return value
    entries = common.load_key_value_file(value)
    quadrature = {k: v for k, v in entries.items() if k in QuadratureSpec.model_fields}
    options = {OPTION_ALIASES.get(k, k): v for k, v in entries.items() if k not in quadrature}
    ctx.default_map = {**(ctx.default_map or {}), **options}
    ctx.ensure_object(dict)["quadrature"] = quadrature
    return value


def common_options(func):
    options = [
        click.option(
            "--config",
            type=click.Path(exists=True, dir_okay=False),
            is_eager=True,
            expose_value=False,
            callback=_config_callback,
            help="key=value file with option defaults and quadrature settings.",
        ),
        click.option("--mu", type=float, default=0.0, show_default=True, envvar=_env("mu"), help="Deformation mu >= 0."),
        click.option(
            "--lambda", "lam", type=float, default=1.0, show_default=True, envvar=_env("lambda"), help="Weight lambda > 0."
        ),
        click.option("--tol", type=float, default=None, envvar=_env("tol"), help="Relative tolerance (caps abs_tol)."),
        click.option("--rmax", type=float, default=None, envvar=_env("rmax"), help="Radial truncation on the plane."),
        click.option("--angular", type=int, default=None, envvar=_env("angular"), help="Angular nodes, multiple of 4."),
        click.option("--out", "output_path", type=click.Path(dir_okay=False), default=None, envvar=_env("out")),
        click.option(
            "--format", "fmt", type=click.Choice(["json", "csv", "text"]), default=None, envvar=_env("format")
        ),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def index_options(func):
    func = click.option("--s", type=float, default=None, envvar=_env("s"), help="Interpolation parameter in [0, 1].")(
        func
    )
    func = click.option("--q", type=float, default=None, envvar=_env("q"), help="Target index q.")(func)
    func = click.option("--p", type=float, default=None, envvar=_env("p"), help="Source index p (inf allowed).")(func)
    return func


def build_run_config(
    ctx: click.Context, command: str, mu: float, lam: float, tol, rmax, angular, output_path, fmt, default_fmt="json"
) -> RunConfig:
    """
    Resolves parameters and quadrature settings of one invocation.

    Raises:
        DomainError: For invalid mu or lambda.
        ValidationError: For invalid quadrature settings.
    """
    settings = Container.quadrature().model_dump()
    settings.update((ctx.obj or {}).get("quadrature", {}))
    if rmax is not None:
        settings["r_max"] = rmax
    if angular is not None:
        settings["n_angular"] = angular
    if tol is not None:
        settings["rel_tol"] = tol
        settings["abs_tol"] = min(settings["abs_tol"], tol)
    return RunConfig(
        command=command,
        params=DeformParams(mu, lam),
        quadrature=QuadratureSpec(**settings),
        output_path=output_path,
        format=fmt or default_fmt,
    )


def _tabular(records: list[dict]) -> list[dict]:
    flat = []
    for record in records:
        flat.append(
            {k: orjson.dumps(v, option=orjson.OPT_SERIALIZE_NUMPY).decode() if isinstance(v, (list, dict)) else v
             for k, v in record.items()}
        )
    return flat


def write_records(records: list[dict], run_config: RunConfig):
    """Serialises records as JSON lines, RFC 4180 CSV or a text table to ``--out`` or stdout."""
    if run_config.format == "json":
        text = "".join(orjson.dumps(r, option=orjson.OPT_SERIALIZE_NUMPY).decode() + "\n" for r in records)
    elif run_config.format == "csv":
        text = pd.DataFrame(_tabular(records)).to_csv(index=False, lineterminator="\r\n")
    else:
        text = tabulate(_tabular(records), headers="keys", floatfmt=".12g") + "\n"
    if run_config.output_path:
        with open(run_config.output_path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    else:
        click.echo(text, nl=False)


def _pair(value: complex) -> list[float]:
    value = complex(value)
    return [value.real, value.imag]


def run_guarded(ctx: click.Context, action) -> None:
    """Runs ``action`` and maps its outcome and the package exceptions to exit codes."""
    try:
        code = action()
    except (DomainError, ValidationError) as e:
        Container.logger().error(msg=f"invalid input: {e}")
        click.echo(f"error: {e}", err=True)
        ctx.exit(EXIT_DOMAIN)
    except (ToleranceNotMet, NonConvergent, NumericalOverflow) as e:
        Container.logger().error(msg=f"numerical failure: {e}")
        click.echo(f"error: {type(e).__name__}: {e}", err=True)
        ctx.exit(EXIT_TOLERANCE)
    ctx.exit(code)


@click.group(help=__doc__)
@click.pass_context
def main(ctx: click.Context):
    ctx.ensure_object(dict)


@main.command("eval")
@click.argument("function", type=click.Choice(EVAL_FUNCTIONS))
@common_options
@click.option("--z", "z_text", default="0", show_default=True, help="Complex point, e.g. 1+2i.")
@click.option("--n", type=int, default=0, show_default=True, help="Integer index.")
@click.option("--alpha", type=float, default=0.0, show_default=True, help="Order of K.")
@click.option("--x", type=float, default=1.0, show_default=True, help="Positive argument of K.")
@click.option("--t", type=float, default=0.0, show_default=True, help="Point on the line.")
@click.option("--parity", type=click.Choice(["1", "-1"]), default="1", show_default=True)
@click.option("--method", type=click.Choice(["library", "series", "switchover"]), default="library")
@click.pass_context
def cmd_eval(ctx, function, mu, lam, tol, rmax, angular, output_path, fmt, z_text, n, alpha, x, t, parity, method):
    """Evaluates FUNCTION with an error estimate where an independent route exists."""

    def action():
        run_config = build_run_config(ctx, "eval", mu, lam, tol, rmax, angular, output_path, fmt)
        params = run_config.params
        record = {"function": function, **params.as_dict()}
        if function == "gamma_mu":
            record.update(n=n, value=gamma_mu(params, n), error=0.0)
        elif function == "e_mu":
            z = common.parse_complex(z_text)
            value = complex(e_mu(params, z))
            error = 0.0
            if params.mu > 0:
                oracle = e_mu_integral(params, z)
                error = abs(value - oracle.value) + oracle.error
            record.update(z=_pair(z), value=_pair(value), error=error)
        elif function == "hermite_mu":
            record.update(n=n, value=[_pair(c) for c in hermite_mu(params, n).coeffs], error=0.0)
        elif function == "macdonald_k":
            value = float(macdonald_k(alpha, x, method=method))
            record.update(alpha=alpha, x=x, method=method, value=value, error=abs(value - macdonald_k_oracle(alpha, x)))
        elif function == "nu_density":
            z = common.parse_complex(z_text)
            record.update(z=_pair(z), parity=int(parity), value=float(nu_density(params, z, int(parity))), error=0.0)
        else:
            record.update(t=t, value=float(ground_state_density(params, t)), error=0.0)
        write_records([record], run_config)
        return EXIT_PASS

    run_guarded(ctx, action)


@main.command("transform")
@click.argument("poly_json")
@common_options
@click.option("--at", "points", multiple=True, help="Point for a quadrature comparison; repeatable.")
@click.pass_context
def cmd_transform(ctx, poly_json, mu, lam, tol, rmax, angular, output_path, fmt, points):
    """Maps POLY_JSON (degree-ascending coefficients, numbers or [re, im] pairs) through B."""

    def action():
        run_config = build_run_config(ctx, "transform", mu, lam, tol, rmax, angular, output_path, fmt)
        params = run_config.params
        f = ComplexPoly.from_json(poly_json)
        image = apply_B_poly(params, f)
        if not points:
            write_records([{**params.as_dict(), "image": [_pair(c) for c in image.coeffs]}], run_config)
            return EXIT_PASS
        records = []
        for text in points:
            z = common.parse_complex(text)
            closed = complex(image(z))
            quadrature = apply_B_quadrature(params, f, z, run_config.quadrature)
            records.append(
                {
                    "z": _pair(z),
                    "closed_form": _pair(closed),
                    "quadrature": _pair(quadrature.value),
                    "quad_err": quadrature.error,
                    "residual": abs(closed - quadrature.value),
                }
            )
        write_records(records, run_config)
        return EXIT_PASS

    run_guarded(ctx, action)


@main.command("region")
@common_options
@click.option("--n", "n_samples", type=int, default=101, show_default=True, help="Samples of the boundary curve.")
@click.pass_context
def cmd_region(ctx, mu, lam, tol, rmax, angular, output_path, fmt, n_samples):
    """Boundary of the admissible (1/p, 1/q) region for --lambda, as CSV by default."""

    def action():
        run_config = build_run_config(ctx, "region", mu, lam, tol, rmax, angular, output_path, fmt, default_fmt="csv")
        if lam <= 0.5:
            Container.logger().warning(msg=f"lambda={lam} <= 1/2: the admissible region is empty")
        table = region_boundary_csv(lam, n_samples)
        write_records(table.to_dict(orient="records"), run_config)
        return EXIT_PASS

    run_guarded(ctx, action)


def _indices(p, q) -> tuple[tuple[float, float], ...] | None:
    if p is None and q is None:
        return None
    if p is None or q is None:
        raise DomainError("--p and --q must be given together")
    return ((p, q),)


def _summarise(reports: list[CheckReport], run_config: RunConfig) -> int:
    write_records([r.model_dump() for r in reports], run_config)
    passed = sum(r.passed for r in reports)
    click.echo(f"{passed}/{len(reports)} reports passed", err=True)
    return EXIT_PASS if passed == len(reports) else EXIT_FAIL


@main.command("verify")
@click.argument("suite", type=click.Choice(SUITE_NAMES))
@common_options
@index_options
@click.pass_context
def cmd_verify(ctx, suite, mu, lam, tol, rmax, angular, output_path, fmt, p, q, s):
    """
    Runs SUITE. Without --p/--q the checks use the admissible sample
    (p, q, lambda) = (4, 1, 1), (3, 1, 1), (2, 1, 1), (2, 2, 2), (3, 2, 1.5), (2.5, 1, 2).
    """

    def action():
        run_config = build_run_config(ctx, "verify", mu, lam, tol, rmax, angular, output_path, fmt)
        context = SuiteContext(
            params=run_config.params,
            spec=run_config.quadrature,
            indices=_indices(p, q),
            s_values=(s,) if s is not None else DEFAULT_S_VALUES,
        )
        return _summarise(SuiteRunner(suite, context)(), run_config)

    run_guarded(ctx, action)


def _grid(text: str | None, fallback: tuple[float, ...]) -> tuple[float, ...]:
    if not text:
        return fallback
    return tuple(float(common.coerce_scalar(token)) for token in text.split(",") if token.strip())


@main.command("sweep")
@click.argument("suite", type=click.Choice(SUITE_NAMES))
@common_options
@index_options
@click.option("--mus", default=None, envvar=_env("mus"), help="Comma separated mu values.")
@click.option("--lambdas", default=None, envvar=_env("lambdas"), help="Comma separated lambda values.")
@click.pass_context
def cmd_sweep(ctx, suite, mu, lam, tol, rmax, angular, output_path, fmt, p, q, s, mus, lambdas):
    """Runs SUITE at every (mu, lambda) of the grid; output is sorted by (mu, lambda)."""

    def action():
        run_config = build_run_config(ctx, "sweep", mu, lam, tol, rmax, angular, output_path, fmt)
        grid = [DeformParams(m, l) for m in _grid(mus, DEFAULT_MUS) for l in _grid(lambdas, (lam,))]
        context = SuiteContext(
            params=run_config.params,
            spec=run_config.quadrature,
            indices=_indices(p, q),
            s_values=(s,) if s is not None else DEFAULT_S_VALUES,
        )
        return _summarise(run_sweep(suite, grid, context), run_config)

    run_guarded(ctx, action)


if __name__ == "__main__":
    sys.exit(main())
