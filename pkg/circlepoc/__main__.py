import json
from collections.abc import Callable
from pathlib import Path
from typing import Any, TypeVar

import click

from circlepoc.bench import DEFAULT_REPETITIONS, DEFAULT_WARMUP, BenchCase, bench_methods
from circlepoc.circle import (
    DEFAULT_MCS_SAMPLES,
    CollisionDisc,
    PocMethod,
    PocResult,
    poc_global_double,
    poc_global_single,
    poc_local_double,
    poc_local_single,
    poc_mcs,
    poc_polar,
)
from circlepoc.config import ConfigError, dump_scenario_config, load_scenario_config
from circlepoc.export import BenchCSVExporter, Exporter, ScenarioCSVExporter, ScenarioJSONExporter
from circlepoc.gaussian import DiagGaussian2, QuadratureSpec, RandomSeed
from circlepoc.geometry import GeometryError, RectangleFootprint, Vec2
from circlepoc.log import get_logger, set_level
from circlepoc.multicircle import poc_bounds, poc_upper
from circlepoc.scenario import ScenarioConfig, TimeSeriesRow, run_scenario, scenario_a, scenario_b

logger = get_logger(__name__)

F = TypeVar("F", bound=Callable[..., Any])

POSITIVE = click.FloatRange(min=0, min_open=True)
NON_NEGATIVE = click.FloatRange(min=0)

CLI_METHODS = {
    method.value.replace("_", "-"): method
    for method in (
        PocMethod.MCS,
        PocMethod.LOCAL_SINGLE,
        PocMethod.LOCAL_DOUBLE,
        PocMethod.GLOBAL_SINGLE,
        PocMethod.GLOBAL_DOUBLE,
        PocMethod.POLAR,
    )
}

PRESETS: dict[str, Callable[[], ScenarioConfig]] = {"a": scenario_a, "b": scenario_b}

exporter_classes: dict[str, Callable[[str, list[TimeSeriesRow]], Exporter]] = {
    "csv": ScenarioCSVExporter,
    "json": ScenarioJSONExporter,
}


class CatchAllCommand(click.Command):
    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except (click.ClickException, click.exceptions.Exit, click.exceptions.Abort):
            raise
        except Exception as error:
            logger.error(str(error))
            ctx.exit(1)


def gaussian_options(func: F) -> F:
    for option in reversed(
        (
            click.option("--mean-x", type=float, required=True, help="Object mean, longitudinal, ego frame"),
            click.option("--mean-y", type=float, required=True, help="Object mean, lateral, ego frame"),
            click.option("--sigma-x", type=POSITIVE, required=True, help="Standard deviation along the ego x axis"),
            click.option("--sigma-y", type=POSITIVE, required=True, help="Standard deviation along the ego y axis"),
        )
    ):
        func = option(func)
    return func


def quadrature_options(func: F) -> F:
    for option in reversed(
        (
            click.option("--abs-tol", type=POSITIVE, default=1e-6, show_default=True),
            click.option("--rel-tol", type=POSITIVE, default=1e-6, show_default=True),
            click.option("--max-subdivisions", type=click.IntRange(min=1), default=50, show_default=True),
        )
    ):
        func = option(func)
    return func


def _rectangle(length: float, width: float) -> RectangleFootprint:
    try:
        return RectangleFootprint(length, width)
    except GeometryError as error:
        raise click.BadParameter(str(error), param_hint="'--length' / '--width'") from error


def _check_grid(n_circles: int, n_axes: int) -> None:
    if n_circles % n_axes:
        raise click.BadParameter(
            f"{n_circles} circles cannot be spread evenly over {n_axes} axes", param_hint="'--n-circles' / '--n-axes'"
        )


def _echo_json(document: dict[str, Any]) -> None:
    click.echo(json.dumps(document))


@click.group()
@click.option(
    "--level",
    type=click.Choice(("DEBUG", "INFO", "WARNING", "ERROR")),
    default="INFO",
    help="Set loglevel for diagnostics written to standard error",
)
def cli(level: str) -> None:
    set_level(level)


@cli.command("poc", cls=CatchAllCommand)
@click.option("--method", type=click.Choice(list(CLI_METHODS)), default="local-single", show_default=True)
@click.option("--re", "r_e", type=POSITIVE, required=True, help="Ego circle radius")
@click.option("--ro", "r_o", type=NON_NEGATIVE, required=True, help="Object circle radius")
@gaussian_options
@click.option("--samples", type=click.IntRange(min=1), default=DEFAULT_MCS_SAMPLES, show_default=True)
@click.option("--seed", type=click.IntRange(min=0, max=2**64 - 1), default=0, show_default=True)
@quadrature_options
@click.option("--ego-x", type=float, default=0.0, help="World position of the ego circle, global methods only")
@click.option("--ego-y", type=float, default=0.0, help="World position of the ego circle, global methods only")
def poc(
    method: str,
    r_e: float,
    r_o: float,
    mean_x: float,
    mean_y: float,
    sigma_x: float,
    sigma_y: float,
    samples: int,
    seed: int,
    abs_tol: float,
    rel_tol: float,
    max_subdivisions: int,
    ego_x: float,
    ego_y: float,
) -> None:
    """Probability of collision between one ego circle and one object circle"""
    disc = CollisionDisc.from_radii(r_e, r_o)
    spec = QuadratureSpec(abs_tol, rel_tol, max_subdivisions)
    g = DiagGaussian2(Vec2(mean_x, mean_y), sigma_x, sigma_y)
    ego = Vec2(ego_x, ego_y)
    result: PocResult
    match CLI_METHODS[method]:
        case PocMethod.MCS:
            result = poc_mcs(disc, g, samples, RandomSeed(seed))
        case PocMethod.LOCAL_SINGLE:
            result = poc_local_single(disc, g, spec)
        case PocMethod.LOCAL_DOUBLE:
            result = poc_local_double(disc, g, spec)
        case PocMethod.GLOBAL_SINGLE:
            result = poc_global_single(disc, ego, ego + g.mean, sigma_x, sigma_y, spec)
        case PocMethod.GLOBAL_DOUBLE:
            result = poc_global_double(disc, ego, ego + g.mean, sigma_x, sigma_y, spec)
        case PocMethod.POLAR:
            result = poc_polar(disc, g, spec)
        case _:  # pragma: no cover
            raise ValueError(f"{method!r} is an unknown method")
    _echo_json({"value": result.value, "method": result.method.value, "error_estimate": result.error_estimate})


@cli.command("bounds", cls=CatchAllCommand)
@click.option("--length", type=POSITIVE, required=True)
@click.option("--width", type=POSITIVE, required=True)
@click.option("--ro", "r_o", type=NON_NEGATIVE, required=True, help="Object circle radius")
@gaussian_options
@click.option("--n-circles", type=click.IntRange(min=1), default=2, show_default=True)
@click.option("--n-axes", type=click.IntRange(min=1), default=1, show_default=True)
@quadrature_options
def bounds(
    length: float,
    width: float,
    r_o: float,
    mean_x: float,
    mean_y: float,
    sigma_x: float,
    sigma_y: float,
    n_circles: int,
    n_axes: int,
    abs_tol: float,
    rel_tol: float,
    max_subdivisions: int,
) -> None:
    """Corridor between the inscribed and the covering circle approximations of a rectangle"""
    rect = _rectangle(length, width)
    _check_grid(n_circles, n_axes)
    g = DiagGaussian2(Vec2(mean_x, mean_y), sigma_x, sigma_y)
    spec = QuadratureSpec(abs_tol, rel_tol, max_subdivisions)
    result = poc_bounds(rect, r_o, g, spec, n_circles=n_circles, n_axes=n_axes)
    _echo_json({"lower": result.lower, "upper": result.upper, "delta": result.delta})


@cli.command("multicircle", cls=CatchAllCommand)
@click.option("--length", type=POSITIVE, required=True)
@click.option("--width", type=POSITIVE, required=True)
@click.option("--n-circles", type=click.IntRange(min=1), default=2, show_default=True)
@click.option("--n-axes", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--ro", "r_o", type=NON_NEGATIVE, required=True, help="Object circle radius")
@gaussian_options
@quadrature_options
def multicircle(
    length: float,
    width: float,
    n_circles: int,
    n_axes: int,
    r_o: float,
    mean_x: float,
    mean_y: float,
    sigma_x: float,
    sigma_y: float,
    abs_tol: float,
    rel_tol: float,
    max_subdivisions: int,
) -> None:
    """Inclusion-exclusion terms of a covering arrangement"""
    rect = _rectangle(length, width)
    _check_grid(n_circles, n_axes)
    g = DiagGaussian2(Vec2(mean_x, mean_y), sigma_x, sigma_y)
    spec = QuadratureSpec(abs_tol, rel_tol, max_subdivisions)
    breakdown = poc_upper(rect, r_o, g, spec, n_circles=n_circles, n_axes=n_axes)
    _echo_json(
        {
            "circle_terms": list(breakdown.circle_terms),
            "lens_terms": list(breakdown.lens_terms),
            "overlap_terms": list(breakdown.overlap_terms),
            "total": breakdown.total,
        }
    )


@cli.command("scenario", cls=CatchAllCommand)
@click.option("--preset", type=click.Choice(list(PRESETS)), help="Built-in intersection scenario")
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, file_okay=True, dir_okay=False, path_type=Path),
    help="Scenario configuration JSON",
)
@click.option("--out", type=click.Path(writable=True, path_type=Path), default=Path("./output"), show_default=True)
@click.option("--format", "format_", type=click.Choice(list(exporter_classes)), default="csv", show_default=True)
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
@click.option(
    "--dump-config",
    type=click.Path(dir_okay=False, writable=True, path_type=Path),
    help="Write the configuration as JSON and exit without running",
)
def scenario(
    preset: str | None,
    config_path: Path | None,
    out: Path,
    format_: str,
    workers: int,
    dump_config: Path | None,
) -> None:
    """Simulate a scenario and write the per-step corridor and rectangle reference"""
    if (preset is None) == (config_path is None):
        raise click.UsageError("Pass exactly one of --preset and --config")
    if config_path is not None:
        try:
            config = load_scenario_config(config_path)
        except ConfigError as error:
            raise click.BadParameter(str(error), param_hint="'--config'") from error
    else:
        config = PRESETS[str(preset)]()
    if dump_config is not None:
        dump_scenario_config(config, dump_config)
        click.echo(dump_config)
        return
    rows = run_scenario(config, max_workers=workers)
    exporter = exporter_classes[format_](config.name, rows)
    click.echo(exporter.export(out))


@cli.command("bench", cls=CatchAllCommand)
@click.option("--repetitions", type=click.IntRange(min=100), default=DEFAULT_REPETITIONS, show_default=True)
@click.option("--samples", type=click.IntRange(min=1), default=DEFAULT_MCS_SAMPLES, show_default=True)
@click.option("--warmup", type=click.IntRange(min=0), default=DEFAULT_WARMUP, show_default=True)
@click.option("--csv", "csv_path", type=click.Path(dir_okay=True, writable=True, path_type=Path))
def bench(repetitions: int, samples: int, warmup: int, csv_path: Path | None) -> None:
    """Time every single-circle estimator on the default case"""
    report = bench_methods(BenchCase.default_case(), repetitions, samples, warmup=warmup)
    click.echo(report.as_table())
    if csv_path is not None:
        BenchCSVExporter(report).export(csv_path)


if __name__ == "__main__":
    cli()
