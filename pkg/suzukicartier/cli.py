import csv
import io
import json
from typing import Any, Dict, List, Optional

import click
from loguru import logger

from suzukicartier import __version__
from suzukicartier.config.loader import build_run_config, load_config, resolve_cache_dir
from suzukicartier.config.models import Command, OutputFormat
from suzukicartier.core.models import RunReport
from suzukicartier.core.pipeline import SuzukiPipeline
from suzukicartier.utils.errors import ConfigurationError, SuzukiError
from suzukicartier.utils.logging_utils import setup_logging

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# Rendering
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

def _cell(value: Any) -> str:
    if isinstance(value, (list, dict)):
        return json.dumps(value, sort_keys=True)
    if value is None:
        return ""
    return str(value)


def render_csv(rows: List[Dict[str, Any]]) -> str:
    fieldnames: List[str] = []
    for row in rows:
        fieldnames.extend(key for key in row if key not in fieldnames)
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: _cell(value) for key, value in row.items()})
    return buffer.getvalue().rstrip("\n")


def render_pretty(report: RunReport) -> str:
    lines = [f"S_{report.m}: q0={report.q0} q={report.q} g={report.g}  [{report.command}]"]
    for key in sorted(report.payload):
        value = report.payload[key]
        if isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{key}:")
            lines.extend("  " + "  ".join(f"{k}={_cell(v)}" for k, v in item.items()) for item in value)
        else:
            lines.append(f"{key}: {_cell(value)}")
    return "\n".join(lines)


def render(report: RunReport, output_format: OutputFormat) -> str:
    if output_format is OutputFormat.JSON:
        return report.to_json()
    if output_format is OutputFormat.CSV:
        return render_csv(report.rows)
    return render_pretty(report)


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# Commands
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

@click.group()
@click.option("--m", "m", type=int, default=None, help="Curve parameter m >= 1 (q = 2^(2m+1))")
@click.option(
    "--format",
    "output_format",
    type=click.Choice([f.value for f in OutputFormat]),
    default=OutputFormat.PRETTY.value,
    help="Report format on standard output",
)
@click.option("--cache-dir", type=click.Path(file_okay=False), default=None, help="Directory for SZCM matrix caches")
@click.option("--config", "-c", "config_path", type=click.Path(exists=True, dir_okay=False), default=None, help="Path to configuration file")
@click.option(
    "--log-level",
    "-l",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]),
    default=None,
    help="Set logging level",
)
@click.option("--parallelism", type=click.IntRange(min=1), default=None, help="Worker processes for matrix columns")
@click.option("--verify-oracle/--no-verify-oracle", default=True, help="Compare with the oracle matrix in verify")
@click.option("--force-oracle", is_flag=True, help="Keep oracle verification for m above the configured bound")
@click.option("--allow-large-m", is_flag=True, help="Allow matrix commands beyond the configured bound on m")
@click.pass_context
def cli(ctx: click.Context, **options: Any) -> None:
    """Cartier operator on Suzuki curves: a-number, rank profile, final types, point counts."""
    ctx.ensure_object(dict)
    ctx.obj.update(options)


def _execute(ctx: click.Context, command: Command, **extra: Any) -> None:
    options = ctx.obj
    if options["m"] is None:
        raise click.UsageError("Missing option '--m'.", ctx=ctx)

    try:
        setup_logging(options["log_level"] or "INFO")
        file_config = load_config(options["config_path"])
        setup_logging(
            options["log_level"] or file_config.logging.level.upper(),
            file_config.logging.file,
            file_config.logging.loguru_rotation
        )
        run_config = build_run_config(
            file_config,
            m=options["m"],
            command=command,
            format=options["output_format"],
            cache_dir=resolve_cache_dir(options["cache_dir"], file_config),
            verify_oracle=options["verify_oracle"],
            force_oracle=options["force_oracle"],
            allow_large_m=options["allow_large_m"],
            parallelism=options["parallelism"],
            **extra
        )
    except ConfigurationError as e:
        click.echo(f"Error: {e.message}", err=True)
        ctx.exit(EXIT_USAGE)

    try:
        report = SuzukiPipeline(run_config).run()
    except SuzukiError as e:
        logger.error("Run failed")
        click.echo(f"Error: {e.message}", err=True)
        ctx.exit(EXIT_FAILURE)

    click.echo(render(report, run_config.format))
    if report.payload.get("verified") is False:
        ctx.exit(EXIT_FAILURE)


@cli.command()
@click.pass_context
def params(ctx: click.Context) -> None:
    """Derived constants and closed formulas."""
    _execute(ctx, Command.PARAMS)


@cli.command("a-number")
@click.pass_context
def a_number(ctx: click.Context) -> None:
    """a-number as g minus the rank of the Cartier matrix."""
    _execute(ctx, Command.A_NUMBER)


@cli.command()
@click.pass_context
def basis(ctx: click.Context) -> None:
    """Basis of regular 1-forms with pole orders."""
    _execute(ctx, Command.BASIS)


@cli.command()
@click.pass_context
def matrix(ctx: click.Context) -> None:
    """Cartier matrix (cached when a cache directory is set)."""
    _execute(ctx, Command.MATRIX)


@cli.command("rank-profile")
@click.pass_context
def rank_profile(ctx: click.Context) -> None:
    """Ranks of the powers of the Cartier matrix."""
    _execute(ctx, Command.RANK_PROFILE)


@cli.command("eo-constraints")
@click.pass_context
def eo_constraints(ctx: click.Context) -> None:
    """Final-type values fixed by the rank profile."""
    _execute(ctx, Command.EO_CONSTRAINTS)


@cli.command("eo-enumerate")
@click.option("--cap", type=click.IntRange(min=1), default=None, help="Most sequences to list")
@click.pass_context
def eo_enumerate(ctx: click.Context, cap: Optional[int]) -> None:
    """All final types compatible with the constraints."""
    _execute(ctx, Command.EO_ENUMERATE, cap=cap)


@cli.command()
@click.option("--k", "ks", type=int, multiple=True, help="Extension degree; repeatable (default 1, 2, 4)")
@click.option("--naive", is_flag=True, help="Add brute-force counts where the field is small enough")
@click.pass_context
def points(ctx: click.Context, ks: tuple, naive: bool) -> None:
    """Point counts over GF(q^k) from the zeta function."""
    extra: Dict[str, Any] = {"naive": naive}
    if ks:
        extra["ks"] = ks
    _execute(ctx, Command.POINTS, **extra)


@cli.command()
@click.pass_context
def verify(ctx: click.Context) -> None:
    """Run every consistency check; exit status 1 if any fails."""
    _execute(ctx, Command.VERIFY)


@cli.command("all")
@click.pass_context
def run_all(ctx: click.Context) -> None:
    """Everything above in one report."""
    _execute(ctx, Command.ALL)


@cli.command()
def version() -> None:
    """Show suzukicartier version."""
    click.echo(f"suzukicartier v{__version__}")


if __name__ == "__main__":
    cli()
