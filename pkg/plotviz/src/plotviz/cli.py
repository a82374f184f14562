"""Command-line interface: one subcommand per plot kind, plus batch mode.

Exit codes: 0 success, 2 usage error, 3 missing input file, 4 schema
mismatch, 5 empty input, 6 bad batch manifest, 7 unsupported output
format, 1 any other rendering error.
"""

import json
from pathlib import Path

import click

from .errors import (
    EmptyGridError,
    InputFileMissingError,
    ManifestError,
    OutputFormatError,
    PlotvizError,
    SchemaError,
)
from .render import KIND_CONTOUR, KINDS, PlotJob, render

_EXIT_BY_TYPE = (
    (InputFileMissingError, 3),
    (SchemaError, 4),
    (EmptyGridError, 5),
    (ManifestError, 6),
    (OutputFormatError, 7),
    (PlotvizError, 1),
)

_MANIFEST_KEYS = {"kind", "input", "output", "overlay", "value_column", "title"}

VALUE_COLUMNS = ("rho33_readout", "rho22_readout", "rho33_max", "rho22_max")


def exit_code_for(exc: PlotvizError) -> int:
    for cls, code in _EXIT_BY_TYPE:
        if isinstance(exc, cls):
            return code
    return 1


class PlotvizGroup(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except PlotvizError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(exit_code_for(exc))


@click.group(cls=PlotvizGroup)
@click.version_option(package_name="plotviz")
def cli():
    """Render figures from the simulation tool's CSV outputs."""


main = cli


def _run(job: PlotJob) -> None:
    path = render(job)
    click.echo(f"wrote {path}")


def _output_option(f):
    return click.option(
        "--out",
        "-o",
        "output_path",
        required=True,
        type=str,
        help="Output image path (.png or .svg).",
    )(f)


def _title_option(f):
    return click.option("--title", type=str, default=None)(f)


@cli.command()
@click.argument("input_path", type=str)
@_output_option
@_title_option
def timeseries(input_path, output_path, title):
    """Populations versus time, with the pulse envelope dotted."""
    _run(PlotJob(kind="timeseries", input_path=input_path,
                 output_path=output_path, title=title))


@cli.command()
@click.argument("input_path", type=str)
@_output_option
@_title_option
def areascan(input_path, output_path, title):
    """Readout populations versus pulse area, overlay drawn if present."""
    _run(PlotJob(kind="areascan", input_path=input_path,
                 output_path=output_path, title=title))


@cli.command()
@click.argument("input_path", type=str)
@_output_option
@_title_option
@click.option(
    "--overlay",
    "overlay_path",
    type=str,
    default=None,
    help="First-maximum table to draw as a white dashed curve.",
)
@click.option(
    "--value-column",
    type=click.Choice(VALUE_COLUMNS),
    default="rho33_readout",
    show_default=True,
)
def contour(input_path, output_path, title, overlay_path, value_column):
    """Sweep grid as a heatmap on the fixed [0, 1] population scale."""
    _run(
        PlotJob(
            kind="contour",
            input_path=input_path,
            output_path=output_path,
            overlay_path=overlay_path,
            value_column=value_column,
            title=title,
        )
    )


@cli.command()
@click.argument("manifest_path", type=str)
def batch(manifest_path):
    """Render every job in a JSON manifest (a list of job objects)."""
    path = Path(manifest_path)
    if not path.is_file():
        raise InputFileMissingError(f"manifest not found: {path}")
    try:
        entries = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest {path} is not valid JSON: {exc}")
    if not isinstance(entries, list):
        raise ManifestError(f"manifest {path} must be a JSON list of jobs")
    jobs = []
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise ManifestError(f"job {i} in {path} is not an object")
        unknown = set(entry) - _MANIFEST_KEYS
        if unknown:
            raise ManifestError(
                f"job {i} in {path} has unknown keys: {', '.join(sorted(unknown))}"
            )
        missing = {"kind", "input", "output"} - set(entry)
        if missing:
            raise ManifestError(
                f"job {i} in {path} is missing keys: {', '.join(sorted(missing))}"
            )
        if entry["kind"] not in KINDS:
            raise ManifestError(
                f"job {i} in {path} has unknown kind {entry['kind']!r}"
            )
        if entry.get("overlay") and entry["kind"] != KIND_CONTOUR:
            raise ManifestError(
                f"job {i} in {path}: overlay is only valid for contour jobs"
            )
        jobs.append(
            PlotJob(
                kind=entry["kind"],
                input_path=entry["input"],
                output_path=entry["output"],
                overlay_path=entry.get("overlay"),
                value_column=entry.get("value_column", "rho33_readout"),
                title=entry.get("title"),
            )
        )
    for job in jobs:
        _run(job)


if __name__ == "__main__":
    main()
