"""Figure construction and rendering for the three plot kinds.

All inputs are parsed and validated before a figure or output file is
created, so a failing job never leaves a partial image behind.  Output
is deterministic: the Agg backend, a fixed SVG hash salt, and no
embedded dates mean identical inputs give identical bytes.
"""

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "plotviz"

import matplotlib.pyplot as plt  # noqa: E402 - backend must be set first

from .errors import OutputFormatError, SchemaError
from .tables import Table, pivot_grid, read_table

KIND_TIMESERIES = "timeseries"
KIND_AREASCAN = "areascan"
KIND_CONTOUR = "contour"
KINDS = (KIND_TIMESERIES, KIND_AREASCAN, KIND_CONTOUR)

OUTPUT_SUFFIXES = (".png", ".svg")

# populations always share one scale so figures are comparable
POPULATION_RANGE = (0.0, 1.0)
COLORMAP = "viridis"
FIGSIZE = (6.4, 4.2)

AXIS_LABELS = {
    "t_ps": "time (ps)",
    "area_pi": "pulse area / pi",
    "t0_ps": "pulse width t0 (ps)",
    "distance_nm": "dot-particle distance (nm)",
}

# sweep y axis -> key column of the matching first-maximum table
OVERLAY_KEY_BY_Y = {"t0_ps": "t0_ps", "distance_nm": "d_nm"}


@dataclass(frozen=True)
class PlotJob:
    kind: str
    input_path: str
    output_path: str
    overlay_path: str | None = None
    value_column: str = "rho33_readout"
    title: str | None = None
    dpi: int = 150

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")


def _axis_label(name: str) -> str:
    return AXIS_LABELS.get(name, name)


def _finish_axes(ax, title):
    ax.set_ylim(POPULATION_RANGE[0] - 0.02, POPULATION_RANGE[1] + 0.02)
    ax.legend(loc="upper right", framealpha=0.9)
    if title:
        ax.set_title(title)


def _timeseries_figure(table: Table, title) -> plt.Figure:
    table.require("t_ps", "rho11", "rho22", "rho33", "pulse_envelope_norm")
    t = table.column("t_ps")
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for name in ("rho11", "rho22", "rho33"):
        ax.plot(t, table.column(name), label=name)
    ax.plot(
        t,
        table.column("pulse_envelope_norm"),
        linestyle=":",
        color="0.3",
        label="pulse envelope",
    )
    ax.set_xlabel(_axis_label("t_ps"))
    ax.set_ylabel("population")
    _finish_axes(ax, title)
    return fig


def _areascan_figure(table: Table, title) -> plt.Figure:
    table.require("area_pi", "rho33_readout", "rho22_readout")
    area = table.column("area_pi")
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot(area, table.column("rho33_readout"), label="rho33_readout")
    ax.plot(area, table.column("rho22_readout"), linewidth=1.0, label="rho22_readout")
    if "adiabatic_rho33" in table.header:
        ax.plot(
            area,
            table.column("adiabatic_rho33"),
            linestyle="--",
            color="black",
            label="closed-form overlay",
        )
    ax.set_xlabel(_axis_label("area_pi"))
    ax.set_ylabel("readout population")
    _finish_axes(ax, title)
    return fig


def _contour_figure(table: Table, overlay: Table | None, value_column, title):
    table.require("x_value", "y_value", value_column)
    grid = pivot_grid(table, value_column)
    x_name = table.metadata.get("x_name", "x_value")
    y_name = table.metadata.get("y_name", "y_value")
    fig, ax = plt.subplots(figsize=FIGSIZE)
    mesh = ax.pcolormesh(
        grid.x,
        grid.y,
        grid.values,
        vmin=POPULATION_RANGE[0],
        vmax=POPULATION_RANGE[1],
        cmap=COLORMAP,
        shading="nearest",
    )
    fig.colorbar(mesh, ax=ax, label=value_column)
    if overlay is not None:
        key = OVERLAY_KEY_BY_Y.get(y_name)
        if key is None:
            raise SchemaError(
                f"no first-maximum overlay is defined for sweep axis {y_name!r}"
            )
        overlay.require(key, "area_first_max_pi_units")
        ax.plot(
            overlay.column("area_first_max_pi_units"),
            overlay.column(key),
            linestyle="--",
            color="white",
            linewidth=1.5,
        )
        ax.set_xlim(grid.x.min(), grid.x.max())
        ax.set_ylim(grid.y.min(), grid.y.max())
    ax.set_xlabel(_axis_label(x_name))
    ax.set_ylabel(_axis_label(y_name))
    if title:
        ax.set_title(title)
    return fig


def build_figure(job: PlotJob) -> plt.Figure:
    """Parse and validate all inputs, then build the figure in memory."""
    table = read_table(job.input_path)
    if job.kind == KIND_TIMESERIES:
        return _timeseries_figure(table, job.title)
    if job.kind == KIND_AREASCAN:
        return _areascan_figure(table, job.title)
    overlay = read_table(job.overlay_path) if job.overlay_path else None
    return _contour_figure(table, overlay, job.value_column, job.title)


def render(job: PlotJob) -> Path:
    """Render the job to its output path and return that path."""
    output = Path(job.output_path)
    if output.suffix not in OUTPUT_SUFFIXES:
        raise OutputFormatError(
            f"unsupported output suffix {output.suffix!r} "
            f"(supported: {', '.join(OUTPUT_SUFFIXES)})"
        )
    fig = build_figure(job)
    try:
        metadata = {"Date": None} if output.suffix == ".svg" else None
        fig.savefig(output, dpi=job.dpi, metadata=metadata)
    finally:
        plt.close(fig)
    return output
