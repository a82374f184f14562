"""Figure regeneration from the simulation tool's CSV outputs."""

from .errors import (
    EmptyGridError,
    InputFileMissingError,
    ManifestError,
    OutputFormatError,
    PlotvizError,
    SchemaError,
)
from .render import KINDS, PlotJob, build_figure, render
from .tables import Grid, Table, pivot_grid, read_table

__version__ = "0.1.0"

__all__ = [
    "EmptyGridError",
    "Grid",
    "InputFileMissingError",
    "KINDS",
    "ManifestError",
    "OutputFormatError",
    "PlotJob",
    "PlotvizError",
    "SchemaError",
    "Table",
    "build_figure",
    "pivot_grid",
    "read_table",
    "render",
    "__version__",
]
