"""CSV ingestion: commented metadata header, named columns, grid pivot.

The producing tool writes an optional block of `# key = value` lines,
then a header row, then data rows.  Failed sweep points carry NaN in the
numeric columns and a non-"ok" status; they survive parsing and are
masked when pivoted onto a grid.  Nothing here recomputes physics: the
columns are consumed exactly as written.
"""

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import EmptyGridError, InputFileMissingError, SchemaError

METADATA_PREFIX = "#"


@dataclass
class Table:
    path: Path
    metadata: dict[str, str]
    header: list[str]
    rows: list[list[str]] = field(repr=False)

    def require(self, *names: str) -> None:
        for name in names:
            if name not in self.header:
                raise SchemaError(
                    f"{self.path} is missing the required column {name!r} "
                    f"(found: {', '.join(self.header)})"
                )

    def column(self, name: str) -> np.ndarray:
        """Numeric column as floats; failed entries come through as NaN."""
        self.require(name)
        index = self.header.index(name)
        out = np.empty(len(self.rows))
        for i, row in enumerate(self.rows):
            try:
                out[i] = float(row[index])
            except ValueError:
                out[i] = math.nan
        return out

    def text_column(self, name: str) -> list[str]:
        self.require(name)
        index = self.header.index(name)
        return [row[index] for row in self.rows]


def read_table(path) -> Table:
    path = Path(path)
    if not path.is_file():
        raise InputFileMissingError(f"input file not found: {path}")
    metadata: dict[str, str] = {}
    header: list[str] | None = None
    rows: list[list[str]] = []
    with open(path, newline="") as handle:
        for record in csv.reader(handle):
            if not record:
                continue
            if record[0].lstrip().startswith(METADATA_PREFIX):
                text = ",".join(record).lstrip().lstrip(METADATA_PREFIX).strip()
                if "=" in text:
                    key, value = text.split("=", 1)
                    metadata[key.strip()] = value.strip()
                continue
            if header is None:
                header = [name.strip() for name in record]
            else:
                rows.append(record)
    if header is None or not rows:
        raise EmptyGridError(f"{path} contains no data rows")
    return Table(path=path, metadata=metadata, header=header, rows=rows)


@dataclass
class Grid:
    x: np.ndarray
    y: np.ndarray
    values: np.ma.MaskedArray  # shape (len(y), len(x))


def pivot_grid(table: Table, value_column: str) -> Grid:
    """Arrange scattered (x, y, value) rows onto a sorted rectangular grid.

    Combinations absent from the file, and rows whose value is NaN
    (failed sweep points), are masked.
    """
    xs = table.column("x_value")
    ys = table.column("y_value")
    values = table.column(value_column)
    x_axis = np.unique(xs)
    y_axis = np.unique(ys)
    filled = np.full((len(y_axis), len(x_axis)), math.nan)
    x_index = {v: i for i, v in enumerate(x_axis)}
    y_index = {v: i for i, v in enumerate(y_axis)}
    for x, y, value in zip(xs, ys, values):
        filled[y_index[y], x_index[x]] = value
    return Grid(x=x_axis, y=y_axis, values=np.ma.masked_invalid(filled))
