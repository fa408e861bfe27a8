"""CSV reading and schema validation for simulator result tables.

Result files carry a ``#``-commented audit header followed by one CSV
header row and data rows. Validation failures always name the offending
column (and row, where applicable) so a broken pipeline points straight
at the field that changed.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class SchemaError(ValueError):
    """A result table does not match its documented schema."""

    def __init__(self, path, message: str, columns: tuple[str, ...] = ()):
        self.path = str(path)
        self.columns = columns
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class Table:
    """One parsed result table: column names and string-valued rows."""

    path: str
    columns: tuple[str, ...]
    rows: tuple[dict[str, str], ...]

    def __len__(self) -> int:
        return len(self.rows)


def read_table(path) -> Table:
    """Parse a result CSV, skipping the audit comment block."""
    path = Path(path)
    if not path.is_file():
        raise SchemaError(path, "file not found")
    with open(path, newline="") as f:
        data_lines = [line for line in f if not line.startswith("#")]
    reader = csv.reader(data_lines)
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError(path, "empty file: no header row") from None
    header = tuple(h.strip() for h in header)
    if len(set(header)) != len(header):
        dupes = tuple(sorted({c for c in header if header.count(c) > 1}))
        raise SchemaError(path, f"duplicate columns {dupes}", dupes)
    rows = tuple(
        dict(zip(header, row)) for row in reader if any(cell.strip() for cell in row)
    )
    if not rows:
        raise SchemaError(path, "no data rows")
    for i, row in enumerate(rows, start=1):
        if len(row) != len(header):
            raise SchemaError(path, f"row {i} has {len(row)} cells, header has {len(header)}")
    return Table(path=str(path), columns=header, rows=rows)


def require_columns(table: Table, required) -> None:
    """Raise a SchemaError naming every missing column."""
    missing = tuple(c for c in required if c not in table.columns)
    if missing:
        raise SchemaError(
            table.path,
            f"missing required column(s) {list(missing)}; found {list(table.columns)}",
            missing,
        )


def column_float(table: Table, name: str) -> np.ndarray:
    """One column as floats; a non-numeric cell names column and row."""
    require_columns(table, (name,))
    out = np.empty(len(table.rows))
    for i, row in enumerate(table.rows):
        try:
            out[i] = float(row[name])
        except ValueError:
            raise SchemaError(
                table.path,
                f"column '{name}', row {i + 1}: expected a number, got {row[name]!r}",
                (name,),
            ) from None
    return out


def column_str(table: Table, name: str) -> list[str]:
    """One column as stripped strings."""
    require_columns(table, (name,))
    return [row[name].strip() for row in table.rows]
