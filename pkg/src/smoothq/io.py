"""Reading observation vectors from text/CSV files."""
from __future__ import annotations

import numpy as np
import pandas as pd

from .errors import DataError


def read_values(path, column: str | None = None) -> np.ndarray:
    """Numeric observations from a CSV file.

    A file whose first line is numeric is read header-less.  Otherwise the
    named ``column`` is used, defaulting to ``value`` when present and to the
    first column otherwise.  Blank lines are skipped; any other non-numeric
    cell is an error.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            first = next((line for line in fh if line.strip()), "")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    if not first:
        raise DataError(f"{path}: no observations")
    cell = first.split(",")[0].strip()
    try:
        float(cell)
        header = None
    except ValueError:
        header = 0
    frame = pd.read_csv(path, header=header, dtype=str, skip_blank_lines=True, keep_default_na=False)
    if header is None:
        col = frame.columns[0] if column is None else int(column)
    elif column is not None:
        if column not in frame.columns:
            raise DataError(f"{path}: no column {column!r} (have {list(frame.columns)})")
        col = column
    else:
        col = "value" if "value" in frame.columns else frame.columns[0]
    cells = frame[col].str.strip()
    cells = cells[cells != ""]
    try:
        values = cells.astype(float).to_numpy()
    except ValueError as exc:
        raise DataError(f"{path}: non-numeric value in column {col!r}: {exc}") from None
    if values.size == 0:
        raise DataError(f"{path}: no observations")
    if not np.all(np.isfinite(values)):
        raise DataError(f"{path}: non-finite observation")
    return values
