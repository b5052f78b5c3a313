"""Daily closing prices -> cleaned log-return series."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from ..errors import DataError, InsufficientDataError
from .results import fmt

MAX_MISSING_RUN = 3  # longest run of empty closes treated as "isolated"
BUNDLED_PRICES = Path(__file__).resolve().parent.parent / "data" / "synthetic_prices.csv"


@dataclass(frozen=True)
class ReturnsSeries:
    dates: tuple[str, ...]
    prices: np.ndarray
    returns: np.ndarray
    filled: int

    @property
    def n(self) -> int:
        return int(self.returns.size)

    def to_csv(self) -> str:
        """date, close, log_return (empty on the first row); reloadable by load_returns."""
        lines = ["date,close,log_return"]
        for i, (d, p) in enumerate(zip(self.dates, self.prices)):
            r = "" if i == 0 else fmt(self.returns[i - 1])
            lines.append(f"{d},{fmt(p)},{r}")
        return "\n".join(lines) + "\n"


def _missing_runs(mask: np.ndarray) -> list[tuple[int, int]]:
    runs, start = [], None
    for i, m in enumerate(mask):
        if m and start is None:
            start = i
        elif not m and start is not None:
            runs.append((start, i))
            start = None
    if start is not None:
        runs.append((start, len(mask)))
    return runs


def load_returns(source) -> ReturnsSeries:
    """Parse a ``date,close`` CSV, fill isolated gaps and compute log returns.

    ``source`` is a path or a text buffer.  Empty ``close`` cells are missing;
    runs of at most three are filled forward, then backward (for a leading
    gap).  Longer runs, non-positive or unparsable prices and duplicate dates
    raise :class:`DataError` naming the file line.
    """
    if isinstance(source, str) and "\n" in source:
        source = io.StringIO(source)
    try:
        raw = pd.read_csv(source, dtype=str, keep_default_na=False, skipinitialspace=True)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise DataError(f"cannot read price CSV: {exc}") from None
    cols = {c.strip().lower(): c for c in raw.columns}
    if "date" not in cols or "close" not in cols:
        raise DataError(f"price CSV needs 'date' and 'close' columns, found {list(raw.columns)}")

    lines = np.arange(len(raw)) + 2  # header is line 1
    dates = pd.to_datetime(raw[cols["date"]].str.strip(), format="ISO8601", errors="coerce")
    if dates.isna().any():
        bad = int(lines[dates.isna().to_numpy()][0])
        raise DataError(f"line {bad}: unparsable date {raw[cols['date']].iloc[bad - 2]!r}")

    closes = np.full(len(raw), np.nan)
    for i, cell in enumerate(raw[cols["close"]].str.strip()):
        if cell == "":
            continue
        try:
            v = float(cell)
        except ValueError:
            raise DataError(f"line {lines[i]}: unparsable close {cell!r}") from None
        if not math.isfinite(v) or v <= 0.0:
            raise DataError(f"line {lines[i]}: close must be positive, got {cell!r}")
        closes[i] = v

    order = np.argsort(dates.to_numpy(), kind="stable")
    dates = dates.iloc[order].reset_index(drop=True)
    closes, lines = closes[order], lines[order]
    dup = dates.duplicated().to_numpy()
    if dup.any():
        raise DataError(f"line {lines[dup][0]}: duplicate date {dates[dup].iloc[0].date()}")

    missing = np.isnan(closes)
    if np.count_nonzero(~missing) < 3:
        raise InsufficientDataError(f"need at least 3 valid prices, found {np.count_nonzero(~missing)}")
    for a, b in _missing_runs(missing):
        if b - a > MAX_MISSING_RUN:
            raise DataError(f"lines {lines[a]}-{lines[b - 1]}: {b - a} consecutive missing closes")

    prices = pd.Series(closes).ffill().bfill().to_numpy()
    returns = np.diff(np.log(prices))
    return ReturnsSeries(
        dates=tuple(d.strftime("%Y-%m-%d") for d in dates),
        prices=prices,
        returns=returns,
        filled=int(missing.sum()),
    )
