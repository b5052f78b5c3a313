"""Tidy long-format result tables with CSV and JSON writers."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

from ..errors import DataError

COLUMNS = ("experiment", "scenario", "h", "estimator", "statistic", "value")


def fmt(x: float) -> str:
    """17 significant digits: enough to round-trip any double."""
    return format(float(x), ".17g")


def scenario_key(**items) -> str:
    parts = []
    for k, v in items.items():
        if isinstance(v, float):
            v = repr(v)
        parts.append(f"{k}={v}")
    return ";".join(parts)


@dataclass(frozen=True)
class Row:
    experiment: str
    scenario: str
    h: float
    estimator: str
    statistic: str
    value: float


@dataclass
class ExperimentResult:
    experiment: str
    rows: list[Row] = field(default_factory=list)
    _keys: set = field(default_factory=set, repr=False)

    def add(self, scenario: str, h: float, estimator: str, statistic: str, value: float) -> None:
        h, value = float(h), float(value)
        if not (math.isfinite(h) and math.isfinite(value)):
            raise DataError(f"non-finite entry for {scenario} h={h} {estimator}/{statistic}: {value}")
        key = (scenario, h, estimator, statistic)
        if key in self._keys:
            raise DataError(f"duplicate result key {key}")
        self._keys.add(key)
        self.rows.append(Row(self.experiment, scenario, h, estimator, statistic, value))

    def __len__(self) -> int:
        return len(self.rows)

    def select(self, scenario: str | None = None, estimator: str | None = None,
               statistic: str | None = None) -> list[Row]:
        return [
            r for r in self.rows
            if (scenario is None or r.scenario == scenario)
            and (estimator is None or r.estimator == estimator)
            and (statistic is None or r.statistic == statistic)
        ]

    def series(self, scenario: str, estimator: str, statistic: str) -> tuple[list[float], list[float]]:
        rows = self.select(scenario, estimator, statistic)
        return [r.h for r in rows], [r.value for r in rows]

    def value(self, scenario: str, estimator: str, statistic: str, h: float | None = None) -> float:
        rows = [r for r in self.select(scenario, estimator, statistic) if h is None or r.h == h]
        if len(rows) != 1:
            raise KeyError(f"expected one row for {scenario}/{estimator}/{statistic} h={h}, found {len(rows)}")
        return rows[0].value

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in self.rows:
            w.writerow((r.experiment, r.scenario, fmt(r.h), r.estimator, r.statistic, fmt(r.value)))
        return buf.getvalue()

    def to_json(self) -> str:
        # Numbers are emitted by hand so they carry 17 significant digits.
        lines = []
        for r in self.rows:
            lines.append(
                "{"
                f'"experiment": {json.dumps(r.experiment)}, "scenario": {json.dumps(r.scenario)}, '
                f'"h": {fmt(r.h)}, "estimator": {json.dumps(r.estimator)}, '
                f'"statistic": {json.dumps(r.statistic)}, "value": {fmt(r.value)}'
                "}"
            )
        return "[\n  " + ",\n  ".join(lines) + "\n]\n" if lines else "[]\n"

    def dump(self, fmt_name: str) -> str:
        if fmt_name == "csv":
            return self.to_csv()
        if fmt_name == "json":
            return self.to_json()
        raise DataError(f"unknown output format {fmt_name!r}")
