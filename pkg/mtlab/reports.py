"""
Moser-Trudinger Lab - Experiment Reports
========================================

Long-format result tables. Every row records a computed value against its
target together with the absolute and relative gap; checks carry the trend
assertions made on those rows. CSV output uses 17 significant digits and
JSON the shortest round-trip representation, so both parse back to the
same doubles.
"""

import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

REPORT_COLUMNS = ["quantity", "series", "parameter", "computed", "target", "abs_gap", "rel_gap"]

# floor on |target| in the relative gap
_REL_FLOOR = 1e-300


@dataclass(frozen=True)
class ReportRow:
    quantity: str
    series: str
    parameter: float
    computed: float
    target: float
    abs_gap: float
    rel_gap: float

    @classmethod
    def of(cls, quantity: str, series: str, parameter: float, computed: float,
           target: Optional[float]) -> 'ReportRow':
        computed = float(computed)
        if target is None:
            target = math.nan
        target = float(target)
        abs_gap = abs(computed - target)
        rel_gap = abs_gap / max(abs(target), _REL_FLOOR)
        return cls(quantity, series, float(parameter), computed, target, abs_gap, rel_gap)


@dataclass(frozen=True)
class TrendCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ExperimentReport:
    """Rows, metadata and checks of one experiment; wall_time is excluded from equality and output"""

    name: str
    rows: List[ReportRow] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)
    checks: List[TrendCheck] = field(default_factory=list)
    wall_time: float = field(default=0.0, compare=False)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failed_checks(self) -> List[TrendCheck]:
        return [check for check in self.checks if not check.passed]

    def add(self, quantity: str, series: str, parameter: float, computed: float,
            target: Optional[float]) -> ReportRow:
        row = ReportRow.of(quantity, series, parameter, computed, target)
        self.rows.append(row)
        return row

    def check(self, name: str, passed: bool, detail: str = "") -> TrendCheck:
        result = TrendCheck(name, bool(passed), detail)
        self.checks.append(result)
        return result

    def select(self, quantity: str, series: Optional[str] = None) -> List[ReportRow]:
        return [row for row in self.rows
                if row.quantity == quantity and (series is None or row.series == series)]

    def gaps(self, quantity: str, series: Optional[str] = None) -> List[float]:
        return [row.abs_gap for row in self.select(quantity, series)]

    def to_frame(self) -> pd.DataFrame:
        records = [
            [row.quantity, row.series, row.parameter, row.computed, row.target, row.abs_gap, row.rel_gap]
            for row in self.rows
        ]
        return pd.DataFrame(records, columns=REPORT_COLUMNS)

    def to_csv(self) -> str:
        return frame_to_csv(self.to_frame())

    def to_json(self) -> str:
        return frame_to_json(self.to_frame())


def _plain(value: Any) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return None if not math.isfinite(value) else value
    return value


def frame_to_csv(frame: pd.DataFrame) -> str:
    """Header row, comma delimiter, '.' decimals, 17 significant digits, empty cells for NaN"""
    frame = frame.copy()
    for column in frame.columns:
        if frame[column].dtype == bool:
            frame[column] = frame[column].map(lambda v: "true" if v else "false")
    return frame.to_csv(index=False, float_format="%.17g", na_rep="", lineterminator="\n")


def frame_to_json(frame: pd.DataFrame) -> str:
    """Array of row objects; NaN becomes null"""
    records = [
        {str(column): _plain(value) for column, value in zip(frame.columns, row)}
        for row in frame.itertuples(index=False, name=None)
    ]
    return json.dumps(records, allow_nan=False) + "\n"
