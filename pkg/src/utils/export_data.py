"""
Export Data Utilities
Report container and its CSV / JSON emission
"""

from __future__ import annotations

import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

SIGNIFICANT_DIGITS = 12


@dataclass
class Report:
    """One command's results: parameters, table rows, pass/fail flags"""

    command: str
    parameters: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)
    flags: dict = field(default_factory=dict)
    wall_time: float | None = None

    def add_row(self, **values):
        self.rows.append(values)

    def passed(self) -> bool:
        return all(self.flags.values())


def format_value(value):
    """Text form used in every report body: 12 significant digits, p/q, true/false"""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value) or math.isinf(value):
            return str(value)
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    return str(value)


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, dict):
        return {str(k): _json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    return format_value(value)


def report_to_csv(report: Report, timing: bool = False) -> str:
    """Header row plus one line per result row; flags become a one-row table when there are no rows"""
    rows = report.rows or ([report.flags] if report.flags else [])
    df = pd.DataFrame([{key: format_value(v) for key, v in row.items()} for row in rows])
    if timing and report.wall_time is not None:
        df["wall_time"] = format_value(report.wall_time)
    buffer = io.StringIO()
    df.to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue()


def report_to_json(report: Report, timing: bool = False) -> str:
    body = {
        "command": report.command,
        "parameters": _json_value(report.parameters),
        "rows": _json_value(report.rows),
        "flags": _json_value(report.flags),
    }
    if timing and report.wall_time is not None:
        body["wall_time"] = format_value(report.wall_time)
    return json.dumps(body, sort_keys=True, indent=2) + "\n"


def write_report(report: Report, fmt: str = "csv", out: str | None = None, timing: bool = False) -> str:
    """Render the report and send it to stdout or the --out path"""
    if fmt == "csv":
        text = report_to_csv(report, timing)
    elif fmt == "json":
        text = report_to_json(report, timing)
    else:
        raise ValueError(f"Unsupported export format: {fmt}")

    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        logger.info(f"Report written to {out}")

    if report.wall_time is not None:
        logger.info(f"{report.command} finished in {report.wall_time:.3f}s")
    return text
