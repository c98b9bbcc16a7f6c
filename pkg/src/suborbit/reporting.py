"""Deterministic CSV and JSON emission for verification runs.

Floating-point cells are printed with 17 significant digits so that two
runs of the same configuration produce byte-identical reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path


def format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return "%.17g" % float(value)
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


@dataclass
class VerificationTable:
    """Ordered rows of per-index checks with a fixed column schema."""

    columns: tuple
    rows: list = field(default_factory=list)

    def add_row(self, **cells):
        missing = [c for c in self.columns if c not in cells]
        if missing:
            raise ValueError(f"row is missing columns {missing}")
        self.rows.append({c: cells[c] for c in self.columns})

    @property
    def all_pass(self) -> bool:
        return all(bool(r.get("pass", True)) for r in self.rows)

    def to_csv(self) -> str:
        lines = [",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(format_cell(row[c]) for c in self.columns))
        return "\n".join(lines) + "\n"


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_report(out_dir, table: VerificationTable | None, report_obj) -> None:
    """Write table.csv and report.json into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if table is not None:
        (out / "table.csv").write_text(table.to_csv())
    (out / "report.json").write_text(dump_json(report_obj))
