"""Tabular reports and their csv / json / text renderings."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field


@dataclass
class Report:
    title: str
    columns: list
    rows: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, **row):
        missing = [c for c in self.columns if c not in row]
        if missing:
            raise KeyError(f"row lacks columns {missing}")
        self.rows.append(row)

    def column(self, name):
        return [r[name] for r in self.rows]


def _cell(v):
    # repr round-trips floats exactly
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_csv(report: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(report.columns)
    for row in report.rows:
        w.writerow([_cell(row[c]) for c in report.columns])
    return buf.getvalue()


def parse_csv(text: str) -> list:
    """Inverse of :func:`to_csv` for numeric cells (others stay strings)."""
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        row = {}
        for k, v in rec.items():
            if v == "":
                row[k] = None
                continue
            try:
                row[k] = int(v)
            except ValueError:
                try:
                    row[k] = float(v)
                except ValueError:
                    row[k] = v
        out.append(row)
    return out


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def to_json(report: Report) -> str:
    doc = {
        "title": report.title,
        "columns": report.columns,
        "rows": [{c: _json_safe(r[c]) for c in report.columns} for r in report.rows],
        "meta": report.meta,
    }
    return json.dumps(doc, indent=2) + "\n"


def _fmt6(v):
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else ""
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def to_text(report: Report) -> str:
    """Aligned plain-text table, numbers to 6 significant digits."""
    cells = [[_fmt6(r[c]) for c in report.columns] for r in report.rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(report.columns)]
    lines = [report.title, ""]
    lines.append("  ".join(c.rjust(w) for c, w in zip(report.columns, widths)))
    lines.append("  ".join("-" * w for w in widths))
    for row in cells:
        lines.append("  ".join(v.rjust(w) for v, w in zip(row, widths)))
    for k, v in report.meta.items():
        lines.append(f"# {k}: {v}")
    return "\n".join(lines) + "\n"


WRITERS = {"csv": to_csv, "json": to_json, "table": to_text}


def render(report: Report, fmt: str) -> str:
    return WRITERS[fmt](report)
