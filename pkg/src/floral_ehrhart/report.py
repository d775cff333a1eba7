"""Tabular report sections and their three renderings (text, csv, json)."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any

FORMATS = ("text", "csv", "json")


@dataclass
class Section:
    title: str
    columns: list[str]
    rows: list[list[Any]] = field(default_factory=list)

    def add(self, *values: Any) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"row of {len(values)} values for {len(self.columns)} columns")
        self.rows.append(list(values))


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "pass" if value else "FAIL"
    if isinstance(value, list):
        if value and all(isinstance(v, list) and len(v) == 2 for v in value):
            return _pairs(value)
        return "{" + ",".join(map(str, value)) + "}"
    return str(value)


def _pairs(pairs: list[list[Any]]) -> str:
    """Render ``[[encoding, coeff], ...]`` as ``3·(1) + 2·(x)``."""
    out = []
    for enc, c in pairs:
        term = f"{abs(c)}·({enc})"
        if not out:
            out.append("-" + term if c < 0 else term)
        else:
            out.append(("- " if c < 0 else "+ ") + term)
    return " ".join(out) if out else "0"


def render_text(sections: list[Section]) -> str:
    blocks = []
    for sec in sections:
        cells = [[_cell(v) for v in row] for row in sec.rows]
        widths = [len(c) for c in sec.columns]
        for row in cells:
            widths = [max(w, len(c)) for w, c in zip(widths, row)]
        lines = [sec.title, "=" * len(sec.title)]
        lines.append("  ".join(c.ljust(w) for c, w in zip(sec.columns, widths)).rstrip())
        lines.append("  ".join("-" * w for w in widths))
        for raw, row in zip(sec.rows, cells):
            lines.append(
                "  ".join(c.rjust(w) if _numeric(v) else c.ljust(w) for v, c, w in zip(raw, row, widths)).rstrip()
            )
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def _numeric(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def render_csv(sections: list[Section]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for i, sec in enumerate(sections):
        if i:
            buf.write("\n")
        writer.writerow(["section", sec.title])
        writer.writerow(sec.columns)
        for row in sec.rows:
            writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def render_json(sections: list[Section]) -> str:
    doc = {"sections": [{"title": s.title, "columns": s.columns, "rows": s.rows} for s in sections]}
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def parse_json(text: str) -> list[Section]:
    """Inverse of :func:`render_json`."""
    doc = json.loads(text)
    return [Section(s["title"], list(s["columns"]), [list(r) for r in s["rows"]]) for s in doc["sections"]]


def render(sections: list[Section], fmt: str) -> str:
    if fmt == "text":
        return render_text(sections)
    if fmt == "csv":
        return render_csv(sections)
    if fmt == "json":
        return render_json(sections)
    raise ValueError(f"unknown format {fmt!r}")
