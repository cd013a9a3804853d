"""Plain-text and CSV tables for command output."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Any, Sequence


def format_cell(value: Any, exact: bool = False) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.12g}" if exact else f"{value:.6g}"
    return str(value)


@dataclass
class ResultTable:
    """Column headers plus rows of cells; floats are printed to 6 (or 12) significant digits."""

    headers: Sequence[str]
    rows: list[Sequence[Any]] = field(default_factory=list)
    title: str | None = None

    def add(self, *cells: Any) -> None:
        if len(cells) != len(self.headers):
            raise ValueError(f"expected {len(self.headers)} cells, got {len(cells)}")
        self.rows.append(cells)

    def cells(self, exact: bool = False) -> list[list[str]]:
        return [[format_cell(c, exact) for c in row] for row in self.rows]

    def render(self, exact: bool = False) -> str:
        body = self.cells(exact)
        widths = [len(h) for h in self.headers]
        for row in body:
            widths = [max(w, len(c)) for w, c in zip(widths, row)]
        lines = []
        if self.title:
            lines.append(self.title)
        lines.append("  ".join(h.ljust(w) for h, w in zip(self.headers, widths)).rstrip())
        lines.append("  ".join("-" * w for w in widths))
        for row in body:
            lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        return "\n".join(lines)

    def to_csv(self, exact: bool = False) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.headers)
        writer.writerows(self.cells(exact))
        return buf.getvalue()
