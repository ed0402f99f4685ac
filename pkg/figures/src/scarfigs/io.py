"""CSV/JSON table loading with loud schema failures."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path


class ColumnError(RuntimeError):
    """A required column is absent or the table body is unusable."""


@dataclass
class Table:
    path: str
    header: dict
    columns: list[str]
    rows: list[list[str]]

    def column(self, name: str) -> list[float]:
        if name not in self.columns:
            raise ColumnError(
                f"{self.path}: required column {name!r} not found; "
                f"available: {', '.join(self.columns)}"
            )
        idx = self.columns.index(name)
        return [float(r[idx]) for r in self.rows]

    def require(self, *names: str):
        for name in names:
            if name not in self.columns:
                raise ColumnError(
                    f"{self.path}: required column {name!r} not found; "
                    f"available: {', '.join(self.columns)}"
                )


def load_table(path: str | Path) -> Table:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        payload = json.loads(text)
        header = payload.get("header", {})
        columns = payload["columns"]
        rows = payload["rows"]
    else:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        header = {}
        body = []
        for ln in lines:
            if ln.startswith("#"):
                key, _, val = ln[1:].strip().partition("=")
                header[key.strip()] = val.strip()
            else:
                body.append(ln)
        if not body:
            raise ColumnError(f"{path}: no column row found")
        columns = body[0].split(",")
        rows = [ln.split(",") for ln in body[1:]]
    if not rows:
        raise ColumnError(f"{path}: table body is empty; refusing to plot nothing")
    width = len(columns)
    for r in rows:
        if len(r) != width:
            raise ColumnError(
                f"{path}: row with {len(r)} fields does not match the "
                f"{width}-column schema"
            )
    return Table(path=str(path), header=header, columns=columns, rows=rows)


def group_by(table: Table, key: str) -> dict[float, list[int]]:
    """Row indices grouped by the numeric value of a column."""
    vals = table.column(key)
    groups: dict[float, list[int]] = {}
    for i, v in enumerate(vals):
        groups.setdefault(v, []).append(i)
    return groups
