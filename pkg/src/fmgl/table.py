"""Column tables with deterministic CSV and JSON rendering."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

SCHEMA_VERSION = 1


def format_value(x: Any) -> str:
    """Shortest decimal that reads back as the same float; ints and strings
    pass through.
    """
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, str):
        return x
    return repr(float(x))


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):
        x = x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    return x


@dataclass
class Table:
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)

    def append(self, *row) -> None:
        if len(row) != len(self.columns):
            raise ValueError(f"row has {len(row)} fields, expected {len(self.columns)}")
        self.rows.append(tuple(row))

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([format_value(x) for x in row])
        return buf.getvalue()

    def to_json(self, **extra: Any) -> str:
        doc = {"schema_version": SCHEMA_VERSION, **extra}
        doc["columns"] = list(self.columns)
        doc["rows"] = [list(row) for row in self.rows]
        return dumps(doc)


def dumps(doc: dict) -> str:
    return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"
