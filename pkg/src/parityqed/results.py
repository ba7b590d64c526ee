"""Tabular results with a machine-readable metadata header.

CSV layout: a block of '# '-prefixed lines holding one pretty-printed JSON
document (full resolved config, code version, diagnostics), then the header
row, then the data rows.  Floats are written in scientific notation with 17
significant digits; nothing in the output depends on wall-clock time, so a
rerun with the same config is byte-identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.16e}"
    text = str(value)
    if any(c in text for c in (",", '"', "\n")):
        text = '"' + text.replace('"', '""') + '"'
    return text


def _json_safe(value: Any) -> Any:
    """Replace non-finite floats so the metadata block stays valid JSON."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[tuple]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError("row length does not match column count")

    def to_csv_text(self) -> str:
        meta = json.dumps(_json_safe(self.metadata), sort_keys=True, indent=2)
        lines = ["# " + line for line in meta.splitlines()]
        lines.append(",".join(self.columns))
        for row in self.rows:
            lines.append(",".join(format_value(v) for v in row))
        return "\n".join(lines) + "\n"

    def write_csv(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv_text())

    def to_json_text(self) -> str:
        doc = {
            "metadata": _json_safe(self.metadata),
            "columns": self.columns,
            "rows": [[_json_safe(v) for v in row] for row in self.rows],
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"

    def write_json(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_json_text())
