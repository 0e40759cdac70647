"""Tabular results and file emission.

CSV output is RFC-4180 (CRLF, comma-separated) with a ``name[unit]`` header
row; floats are written with repr's shortest round-trip decimals, so a given
build produces bit-identical files for identical configs.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = ["ResultTable", "write_manifest"]


def _format_value(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


@dataclass
class ResultTable:
    """Rectangular numeric table with unit-annotated column names."""

    columns: list[str]
    rows: list[tuple] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def append(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"expected {len(self.columns)} values, got {len(values)}")
        self.rows.append(tuple(values))

    def column(self, name: str) -> np.ndarray:
        idx = self.columns.index(name)
        return np.asarray([row[idx] for row in self.rows], dtype=float)

    def write_csv(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, dialect="excel")  # RFC-4180 CRLF
            writer.writerow(self.columns)
            for row in self.rows:
                writer.writerow([_format_value(v) for v in row])
        return path


def write_manifest(path: str | Path, *, files: list[str], parameters: dict, derived: dict, extra: dict | None = None) -> Path:
    """Emit the run manifest: produced files, input parameters, and the
    derived constants (dw, Gamma, t1, nbar, ...)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {"files": files, "parameters": parameters, "derived": derived}
    if extra:
        payload.update(extra)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path
