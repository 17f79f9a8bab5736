"""Deterministic CSV output: 17 significant digits, comma separated, LF endings."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ValidationError


def format_value(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if x == 0.0:
            return "0"  # drop the sign of negative zero
        if math.isnan(x) or math.isinf(x):
            return repr(x)
        return format(x, ".17g")
    return str(x)


@dataclass
class CsvTable:
    header: list[str]
    rows: list[list] = field(default_factory=list)

    def add(self, *values) -> None:
        if len(values) != len(self.header):
            raise ValidationError(
                f"row has {len(values)} cells, header has {len(self.header)}"
            )
        self.rows.append(list(values))

    def to_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([format_value(v) for v in row])
        return buf.getvalue()

    def write(self, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_text())
        return path


def read_csv(path) -> tuple[list[str], np.ndarray]:
    """Read back a numeric table written by :class:`CsvTable`."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)
