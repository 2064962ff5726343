"""Paired time series and their two-column CSV form."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import UsageError


@dataclass(frozen=True)
class SeriesPair:
    """Two aligned real-valued sequences of equal length."""

    x: np.ndarray
    y: np.ndarray
    seed: int | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        x = np.ascontiguousarray(self.x, dtype=np.float64).ravel()
        y = np.ascontiguousarray(self.y, dtype=np.float64).ravel()
        if x.shape != y.shape:
            raise UsageError(f"series length mismatch: len(x)={x.size}, len(y)={y.size}")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise UsageError("series contain non-finite values")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __len__(self) -> int:
        return self.x.size

    def reversed(self) -> "SeriesPair":
        """Swap roles so that estimators compute the Y -> X direction."""
        return SeriesPair(self.y, self.x, self.seed, dict(self.metadata))

    def with_x(self, x) -> "SeriesPair":
        return SeriesPair(x, self.y, self.seed, dict(self.metadata))


def to_csv(pair: SeriesPair) -> str:
    """Serialize as ``x,y`` CSV with 17 significant digits and LF line ends."""
    buf = io.StringIO()
    buf.write("x,y\n")
    for a, b in zip(pair.x.tolist(), pair.y.tolist()):
        buf.write(f"{a:.17g},{b:.17g}\n")
    return buf.getvalue()


def write_csv(pair: SeriesPair, path: str | Path) -> None:
    Path(path).write_text(to_csv(pair), encoding="utf-8", newline="")


def parse_csv(text: str) -> SeriesPair:
    """Parse two numeric columns; a non-numeric first row is taken as a header.

    Raises ``UsageError`` naming the 1-based line of the first bad row.
    """
    if text.startswith("\ufeff"):
        text = text[1:]
    xs, ys = [], []
    reader = csv.reader(io.StringIO(text, newline=""))
    for lineno, row in enumerate(reader, start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise UsageError(f"line {lineno}: expected 2 columns, found {len(row)}")
        try:
            a, b = float(row[0]), float(row[1])
        except ValueError:
            if lineno == 1 and not xs:
                continue
            raise UsageError(f"line {lineno}: non-numeric value in {row!r}") from None
        if not (np.isfinite(a) and np.isfinite(b)):
            raise UsageError(f"line {lineno}: non-finite value in {row!r}")
        xs.append(a)
        ys.append(b)
    if not xs:
        raise UsageError("no data rows found")
    return SeriesPair(np.array(xs), np.array(ys))


def read_csv(path: str | Path) -> SeriesPair:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_csv(fh.read())
