"""Dataset CSV, subset index files and the benchmark results table."""

from __future__ import annotations

import csv
import math
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .core import InvalidInputError, TrainingSet, as_subset, validate


class DatasetFormatError(InvalidInputError):
    pass


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def _resolve_label_col(label_col, width: int) -> int:
    if label_col in (None, "last", -1):
        return width - 1
    col = int(label_col)
    if col < 0:
        col += width
    if not 0 <= col < width:
        raise DatasetFormatError(f"label column {label_col} outside a {width}-column file")
    return col


def read_dataset(path, header: bool | None = None, label_col: int | str | None = "last") -> TrainingSet:
    """Read a comma-separated labeled dataset.

    ``header=None`` skips the first row when any of its coordinate cells is
    non-numeric. Class ids are assigned in order of first appearance and row
    order becomes point order.
    """
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [(i + 1, row) for i, row in enumerate(csv.reader(fh)) if row and any(c.strip() for c in row)]
    if not rows:
        raise DatasetFormatError(f"{path}: no rows")

    width = len(rows[0][1])
    if width < 2:
        raise DatasetFormatError(f"{path}:{rows[0][0]}: need at least one coordinate and a label")
    lcol = _resolve_label_col(label_col, width)
    coord_cols = [k for k in range(width) if k != lcol]

    if header is None:
        first = rows[0][1]
        header = not all(_is_number(first[k]) for k in coord_cols)
    data = rows[1:] if header else rows
    if not data:
        raise DatasetFormatError(f"{path}: header but no data rows")

    pts = np.empty((len(data), len(coord_cols)))
    raw_labels = []
    for r, (lineno, row) in enumerate(data):
        if len(row) != width:
            raise DatasetFormatError(
                f"{path}:{lineno}: expected {width} columns, found {len(row)}")
        for j, k in enumerate(coord_cols):
            cell = row[k].strip()
            try:
                v = float(cell)
            except ValueError:
                raise DatasetFormatError(f"{path}:{lineno}: not a number: {cell!r}") from None
            if not math.isfinite(v):
                raise DatasetFormatError(f"{path}:{lineno}: non-finite coordinate {cell!r}")
            pts[r, j] = v
        lab = row[lcol].strip()
        if not lab:
            raise DatasetFormatError(f"{path}:{lineno}: empty label")
        raw_labels.append(lab)

    ts = TrainingSet.from_labels(pts, raw_labels)
    rep = validate(ts)
    if not rep.ok:
        parts = []
        for msg, idx in zip(rep.violations, rep.rows):
            lines = ", ".join(str(data[i][0]) for i in idx[:10])
            parts.append(f"{msg} (lines {lines})" if lines else msg)
        raise DatasetFormatError(f"{path}: invalid dataset: " + "; ".join(parts))
    return ts


def write_dataset(ts: TrainingSet, path, header: bool = True) -> None:
    """Write ``ts`` so that :func:`read_dataset` reproduces it exactly."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if header:
            w.writerow([f"x{k}" for k in range(ts.d)] + ["label"])
        names = ts.class_names
        for row, lab in zip(ts.points.tolist(), ts.labels.tolist()):
            w.writerow([repr(v) for v in row] + [names[lab]])


def read_subset(path, n: int | None = None) -> np.ndarray:
    """Read a subset file: one 0-based index per line, ``#`` lines are comments."""
    path = Path(path)
    out: list[int] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            try:
                v = int(s)
            except ValueError:
                raise DatasetFormatError(f"{path}:{lineno}: not an index: {s!r}") from None
            if v < 0 or (n is not None and v >= n):
                raise DatasetFormatError(f"{path}:{lineno}: index {v} out of range")
            if out and v <= out[-1]:
                raise DatasetFormatError(
                    f"{path}:{lineno}: index {v} does not increase (previous {out[-1]})")
            out.append(v)
    return as_subset(out, n if n is not None else (out[-1] + 1 if out else 0))


def write_subset(subset, path, comment: str | None = None) -> None:
    path = Path(path)
    subset = np.asarray(subset, dtype=np.int64)
    if subset.size > 1 and np.any(np.diff(subset) <= 0):
        raise InvalidInputError("subset indices must be strictly increasing")
    with open(path, "w", encoding="utf-8") as fh:
        if comment:
            for line in comment.splitlines():
                fh.write(f"# {line}\n")
        for i in subset.tolist():
            fh.write(f"{i}\n")


@dataclass(frozen=True)
class ResultRow:
    dataset: str
    algorithm: str
    n: int
    d: int
    c: int
    kappa: int
    gamma_norm: float
    subset_size: int
    size_over_kappa: float
    runtime_ns_median: int
    runtime_ns_per_point: float
    consistent: bool
    repeats: int
    seed: int

    @classmethod
    def make(cls, dataset, algorithm, n, d, c, kappa, gamma_norm, subset_size,
             runtime_ns_median, consistent, repeats, seed) -> "ResultRow":
        return cls(dataset, algorithm, n, d, c, kappa, gamma_norm, subset_size,
                   round(subset_size / kappa, 6), int(runtime_ns_median),
                   runtime_ns_median / n, consistent, repeats, seed)


RESULT_COLUMNS = tuple(f.name for f in fields(ResultRow))


def _format_cell(name, value) -> str:
    if name == "size_over_kappa":
        return f"{value:.6f}"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def append_result(row: ResultRow, path) -> None:
    """Append one results row, writing the header first if the file is new or empty."""
    path = Path(path)
    fresh = not path.exists() or os.path.getsize(path) == 0
    with open(path, "a", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if fresh:
            w.writerow(RESULT_COLUMNS)
        d = asdict(row)
        w.writerow([_format_cell(k, d[k]) for k in RESULT_COLUMNS])


_PARSERS = {
    "dataset": str, "algorithm": str, "n": int, "d": int, "c": int, "kappa": int,
    "gamma_norm": float, "subset_size": int, "size_over_kappa": float,
    "runtime_ns_median": int, "runtime_ns_per_point": float,
    "consistent": lambda s: s == "true", "repeats": int, "seed": int,
}


def read_results(path) -> list[ResultRow]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != RESULT_COLUMNS:
            raise DatasetFormatError(f"{path}: unexpected results header {reader.fieldnames}")
        return [ResultRow(**{k: _PARSERS[k](rec[k]) for k in RESULT_COLUMNS}) for rec in reader]
