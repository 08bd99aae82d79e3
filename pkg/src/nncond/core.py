"""Labeled point sets, the Euclidean distance kernel and dataset validation.

Every distance comparison in the package goes through :func:`sq_dist_to` or
:func:`sq_dist_block`. Both accumulate squared coordinate differences one
column at a time in index order, so the same pair of points always produces
the same float no matter which code path asked for it. Tie-breaking by lowest
index is only reproducible under that guarantee.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Sequence

import numpy as np


class InvalidInputError(ValueError):
    """Raised when an operation receives a malformed or invalid input."""


class NoEnemiesError(InvalidInputError):
    """Raised when nearest enemies are requested for a single-class set."""


def sq_dist_to(points: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Squared distances from every row of ``points`` to ``q``."""
    acc = np.zeros(points.shape[0])
    for k in range(points.shape[1]):
        t = points[:, k] - q[k]
        acc += t * t
    return acc


def sq_dist_block(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Squared distance matrix of shape ``(len(a), len(b))``."""
    acc = np.zeros((a.shape[0], b.shape[0]))
    for k in range(a.shape[1]):
        t = a[:, k, None] - b[None, :, k]
        acc += t * t
    return acc


def sq_distance(a: Sequence[float], b: Sequence[float]) -> float:
    if len(a) != len(b):
        raise InvalidInputError(f"dimension mismatch: {len(a)} vs {len(b)}")
    acc = 0.0
    for x, y in zip(a, b):
        t = float(x) - float(y)
        acc += t * t
    return acc


def distance(a: Sequence[float], b: Sequence[float]) -> float:
    """Euclidean distance between two points of equal dimension."""
    return math.sqrt(sq_distance(a, b))


@dataclass(frozen=True)
class ValidationReport:
    """Violations found by :func:`validate`; ``rows[k]`` lists the point indices behind ``violations[k]``."""

    violations: tuple[str, ...] = ()
    rows: tuple[tuple[int, ...], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(self.violations)


@dataclass(frozen=True, eq=False)
class TrainingSet:
    """``n`` labeled points in R^d.

    ``labels`` holds dense class ids indexing ``class_names``. Arrays are
    copied and made read-only on construction.
    """

    points: np.ndarray
    labels: np.ndarray
    class_names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64, copy=True)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[1] < 1:
            raise InvalidInputError(f"points must be an (n, d) array, got shape {pts.shape}")
        labels = np.array(self.labels, dtype=np.int64, copy=True).reshape(-1)
        if labels.shape[0] != pts.shape[0]:
            raise InvalidInputError(
                f"{pts.shape[0]} points but {labels.shape[0]} labels")
        if pts.shape[0] < 1:
            raise InvalidInputError("a training set needs at least one point")
        names = tuple(str(s) for s in self.class_names)
        if not names:
            names = tuple(str(i) for i in range(int(labels.max()) + 1 if labels.size else 0))
        pts.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "class_names", names)

    @classmethod
    def from_labels(cls, points, raw_labels: Iterable[Hashable]) -> "TrainingSet":
        """Build a set from arbitrary labels, numbering classes by first appearance."""
        ids: dict[Hashable, int] = {}
        dense = []
        for lab in raw_labels:
            if lab not in ids:
                ids[lab] = len(ids)
            dense.append(ids[lab])
        return cls(points, np.asarray(dense, dtype=np.int64), tuple(str(k) for k in ids))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def c(self) -> int:
        return len(self.class_names)

    def raw_labels(self) -> list[str]:
        return [self.class_names[i] for i in self.labels]

    def class_members(self, class_id: int) -> np.ndarray:
        return np.flatnonzero(self.labels == class_id)

    def __eq__(self, other):
        if not isinstance(other, TrainingSet):
            return NotImplemented
        return (self.class_names == other.class_names
                and np.array_equal(self.labels, other.labels)
                and self.points.shape == other.points.shape
                and np.array_equal(self.points, other.points))

    __hash__ = None

    @cached_property
    def report(self) -> ValidationReport:
        return validate(self)


def validate(ts: TrainingSet) -> ValidationReport:
    """Check the training-set invariants, returning every violation found."""
    problems: list[str] = []
    rows: list[tuple[int, ...]] = []
    pts, labels = ts.points, ts.labels

    bad_rows = np.flatnonzero(~np.isfinite(pts).all(axis=1))
    if bad_rows.size:
        problems.append(f"non-finite coordinate at rows {_fmt_idx(bad_rows)}")
        rows.append(tuple(bad_rows.tolist()))

    out_of_range = np.flatnonzero((labels < 0) | (labels >= ts.c))
    if out_of_range.size:
        problems.append(f"label out of range at rows {_fmt_idx(out_of_range)}")
        rows.append(tuple(out_of_range.tolist()))

    counts = np.bincount(labels[(labels >= 0) & (labels < ts.c)], minlength=ts.c)
    empty = np.flatnonzero(counts == 0)
    if empty.size:
        names = ", ".join(ts.class_names[i] for i in empty[:10])
        problems.append(f"classes without members: {names}")
        rows.append(())

    if not bad_rows.size:
        pair = _coincident_enemy_pair(pts, labels)
        if pair is not None:
            problems.append(f"coincident enemy pair ({pair[0]},{pair[1]})")
            rows.append(pair)

    return ValidationReport(tuple(problems), tuple(rows))


def require_valid(ts: TrainingSet) -> None:
    rep = ts.report
    if not rep.ok:
        raise InvalidInputError(f"invalid training set: {rep}")


def _coincident_enemy_pair(pts: np.ndarray, labels: np.ndarray):
    # Lexicographic row sort makes identical coordinates adjacent.
    order = np.lexsort(pts.T[::-1])
    sp = pts[order]
    new_run = np.concatenate(([True], np.any(sp[1:] != sp[:-1], axis=1)))
    if new_run.all():
        return None
    starts = np.flatnonzero(new_run)
    sl = labels[order]
    mixed = np.minimum.reduceat(sl, starts) != np.maximum.reduceat(sl, starts)
    if not mixed.any():
        return None
    best = None
    ends = np.append(starts[1:], len(order))
    for r in np.flatnonzero(mixed):
        members = np.sort(order[starts[r]:ends[r]])
        first = members[0]
        other = members[np.flatnonzero(labels[members] != labels[first])[0]]
        pair = (int(first), int(other))
        if best is None or pair < best:
            best = pair
    return best


def _fmt_idx(idx: np.ndarray, limit: int = 10) -> str:
    shown = ", ".join(str(int(i)) for i in idx[:limit])
    return shown + (", ..." if idx.size > limit else "")


def as_subset(indices, n: int) -> np.ndarray:
    """Validate and freeze an index subset (strictly increasing, within ``[0, n)``)."""
    arr = np.asarray(indices, dtype=np.int64).reshape(-1)
    if arr.size and (arr[0] < 0 or arr[-1] >= n):
        raise InvalidInputError(f"subset index out of range for n={n}")
    if arr.size > 1 and np.any(np.diff(arr) <= 0):
        raise InvalidInputError("subset indices must be strictly increasing")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr
