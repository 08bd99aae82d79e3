"""Consistent-subset selection algorithms and post-hoc checks.

All algorithms are deterministic: every tie (nearest neighbor, representative,
candidate choice) resolves to the lowest point index.

CNN, MSS, RSS and VSS are reconstructions of the published procedures:

* ``cnn``: Hart's rule. Seed with the first point of each class, then make
  full passes in input order, adding every point misclassified by the
  current subset, until a pass adds nothing.
* ``rss``: scan by increasing nearest-enemy distance and keep ``p`` when no
  selected point lies strictly inside its nearest-enemy ball.
* ``vss``: same scan; when ``p`` is uncovered, add the same-class point inside
  its nearest-enemy ball that lies closest to ``ne(p)``.
* ``mss``: same scan; keep ``p`` when it is the first to cover some point
  ``q`` strictly inside ``q``'s own nearest-enemy ball.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import (
    InvalidInputError,
    TrainingSet,
    as_subset,
    require_valid,
    sq_dist_block,
    sq_dist_to,
)
from .neighbors import NeighborTable, nearest_enemy_table, stats

ALGORITHM_NAMES = ("cnn", "fcnn", "sfcnn", "mss", "rss", "vss", "net")
# Algorithms that consume the nearest-enemy table (its cost is part of their runtime).
NEEDS_ENEMY_TABLE = frozenset({"mss", "rss", "vss", "net"})

_BLOCK_ELEMS = 1 << 22
BOUND_SENTINEL = sys.maxsize


@dataclass(frozen=True, eq=False)
class CondenseResult:
    algorithm: str
    subset: np.ndarray
    iterations: int
    selection_order: tuple[int, ...] = field(repr=False)

    def __len__(self):
        return self.subset.shape[0]

    @classmethod
    def build(cls, algorithm: str, order, iterations: int, n: int) -> "CondenseResult":
        order = tuple(int(i) for i in order)
        if len(set(order)) != len(order):
            raise AssertionError(f"{algorithm} selected a point twice")
        return cls(algorithm, as_subset(sorted(order), n), iterations, order)


class _NearestSelected:
    """Per-point nearest selected index and squared distance, updated incrementally."""

    def __init__(self, ts: TrainingSet):
        self.pts = ts.points
        self.idx = np.full(ts.n, -1, dtype=np.int64)
        self.sq = np.full(ts.n, np.inf)

    def add_one(self, p: int) -> None:
        sq = sq_dist_to(self.pts, self.pts[p])
        better = (sq < self.sq) | ((sq == self.sq) & (p < self.idx))
        self.sq[better] = sq[better]
        self.idx[better] = p

    def add_many(self, new) -> None:
        new = np.sort(np.asarray(new, dtype=np.int64))
        n = self.pts.shape[0]
        step = max(1, _BLOCK_ELEMS // max(1, n))
        for lo in range(0, new.size, step):
            block = new[lo:lo + step]
            sq = sq_dist_block(self.pts, self.pts[block])
            j = np.argmin(sq, axis=1)
            best_sq = sq[np.arange(n), j]
            best_idx = block[j]
            better = (best_sq < self.sq) | ((best_sq == self.sq) & (best_idx < self.idx))
            self.sq[better] = best_sq[better]
            self.idx[better] = best_idx[better]


def _nearest_in(ts: TrainingSet, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    state = _NearestSelected(ts)
    state.add_many(r)
    return state.idx, state.sq


def centroids(ts: TrainingSet) -> np.ndarray:
    """One index per class: the member closest to the class mean, ordered by class id."""
    require_valid(ts)
    out = []
    for cls in range(ts.c):
        members = ts.class_members(cls)
        mean = ts.points[members].mean(axis=0)
        sq = sq_dist_to(ts.points[members], mean)
        out.append(int(members[np.argmin(sq)]))
    return np.asarray(out, dtype=np.int64)


def voren(p_index: int, ts: TrainingSet, r) -> np.ndarray:
    """Points outside ``r`` whose nearest member of ``r`` is ``p_index`` but whose label differs."""
    r = np.unique(np.asarray(r, dtype=np.int64))
    if p_index not in set(r.tolist()):
        raise InvalidInputError(f"point {p_index} is not in the subset")
    owner, _ = _nearest_in(ts, r)
    outside = np.ones(ts.n, dtype=bool)
    outside[r] = False
    mask = outside & (owner == p_index) & (ts.labels != ts.labels[p_index])
    return np.flatnonzero(mask)


def _representatives(state: _NearestSelected, labels: np.ndarray, in_r: np.ndarray) -> np.ndarray:
    """rep(p, voren(p)) for every selected p with a nonempty voren set."""
    owner = state.idx
    wrong = np.flatnonzero(~in_r & (labels != labels[owner]))
    if wrong.size == 0:
        return wrong
    order = np.lexsort((wrong, state.sq[wrong], owner[wrong]))
    srt = wrong[order]
    own = owner[srt]
    first = np.concatenate(([True], own[1:] != own[:-1]))
    return np.sort(srt[first])


def fcnn(ts: TrainingSet) -> CondenseResult:
    """Fast condensed nearest neighbor: add every voren representative per round."""
    require_valid(ts)
    state = _NearestSelected(ts)
    in_r = np.zeros(ts.n, dtype=bool)
    batch = centroids(ts)
    order: list[int] = []
    iterations = 0
    while batch.size:
        iterations += 1
        in_r[batch] = True
        order.extend(batch.tolist())
        state.add_many(batch)
        batch = _representatives(state, ts.labels, in_r)
    return CondenseResult.build("fcnn", order, iterations, ts.n)


def sfcnn(ts: TrainingSet) -> CondenseResult:
    """Single-representative FCNN: one point joins the subset per round.

    The first round takes the centroid of class 0. Afterwards the chosen
    representative is the misclassified point closest to its nearest selected
    point, which is the closest of all per-point representatives.
    """
    require_valid(ts)
    state = _NearestSelected(ts)
    in_r = np.zeros(ts.n, dtype=bool)
    labels = ts.labels
    p = int(centroids(ts)[0])
    order: list[int] = []
    while True:
        in_r[p] = True
        order.append(p)
        state.add_one(p)
        wrong = np.flatnonzero(~in_r & (labels != labels[state.idx]))
        if wrong.size == 0:
            break
        p = int(wrong[np.argmin(state.sq[wrong])])
    return CondenseResult.build("sfcnn", order, len(order), ts.n)


def cnn(ts: TrainingSet) -> CondenseResult:
    """Hart's condensed nearest neighbor with first-of-class seeding."""
    require_valid(ts)
    labels = ts.labels
    _, seeds = np.unique(labels, return_index=True)
    seeds = np.sort(seeds)
    state = _NearestSelected(ts)
    state.add_many(seeds)
    in_r = np.zeros(ts.n, dtype=bool)
    in_r[seeds] = True
    order = seeds.tolist()
    passes = 0
    while True:
        passes += 1
        added = False
        pos = 0
        while pos < ts.n:
            wrong = np.flatnonzero(~in_r[pos:] & (labels[pos:] != labels[state.idx[pos:]]))
            if wrong.size == 0:
                break
            q = pos + int(wrong[0])
            in_r[q] = True
            order.append(q)
            state.add_one(q)
            added = True
            pos = q + 1
        if not added:
            break
    return CondenseResult.build("cnn", order, passes, ts.n)


def _enemy_order(table: NeighborTable) -> np.ndarray:
    n = table.ne_sq.shape[0]
    return np.lexsort((np.arange(n), table.ne_sq))


def rss(ts: TrainingSet, table: NeighborTable | None = None) -> CondenseResult:
    """Relaxed selective subset."""
    table = table if table is not None else nearest_enemy_table(ts)
    state = _NearestSelected(ts)
    order = []
    for p in _enemy_order(table):
        if state.sq[p] >= table.ne_sq[p]:
            order.append(int(p))
            state.add_one(p)
    return CondenseResult.build("rss", order, 1, ts.n)


def vss(ts: TrainingSet, table: NeighborTable | None = None) -> CondenseResult:
    """Voronoi selective subset: cover each uncovered point by its best boundary witness."""
    table = table if table is not None else nearest_enemy_table(ts)
    pts, labels = ts.points, ts.labels
    state = _NearestSelected(ts)
    order = []
    for p in _enemy_order(table):
        if state.sq[p] < table.ne_sq[p]:
            continue
        same = np.flatnonzero(labels == labels[p])
        inside = same[sq_dist_to(pts[same], pts[p]) < table.ne_sq[p]]
        to_enemy = sq_dist_to(pts[inside], pts[table.ne_index[p]])
        q = int(inside[np.argmin(to_enemy)])
        order.append(q)
        state.add_one(q)
    return CondenseResult.build("vss", order, 1, ts.n)


def mss(ts: TrainingSet, table: NeighborTable | None = None) -> CondenseResult:
    """Modified selective subset."""
    table = table if table is not None else nearest_enemy_table(ts)
    pts = ts.points
    needs = np.ones(ts.n, dtype=bool)
    order = []
    for p in _enemy_order(table):
        open_ = np.flatnonzero(needs)
        if open_.size == 0:
            break
        covered = open_[sq_dist_to(pts[open_], pts[p]) < table.ne_sq[open_]]
        if covered.size:
            needs[covered] = False
            order.append(int(p))
    return CondenseResult.build("mss", order, 1, ts.n)


def net(ts: TrainingSet, table: NeighborTable | None = None) -> CondenseResult:
    """Greedy gamma-net in input order, gamma being the margin of ``ts``."""
    table = table if table is not None else nearest_enemy_table(ts)
    gamma_sq = float(table.ne_sq.min())
    state = _NearestSelected(ts)
    order = []
    for p in range(ts.n):
        if state.sq[p] >= gamma_sq:
            order.append(p)
            state.add_one(p)
    return CondenseResult.build("net", order, 1, ts.n)


ALGORITHMS: dict[str, Callable[[TrainingSet], CondenseResult]] = {
    "cnn": cnn, "fcnn": fcnn, "sfcnn": sfcnn, "mss": mss,
    "rss": rss, "vss": vss, "net": net,
}


def condense(ts: TrainingSet, algorithm: str) -> CondenseResult:
    try:
        fn = ALGORITHMS[algorithm]
    except KeyError:
        raise InvalidInputError(
            f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHM_NAMES)}") from None
    return fn(ts)


@dataclass(frozen=True)
class Consistency:
    consistent: bool
    counterexample: int | None = None

    def __bool__(self):
        return self.consistent


def verify_consistent(ts: TrainingSet, r) -> Consistency:
    """Check that every point has a same-label point among its nearest members of ``r``.

    Under exact distance ties it is enough that one of the tied nearest
    members shares the label.
    """
    r = np.unique(np.asarray(r, dtype=np.int64))
    if r.size == 0:
        raise InvalidInputError("subset is empty")
    pts, labels = ts.points, ts.labels
    rp, rl = pts[r], labels[r]
    step = max(1, _BLOCK_ELEMS // r.size)
    for lo in range(0, ts.n, step):
        hi = min(ts.n, lo + step)
        sq = sq_dist_block(pts[lo:hi], rp)
        best = sq.min(axis=1)
        sq[rl[None, :] != labels[lo:hi, None]] = np.inf
        bad = np.flatnonzero(sq.min(axis=1) != best)
        if bad.size:
            return Consistency(False, lo + int(bad[0]))
    return Consistency(True)


def packing_violation(ts: TrainingSet, subset, radius: float):
    """First pair ``(a, b)`` of ``subset`` closer than ``radius``, or None."""
    subset = np.asarray(subset, dtype=np.int64)
    pts = ts.points[subset]
    step = max(1, _BLOCK_ELEMS // max(1, subset.size))
    for lo in range(0, subset.size, step):
        hi = min(subset.size, lo + step)
        dist = np.sqrt(sq_dist_block(pts[lo:hi], pts))
        rows = np.arange(hi - lo)
        dist[rows, lo + rows] = np.inf
        bad = np.argwhere(dist < radius)
        if bad.size:
            a, b = bad[0]
            return int(subset[lo + a]), int(subset[b])
    return None


def bucket_index(dist: float, gamma: float) -> int:
    """Largest ``i`` with ``gamma * 2**i <= dist``."""
    i = int(math.floor(math.log2(dist / gamma)))
    while math.ldexp(gamma, i + 1) <= dist:
        i += 1
    while math.ldexp(gamma, i) > dist:
        i -= 1
    return i


def bucket_separation_violation(ts: TrainingSet, subset, table: NeighborTable | None = None):
    """Check the per-enemy distance-bucket packing of a selected subset.

    Selected points sharing a nearest enemy ``e`` and the bucket
    ``gamma * 2**i <= d(., e) < gamma * 2**(i+1)`` must be at least
    ``gamma * 2**i`` apart. Returns the first violating ``(a, b, i)`` or None.
    """
    table = table if table is not None else nearest_enemy_table(ts)
    gamma = math.sqrt(float(table.ne_sq.min()))
    subset = np.asarray(subset, dtype=np.int64)
    groups: dict[tuple[int, int], list[int]] = {}
    ne_dist = table.ne_dist
    for a in subset.tolist():
        key = (int(table.ne_index[a]), bucket_index(float(ne_dist[a]), gamma))
        groups.setdefault(key, []).append(a)
    for (_, i), members in sorted(groups.items()):
        if len(members) < 2:
            continue
        hit = packing_violation(ts, members, math.ldexp(gamma, i))
        if hit is not None:
            return hit[0], hit[1], i
    return None


@dataclass(frozen=True)
class BoundReport:
    lhs: int
    rhs: int
    holds: bool
    kappa: int
    log_factor: int
    assumed_ddim: int


def sfcnn_bound_check(ts: TrainingSet, result: CondenseResult, assumed_ddim: int,
                      summary=None) -> BoundReport:
    """Compare ``|R|`` with ``kappa * ceil(log2(1/gamma)) * 4**(ddim+1)``.

    ``gamma`` is the margin after scaling the set to diameter 1; the log factor
    is clamped to at least 1.
    """
    if assumed_ddim < 1:
        raise InvalidInputError("assumed_ddim must be >= 1")
    summary = summary if summary is not None else stats(ts)
    log_factor = max(1, math.ceil(math.log2(1.0 / summary.gamma_norm)))
    rhs = summary.kappa * log_factor * 4 ** (assumed_ddim + 1)
    rhs = min(rhs, BOUND_SENTINEL)
    lhs = len(result)
    return BoundReport(lhs, rhs, lhs <= rhs, summary.kappa, log_factor, assumed_ddim)
