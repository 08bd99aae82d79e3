"""Exact nearest-neighbor / nearest-enemy queries and complexity statistics.

The brute-force scans are the reference. For larger inputs a KD-tree narrows
the candidates, and every candidate is re-measured with the shared distance
kernel before the lowest-index minimum is taken, so both paths return the same
table bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError, cKDTree

from .core import (
    InvalidInputError,
    NoEnemiesError,
    TrainingSet,
    require_valid,
    sq_dist_block,
    sq_dist_to,
)

# Above this size the KD-tree path is used unless brute force is forced.
BRUTE_FORCE_MAX_N = 3000
_BLOCK_ELEMS = 1 << 22


@dataclass(frozen=True, eq=False)
class NeighborTable:
    ne_index: np.ndarray
    ne_sq: np.ndarray

    @property
    def ne_dist(self) -> np.ndarray:
        return np.sqrt(self.ne_sq)

    def __len__(self):
        return self.ne_index.shape[0]


@dataclass(frozen=True)
class StatsSummary:
    n: int
    d: int
    c: int
    kappa: int
    gamma_raw: float
    diameter: float
    gamma_norm: float
    spread: float

    @property
    def kappa_pct(self) -> float:
        return 100.0 * self.kappa / self.n

    def as_dict(self) -> dict:
        return {
            "n": self.n, "d": self.d, "c": self.c, "kappa": self.kappa,
            "kappa_pct": round(self.kappa_pct, 2), "gamma_raw": self.gamma_raw,
            "diameter": self.diameter, "gamma_norm": self.gamma_norm,
            "spread": self.spread,
        }


def _argmin_lowest(sq: np.ndarray, axis: int = 1):
    # np.argmin returns the first occurrence of the minimum: lowest index.
    idx = np.argmin(sq, axis=axis)
    return idx, np.take_along_axis(sq, np.expand_dims(idx, axis), axis).squeeze(axis)


def _row_blocks(n: int, width: int):
    step = max(1, _BLOCK_ELEMS // max(1, width))
    for lo in range(0, n, step):
        yield lo, min(n, lo + step)


def brute_nearest_enemy(ts: TrainingSet) -> NeighborTable:
    """O(n^2) nearest-enemy scan, the reference for :func:`nearest_enemy_table`."""
    pts, labels = ts.points, ts.labels
    ne_index = np.empty(ts.n, dtype=np.int64)
    ne_sq = np.empty(ts.n)
    for lo, hi in _row_blocks(ts.n, ts.n):
        sq = sq_dist_block(pts[lo:hi], pts)
        sq[labels[lo:hi, None] == labels[None, :]] = np.inf
        idx, val = _argmin_lowest(sq)
        ne_index[lo:hi] = idx
        ne_sq[lo:hi] = val
    return NeighborTable(ne_index, ne_sq)


def _tree_nearest_enemy(ts: TrainingSet) -> NeighborTable:
    pts, labels = ts.points, ts.labels
    ne_index = np.empty(ts.n, dtype=np.int64)
    ne_sq = np.empty(ts.n)
    for cls in range(ts.c):
        members = np.flatnonzero(labels == cls)
        enemies = np.flatnonzero(labels != cls)
        tree = cKDTree(pts[enemies])
        approx, _ = tree.query(pts[members], k=1)
        # Widen the radius so every enemy tied with the exact minimum is a candidate.
        radii = approx * (1.0 + 1e-9) + 1e-300
        cand_lists = tree.query_ball_point(pts[members], radii)
        for m, cands in zip(members, cand_lists):
            cand = enemies[np.sort(np.asarray(cands, dtype=np.int64))]
            sq = sq_dist_to(pts[cand], pts[m])
            j = int(np.argmin(sq))
            ne_index[m] = cand[j]
            ne_sq[m] = sq[j]
    return NeighborTable(ne_index, ne_sq)


def nearest_enemy_table(ts: TrainingSet, method: str = "auto") -> NeighborTable:
    """Nearest enemy of every point, ties resolved to the lowest index.

    ``method`` is ``"brute"``, ``"tree"`` or ``"auto"``.
    """
    require_valid(ts)
    if ts.c < 2:
        raise NoEnemiesError("a single-class training set has no enemies")
    if method == "auto":
        method = "brute" if ts.n <= BRUTE_FORCE_MAX_N else "tree"
    if method == "brute":
        return brute_nearest_enemy(ts)
    if method == "tree":
        return _tree_nearest_enemy(ts)
    raise InvalidInputError(f"unknown method {method!r}")


def nearest_in_subset(q_index: int, ts: TrainingSet, r) -> tuple[int, float]:
    """Nearest member of ``r`` to point ``q_index`` as ``(index, distance)``."""
    r = np.asarray(r, dtype=np.int64)
    if r.size == 0:
        raise InvalidInputError("subset is empty")
    sq = sq_dist_to(ts.points[r], ts.points[q_index])
    best = np.flatnonzero(sq == sq.min())
    j = best[np.argmin(r[best])]
    return int(r[j]), math.sqrt(sq[j])


def _diameter_sq(pts: np.ndarray) -> float:
    cand = pts
    if pts.shape[0] > BRUTE_FORCE_MAX_N and 2 <= pts.shape[1] <= 6:
        try:
            cand = pts[ConvexHull(pts).vertices]
        except QhullError:
            cand = pts
    best = 0.0
    for lo, hi in _row_blocks(cand.shape[0], cand.shape[0]):
        best = max(best, float(sq_dist_block(cand[lo:hi], cand).max()))
    return best


def _min_nonzero_sq(pts: np.ndarray) -> float:
    n = pts.shape[0]
    if n <= BRUTE_FORCE_MAX_N:
        best = math.inf
        for lo, hi in _row_blocks(n, n):
            sq = sq_dist_block(pts[lo:hi], pts)
            sq[sq == 0.0] = np.inf
            best = min(best, float(sq.min()))
        return best
    tree = cKDTree(pts)
    k = 2
    while True:
        dd, _ = tree.query(pts, k=min(k, n))
        dd = dd.reshape(n, -1)
        pos = dd[dd > 0]
        # All k neighbours coincident for some row: look further out.
        if (dd[:, -1] == 0).any() and k < n:
            k *= 2
            continue
        if pos.size == 0:
            return math.inf
        approx = float(pos.min())
        break
    pairs = tree.query_pairs(approx * (1.0 + 1e-9) + 1e-300, output_type="ndarray")
    if pairs.size == 0:
        return math.inf
    a, b = pts[pairs[:, 0]], pts[pairs[:, 1]]
    sq = np.zeros(len(pairs))
    for k in range(pts.shape[1]):
        t = a[:, k] - b[:, k]
        sq += t * t
    sq = sq[sq > 0]
    return float(sq.min()) if sq.size else math.inf


def stats(ts: TrainingSet, table: NeighborTable | None = None) -> StatsSummary:
    """Size, boundary complexity (kappa), margin, diameter and spread of ``ts``."""
    if table is None:
        table = nearest_enemy_table(ts)
    kappa = int(np.unique(table.ne_index).size)
    gamma_raw = math.sqrt(float(table.ne_sq.min()))
    diameter = math.sqrt(_diameter_sq(ts.points))
    min_sq = _min_nonzero_sq(ts.points)
    spread = diameter / math.sqrt(min_sq) if math.isfinite(min_sq) else math.inf
    return StatsSummary(
        n=ts.n, d=ts.d, c=ts.c, kappa=kappa, gamma_raw=gamma_raw,
        diameter=diameter, gamma_norm=gamma_raw / diameter, spread=spread,
    )
