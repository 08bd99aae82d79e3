"""Benchmark protocol: repeated timed runs, verification and normalization.

Runtime is normalized by ``n`` and subset size by ``kappa``. Each
(dataset, algorithm) pair is run ``warmup`` times untimed, then ``repeats``
times under ``time.perf_counter_ns``; the median is recorded. The timed call
is the whole algorithm, so the nearest-enemy table is charged to the
algorithms that build it (mss, rss, vss, net).
"""

from __future__ import annotations

import logging
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .condense import ALGORITHM_NAMES, ALGORITHMS, fcnn, rss, sfcnn, verify_consistent
from .core import InvalidInputError, TrainingSet
from .dataio import ResultRow, append_result, read_dataset
from .generators import AdvParams, gen_adversarial
from .neighbors import stats

log = logging.getLogger(__name__)

DatasetRef = Union[str, Path, tuple[str, TrainingSet]]


class BenchError(RuntimeError):
    pass


@dataclass
class BenchPlan:
    datasets: Sequence[DatasetRef]
    algorithms: Sequence[str] = ALGORITHM_NAMES
    repeats: int = 5
    warmup: int = 1
    # Recorded with every row; the algorithms themselves are deterministic.
    seed: int = 0
    parallel_datasets: bool = False

    def __post_init__(self):
        if self.repeats < 1:
            raise InvalidInputError("repeats must be >= 1")
        if self.warmup < 0:
            raise InvalidInputError("warmup must be >= 0")
        unknown = [a for a in self.algorithms if a not in ALGORITHMS]
        if unknown:
            raise InvalidInputError(f"unknown algorithms: {', '.join(unknown)}")


def _load(ref: DatasetRef) -> tuple[str, TrainingSet]:
    if isinstance(ref, tuple):
        return ref
    path = Path(ref)
    return path.stem, read_dataset(path)


def _bench_dataset(ref: DatasetRef, plan: BenchPlan) -> list[ResultRow]:
    name, ts = _load(ref)
    summary = stats(ts)
    rows = []
    for algo in plan.algorithms:
        fn = ALGORITHMS[algo]
        for _ in range(plan.warmup):
            fn(ts)
        times, subset = [], None
        for _ in range(plan.repeats):
            t0 = time.perf_counter_ns()
            res = fn(ts)
            times.append(time.perf_counter_ns() - t0)
            if subset is None:
                subset = res.subset
            elif not np.array_equal(subset, res.subset):
                raise BenchError(f"{name}/{algo}: subset changed between repeats")
        check = verify_consistent(ts, subset)
        if not check:
            raise BenchError(
                f"{name}/{algo}: inconsistent subset (point {check.counterexample} misclassified)")
        median_ns = int(statistics.median(times))
        rows.append(ResultRow.make(
            dataset=name, algorithm=algo, n=ts.n, d=ts.d, c=ts.c,
            kappa=summary.kappa, gamma_norm=summary.gamma_norm,
            subset_size=int(subset.size), runtime_ns_median=median_ns,
            consistent=True, repeats=plan.repeats, seed=plan.seed))
        log.info("%s %s size=%d median=%.3fms", name, algo, subset.size, median_ns / 1e6)
    return rows


def run_bench(plan: BenchPlan, out: str | Path | None = None) -> list[ResultRow]:
    """Run every (dataset, algorithm) pair of ``plan``; optionally append rows to ``out``."""
    if plan.parallel_datasets and len(plan.datasets) > 1:
        with ProcessPoolExecutor() as pool:
            per_ds = list(pool.map(_bench_dataset, plan.datasets, [plan] * len(plan.datasets)))
    else:
        per_ds = [_bench_dataset(ref, plan) for ref in plan.datasets]
    rows = [r for chunk in per_ds for r in chunk]
    if out is not None:
        for r in rows:
            append_result(r, out)
    return rows


@dataclass(frozen=True)
class SweepRow:
    t: int
    n: int
    kappa: int
    fcnn_size: int
    sfcnn_size: int
    rss_size: int
    fcnn_ratio: float = field(init=False)
    sfcnn_ratio: float = field(init=False)
    rss_ratio: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "fcnn_ratio", self.fcnn_size / self.kappa)
        object.__setattr__(self, "sfcnn_ratio", self.sfcnn_size / self.kappa)
        object.__setattr__(self, "rss_ratio", self.rss_size / self.kappa)


def ratio_sweep(t_values: Sequence[int]) -> list[SweepRow]:
    """Subset size over kappa for fcnn, sfcnn and rss on the adversarial sets."""
    rows = []
    for t in t_values:
        if not 4 <= t <= 8:
            raise InvalidInputError(f"t must lie in [4, 8], got {t}")
        ts = gen_adversarial(AdvParams(t)).ts
        summary = stats(ts)
        sizes = {}
        for fn in (fcnn, sfcnn, rss):
            res = fn(ts)
            check = verify_consistent(ts, res.subset)
            if not check:
                raise BenchError(f"t={t}/{res.algorithm}: inconsistent subset")
            sizes[res.algorithm] = len(res)
        rows.append(SweepRow(t, ts.n, summary.kappa, sizes["fcnn"], sizes["sfcnn"], sizes["rss"]))
    return rows
