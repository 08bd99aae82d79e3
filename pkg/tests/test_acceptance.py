"""Acceptance gate: one PASS/FAIL line per criterion, at the stated tolerances.

Run alone with ``pytest tests/test_acceptance.py -v``; the lines appear in the
"acceptance criteria" section of the terminal summary.
"""

import statistics
import time

import numpy as np
import pytest

from nncond import ALGORITHM_NAMES, TrainingSet, condense, centroids, stats, verify_consistent
from nncond.bench import ratio_sweep
from nncond.condense import (
    bucket_separation_violation,
    fcnn,
    packing_violation,
    sfcnn,
    sfcnn_bound_check,
)
from nncond.dataio import (
    ResultRow,
    append_result,
    read_dataset,
    read_results,
    read_subset,
    write_dataset,
    write_subset,
)
from nncond.datasets import benchmark_suite, load_bundled
from nncond.generators import (
    VoronoiParams,
    expected_size,
    gen_adversarial,
    gen_gaussian_blobs,
    gen_voronoi,
)
from nncond.neighbors import nearest_enemy_table

from conftest import ACCEPTANCE_LINES

pytestmark = pytest.mark.acceptance


def report(num, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_c1_iris_kappa():
    t0 = time.perf_counter()
    s = stats(load_bundled("iris"))
    elapsed = time.perf_counter() - t0
    pct = round(s.kappa_pct, 2)
    ok = (s.n, s.d, s.c, s.kappa, pct) == (150, 4, 3, 20, 13.33) and elapsed < 1.0
    report(1, ok, f"iris n={s.n} d={s.d} c={s.c} kappa={s.kappa} ({pct}%) in {elapsed:.3f}s "
                  "(want 20 (13.33%), < 1 s)")


def _random_set(rng):
    c = int(rng.choice([2, 3, 4]))
    d = int(rng.integers(1, 6))
    n = int(rng.integers(max(c, 2), 501))
    while True:
        # Half of the sets sit on a coarse grid so exact distance ties occur.
        pts = rng.integers(0, 6, (n, d)).astype(float) if rng.random() < 0.5 else rng.random((n, d))
        _, inv = np.unique(pts, axis=0, return_inverse=True)
        cell = rng.integers(0, c, inv.max() + 1)
        labels = cell[inv.reshape(-1)]
        if np.unique(labels).size >= 2:
            return TrainingSet.from_labels(pts, labels.tolist())


def test_c2_consistency_suite():
    rng = np.random.default_rng(20240)
    t0 = time.perf_counter()
    failures = []
    sets = 200
    for k in range(sets):
        ts = _random_set(rng)
        for algo in ALGORITHM_NAMES:
            sub = condense(ts, algo).subset
            if not verify_consistent(ts, sub) or np.unique(ts.labels[sub]).size != ts.c:
                failures.append((k, algo))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 120
    report(2, ok, f"{sets} random sets x {len(ALGORITHM_NAMES)} algorithms, "
                  f"{len(failures)} failures, {elapsed:.1f}s (want 0, < 120 s)")


def test_c3_line_instance():
    ts = TrainingSet.from_labels([[0.0], [1.0], [3.0], [4.0]], ["A", "A", "B", "B"])
    want = {"fcnn": [0, 2], "sfcnn": [0, 2], "cnn": [0, 2], "net": [0, 2],
            "rss": [1, 2], "vss": [1, 2], "mss": [1, 2]}
    got = {a: condense(ts, a).subset.tolist() for a in want}
    s = stats(ts)
    ok = got == want and s.kappa == 2 and s.gamma_raw == 2.0
    report(3, ok, f"subsets {got}, kappa={s.kappa}, gamma={s.gamma_raw}")


def test_c4_ratio_growth():
    t0 = time.perf_counter()
    rows = {r.t: r for r in ratio_sweep([4, 5, 6])}
    elapsed = time.perf_counter() - t0
    f = rows[6].fcnn_ratio / rows[4].fcnn_ratio
    s = rows[6].sfcnn_ratio / rows[4].sfcnn_ratio
    rr = [r.rss_ratio for r in rows.values()]
    spread = max(rr) / min(rr)
    ok = f >= 2 and s <= 1.5 and spread <= 1.5 and elapsed < 300
    report(4, ok, f"fcnn growth {f:.3f} (>= 2), sfcnn growth {s:.3f} (<= 1.5), "
                  f"rss spread {spread:.3f} (<= 1.5), {elapsed:.1f}s")


def test_c5_sfcnn_invariants():
    t0 = time.perf_counter()
    named = benchmark_suite(seed=0) + [(f"adv-t{t}", gen_adversarial(t).ts) for t in range(4, 9)]
    bad = []
    for name, ts in named:
        table = nearest_enemy_table(ts)
        s = stats(ts, table)
        r = sfcnn(ts)
        if packing_violation(ts, r.subset, s.gamma_raw) is not None:
            bad.append(f"{name}:packing")
        if bucket_separation_violation(ts, r.subset, table) is not None:
            bad.append(f"{name}:buckets")
        if not sfcnn_bound_check(ts, r, ts.d, summary=s).holds:
            bad.append(f"{name}:bound")
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 300
    report(5, ok, f"{len(named)} datasets (suite + adversarial t=4..8), violations {bad or 'none'}, "
                  f"{elapsed:.1f}s (< 300 s)")


def test_c6_sfcnn_fcnn_equivalence():
    ratios = {}
    for name, ts in benchmark_suite(seed=0):
        ratios[name] = len(sfcnn(ts)) / len(fcnn(ts))
    med = statistics.median(ratios.values())
    outside = {k: round(v, 3) for k, v in ratios.items() if not 0.85 <= v <= 1.15}
    ok = not outside and 0.95 <= med <= 1.05
    detail = ", ".join(f"{k}={v:.3f}" for k, v in ratios.items())
    report(6, ok, f"|sfcnn|/|fcnn| {detail}; median {med:.3f} (want each in [0.85, 1.15], "
                  f"median in [0.95, 1.05]); outside: {outside or 'none'}")


def test_c7_blob_ordering():
    ordered, close = 0, 0
    for seed in range(10):
        ts = gen_gaussian_blobs(n=10_000, c=3, seed=seed)
        size = {a: len(condense(ts, a)) for a in ("net", "cnn", "fcnn", "rss", "vss", "sfcnn")}
        ordered += size["net"] > size["cnn"] >= size["fcnn"]
        close += all(abs(size[a] / size["fcnn"] - 1) <= 0.25 for a in ("rss", "vss", "sfcnn"))
    ok = ordered >= 8 and close == 10
    report(7, ok, f"|net|>|cnn|>=|fcnn| on {ordered}/10 seeds (>= 8); "
                  f"rss/vss/sfcnn within 25% of fcnn on {close}/10 seeds")


def test_c8_performance():
    ts = gen_voronoi(VoronoiParams(100_000, 3, 3, 15, seed=0))
    times, sizes = {}, {}
    for fn in (fcnn, sfcnn):
        t0 = time.perf_counter()
        res = fn(ts)
        times[res.algorithm] = time.perf_counter() - t0
        sizes[res.algorithm] = len(res)
        assert verify_consistent(ts, res.subset)
    ok = all(t < 300 for t in times.values())
    report(8, ok, "n=100000 d=3 voronoi: " + ", ".join(
        f"{a} {times[a]:.1f}s (|R|={sizes[a]})" for a in times) + " (each < 300 s)")


def test_c9_generator_audits(tmp_path):
    counts_ok = all(
        (a := gen_adversarial(t)).ts.n == expected_size(t, a.manifest["F"]["size"])
        for t in range(4, 9))
    cents_ok = True
    for t in (4, 5, 6):
        adv = gen_adversarial(t)
        want = {tuple(p) for p in adv.ts.points[adv.block_indices("B")].tolist()}
        want |= {tuple(adv.manifest["F"]["blue_anchor"]), tuple(adv.manifest["F"]["white_anchor"])}
        cents_ok &= {tuple(p) for p in adv.ts.points[centroids(adv.ts)].tolist()} == want

    ts = gen_adversarial(4).ts
    write_dataset(ts, tmp_path / "d.csv")
    sub = sfcnn(ts).subset
    write_subset(sub, tmp_path / "s.idx", comment="sfcnn")
    row = ResultRow.make("adv", "sfcnn", ts.n, ts.d, ts.c, 88, 1e-4, len(sub), 123456, True, 5, 0)
    append_result(row, tmp_path / "r.csv")
    trip_ok = (read_dataset(tmp_path / "d.csv") == ts
               and np.array_equal(read_subset(tmp_path / "s.idx", ts.n), sub)
               and read_results(tmp_path / "r.csv") == [row])
    ok = counts_ok and cents_ok and trip_ok
    report(9, ok, f"n(t) formula t=4..8 {'ok' if counts_ok else 'MISMATCH'}; centroids t=4..6 "
                  f"{'ok' if cents_ok else 'MISMATCH'}; round trips {'ok' if trip_ok else 'BROKEN'}")
