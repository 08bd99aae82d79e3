import math

import numpy as np
import pytest
from hypothesis import given, settings

from nncond import TrainingSet, nearest_enemy_table, nearest_in_subset, stats
from nncond.core import NoEnemiesError, InvalidInputError, sq_distance
from nncond.datasets import load_bundled
from nncond.neighbors import brute_nearest_enemy, _tree_nearest_enemy, _diameter_sq, _min_nonzero_sq

from conftest import training_sets


def python_nearest_enemy(ts):
    """Nested-loop oracle: strict < keeps the lowest index on ties."""
    pts, labels = ts.points.tolist(), ts.labels.tolist()
    out = []
    for i, p in enumerate(pts):
        best, best_sq = None, math.inf
        for j, q in enumerate(pts):
            if labels[j] != labels[i]:
                s = sq_distance(p, q)
                if s < best_sq:
                    best, best_sq = j, s
        out.append((best, best_sq))
    return out


# --- oracles -----------------------------------------------------------------

def test_line4_enemies(line4):
    t = nearest_enemy_table(line4)
    assert t.ne_index.tolist() == [2, 2, 1, 1]
    assert t.ne_dist.tolist() == [3.0, 2.0, 2.0, 3.0]


def test_two_points_are_mutual_enemies(pair):
    t = nearest_enemy_table(pair)
    assert t.ne_index.tolist() == [1, 0]


def test_equidistant_enemies_lowest_index():
    pts = np.zeros((8, 2))
    pts[:, 1] = np.arange(8) * 10.0 + 100.0
    pts[0] = (0.0, 0.0)
    pts[4] = (3.0, 4.0)
    pts[7] = (-3.0, 4.0)
    labels = ["a", "a", "a", "a", "b", "a", "a", "b"]
    t = nearest_enemy_table(TrainingSet.from_labels(pts, labels))
    assert t.ne_index[0] == 4
    assert t.ne_dist[0] == 5.0


def test_nearest_in_subset_examples(line4):
    assert nearest_in_subset(1, line4, [0, 2]) == (0, 1.0)
    assert nearest_in_subset(2, line4, [0, 2]) == (2, 0.0)
    ts = TrainingSet.from_labels([[0.0], [1.0], [2.0]], ["a", "b", "a"])
    assert nearest_in_subset(1, ts, [2, 0]) == (0, 1.0)
    with pytest.raises(InvalidInputError):
        nearest_in_subset(0, line4, [])


def test_stats_line4(line4):
    s = stats(line4)
    assert (s.kappa, s.gamma_raw, s.diameter, s.gamma_norm) == (2, 2.0, 4.0, 0.5)
    assert s.spread == 4.0


def test_stats_pair(pair):
    s = stats(pair)
    assert (s.kappa, s.gamma_raw, s.diameter, s.gamma_norm) == (2, 1.0, 1.0, 1.0)


def test_iris_kappa():
    s = stats(load_bundled("iris"))
    assert (s.n, s.d, s.c, s.kappa) == (150, 4, 3, 20)
    assert round(s.kappa_pct, 2) == 13.33


def test_single_class_has_no_enemies():
    ts = TrainingSet.from_labels([[0.0], [1.0]], ["a", "a"])
    with pytest.raises(NoEnemiesError):
        nearest_enemy_table(ts)
    with pytest.raises(NoEnemiesError):
        stats(ts)


def test_invalid_set_rejected():
    ts = TrainingSet.from_labels([[0.0], [0.0]], ["a", "b"])
    with pytest.raises(InvalidInputError):
        nearest_enemy_table(ts)


# --- properties --------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(training_sets(max_n=40))
def test_brute_matches_python_oracle(ts):
    t = brute_nearest_enemy(ts)
    assert list(zip(t.ne_index.tolist(), t.ne_sq.tolist())) == python_nearest_enemy(ts)


@settings(max_examples=80, deadline=None)
@given(training_sets(max_n=200))
def test_tree_matches_brute(ts):
    a, b = brute_nearest_enemy(ts), _tree_nearest_enemy(ts)
    assert np.array_equal(a.ne_index, b.ne_index)
    assert np.array_equal(a.ne_sq, b.ne_sq)


@pytest.mark.parametrize("seed", range(3))
def test_tree_matches_brute_continuous(seed):
    rng = np.random.default_rng(seed)
    ts = TrainingSet.from_labels(rng.random((3500, 3)), rng.integers(0, 3, 3500).tolist())
    a, b = brute_nearest_enemy(ts), nearest_enemy_table(ts)  # auto picks the tree here
    assert np.array_equal(a.ne_index, b.ne_index)
    assert np.array_equal(a.ne_sq, b.ne_sq)


def test_large_n_geometry_helpers_match_brute():
    rng = np.random.default_rng(7)
    pts = rng.random((3200, 2))
    pts[10] = pts[11]  # a zero-distance pair must be ignored
    sq = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)
    assert _diameter_sq(pts) == pytest.approx(sq.max(), rel=1e-15)
    assert _min_nonzero_sq(pts) == pytest.approx(sq[sq > 0].min(), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(training_sets(max_n=80))
def test_stats_invariants(ts):
    s = stats(ts)
    assert 2 <= s.kappa <= s.n
    assert 0 < s.gamma_norm <= 1
    assert 1 / s.gamma_norm <= s.spread * (1 + 1e-12)


@settings(max_examples=30, deadline=None)
@given(training_sets(max_n=60))
def test_table_is_deterministic(ts):
    copy = TrainingSet(ts.points.copy(), ts.labels.copy(), ts.class_names)
    a, b = nearest_enemy_table(ts), nearest_enemy_table(copy)
    assert np.array_equal(a.ne_index, b.ne_index) and np.array_equal(a.ne_sq, b.ne_sq)
