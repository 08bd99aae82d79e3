"""Nearest-neighbor condensation: FCNN, SFCNN and five reference algorithms."""

__version__ = "0.1.0"

from .condense import (
    ALGORITHM_NAMES,
    CondenseResult,
    centroids,
    cnn,
    condense,
    fcnn,
    mss,
    net,
    rss,
    sfcnn,
    sfcnn_bound_check,
    verify_consistent,
    voren,
)
from .core import InvalidInputError, NoEnemiesError, TrainingSet, distance, validate
from .neighbors import NeighborTable, StatsSummary, nearest_enemy_table, nearest_in_subset, stats

__all__ = [
    "ALGORITHM_NAMES", "CondenseResult", "InvalidInputError", "NeighborTable",
    "NoEnemiesError", "StatsSummary", "TrainingSet", "centroids", "cnn", "condense",
    "distance", "fcnn", "mss", "nearest_enemy_table", "nearest_in_subset", "net",
    "rss", "sfcnn", "sfcnn_bound_check", "stats", "validate", "verify_consistent", "voren",
]
