"""Bundled datasets and the standard benchmark suite.

The bundled CSV files are the UCI iris, wine and breast-cancer (wdbc) sets
with every feature min-max scaled to [0, 1] (see ``scripts/export_uci.py``).
The suite adds four Voronoi-labeled synthetic sets at desk scale (10^4 points).
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .core import InvalidInputError, TrainingSet
from .dataio import read_dataset
from .generators import VoronoiParams, gen_voronoi

BUNDLED = ("iris", "wine", "wdbc")
SUITE_VORONOI = tuple(VoronoiParams(10_000, d, 3, s) for d in (2, 3) for s in (5, 15))


def bundled_path(name: str) -> Path:
    if name not in BUNDLED:
        raise InvalidInputError(f"no bundled dataset {name!r}; available: {', '.join(BUNDLED)}")
    return Path(str(resources.files("nncond") / "data" / f"{name}.csv"))


def load_bundled(name: str) -> TrainingSet:
    return read_dataset(bundled_path(name))


def resolve_input(spec: str) -> Path:
    """Map ``bundled:<name>`` to the packaged file; anything else is a path."""
    if spec.startswith("bundled:"):
        return bundled_path(spec.split(":", 1)[1])
    return Path(spec)


def benchmark_suite(seed: int = 0) -> list[tuple[str, TrainingSet]]:
    out = [(name, load_bundled(name)) for name in BUNDLED]
    for p in SUITE_VORONOI:
        p = VoronoiParams(p.n, p.d, p.c, p.sites, seed)
        out.append((p.name, gen_voronoi(p)))
    return out
