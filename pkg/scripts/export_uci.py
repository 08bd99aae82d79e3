"""Regenerate the bundled UCI datasets in src/nncond/data/.

The three sets ship with scikit-learn (iris, wine, breast cancer Wisconsin
diagnostic). Each feature is min-max scaled to [0, 1]; this is the variant
whose nearest-enemy counts match the published ones for iris (20) and wine
(37). Row order follows the UCI files.

    python scripts/export_uci.py
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np
from sklearn import datasets

OUT = Path(__file__).resolve().parents[1] / "src" / "nncond" / "data"

SOURCES = {
    "iris": (datasets.load_iris, ["Iris-setosa", "Iris-versicolor", "Iris-virginica"]),
    "wine": (datasets.load_wine, ["1", "2", "3"]),
    "wdbc": (datasets.load_breast_cancer, ["M", "B"]),
}


def minmax(x: np.ndarray) -> np.ndarray:
    lo, hi = x.min(axis=0), x.max(axis=0)
    return (x - lo) / (hi - lo)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, (loader, class_names) in SOURCES.items():
        bunch = loader()
        x = minmax(np.asarray(bunch.data, dtype=float))
        header = [f.replace(" ", "_").replace("(", "").replace(")", "") for f in bunch.feature_names]
        with open(OUT / f"{name}.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header + ["class"])
            for row, t in zip(x.tolist(), bunch.target.tolist()):
                w.writerow([repr(v) for v in row] + [class_names[t]])
        print(f"{name}: {x.shape[0]} rows, {x.shape[1]} features")


if __name__ == "__main__":
    main()
