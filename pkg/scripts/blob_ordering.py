"""Subset sizes of all seven algorithms on seeded 2-D three-class Gaussian blobs.

    python3 scripts/blob_ordering.py --seeds 10
"""

import argparse

from nncond import ALGORITHM_NAMES, condense
from nncond.generators import gen_gaussian_blobs


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10_000)
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--std", type=float, default=0.32)
    args = ap.parse_args()

    print("seed " + " ".join(f"{a:>6}" for a in ALGORITHM_NAMES) + "  net>cnn>=fcnn")
    held = 0
    for seed in range(args.seeds):
        ts = gen_gaussian_blobs(n=args.n, std=args.std, seed=seed)
        size = {a: len(condense(ts, a)) for a in ALGORITHM_NAMES}
        ok = size["net"] > size["cnn"] >= size["fcnn"]
        held += ok
        print(f"{seed:>4} " + " ".join(f"{size[a]:>6}" for a in ALGORITHM_NAMES) + f"  {ok}")
    print(f"ordering held on {held}/{args.seeds} seeds")


if __name__ == "__main__":
    main()
