"""Subset size over kappa for fcnn, sfcnn and rss on the adversarial sets.

    python3 scripts/ratio_sweep.py --t-max 6 --out sweep.csv
"""

import argparse
import csv
from dataclasses import asdict

from nncond.bench import ratio_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--t-min", type=int, default=4)
    ap.add_argument("--t-max", type=int, default=6)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    rows = ratio_sweep(range(args.t_min, args.t_max + 1))
    print(f"{'t':>3} {'n':>8} {'kappa':>6} {'fcnn/k':>8} {'sfcnn/k':>8} {'rss/k':>8}")
    for r in rows:
        print(f"{r.t:>3} {r.n:>8} {r.kappa:>6} {r.fcnn_ratio:>8.3f} {r.sfcnn_ratio:>8.3f} {r.rss_ratio:>8.3f}")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(asdict(rows[0])), lineterminator="\n")
            w.writeheader()
            w.writerows(asdict(r) for r in rows)


if __name__ == "__main__":
    main()
