"""``nnc`` command line: stats, condense, verify, bench, gen, bound-check, ratio-sweep.

Exit codes: 0 success, 1 invalid input or failed verification, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .bench import BenchError, BenchPlan, ratio_sweep, run_bench
from .condense import ALGORITHM_NAMES, condense, sfcnn, sfcnn_bound_check, verify_consistent
from .core import InvalidInputError
from .dataio import read_dataset, read_subset, write_dataset, write_subset
from .datasets import resolve_input
from .generators import AdvParams, VoronoiParams, gen_adversarial, gen_voronoi
from .neighbors import stats


def _label_col(s: str):
    return "last" if s == "last" else int(s)


def _add_dataset_opts(p):
    p.add_argument("--no-header", action="store_true", help="first row is data")
    p.add_argument("--label-col", type=_label_col, default="last", metavar="<i|last>")


def _read(args, spec):
    return read_dataset(resolve_input(spec), header=False if args.no_header else None,
                        label_col=args.label_col)


def _print_config(args):
    cfg = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items()
           if k != "func"}
    print("# config " + json.dumps(cfg, sort_keys=True))


def cmd_stats(args) -> int:
    ts = _read(args, args.file)
    s = stats(ts)
    print(f"n={s.n} d={s.d} c={s.c} kappa={s.kappa} ({s.kappa_pct:.2f}%)")
    print(f"gamma_raw={s.gamma_raw!r} diameter={s.diameter!r} "
          f"gamma_norm={s.gamma_norm!r} spread={s.spread!r}")
    return 0


def cmd_condense(args) -> int:
    ts = _read(args, args.input)
    res = condense(ts, args.algo)
    check = verify_consistent(ts, res.subset)
    write_subset(res.subset, args.out,
                 comment=f"algorithm={args.algo} input={args.input} n={ts.n} size={len(res)}")
    print(f"{args.algo}: selected {len(res)} of {ts.n} points in {res.iterations} iterations")
    if not check:
        print(f"error: subset is not consistent (point {check.counterexample})", file=sys.stderr)
        return 1
    return 0


def cmd_verify(args) -> int:
    ts = _read(args, args.input)
    subset = read_subset(args.subset, ts.n)
    if subset.size == 0:
        print("error: subset is empty", file=sys.stderr)
        return 1
    check = verify_consistent(ts, subset)
    if check:
        print("consistent")
        return 0
    print(f"inconsistent: point {check.counterexample} is misclassified")
    return 1


def _expand_inputs(items):
    out = []
    for item in items:
        p = resolve_input(item)
        if p.is_dir():
            out.extend(sorted(p.glob("*.csv")))
        else:
            out.append(p)
    return out


def cmd_bench(args) -> int:
    algos = ALGORITHM_NAMES if args.algos == "all" else tuple(a.strip() for a in args.algos.split(","))
    inputs = _expand_inputs(args.inputs)
    if not inputs:
        print("error: no input datasets found", file=sys.stderr)
        return 1
    plan = BenchPlan(inputs, algos, repeats=args.repeats, warmup=args.warmup,
                     seed=args.seed, parallel_datasets=args.parallel)
    rows = run_bench(plan, out=args.out)
    print(f"{'dataset':<24} {'algo':<6} {'n':>7} {'kappa':>6} {'size':>6} {'size/kappa':>10} {'ns/point':>12}")
    for r in rows:
        print(f"{r.dataset:<24} {r.algorithm:<6} {r.n:>7} {r.kappa:>6} {r.subset_size:>6} "
              f"{r.size_over_kappa:>10.4f} {r.runtime_ns_per_point:>12.1f}")
    return 0


def cmd_gen(args) -> int:
    if args.kind == "adversarial":
        adv = gen_adversarial(AdvParams(args.t))
        write_dataset(adv.ts, args.out)
        manifest = Path(args.manifest) if args.manifest else Path(args.out).with_suffix(".manifest.json")
        manifest.write_text(json.dumps(adv.manifest, indent=2) + "\n")
        print(f"wrote {adv.ts.n} points to {args.out}; manifest {manifest}")
    else:
        ts = gen_voronoi(VoronoiParams(args.n, args.d, args.classes, args.sites, args.seed))
        write_dataset(ts, args.out)
        print(f"wrote {ts.n} points to {args.out}")
    return 0


def cmd_bound_check(args) -> int:
    ts = _read(args, args.input)
    res = sfcnn(ts)
    rep = sfcnn_bound_check(ts, res, args.ddim)
    print(f"|R|={rep.lhs} bound={rep.rhs} (kappa={rep.kappa} log_factor={rep.log_factor} "
          f"ddim={rep.assumed_ddim}) holds={'yes' if rep.holds else 'no'}")
    return 0 if rep.holds else 1


def cmd_ratio_sweep(args) -> int:
    if args.t_min > args.t_max:
        print("error: --t-min exceeds --t-max", file=sys.stderr)
        return 2
    rows = ratio_sweep(range(args.t_min, args.t_max + 1))
    cols = list(asdict(rows[0]).keys())
    print("  ".join(f"{c:>11}" for c in cols))
    for r in rows:
        print("  ".join(f"{v:>11.4f}" if isinstance(v, float) else f"{v:>11}" for v in asdict(r).values()))
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=cols, lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow(asdict(r))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nnc", description="Nearest-neighbor condensation toolkit")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("stats", help="dataset statistics (n, d, c, kappa, margin, spread)")
    s.add_argument("file")
    _add_dataset_opts(s)
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("condense", help="select a consistent subset")
    s.add_argument("--algo", required=True, choices=ALGORITHM_NAMES)
    s.add_argument("--input", required=True)
    s.add_argument("--out", required=True)
    _add_dataset_opts(s)
    s.set_defaults(func=cmd_condense)

    s = sub.add_parser("verify", help="check that a subset is consistent")
    s.add_argument("--input", required=True)
    s.add_argument("--subset", required=True)
    _add_dataset_opts(s)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("bench", help="timed runs with normalized results")
    s.add_argument("--inputs", nargs="+", required=True, help="dataset files or directories")
    s.add_argument("--algos", default="all", help="comma-separated list or 'all'")
    s.add_argument("--repeats", type=int, default=5)
    s.add_argument("--warmup", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.add_argument("--parallel", action="store_true", help="run datasets in parallel processes")
    s.set_defaults(func=cmd_bench)

    g = sub.add_parser("gen", help="generate datasets")
    gsub = g.add_subparsers(dest="kind", required=True)
    a = gsub.add_parser("adversarial")
    a.add_argument("--t", type=int, required=True)
    a.add_argument("--out", required=True)
    a.add_argument("--manifest", default=None)
    a.set_defaults(func=cmd_gen)
    v = gsub.add_parser("voronoi")
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--d", type=int, required=True)
    v.add_argument("--classes", type=int, required=True)
    v.add_argument("--sites", type=int, required=True)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out", required=True)
    v.set_defaults(func=cmd_gen)

    s = sub.add_parser("bound-check", help="run sfcnn and compare its size with the kappa bound")
    s.add_argument("--input", required=True)
    s.add_argument("--ddim", type=int, required=True)
    _add_dataset_opts(s)
    s.set_defaults(func=cmd_bound_check)

    s = sub.add_parser("ratio-sweep", help="size/kappa of fcnn, sfcnn, rss on adversarial sets")
    s.add_argument("--t-min", type=int, default=4)
    s.add_argument("--t-max", type=int, default=6)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_ratio_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    _print_config(args)
    try:
        return args.func(args)
    except (InvalidInputError, BenchError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
