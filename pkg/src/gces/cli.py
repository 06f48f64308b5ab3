"""Command-line entry points.

Subcommands: solve (one problem, one solver), bench (a config grid),
gen-synthetic (write a synthetic instance as a LIBSVM file), reference
(compute and cache x*), fetch (dataset download).  Exit codes: 0 success,
2 certificate violation, 1 error.  The GCES_CACHE environment variable
overrides the cache directory.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from .errors import GcesError
from .libsvm import fetch_dataset, serialize_libsvm, LabeledDataset
from .zoo import SyntheticSpec, make_synthetic

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CERTIFICATE = 2


def _add_common(p):
    p.add_argument("--out", default=None, help="output directory or file")
    p.add_argument("--seed", type=int, default=None, help="override the run seed")
    p.add_argument("--offline", action="store_true",
                   help="never touch the network")
    p.add_argument("--cache-dir", default=None,
                   help="cache directory (default: $GCES_CACHE or ~/.cache/gces)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gces",
        description="composite-objective solvers with runtime certificates")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run one solver on one problem")
    p_solve.add_argument("--config", required=True)
    _add_common(p_solve)

    p_bench = sub.add_parser("bench", help="run a benchmark grid")
    p_bench.add_argument("--config", required=True)
    _add_common(p_bench)

    p_gen = sub.add_parser("gen-synthetic",
                           help="write a synthetic instance in LIBSVM format")
    p_gen.add_argument("--m", type=int, required=True)
    p_gen.add_argument("--xi", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True)

    p_ref = sub.add_parser("reference", help="compute and cache a reference solution")
    p_ref.add_argument("--config", required=True)
    _add_common(p_ref)

    p_fetch = sub.add_parser("fetch", help="download a registry dataset")
    p_fetch.add_argument("--name", required=True)
    p_fetch.add_argument("--offline", action="store_true")
    p_fetch.add_argument("--cache-dir", default=None)

    for p in (p_solve, p_bench):
        p.add_argument("--max-rows", type=int, default=None)
        p.add_argument("--max-cols", type=int, default=None)
    return parser


def _load_config(args) -> bench_mod.RunConfig:
    cfg = bench_mod.load_config(args.config)
    if args.seed is not None:
        cfg.seeds = [args.seed]
    if getattr(args, "max_rows", None) or getattr(args, "max_cols", None):
        cfg.problem = dict(cfg.problem)
        if args.max_rows:
            cfg.problem["max_rows"] = args.max_rows
        if args.max_cols:
            cfg.problem["max_cols"] = args.max_cols
    return cfg


def _cmd_solve(args) -> int:
    cfg = _load_config(args)
    cfg.solvers = cfg.solvers[:1]
    cfg.seeds = cfg.seeds[:1]
    out = Path(args.out or cfg.output_dir or "gces-out")
    report = bench_mod.run_benchmark(cfg, out, cache_dir=args.cache_dir,
                                     offline=args.offline)
    print(json.dumps(report["solvers"], indent=2, sort_keys=True))
    if report["errors"]:
        print(f"errors: {report['errors']}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_CERTIFICATE if report["certificate_violation"] else EXIT_OK


def _cmd_bench(args) -> int:
    cfg = _load_config(args)
    out = Path(args.out or cfg.output_dir or "gces-out")
    report = bench_mod.run_benchmark(cfg, out, cache_dir=args.cache_dir,
                                     offline=args.offline)
    print(json.dumps(report["solvers"], indent=2, sort_keys=True))
    print(f"traces and report.json written to {out}")
    if report["errors"]:
        print(f"errors: {report['errors']}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_CERTIFICATE if report["certificate_violation"] else EXIT_OK


def _cmd_gen_synthetic(args) -> int:
    spec = SyntheticSpec(m=args.m, xi=args.xi, seed=args.seed)
    inst = make_synthetic(spec)
    ds = LabeledDataset(features=inst.A, labels=inst.b,
                        n_features_declared=inst.A.n_cols)
    Path(args.out).write_text(serialize_libsvm(ds), encoding="ascii")
    print(f"wrote {args.m}x{args.m} instance to {args.out}")
    return EXIT_OK


def _cmd_reference(args) -> int:
    cfg = _load_config(args)
    instance = bench_mod.build_instance(cfg.problem, cache_dir=args.cache_dir,
                                        offline=args.offline)
    from .zoo import as_problem
    problem = as_problem(instance)
    ref = bench_mod.reference_solve(problem, budget=cfg.reference_budget,
                                    cache_dir=args.cache_dir, instance=instance)
    print(f"objective {ref.F:.17g} verified={ref.verified}")
    if args.out:
        np.savez(args.out, x=ref.x, F=ref.F, verified=ref.verified)
        print(f"saved to {args.out}")
    return EXIT_OK


def _cmd_fetch(args) -> int:
    path = fetch_dataset(args.name, cache_dir=args.cache_dir,
                         offline=args.offline)
    print(path)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "solve": _cmd_solve,
        "bench": _cmd_bench,
        "gen-synthetic": _cmd_gen_synthetic,
        "reference": _cmd_reference,
        "fetch": _cmd_fetch,
    }
    try:
        return handlers[args.command](args)
    except GcesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
