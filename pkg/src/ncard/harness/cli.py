"""Command line entry point: ``cluster``, ``gen blobs`` and ``bench``.

Exit codes: 0 success, 1 usage or configuration error, 2 data error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from ..baselines import AUTO
from ..exceptions import ConfigError, DataError, NCARDError
from .datasets import gen_blobs
from .io import write_labels, write_metrics, write_table
from .runner import ALGORITHMS, BENCH_COLUMNS, RunSpec, bench, load_suite, run

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

logger = logging.getLogger("ncard")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for data errors here
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _eps(text: str):
    if text.lower() == AUTO:
        return AUTO
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive number or 'auto', got {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"eps must be positive, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ncard", description="Neighbourhood-construction clustering toolkit.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("cluster", help="cluster one CSV file")
    c.add_argument("--input", required=True)
    c.add_argument("--has-header", action="store_true")
    c.add_argument("--label-col", default="none", help="index, header name, or 'none'")
    c.add_argument("--normalize", choices=("minmax", "none"), default="minmax")
    c.add_argument("--algo", required=True, choices=("ncard", "ncar", "knn", "knn1", "knn2", "eps"))
    c.add_argument("--p", type=float, default=0.05, help="neighbour fraction for the density (default 0.05)")
    c.add_argument("--knn-frac", type=float, default=0.05, help="k as a fraction of n for --algo knn")
    c.add_argument("--eps", type=_eps, default=AUTO, help="radius for --algo eps, or 'auto'")
    c.add_argument("--out-labels", required=True)
    c.add_argument("--out-metrics", required=True)

    g = sub.add_parser("gen", help="generate synthetic data")
    gsub = g.add_subparsers(dest="generator", required=True, parser_class=_Parser)
    b = gsub.add_parser("blobs", help="isotropic Gaussian blobs")
    b.add_argument("--n", type=int, required=True, help="points per cluster")
    b.add_argument("--clusters", type=int, required=True)
    b.add_argument("--dim", type=int, required=True)
    b.add_argument("--sep", type=float, required=True)
    b.add_argument("--spread", type=float, required=True)
    b.add_argument("--seed", type=int, required=True)
    b.add_argument("--out", required=True)

    s = sub.add_parser("bench", help="run a benchmark suite")
    s.add_argument("--suite", required=True, help="JSON suite file")
    s.add_argument("--algos", required=True, help=f"comma-separated subset of {','.join(ALGORITHMS)}")
    s.add_argument("--out", required=True)
    s.add_argument("--jobs", type=int, default=1)
    return parser


def _cmd_cluster(args) -> int:
    if not Path(args.input).is_file():
        raise DataError(f"input file not found: {args.input}")
    spec = RunSpec(
        algo=args.algo,
        input=args.input,
        has_header=args.has_header,
        label_column=args.label_col,
        normalize=args.normalize,
        p=args.p,
        knn_fraction=args.knn_frac,
        eps=args.eps,
    )
    record = run(spec)
    write_labels(args.out_labels, record.labels)
    write_metrics(args.out_metrics, record)
    logger.info("%s: %d clusters, %d outliers", spec.algo, record.n_clusters, record.n_outliers)
    return EXIT_OK


def _cmd_gen(args) -> int:
    ds = gen_blobs(args.n, args.clusters, args.dim, args.sep, args.spread, args.seed)
    lines = [",".join([f"x{j}" for j in range(ds.dim)] + ["label"])]
    for row, lab in zip(ds.points.tolist(), ds.labels.tolist()):
        lines.append(",".join([repr(v) for v in row] + [str(lab)]))
    Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return EXIT_OK


def _cmd_bench(args) -> int:
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    bad = [a for a in algos if a not in ALGORITHMS + ("knn",)]
    if bad or not algos:
        raise ConfigError(f"unknown algorithm ids {bad}; choose from {','.join(ALGORITHMS)}")
    if not Path(args.suite).is_file():
        raise DataError(f"suite file not found: {args.suite}")
    rows = bench(load_suite(args.suite, algos), n_jobs=args.jobs)
    write_table(args.out, rows, BENCH_COLUMNS)
    failed = sum(r["status"] == "failed" for r in rows)
    if failed:
        logger.warning("%d benchmark cells failed", failed)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    handler = {"cluster": _cmd_cluster, "gen": _cmd_gen, "bench": _cmd_bench}[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NCARDError, OSError, UnicodeDecodeError) as exc:
        kind = "data error" if isinstance(exc, (DataError, OSError, UnicodeDecodeError)) else "error"
        print(f"{kind}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
