"""Data ingestion, synthetic data, single runs, benchmarks and the CLI."""

from .datasets import gen_blobs, normalize_minmax
from .io import load_csv, write_labels, write_metrics
from .runner import ALGORITHMS, ResultRecord, RunSpec, bench, cluster, load_suite, run

__all__ = [
    "ALGORITHMS",
    "ResultRecord",
    "RunSpec",
    "bench",
    "cluster",
    "gen_blobs",
    "load_csv",
    "load_suite",
    "normalize_minmax",
    "run",
    "write_labels",
    "write_metrics",
]
