"""Single runs and benchmark suites."""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ..baselines import AUTO, auto_epsilon, eps_clustering, knn_clustering
from ..density import Dataset, pairwise_distances
from ..exceptions import ConfigError, NCARDError
from ..metrics import PairCounts, ValidationScores, evaluate
from ..neighborhood import Clustering, run_ncar, run_ncard
from .datasets import gen_blobs, normalize_minmax
from .io import METRIC_KEYS, load_csv

logger = logging.getLogger(__name__)

ALGORITHMS = ("ncard", "ncar", "knn1", "knn2", "eps")
# "knn" takes its fraction from RunSpec.knn_fraction; knn1/knn2 fix it
_KNN_FRACTIONS = {"knn1": 0.05, "knn2": 0.10}

__all__ = ["ALGORITHMS", "RunSpec", "ResultRecord", "cluster", "load", "run", "bench", "load_suite"]


@dataclass(frozen=True)
class RunSpec:
    """One (dataset, algorithm) cell.

    Exactly one of ``input`` (CSV path) or ``generator`` (keyword arguments of
    ``gen_blobs``) must be set.
    """

    algo: str
    input: str | None = None
    generator: dict | None = None
    has_header: bool = False
    label_column: int | str | None = None
    normalize: str = "minmax"
    p: float = 0.05
    knn_fraction: float = 0.05
    eps: float | str = AUTO
    name: str | None = None

    def __post_init__(self):
        if self.algo not in ALGORITHMS + ("knn",):
            raise ConfigError(f"unknown algorithm {self.algo!r}; choose from {', '.join(ALGORITHMS)}")
        if (self.input is None) == (self.generator is None):
            raise ConfigError("a run needs exactly one of an input path or a generator setting")
        if self.normalize not in ("minmax", "none"):
            raise ConfigError(f"normalize must be 'minmax' or 'none', got {self.normalize!r}")
        if not 0.0 < self.p <= 1.0:
            raise ConfigError(f"p must lie in (0, 1], got {self.p!r}")
        if not 0.0 < self.knn_fraction <= 1.0:
            raise ConfigError(f"knn fraction must lie in (0, 1], got {self.knn_fraction!r}")
        if self.eps != AUTO and not (isinstance(self.eps, (int, float)) and self.eps > 0):
            raise ConfigError(f"eps must be positive or 'auto', got {self.eps!r}")

    @property
    def dataset_name(self) -> str:
        if self.name:
            return self.name
        if self.input is not None:
            return Path(self.input).stem
        g = self.generator
        return f"blobs_n{g.get('n_per_cluster')}_k{g.get('n_clusters')}_d{g.get('dim')}_s{g.get('seed')}"


@dataclass(frozen=True)
class ResultRecord:
    dataset: str
    algo: str
    n: int
    dim: int
    n_clusters: int
    n_outliers: int
    pair_counts: PairCounts | None
    scores: ValidationScores | None
    runtime_ms: float = field(compare=False)
    labels: tuple = field(default=(), repr=False)

    def metrics(self) -> dict:
        pc, sc = self.pair_counts, self.scores
        values = {
            "n": self.n,
            "dim": self.dim,
            "algo": self.algo,
            "n_clusters": self.n_clusters,
            "n_outliers": self.n_outliers,
            "a": pc and pc.a,
            "b": pc and pc.b,
            "c": pc and pc.c,
            "d": pc and pc.d,
            "ri": sc and sc.ri,
            "ji": sc and sc.ji,
            "qji": sc and sc.qji,
            "runtime_ms": self.runtime_ms,
        }
        return {k: values[k] for k in METRIC_KEYS}


def load(spec: RunSpec) -> Dataset:
    """Ingest and (optionally) normalise the data of a spec."""
    if spec.input is not None:
        ds = load_csv(spec.input, spec.label_column, spec.has_header, name=spec.dataset_name)
    else:
        ds = gen_blobs(**spec.generator)
        ds.name = spec.dataset_name
    return normalize_minmax(ds) if spec.normalize == "minmax" else ds


def cluster(X, algo: str, p=0.05, knn_fraction=0.05, eps=AUTO) -> Clustering:
    """Dispatch one algorithm id on a point array."""
    X = np.asarray(X, dtype=float)
    if algo == "ncard":
        return run_ncard(X, p=p)
    if algo == "ncar":
        return run_ncar(X, p=p)
    if algo in ("knn", "knn1", "knn2"):
        return knn_clustering(pairwise_distances(X), _KNN_FRACTIONS.get(algo, knn_fraction))
    if algo == "eps":
        dm = pairwise_distances(X)
        radius = auto_epsilon(dm) if eps == AUTO else float(eps)
        return eps_clustering(dm, radius)
    raise ConfigError(f"unknown algorithm {algo!r}")


def run(spec: RunSpec) -> ResultRecord:
    """ingest, normalise, cluster, score against the truth when present."""
    ds = load(spec)
    try:
        start = time.perf_counter()
        result = cluster(ds.points, spec.algo, spec.p, spec.knn_fraction, spec.eps)
        elapsed = (time.perf_counter() - start) * 1000.0
    except NCARDError as exc:
        raise type(exc)(f"{spec.algo} on {ds.name}: {exc}") from exc
    pc = sc = None
    if ds.labels is not None and ds.n >= 2:
        pc, sc = evaluate(result.labels, ds.labels)
    return ResultRecord(
        dataset=ds.name,
        algo=spec.algo,
        n=ds.n,
        dim=ds.dim,
        n_clusters=result.n_clusters,
        n_outliers=len(result.outliers),
        pair_counts=pc,
        scores=sc,
        runtime_ms=elapsed,
        labels=tuple(int(v) for v in result.labels),
    )


_SCORE_KEYS = ("ri", "ji", "qji", "runtime_ms")
_AGGREGATES = (("mean", np.mean), ("std", np.std), ("min", np.min), ("max", np.max))

BENCH_COLUMNS = (
    ("row", "dataset", "algo", "status", "n", "dim", "n_clusters", "n_outliers")
    + ("a", "b", "c", "d", "ri", "ji", "qji", "runtime_ms")
    + tuple(f"{k}_{stat}" for k in _SCORE_KEYS for stat, _ in _AGGREGATES)
    + ("n_scored", "error")
)


def _cell(spec: RunSpec) -> dict:
    try:
        rec = run(spec)
    except (NCARDError, OSError, ValueError) as exc:
        logger.warning("cell %s/%s failed: %s", spec.dataset_name, spec.algo, exc)
        return {"row": "cell", "dataset": spec.dataset_name, "algo": spec.algo, "status": "failed", "error": str(exc)}
    row = {"row": "cell", "dataset": rec.dataset, "status": "ok", "error": None}
    row.update(rec.metrics())
    return row


def bench(suite, n_jobs: int = 1) -> list[dict]:
    """Run every cell of a suite, then append one aggregate row per algorithm.

    A failing cell is recorded with ``status == "failed"`` and does not stop
    the suite.  The aggregate row holds mean, std, min and max of ``ri``,
    ``ji``, ``qji`` and ``runtime_ms`` over the algorithm's scored cells
    (columns ``ri_mean``, ``ri_std``, ...).
    """
    suite = list(suite)
    if not suite:
        raise ConfigError("benchmark suite is empty")
    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            cells = list(pool.map(_cell, suite))
    else:
        cells = [_cell(s) for s in suite]
    rows = list(cells)
    for algo in dict.fromkeys(s.algo for s in suite):
        scored = [c for c in cells if c["algo"] == algo and c["status"] == "ok" and c.get("ri") is not None]
        agg = {"row": "aggregate", "dataset": "*", "algo": algo, "n_scored": len(scored)}
        agg["status"] = "ok" if scored else "empty"
        if scored:
            for key in _SCORE_KEYS:
                values = [c[key] for c in scored]
                for stat, fn in _AGGREGATES:
                    agg[f"{key}_{stat}"] = float(fn(values))
        rows.append(agg)
    return rows


def load_suite(path, algos=None) -> list[RunSpec]:
    """Build the cell list of a JSON suite file.

    The file holds ``{"datasets": [...], "algorithms": [...], "params": {...}}``.
    Each dataset entry carries either ``input`` (a path, relative paths are
    resolved against the suite file) or ``generator`` (``gen_blobs``
    arguments), plus optional ``name``, ``has_header``, ``label_column`` and
    ``normalize``.  ``algos`` overrides the file's algorithm list.
    """
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid suite JSON: {exc}") from exc
    if isinstance(doc, list):
        doc = {"datasets": doc}
    datasets = doc.get("datasets") or []
    algos = list(algos or doc.get("algorithms") or [])
    if not datasets or not algos:
        raise ConfigError(f"{path}: suite needs at least one dataset and one algorithm")
    params = doc.get("params", {})
    specs = []
    for entry in datasets:
        entry = dict(entry)
        if entry.get("input") is not None:
            p = Path(entry["input"])
            entry["input"] = str(p if p.is_absolute() else path.parent / p)
        for algo in algos:
            specs.append(RunSpec(algo=algo, **params, **entry))
    return specs


def record_dict(rec: ResultRecord) -> dict:
    """Plain-dict view of a record (without labels)."""
    d = asdict(rec)
    d.pop("labels")
    return d
