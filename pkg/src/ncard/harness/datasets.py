"""Normalisation and seeded synthetic data."""

from __future__ import annotations

import numpy as np

from ..density import Dataset
from ..exceptions import ConfigError, GenerationError

__all__ = ["normalize_minmax", "gen_blobs"]


def normalize_minmax(ds: Dataset) -> Dataset:
    """Map every feature to [0, 1] by ``(x - min) / (max - min)``.

    Constant features become 0.
    """
    X = ds.points
    lo, hi = X.min(axis=0), X.max(axis=0)
    span = hi - lo
    safe = np.where(span > 0, span, 1.0)
    Z = np.where(span > 0, (X - lo) / safe, 0.0)
    return Dataset(Z, ds.labels, name=ds.name, feature_names=ds.feature_names)


def gen_blobs(
    n_per_cluster: int,
    n_clusters: int,
    dim: int,
    separation: float,
    spread: float,
    seed: int,
    max_attempts: int = 1000,
    max_restarts: int = 20,
    return_centers: bool = False,
):
    """Isotropic Gaussian blobs with well separated centres.

    Centres are drawn uniformly from a cube of side
    ``separation * spread * n_clusters`` and rejected until they are pairwise
    at least ``separation * spread`` apart.  Each blob has standard deviation
    ``spread``.  Points are stored cluster by cluster and labelled
    ``0 .. n_clusters - 1``.  With ``return_centers`` the centre array is
    returned as well, as ``(dataset, centers)``.

    Raises
    ------
    ConfigError
        A non-positive parameter.
    GenerationError
        No valid centre layout after ``max_restarts`` restarts of
        ``max_attempts`` draws each.
    """
    for label, v in (("n_per_cluster", n_per_cluster), ("n_clusters", n_clusters), ("dim", dim)):
        if int(v) != v or v < 1:
            raise ConfigError(f"{label} must be a positive integer, got {v!r}")
    if not (separation > 0 and spread > 0):
        raise ConfigError("separation and spread must be positive")
    if seed < 0:
        raise ConfigError("seed must be a non-negative integer")
    rng = np.random.default_rng(seed)
    gap = separation * spread
    side = gap * n_clusters
    centers = None
    for _ in range(max_restarts):
        chosen: list[np.ndarray] = []
        for _ in range(max_attempts):
            c = rng.uniform(0.0, side, size=dim)
            if all(np.linalg.norm(c - x) >= gap for x in chosen):
                chosen.append(c)
                if len(chosen) == n_clusters:
                    break
        if len(chosen) == n_clusters:
            centers = np.array(chosen)
            break
    if centers is None:
        raise GenerationError(
            f"could not place {n_clusters} centres {gap} apart in {dim}-d after {max_restarts} restarts"
        )
    X = np.vstack([c + spread * rng.standard_normal((n_per_cluster, dim)) for c in centers])
    y = np.repeat(np.arange(n_clusters), n_per_cluster)
    name = f"blobs_n{n_per_cluster}_k{n_clusters}_d{dim}_s{seed}"
    ds = Dataset(X, y, name=name)
    return (ds, centers) if return_centers else ds
