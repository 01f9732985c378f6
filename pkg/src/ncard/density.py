"""Distance matrix, kNN density, target (density peak) selection."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from .exceptions import ConfigError, DimensionMismatch, EmptyPool

__all__ = [
    "Dataset",
    "deduplicate",
    "pairwise_distances",
    "neighbor_count",
    "knn_order",
    "local_density",
    "select_targets",
    "farthest_point",
]


@dataclass
class Dataset:
    """A point set with optional ground-truth labels.

    Point ids are the row indices ``0..n-1``.
    """

    points: np.ndarray
    labels: np.ndarray | None = None
    name: str = "dataset"
    feature_names: list[str] | None = field(default=None, repr=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[1] < 1:
            raise DimensionMismatch(f"points must be an (n, d) array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        self.points = pts
        if self.labels is not None:
            lab = np.asarray(self.labels)
            if lab.shape != (pts.shape[0],):
                raise DimensionMismatch("labels must have one entry per point")
            self.labels = lab

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def deduplicate(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Collapse exact duplicate rows.

    Returns ``(unique_points, inverse)`` where unique rows keep the order of
    their first occurrence and ``unique_points[inverse]`` rebuilds the input.
    """
    points = np.asarray(points, dtype=float)
    _, first, inverse = np.unique(points, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.ravel()
    # renumber representatives by first occurrence
    order = np.argsort(first, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    return points[np.sort(first)], rank[inverse]


def pairwise_distances(points) -> np.ndarray:
    """Full symmetric Euclidean distance matrix with an exact zero diagonal."""
    if isinstance(points, Dataset):
        points = points.points
    X = np.asarray(points, dtype=float)
    dm = cdist(X, X)
    dm = 0.5 * (dm + dm.T)
    np.fill_diagonal(dm, 0.0)
    return dm


def neighbor_count(p: float, n: int) -> int:
    """kappa = max(1, ceil(p * n)), capped at n - 1."""
    if not 0.0 < p <= 1.0:
        raise ConfigError(f"p must lie in (0, 1], got {p!r}")
    return max(1, min(n - 1, math.ceil(p * n - 1e-12)))


def knn_order(dm: np.ndarray, k: int) -> np.ndarray:
    """Indices of each row's ``k`` nearest other points (ties by lower id)."""
    n = dm.shape[0]
    k = min(k, n - 1)
    masked = dm.copy()
    np.fill_diagonal(masked, np.inf)
    # keep every entry tied with the k-th distance so the stable sort sees all ties
    kth = np.partition(masked, k - 1, axis=1)[:, k - 1 : k]
    out = np.empty((n, k), dtype=int)
    for i in range(n):
        cand = np.flatnonzero(masked[i] <= kth[i])
        out[i] = cand[np.argsort(masked[i, cand], kind="stable")][:k]
    return out


def local_density(dm: np.ndarray, p: float = 0.05) -> np.ndarray:
    """Inverse mean distance to the kappa nearest neighbours, kappa = ceil(p * n)."""
    n = dm.shape[0]
    if n < 2:
        raise ConfigError("density needs at least two points")
    k = neighbor_count(p, n)
    masked = dm.copy()
    np.fill_diagonal(masked, np.inf)
    nearest = np.partition(masked, k - 1, axis=1)[:, :k]
    return k / nearest.sum(axis=1)


def _density_at(locations: np.ndarray, points: np.ndarray, k: int) -> np.ndarray:
    d = cdist(locations, points)
    d = np.partition(d, k - 1, axis=1)[:, :k] if k < d.shape[1] else d
    return k / np.maximum(d.sum(axis=1), np.finfo(float).tiny)


def select_targets(
    density: np.ndarray,
    dm: np.ndarray,
    k: int,
    points: np.ndarray | None = None,
    valley_ratio: float | None = 0.5,
    valley_k: int = 6,
    valley_samples: int = 16,
) -> list[int]:
    """Pick high-density target points.

    A point is a candidate when its density is at least that of each of its
    ``k`` nearest neighbours.  Mutually neighbouring co-peaks keep only the
    lowest id.

    When ``points`` is given and ``valley_ratio`` is not None, candidates are
    visited in descending density and one is kept only if the straight path
    to every already kept target dips below ``valley_ratio`` times the smaller
    endpoint density.  Path densities use ``max(k, valley_k)`` neighbours, so
    tiny ``k`` does not turn sampling noise into valleys.  A candidate without
    a valley is a side bump of an existing peak.

    Returns ids sorted by descending density, ties by ascending id.
    """
    if k < 1:
        raise ConfigError("k must be a positive integer")
    density = np.asarray(density, dtype=float)
    n = density.shape[0]
    nn = knn_order(dm, k)
    peak = np.array([np.all(density[i] >= density[nn[i]]) for i in range(n)])
    peaks = np.flatnonzero(peak)
    neighbours = [set(row.tolist()) for row in nn]
    candidates = []
    for i in peaks:
        # co-peak: an equal-density peak with lower id, adjacent in either direction
        tied = any(
            j < i and density[j] == density[i] and (j in neighbours[i] or i in neighbours[j])
            for j in peaks
        )
        if not tied:
            candidates.append(int(i))
    candidates.sort(key=lambda i: (-density[i], i))
    if points is None or valley_ratio is None or len(candidates) < 2:
        return candidates

    X = np.asarray(points, dtype=float)
    kv = min(max(k, valley_k), n - 1)
    masked = dm.copy()
    np.fill_diagonal(masked, np.inf)
    endpoint = kv / np.partition(masked, kv - 1, axis=1)[:, :kv].sum(axis=1)
    t = np.linspace(0.0, 1.0, valley_samples + 2)[1:-1]

    def valley(i, j):
        path = X[i] + t[:, None] * (X[j] - X[i])
        return _density_at(path, X, kv).min() < valley_ratio * min(endpoint[i], endpoint[j])

    kept: list[int] = []
    for c in candidates:
        if all(valley(c, other) for other in kept):
            kept.append(c)
    return kept


def farthest_point(dm: np.ndarray, t: int, pool) -> int:
    """Member of ``pool`` farthest from ``t``; ties go to the lowest id."""
    pool = sorted(int(i) for i in pool)
    if not pool:
        raise EmptyPool("farthest_point needs a non-empty pool")
    row = dm[t, pool]
    return pool[int(np.argmax(row))]
