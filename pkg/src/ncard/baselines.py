"""kNN-graph and epsilon-neighbourhood comparison clusterings."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .density import knn_order
from .exceptions import ConfigError
from .geometry import TAU
from .neighborhood import OUTLIER, Clustering, _first_appearance

__all__ = ["BaselineConfig", "knn_clustering", "auto_epsilon", "eps_clustering"]

AUTO = "auto"


@dataclass(frozen=True)
class BaselineConfig:
    """Parameters of the baseline comparators.

    ``knn_fraction`` is 0.05 for kNN1 and 0.10 for kNN2.  ``eps`` is a positive
    radius or ``"auto"`` for the k-distance knee.
    """

    knn_fraction: float = 0.05
    eps: float | str = AUTO
    k_dist: int = 4

    def __post_init__(self):
        _check_fraction(self.knn_fraction)
        if isinstance(self.eps, str):
            if self.eps != AUTO:
                raise ConfigError(f"eps must be a positive number or 'auto', got {self.eps!r}")
        elif not (math.isfinite(self.eps) and self.eps > 0):
            raise ConfigError(f"eps must be positive, got {self.eps!r}")
        if int(self.k_dist) != self.k_dist or self.k_dist < 1:
            raise ConfigError(f"k_dist must be a positive integer, got {self.k_dist!r}")


def _check_fraction(fraction):
    if not (isinstance(fraction, (int, float)) and 0.0 < fraction <= 1.0):
        raise ConfigError(f"fraction must lie in (0, 1], got {fraction!r}")


def _components(n: int, rows, cols) -> np.ndarray:
    graph = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    _, comp = connected_components(graph, directed=False)
    return comp


def knn_clustering(dm: np.ndarray, fraction: float = 0.05) -> Clustering:
    """Connected components of the symmetrised kNN graph.

    ``k = max(1, ceil(fraction * n))``; an edge joins ``i`` and ``j`` when
    either is among the other's ``k`` nearest neighbours.  No outliers.
    """
    _check_fraction(fraction)
    n = dm.shape[0]
    if n < 2:
        raise ConfigError("knn_clustering needs at least two points")
    k = max(1, min(n - 1, math.ceil(fraction * n - 1e-12)))
    nn = knn_order(dm, k)
    rows = np.repeat(np.arange(n), k)
    comp = _components(n, rows, nn.ravel())
    return Clustering(_first_appearance(comp))


def k_distance_curve(dm: np.ndarray, k_dist: int = 4) -> np.ndarray:
    """Ascending distances of every point to its ``k_dist``-th nearest neighbour."""
    n = dm.shape[0]
    if n <= k_dist:
        raise ConfigError(f"k-distance curve needs more than {k_dist} points, got {n}")
    masked = dm.copy()
    np.fill_diagonal(masked, np.inf)
    return np.sort(np.partition(masked, k_dist - 1, axis=1)[:, k_dist - 1])


def auto_epsilon(dm: np.ndarray, k_dist: int = 4) -> float:
    """Knee of the sorted k-distance curve (maximum discrete second difference).

    A flat curve (second differences all at most ``TAU``) yields its median.
    """
    curve = k_distance_curve(dm, k_dist)
    if curve.size < 3:
        return float(np.median(curve))
    second = curve[2:] - 2.0 * curve[1:-1] + curve[:-2]
    i = int(np.argmax(second))
    if second[i] <= TAU:
        return float(np.median(curve))
    return float(curve[i + 1])


def eps_clustering(dm: np.ndarray, eps: float) -> Clustering:
    """Connected components of the graph with edges ``dm[i, j] <= eps``.

    Points in singleton components are outliers.
    """
    if not (math.isfinite(eps) and eps > 0):
        raise ConfigError(f"eps must be positive, got {eps!r}")
    n = dm.shape[0]
    rows, cols = np.nonzero(np.triu(dm <= eps, k=1))
    comp = _components(n, rows, cols)
    sizes = np.bincount(comp, minlength=comp.max(initial=0) + 1)
    raw = np.where(sizes[comp] > 1, comp, OUTLIER)
    return Clustering(_first_appearance(raw))
