"""scikit-learn style estimators around the functional clustering API."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .baselines import AUTO, auto_epsilon, eps_clustering, knn_clustering
from .density import pairwise_distances
from .neighborhood import OUTLIER, run_ncar, run_ncard

__all__ = ["NCARD", "NCAR", "KNNGraphClustering", "EpsilonNeighborhoodClustering"]


class _Base(ClusterMixin, BaseEstimator):
    def _run(self, X):
        raise NotImplementedError

    def fit(self, X, y=None):
        """Cluster ``X`` and store the result.

        Parameters
        ----------
        X : array-like of shape (n_samples, n_features)
        y : ignored

        Returns
        -------
        self
        """
        X = check_array(X, dtype=float, ensure_min_samples=2)
        result = self._run(X)
        self.labels_ = result.labels
        self.n_clusters_ = result.n_clusters
        self.outliers_ = np.flatnonzero(result.labels == OUTLIER)
        self.n_features_in_ = X.shape[1]
        self._store(result)
        return self

    def _store(self, result):
        pass

    def predict(self, X=None):
        """Labels of the fitted data (these methods do not extend to unseen points)."""
        check_is_fitted(self, "labels_")
        return self.labels_


class NCARD(_Base):
    """Neighbourhood construction by Apollonius regions and density.

    Parameters
    ----------
    p : float, default=0.05
        Fraction of points used as the neighbour count of the kNN density.
    valley_ratio : float or None, default=0.5
        A density peak becomes a target only if the straight path to every
        stronger target dips below this fraction of the weaker endpoint's
        density.  ``None`` keeps every peak.
    n_sigma : float, default=2.0
        Outlier threshold in standard deviations above the mean
        within-cluster nearest-neighbour distance.

    Attributes
    ----------
    labels_ : ndarray of shape (n_samples,)
        Cluster ids ``0..k-1`` in order of first appearance; ``-1`` marks outliers.
    targets_ : list of int
    neighborhoods_ : list of NeighborhoodSet
    outliers_ : ndarray of int
    """

    def __init__(self, p=0.05, valley_ratio=0.5, n_sigma=2.0):
        self.p = p
        self.valley_ratio = valley_ratio
        self.n_sigma = n_sigma

    def _run(self, X):
        return run_ncard(X, p=self.p, valley_ratio=self.valley_ratio, n_sigma=self.n_sigma)

    def _store(self, result):
        self.targets_ = list(result.targets)
        self.neighborhoods_ = list(result.neighborhoods)


class NCAR(_Base):
    """Targets plus nearest-target assignment, without neighbourhood expansion."""

    def __init__(self, p=0.05, valley_ratio=0.5):
        self.p = p
        self.valley_ratio = valley_ratio

    def _run(self, X):
        return run_ncar(X, p=self.p, valley_ratio=self.valley_ratio)

    def _store(self, result):
        self.targets_ = list(result.targets)


class KNNGraphClustering(_Base):
    """Connected components of the OR-symmetrised kNN graph, ``k = ceil(fraction * n)``."""

    def __init__(self, fraction=0.05):
        self.fraction = fraction

    def _run(self, X):
        return knn_clustering(pairwise_distances(X), self.fraction)


class EpsilonNeighborhoodClustering(_Base):
    """Connected components of the ``eps``-neighbourhood graph; singletons are outliers.

    ``eps="auto"`` picks the knee of the sorted ``k_dist``-distance curve; the
    value used is stored in ``eps_``.
    """

    def __init__(self, eps=AUTO, k_dist=4):
        self.eps = eps
        self.k_dist = k_dist

    def _run(self, X):
        dm = pairwise_distances(X)
        self.eps_ = auto_epsilon(dm, self.k_dist) if self.eps == AUTO else float(self.eps)
        return eps_clustering(dm, self.eps_)
