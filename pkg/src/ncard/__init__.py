"""Neighbourhood-construction clustering with Apollonius decision regions.

The main entry points are :class:`NCARD` (scikit-learn style) and
:func:`run_ncard` (functional).  Baselines, validation indices and a small
benchmark harness live in the submodules.
"""

from .baselines import BaselineConfig, auto_epsilon, eps_clustering, knn_clustering
from .density import Dataset, local_density, pairwise_distances, select_targets
from .estimators import NCAR, NCARD, EpsilonNeighborhoodClustering, KNNGraphClustering
from .exceptions import (
    CoincidentPoint,
    ConfigError,
    DataError,
    Degenerate,
    DimensionMismatch,
    EmptyInput,
    EmptyPool,
    GenerationError,
    InsufficientData,
    NCARDError,
    ParseError,
)
from .geometry import apollonius_circle, decision_region, region_contains
from .metrics import PairCounts, ValidationScores, pair_counts, scores
from .neighborhood import OUTLIER, Clustering, run_ncar, run_ncard

__version__ = "0.1.0"

__all__ = [
    "NCARD",
    "NCAR",
    "KNNGraphClustering",
    "EpsilonNeighborhoodClustering",
    "run_ncard",
    "run_ncar",
    "knn_clustering",
    "eps_clustering",
    "auto_epsilon",
    "BaselineConfig",
    "Dataset",
    "Clustering",
    "OUTLIER",
    "pairwise_distances",
    "local_density",
    "select_targets",
    "apollonius_circle",
    "decision_region",
    "region_contains",
    "PairCounts",
    "ValidationScores",
    "pair_counts",
    "scores",
    "NCARDError",
    "ConfigError",
    "DataError",
    "DimensionMismatch",
    "Degenerate",
    "CoincidentPoint",
    "EmptyPool",
    "EmptyInput",
    "InsufficientData",
    "ParseError",
    "GenerationError",
]
