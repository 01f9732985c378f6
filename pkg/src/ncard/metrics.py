"""Pair-counting validation indices: Rand, Jaccard and Quasi-Jaccard."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatch

OUTLIER = -1

__all__ = ["PairCounts", "ValidationScores", "pair_counts", "scores", "evaluate"]


@dataclass(frozen=True)
class PairCounts:
    """Unordered point pairs classified by (same truth?, same prediction?).

    a: same/same, b: same truth but split, c: merged across truth, d: different/different.
    """

    a: int
    b: int
    c: int
    d: int

    @property
    def total(self) -> int:
        return self.a + self.b + self.c + self.d


@dataclass(frozen=True)
class ValidationScores:
    ri: float
    ji: float
    qji: float


def _codes(labels) -> np.ndarray:
    _, codes = np.unique(np.asarray(labels), return_inverse=True)
    return codes.ravel()


def _pairs(x) -> int:
    x = np.asarray(x, dtype=np.int64)
    return int((x * (x - 1) // 2).sum())


def pair_counts(pred, truth, outlier=OUTLIER) -> PairCounts:
    """Count agreeing and disagreeing pairs between a prediction and the truth.

    Predicted ``outlier`` labels are singleton clusters: they never share a
    cluster with another point.
    """
    pred = np.asarray(getattr(pred, "labels", pred))
    truth = np.asarray(truth)
    if pred.shape != truth.shape or pred.ndim != 1:
        raise DimensionMismatch(f"label vectors differ in shape: {pred.shape} vs {truth.shape}")
    n = pred.size
    if outlier is not None:
        pred = pred.copy()
        mask = pred == outlier
        if mask.any():
            fresh = (pred.max(initial=0) if pred.size else 0) + 1 + np.arange(mask.sum())
            pred = pred.astype(np.int64)
            pred[mask] = fresh
    p, t = _codes(pred), _codes(truth)
    table = np.zeros((t.max(initial=-1) + 1, p.max(initial=-1) + 1), dtype=np.int64)
    np.add.at(table, (t, p), 1)
    a = _pairs(table)
    same_truth = _pairs(table.sum(axis=1))
    same_pred = _pairs(table.sum(axis=0))
    total = n * (n - 1) // 2
    b = same_truth - a
    c = same_pred - a
    return PairCounts(a, b, c, total - a - b - c)


def scores(pc: PairCounts) -> ValidationScores:
    """RI = (a+d)/(a+b+c+d), JI = a/(a+b+c), QJI = (a+b)/(a+b+c).

    JI and QJI are 1 when ``a + b + c == 0``.
    """
    if pc.total <= 0:
        raise DimensionMismatch("validation indices need at least two points")
    ri = (pc.a + pc.d) / pc.total
    abc = pc.a + pc.b + pc.c
    if abc == 0:
        return ValidationScores(ri, 1.0, 1.0)
    return ValidationScores(ri, pc.a / abc, (pc.a + pc.b) / abc)


def evaluate(pred, truth) -> tuple[PairCounts, ValidationScores]:
    pc = pair_counts(pred, truth)
    return pc, scores(pc)
