"""Apollonius circles and decision-region membership in any dimension.

A decision region is built from two foci ``a`` and ``b`` and a scanned point
``m``.  With ``k = d(a, m) / d(m, b)`` it is the intersection of

* the interior of the Apollonius circle through ``m`` (the side enclosing
  ``b`` when ``k > 1``, the side enclosing ``a`` when ``k < 1``),
* the open ball centred on ``b`` (``k > 1``) or ``a`` (``k < 1``) passing
  through ``m``,
* the open half-space on ``m``'s side of the line through ``a`` and ``b``.

When ``k`` is within ``TAU`` of 1, or ``m`` sits on a focus, the circle is
undefined and the region falls back to ``ball(b, d(b, m))`` intersected with
the half-space.  All tests are strict, so ``m`` never lies in its own region.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .exceptions import CoincidentPoint, Degenerate, DimensionMismatch

TAU = 1e-9

__all__ = [
    "TAU",
    "ApolloniusCircle",
    "Branch",
    "DecisionRegion",
    "as_point",
    "distance",
    "apollonius_circle",
    "same_side",
    "decision_region",
    "region_contains",
    "region_membership",
    "RegionScan",
]


def as_point(x) -> np.ndarray:
    p = np.asarray(x, dtype=float)
    if p.ndim != 1:
        raise DimensionMismatch(f"a point must be a 1-d coordinate vector, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("point coordinates must be finite")
    return p


def _pair(a, b):
    a, b = as_point(a), as_point(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return a, b


def distance(a, b) -> float:
    """Euclidean distance between two points of equal dimension."""
    a, b = _pair(a, b)
    return float(np.linalg.norm(a - b))


@dataclass(frozen=True)
class ApolloniusCircle:
    """Locus of points ``x`` with ``d(focus_a, x) / d(x, focus_b) == ratio``.

    In more than two dimensions this is a hypersphere; it is a circle on every
    2-plane containing both foci.
    """

    focus_a: np.ndarray
    focus_b: np.ndarray
    ratio: float
    center: np.ndarray
    radius: float

    def ratio_at(self, x) -> float:
        """Distance ratio of ``x`` with respect to the two foci (inf at ``focus_b``)."""
        x = as_point(x)
        db = float(np.linalg.norm(x - self.focus_b))
        da = float(np.linalg.norm(x - self.focus_a))
        return np.inf if db == 0.0 else da / db

    def sample_boundary(self, n: int = 64, probe=None) -> np.ndarray:
        """``n`` evenly spaced points on the circle cut by a 2-plane through both foci.

        The plane is spanned by the focal axis and ``probe`` (any point off that
        axis); a deterministic perpendicular is used when ``probe`` is omitted.
        """
        axis = self.focus_b - self.focus_a
        u = axis / np.linalg.norm(axis)
        if probe is None:
            e = np.zeros_like(u)
            e[int(np.argmin(np.abs(u)))] = 1.0
            w = e - (e @ u) * u
        else:
            rel = as_point(probe) - self.focus_a
            w = rel - (rel @ u) * u
        if u.shape[0] == 1:
            # 1-d: the "circle" is the pair of points at center +/- radius
            return np.array([self.center - self.radius, self.center + self.radius])
        v = w / np.linalg.norm(w)
        theta = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
        return (
            self.center[None, :]
            + self.radius * np.cos(theta)[:, None] * u[None, :]
            + self.radius * np.sin(theta)[:, None] * v[None, :]
        )


def apollonius_circle(a, b, m) -> ApolloniusCircle:
    """Apollonius circle of foci ``a``, ``b`` passing through ``m``.

    Raises
    ------
    CoincidentPoint
        ``m`` coincides with a focus, or the foci coincide.
    Degenerate
        ``d(a, m) == d(m, b)`` within ``TAU``; the locus is the bisecting hyperplane.
    """
    a, b = _pair(a, b)
    _, m = _pair(a, m)
    dab = float(np.linalg.norm(a - b))
    dam = float(np.linalg.norm(a - m))
    dmb = float(np.linalg.norm(m - b))
    if dab <= TAU:
        raise CoincidentPoint("foci coincide")
    if dam <= TAU or dmb <= TAU:
        raise CoincidentPoint("scanned point coincides with a focus")
    k = dam / dmb
    if abs(k - 1.0) <= TAU:
        raise Degenerate(f"ratio {k!r} is 1 within tolerance; locus is a hyperplane")
    k2 = k * k
    center = (k2 * b - a) / (k2 - 1.0)
    radius = k * dab / abs(k2 - 1.0)
    return ApolloniusCircle(focus_a=a, focus_b=b, ratio=k, center=center, radius=radius)


def same_side(a, b, anchor, q) -> bool:
    """True iff ``q`` lies strictly on ``anchor``'s side of the line through ``a`` and ``b``.

    Sides are compared through the components perpendicular to the line, which
    reduces to the usual half-plane test in 2-d.  If ``anchor`` is on the line
    the condition is vacuous and the result is True.
    """
    a, b = _pair(a, b)
    _, anchor = _pair(a, anchor)
    _, q = _pair(a, q)
    axis = b - a
    n = np.linalg.norm(axis)
    if n <= TAU:
        raise CoincidentPoint("line through coincident points is undefined")
    u = axis / n
    ra, rq = anchor - a, q - a
    wa = ra - (ra @ u) * u
    if np.linalg.norm(wa) <= TAU:
        return True
    wq = rq - (rq @ u) * u
    return bool(wq @ wa > 0.0)


class Branch(enum.Enum):
    RATIO_ABOVE_ONE = "RatioAboveOne"
    RATIO_BELOW_ONE = "RatioBelowOne"
    FALLBACK = "Fallback"


@dataclass(frozen=True)
class DecisionRegion:
    focus_a: np.ndarray
    focus_b: np.ndarray
    anchor: np.ndarray
    ratio: float
    branch: Branch
    ball_center: np.ndarray
    ball_radius: float
    circle: ApolloniusCircle | None = None


def decision_region(a, b, m) -> DecisionRegion:
    """Build the decision region of foci ``a``, ``b`` for scanned point ``m``.

    Never raises on degeneracy: a ratio of 1 or ``m`` on a focus yields the
    fallback branch (ball around ``b`` through ``m``, no circle test).
    """
    a, b = _pair(a, b)
    _, m = _pair(a, m)
    if np.linalg.norm(a - b) <= TAU:
        raise CoincidentPoint("foci coincide")
    dam = float(np.linalg.norm(a - m))
    dmb = float(np.linalg.norm(m - b))
    if dam <= TAU or dmb <= TAU:
        k = 0.0 if dam <= TAU else np.inf
        return DecisionRegion(a, b, m, k, Branch.FALLBACK, b, dmb)
    k = dam / dmb
    if k > 1.0 + TAU:
        return DecisionRegion(a, b, m, k, Branch.RATIO_ABOVE_ONE, b, dmb, apollonius_circle(a, b, m))
    if k < 1.0 - TAU:
        return DecisionRegion(a, b, m, k, Branch.RATIO_BELOW_ONE, a, dam, apollonius_circle(a, b, m))
    return DecisionRegion(a, b, m, k, Branch.FALLBACK, b, dmb)


def region_contains(r: DecisionRegion, q) -> bool:
    """Strict membership of ``q`` in a decision region."""
    _, q = _pair(r.focus_a, q)
    for p in (r.focus_a, r.focus_b, r.anchor):
        if np.linalg.norm(q - p) <= TAU:
            return False
    da = float(np.linalg.norm(q - r.focus_a))
    db = float(np.linalg.norm(q - r.focus_b))
    if r.branch is Branch.RATIO_ABOVE_ONE:
        if not da / db > r.ratio:
            return False
    elif r.branch is Branch.RATIO_BELOW_ONE:
        if not da / db < r.ratio:
            return False
    if not float(np.linalg.norm(q - r.ball_center)) < r.ball_radius:
        return False
    return same_side(r.focus_a, r.focus_b, r.anchor, q)


class _Terms:
    """Per-point quantities reused by every region test with foci ``a``, ``b``."""

    def __init__(self, a, u, b, P):
        self.P = P
        self.da = np.linalg.norm(P - a, axis=1)
        self.db = np.linalg.norm(P - b, axis=1)
        rel = P - a
        self.w = rel - (rel @ u)[:, None] * u[None, :]


def _membership(m: _Terms, q: _Terms, same: np.ndarray) -> np.ndarray:
    on_focus = (m.da <= TAU) | (m.db <= TAU)
    with np.errstate(divide="ignore", invalid="ignore"):
        k = np.where(on_focus, 1.0, m.da / np.where(m.db == 0.0, 1.0, m.db))
        q_ratio = np.where(q.db == 0.0, np.inf, q.da / np.where(q.db == 0.0, 1.0, q.db))
    above = ~on_focus & (k > 1.0 + TAU)
    below = ~on_focus & (k < 1.0 - TAU)

    circle = np.ones((m.P.shape[0], q.P.shape[0]), dtype=bool)
    circle[above] = q_ratio[None, :] > k[above, None]
    circle[below] = q_ratio[None, :] < k[below, None]

    # ball around a on the below-one branch, around b otherwise
    ball = np.where(below[:, None], q.da[None, :] < m.da[:, None], q.db[None, :] < m.db[:, None])

    side = (m.w @ q.w.T) > 0.0
    side[np.linalg.norm(m.w, axis=1) <= TAU] = True

    excluded = (q.da <= TAU)[None, :] | (q.db <= TAU)[None, :] | same
    return circle & ball & side & ~excluded


def _axis(a, b):
    axis = b - a
    n = np.linalg.norm(axis)
    if n <= TAU:
        raise CoincidentPoint("foci coincide")
    return axis / n


def region_membership(a, b, members, queries) -> np.ndarray:
    """Vectorised ``region_contains`` for many scanned points at once.

    Returns a boolean matrix ``out[i, j]`` telling whether ``queries[j]`` lies
    in ``decision_region(a, b, members[i])``.
    """
    a, b = _pair(a, b)
    M = np.atleast_2d(np.asarray(members, dtype=float))
    Q = np.atleast_2d(np.asarray(queries, dtype=float))
    if M.shape[1] != a.shape[0] or Q.shape[1] != a.shape[0]:
        raise DimensionMismatch("members/queries dimension does not match the foci")
    u = _axis(a, b)
    return _membership(_Terms(a, u, b, M), _Terms(a, u, b, Q), cdist(M, Q) <= TAU)


class RegionScan:
    """Decision-region tests where the scanned points are drawn from the queries.

    Query-side quantities are computed once; ``rows(idx)`` evaluates the
    regions of ``queries[idx]`` against all queries.  Queries must be
    pairwise distinct.
    """

    def __init__(self, a, b, queries):
        a, b = _pair(a, b)
        Q = np.atleast_2d(np.asarray(queries, dtype=float))
        self._q = _Terms(a, _axis(a, b), b, Q)

    def rows(self, idx) -> np.ndarray:
        idx = np.arange(self._q.P.shape[0])[idx]
        q = self._q
        m = _Terms.__new__(_Terms)
        m.P, m.da, m.db, m.w = q.P[idx], q.da[idx], q.db[idx], q.w[idx]
        same = idx[:, None] == np.arange(q.P.shape[0])[None, :]
        return _membership(m, q, same)
