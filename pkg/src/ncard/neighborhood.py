"""The NCARD clustering pipeline and its step-1-only NCAR baseline.

Step 1 assigns every point to its nearest target.  Step 2 scans each group
outward from its target, counting for every member how many other members
fall in the member's decision region (foci: the group's farthest candidate
and the current target).  The first zero after a positive count is a control
point: the members before it are the target's neighbourhood and the control
point is scanned next as a new target.  Step 3 merges neighbourhood sets that
share a point and resolves leftovers into clusters or outliers.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from .density import (
    Dataset,
    deduplicate,
    farthest_point,
    local_density,
    neighbor_count,
    pairwise_distances,
    select_targets,
)
from .exceptions import InsufficientData
from .geometry import RegionScan

logger = logging.getLogger(__name__)

OUTLIER = -1

__all__ = [
    "OUTLIER",
    "Group",
    "DensitySequence",
    "NeighborhoodSet",
    "Clustering",
    "initial_groups",
    "density_sequence",
    "find_control_point",
    "expand_group",
    "merge_subclusters",
    "detect_outliers",
    "run_ncard",
    "run_ncar",
]


@dataclass(frozen=True)
class Group:
    target: int
    members: tuple[int, ...]
    farthest: int


@dataclass(frozen=True)
class DensitySequence:
    members: tuple[int, ...]
    densities: tuple[int, ...]

    def __iter__(self):
        return iter(zip(self.members, self.densities))

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class NeighborhoodSet:
    target: int
    direct: frozenset
    indirect: frozenset
    boundary_radius: float
    focus: int | None = None
    focus_detached: bool = False

    @property
    def points(self) -> frozenset:
        """Target plus all of its neighbours."""
        return self.direct | self.indirect | {self.target}


@dataclass
class Clustering:
    labels: np.ndarray
    targets: list[int] = field(default_factory=list)
    neighborhoods: list[NeighborhoodSet] = field(default_factory=list, repr=False)

    @property
    def n_clusters(self) -> int:
        lab = self.labels[self.labels != OUTLIER]
        return int(np.unique(lab).size)

    @property
    def outliers(self) -> list[int]:
        return np.flatnonzero(self.labels == OUTLIER).tolist()


def _first_appearance(raw: np.ndarray) -> np.ndarray:
    """Relabel so cluster ids are 0, 1, ... in order of first appearance; keep OUTLIER."""
    out = np.full(raw.shape, OUTLIER, dtype=int)
    seen: dict = {}
    for i, r in enumerate(raw.tolist()):
        if r == OUTLIER:
            continue
        if r not in seen:
            seen[r] = len(seen)
        out[i] = seen[r]
    return out


def _points(data) -> np.ndarray:
    if isinstance(data, Dataset):
        return data.points
    return np.asarray(data, dtype=float)


def initial_groups(dm: np.ndarray, targets) -> list[Group]:
    """Assign each non-target point to its nearest target (ties: lower target id)."""
    targets = [int(t) for t in targets]
    if not targets:
        raise ValueError("at least one target is required")
    n = dm.shape[0]
    by_id = sorted(targets)
    is_target = np.zeros(n, dtype=bool)
    is_target[by_id] = True
    others = np.flatnonzero(~is_target)
    owner = np.asarray(by_id)[np.argmin(dm[np.ix_(others, by_id)], axis=1)] if others.size else []
    groups = []
    for t in targets:
        members = others[np.asarray(owner) == t] if others.size else np.array([], dtype=int)
        if members.size == 0:
            logger.info("target %d has no members and is dropped", t)
            continue
        order = np.lexsort((members, dm[t, members]))
        members = members[order]
        groups.append(Group(t, tuple(int(m) for m in members), farthest_point(dm, t, members)))
    return groups


def density_sequence(X, target: int, candidates, farthest: int) -> DensitySequence:
    """Decision-region counts for each candidate, scanning outward from ``target``.

    ``candidates`` must already be ordered by distance to ``target``.  The
    density of member ``m`` is the number of other candidates inside the
    decision region with foci ``farthest`` and ``target`` scanned at ``m``.
    """
    X = _points(X)
    candidates = [int(c) for c in candidates]
    if not candidates:
        return DensitySequence((), ())
    scan = RegionScan(X[farthest], X[target], X[candidates])
    counts = scan.rows(slice(None)).sum(axis=1)
    return DensitySequence(tuple(candidates), tuple(int(c) for c in counts))


def find_control_point(seq) -> tuple[int, int] | None:
    """First member whose density falls back to 0 after a positive density.

    Accepts a DensitySequence or a plain sequence of densities (member ids are
    then the positions).  Returns ``(member_id, index)`` or None.
    """
    if isinstance(seq, DensitySequence):
        members, densities = seq.members, seq.densities
    else:
        densities = list(seq)
        members = tuple(range(len(densities)))
    rose = False
    for i, d in enumerate(densities):
        if d > 0:
            rose = True
        elif rose:
            return members[i], i
    return None


def _scan(X, target, candidates, focus, chunk):
    """Densities up to and including the control point, computed lazily.

    Rows are evaluated in blocks that start at ``chunk`` and double, since
    control points usually show up early in the scan.
    """
    scan = RegionScan(X[focus], X[target], X[candidates])
    densities: list[int] = []
    rose = False
    start = 0
    while start < len(candidates):
        rows = slice(start, min(start + chunk, len(candidates)))
        for i, d in enumerate(scan.rows(rows).sum(axis=1).tolist(), start):
            densities.append(int(d))
            if d > 0:
                rose = True
            elif rose:
                return densities, i
        start = rows.stop
        chunk *= 2
    return densities, None


def _detached(dm, t, focus, group_points) -> bool:
    """Focus is farther from every other group point than the rest of the group extends from ``t``."""
    others = [c for c in group_points if c != focus]
    rest = [c for c in others if c != t]
    if not rest:
        return False
    return bool(dm[focus, others].min() > dm[t, rest].max())


def expand_group(X, dm: np.ndarray, group: Group, chunk: int = 8) -> list[NeighborhoodSet]:
    """Iteratively scan a group from its target and from each control point found.

    Every scan ranks all group points not yet used as a target by distance to
    the current target, so a control point's neighbourhood may overlap the
    neighbourhoods found before it.
    """
    X = _points(X)
    pool = set(group.members) | {group.target}
    processed = {group.target}
    worklist = [group.target]
    sets: list[NeighborhoodSet] = []
    while worklist:
        t = worklist.pop(0)
        cand = np.asarray(sorted(pool - processed), dtype=int)
        if cand.size == 0:
            sets.append(NeighborhoodSet(t, frozenset(), frozenset(), 0.0))
            continue
        cand = cand[np.lexsort((cand, dm[t, cand]))].tolist()
        focus = farthest_point(dm, t, cand)
        densities, cp = _scan(X, t, cand, focus, chunk)
        stop = len(cand) if cp is None else cp
        direct = frozenset(c for c, d in zip(cand[:stop], densities) if d == 0)
        indirect = frozenset(c for c, d in zip(cand[:stop], densities) if d > 0)
        radius = float(dm[t, cand[stop - 1]]) if stop else 0.0
        sets.append(NeighborhoodSet(t, direct, indirect, radius, focus, _detached(dm, t, focus, sorted(pool))))
        if cp is not None and cand[cp] not in processed:
            processed.add(cand[cp])
            worklist.append(cand[cp])
    return sets


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            # smaller id becomes the root, keeps results order independent
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx


def merge_subclusters(sets, n: int) -> Clustering:
    """Merge neighbourhood sets sharing at least one point (target included).

    Points covered by no set get the OUTLIER label; ``detect_outliers`` decides
    their fate.
    """
    uf = _UnionFind()
    covered = set()
    for s in sets:
        pts = sorted(s.points)
        covered.update(pts)
        for p in pts[1:]:
            uf.union(pts[0], p)
    raw = np.full(n, OUTLIER, dtype=int)
    for p in covered:
        raw[p] = uf.find(p)
    return Clustering(_first_appearance(raw), neighborhoods=list(sets))


def _within_cluster_nn(dm, labels, clustered) -> np.ndarray:
    out = []
    for c in np.unique(labels[clustered]):
        idx = clustered[labels[clustered] == c]
        if idx.size < 2:
            continue
        sub = dm[np.ix_(idx, idx)].copy()
        np.fill_diagonal(sub, np.inf)
        out.append(sub.min(axis=1))
    return np.concatenate(out) if out else np.array([])


def detect_outliers(
    dm: np.ndarray,
    clustering: Clustering,
    sets=None,
    extra_candidates=(),
    n_sigma: float = 2.0,
) -> Clustering:
    """Turn a merged clustering into a total labelling with outliers.

    Candidates are points in no neighbourhood set, members of singleton
    clusters, and ``extra_candidates`` (the scan foci).  A candidate is an
    outlier when its distance to the nearest clustered point exceeds
    ``mean + n_sigma * std`` of the within-cluster nearest-neighbour distances
    of the clustered points; other candidates join the cluster of their
    nearest clustered point.
    """
    labels = clustering.labels.copy()
    n = labels.size
    candidate = labels == OUTLIER
    ids, counts = np.unique(labels[labels != OUTLIER], return_counts=True)
    for c in ids[counts == 1]:
        candidate |= labels == c
    for c in extra_candidates:
        candidate[int(c)] = True

    clustered = np.flatnonzero(~candidate)
    if clustered.size == 0:
        warnings.warn("every point is an outlier candidate; returning a single cluster", RuntimeWarning)
        return Clustering(np.zeros(n, dtype=int), clustering.targets, list(sets or clustering.neighborhoods))

    nn = _within_cluster_nn(dm, labels, clustered)
    threshold = nn.mean() + n_sigma * nn.std() if nn.size else np.inf
    final = labels.copy()
    for c in np.flatnonzero(candidate):
        row = dm[c, clustered]
        j = int(np.argmin(row))
        final[c] = OUTLIER if row[j] > threshold else labels[clustered[j]]
    return Clustering(_first_appearance(final), clustering.targets, list(sets or clustering.neighborhoods))


def _expand_labels(result: Clustering, inverse: np.ndarray, reps: np.ndarray) -> Clustering:
    labels = _first_appearance(result.labels[inverse])
    remap = lambda i: int(reps[i])  # noqa: E731
    sets = [
        NeighborhoodSet(
            remap(s.target),
            frozenset(map(remap, s.direct)),
            frozenset(map(remap, s.indirect)),
            s.boundary_radius,
            None if s.focus is None else remap(s.focus),
            s.focus_detached,
        )
        for s in result.neighborhoods
    ]
    return Clustering(labels, [remap(t) for t in result.targets], sets)


def _prepare(data):
    X = _points(data)
    if X.ndim != 2 or X.shape[0] < 2:
        raise InsufficientData("clustering needs at least two points")
    unique, inverse = deduplicate(X)
    reps = np.full(unique.shape[0], inverse.size, dtype=int)
    np.minimum.at(reps, inverse, np.arange(inverse.size))
    return unique, inverse, reps


def _targets(U, dm, p, valley_ratio):
    k = neighbor_count(p, U.shape[0])
    density = local_density(dm, p)
    return select_targets(density, dm, k, points=U, valley_ratio=valley_ratio)


def run_ncard(data, p: float = 0.05, valley_ratio: float | None = 0.5, n_sigma: float = 2.0) -> Clustering:
    """Cluster ``data`` (array or Dataset) with the full three-step pipeline."""
    U, inverse, reps = _prepare(data)
    if U.shape[0] < 2:
        neighbor_count(p, 2)
        return Clustering(np.zeros(inverse.size, dtype=int), [0])
    dm = pairwise_distances(U)
    targets = _targets(U, dm, p, valley_ratio)
    groups = initial_groups(dm, targets)
    sets: list[NeighborhoodSet] = []
    for g in groups:
        sets.extend(expand_group(U, dm, g))
    merged = merge_subclusters(sets, U.shape[0])
    merged.targets = list(targets)
    # a focus is a candidate only if it is detached in every scan it anchors
    foci = sorted(
        f
        for f in {s.focus for s in sets if s.focus is not None}
        if all(s.focus_detached for s in sets if s.focus == f)
    )
    final = detect_outliers(dm, merged, sets, extra_candidates=foci, n_sigma=n_sigma)
    return _expand_labels(final, inverse, reps)


def run_ncar(data, p: float = 0.05, valley_ratio: float | None = 0.5) -> Clustering:
    """Step 1 only: each target with its nearest points forms a cluster."""
    U, inverse, reps = _prepare(data)
    if U.shape[0] < 2:
        neighbor_count(p, 2)
        return Clustering(np.zeros(inverse.size, dtype=int), [0])
    dm = pairwise_distances(U)
    targets = _targets(U, dm, p, valley_ratio)
    raw = np.full(U.shape[0], OUTLIER, dtype=int)
    for g in initial_groups(dm, targets):
        raw[g.target] = g.target
        raw[list(g.members)] = g.target
    # a target left without members still forms its own cluster
    for t in targets:
        if raw[t] == OUTLIER:
            raw[t] = t
    result = Clustering(_first_appearance(raw), list(targets))
    return _expand_labels(result, inverse, reps)
