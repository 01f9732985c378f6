"""Acceptance suite: one test (or test group) per criterion.

Run ``pytest tests/test_acceptance.py -v``; the terminal summary prints one
PASS/FAIL line per criterion.
"""

import json
import math
import statistics
import time
from pathlib import Path

import numpy as np
import pytest

from ncard.density import pairwise_distances
from ncard.geometry import apollonius_circle, decision_region, region_contains
from ncard.harness import RunSpec, gen_blobs, load_csv, run
from ncard.harness.cli import main
from ncard.harness.io import METRIC_KEYS
from ncard.metrics import pair_counts, scores
from ncard.neighborhood import (
    OUTLIER,
    density_sequence,
    find_control_point,
    initial_groups,
    run_ncard,
)

from .oracles import pair_counts_brute, region_contains_2d, scores_brute

DATA = Path(__file__).parent / "data"
IRIS = DATA / "iris.csv"


def c(number, title):
    return pytest.mark.criterion(number, title)


# --------------------------------------------------------------------------
@c(1, "perfect recovery of 3 separated blobs (RI = JI = QJI = 1, < 1 s)")
def test_perfect_recovery_anchor():
    ds = gen_blobs(20, 3, 2, separation=10, spread=1.0, seed=7)
    start = time.perf_counter()
    result = run_ncard(ds)
    elapsed = time.perf_counter() - start
    sc = scores(pair_counts(result.labels, ds.labels))
    assert result.n_clusters == 3
    assert (sc.ri, sc.ji, sc.qji) == (1.0, 1.0, 1.0)
    assert elapsed < 1.0


# --------------------------------------------------------------------------
def _random_instance(rng, i):
    a, b, m = (tuple(rng.uniform(-5, 5, 2)) for _ in range(3))
    kind = i % 10
    if kind == 0:  # scanned point on the far focus
        m = a
    elif kind == 1:  # equidistant scanned point: b is a quarter turn of a about m
        v = (a[0] - m[0], a[1] - m[1])
        b = (m[0] - v[1], m[1] + v[0])
    if kind < 5:
        q = tuple(rng.uniform(-5, 5, 2))
    elif kind == 5:
        q = (a, b, m)[rng.integers(3)]
    else:  # concentrate queries near b where regions live
        r = math.dist(m, b)
        q = tuple(np.asarray(b) + rng.uniform(-r, r, 2))
    return a, b, m, q


@c(2, "region membership equals brute-force oracle on 10^4 instances")
def test_geometry_oracle_agreement():
    rng = np.random.default_rng(20240501)
    mismatches, inside = [], 0
    for i in range(10_000):
        a, b, m, q = _random_instance(rng, i)
        got = region_contains(decision_region(a, b, m), q)
        inside += got
        if got != region_contains_2d(a, b, m, q):
            mismatches.append((a, b, m, q))
    assert not mismatches, mismatches[:3]
    # the sample must exercise both outcomes
    assert 500 < inside < 9_500


@c(2, "Apollonius boundary samples hold the ratio within 1e-9")
def test_geometry_boundary_fidelity():
    rng = np.random.default_rng(11)
    worst = 0.0
    for dim in (2, 3, 5):
        done = 0
        while done < 200:
            a, b, m = rng.uniform(-5, 5, (3, dim))
            k = np.linalg.norm(a - m) / np.linalg.norm(m - b)
            if abs(k - 1) < 1e-6:
                continue
            circle = apollonius_circle(a, b, m)
            for x in circle.sample_boundary(64, probe=m):
                worst = max(worst, abs(circle.ratio_at(x) - circle.ratio))
            done += 1
    assert worst <= 1e-9


# --------------------------------------------------------------------------
# Members flip from above the focal axis to below it after the third one.
FLIP_LAYOUT = np.array(
    [
        (0.0, 0.0),  # target
        (-1.0, 0.5),
        (-1.5, 0.8),
        (-2.0, 1.1),
        (-2.5, -1.0),  # direction flip
        (-3.0, -1.3),
        (-3.5, -1.6),
        (10.0, 0.0),  # farthest point
    ]
)


@c(3, "direction-flip density pattern 0,1,2,0,... with control point at the flip")
def test_direction_flip_structure():
    dm = pairwise_distances(FLIP_LAYOUT)
    (group,) = initial_groups(dm, [0])
    assert group.farthest == 7
    seq = density_sequence(FLIP_LAYOUT, 0, group.members, group.farthest)
    assert list(seq.densities[:6]) == [0, 1, 2, 0, 1, 2]
    assert find_control_point(seq) == (4, 3)


# --------------------------------------------------------------------------
@c(4, "pair counts and scores equal brute-force enumeration; hand example")
def test_metrics_oracle():
    rng = np.random.default_rng(5)
    for _ in range(100):
        n = int(rng.integers(2, 31))
        truth = rng.integers(0, rng.integers(1, 6), n)
        pred = rng.integers(-1, rng.integers(1, 6), n)
        pc = pair_counts(pred, truth)
        expected = pair_counts_brute(pred.tolist(), truth.tolist())
        assert (pc.a, pc.b, pc.c, pc.d) == expected
        sc = scores(pc)
        assert (sc.ri, sc.ji, sc.qji) == scores_brute(*expected)

    sc = scores(pair_counts([1, 1, 1, 2], [1, 1, 2, 2]))
    assert (sc.ri, sc.ji, sc.qji) == (0.5, 0.25, 0.5)


# --------------------------------------------------------------------------
def _random_datasets():
    rng = np.random.default_rng(99)
    for i in range(12):
        n_clusters = int(rng.integers(1, 5))
        ds = gen_blobs(int(rng.integers(5, 25)), n_clusters, int(rng.integers(2, 4)), 6.0, 1.0, seed=i)
        yield ds.points, ds.labels
    for i in range(6):
        X = rng.uniform(0, 1, (int(rng.integers(3, 60)), 2))
        yield X, rng.integers(0, 3, X.shape[0])


@c(5, "pipeline and metric invariants")
def test_invariant_suite():
    for X, truth in _random_datasets():
        dm = pairwise_distances(X)
        result = run_ncard(X)
        for g in initial_groups(dm, result.targets or [0]):
            seq = density_sequence(X, g.target, g.members, g.farthest)
            assert seq.densities[0] == 0
            cp = find_control_point(seq)
            if cp is not None:
                assert seq.densities[cp[1]] == 0
        labels = result.labels
        assert labels.shape == (X.shape[0],)
        clustered = labels[labels != OUTLIER]
        assert np.all(clustered >= 0)
        assert set(clustered.tolist()) == set(range(result.n_clusters))
        pc = pair_counts(labels, truth)
        n = X.shape[0]
        assert pc.a + pc.b + pc.c + pc.d == n * (n - 1) // 2
        sc = scores(pc)
        assert sc.qji >= sc.ji


# --------------------------------------------------------------------------
def _similarity(X, rng):
    d = X.shape[1]
    Q, R = np.linalg.qr(rng.standard_normal((d, d)))
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return 3.0 * X @ Q.T + rng.uniform(-20, 20, d)


def _invariance_datasets():
    yield "blobs", gen_blobs(20, 3, 2, 10, 1.0, seed=7).points
    yield "blobs3d", gen_blobs(25, 4, 3, 6, 1.0, seed=3).points
    yield "flip", FLIP_LAYOUT
    yield "iris", load_csv(IRIS, "species", has_header=True).points
    rng = np.random.default_rng(4)
    yield "outlier", np.vstack([rng.standard_normal((30, 2)), [[50.0, 0.0]]])


@c(6, "similarity invariance of the partition (normalize none)")
@pytest.mark.parametrize("name,X", list(_invariance_datasets()), ids=lambda v: v if isinstance(v, str) else "")
def test_similarity_invariance(name, X):
    rng = np.random.default_rng(len(name))
    base = run_ncard(X).labels
    for _ in range(3):
        np.testing.assert_array_equal(run_ncard(_similarity(X, rng)).labels, base)


@c(6, "similarity invariance through the cluster command")
def test_similarity_invariance_cli(tmp_path):
    X = gen_blobs(20, 3, 2, 10, 1.0, seed=7).points
    Y = _similarity(X, np.random.default_rng(0))
    outputs = []
    for tag, pts in (("orig", X), ("moved", Y)):
        src = tmp_path / f"{tag}.csv"
        np.savetxt(src, pts, delimiter=",", fmt="%.17g")
        labels = tmp_path / f"{tag}_labels.csv"
        argv = ["cluster", "--input", str(src), "--normalize", "none", "--algo", "ncard"]
        assert main(argv + ["--out-labels", str(labels), "--out-metrics", str(tmp_path / f"{tag}.json")]) == 0
        outputs.append(labels.read_bytes())
    assert outputs[0] == outputs[1]


# --------------------------------------------------------------------------
@c(7, "a point 50 spreads away from a 30-point blob is the only outlier")
@pytest.mark.parametrize("seed", range(10))
def test_outlier_detection(seed):
    rng = np.random.default_rng(seed)
    spread = 1.0
    blob = spread * rng.standard_normal((30, 2))
    direction = rng.standard_normal(2)
    far = blob.mean(axis=0) + 50 * spread * direction / np.linalg.norm(direction)
    X = np.vstack([blob, far])
    labels = run_ncard(X).labels
    assert np.flatnonzero(labels == OUTLIER).tolist() == [30]


# --------------------------------------------------------------------------
@c(8, "runtime scales at most 5x from n=500 to n=1000; whole check < 60 s")
@pytest.mark.slow
def test_complexity():
    t0 = time.perf_counter()
    data = {n: gen_blobs(n // 5, 5, 2, 8, 1.0, seed=1).points for n in (500, 1000)}
    run_ncard(data[500])  # warm-up
    medians = {}
    for n, X in data.items():
        times = []
        for _ in range(5):
            start = time.perf_counter()
            run_ncard(X)
            times.append(time.perf_counter() - start)
        medians[n] = statistics.median(times)
    ratio = medians[1000] / medians[500]
    print(f"median 500: {medians[500]:.3f}s, 1000: {medians[1000]:.3f}s, ratio {ratio:.2f}")
    assert ratio <= 5.0
    assert time.perf_counter() - t0 < 60.0


# --------------------------------------------------------------------------
def _expected_random_ri(truth, n_labels=3):
    _, counts = np.unique(truth, return_counts=True)
    n = truth.size
    total = n * (n - 1) / 2
    same = float((counts * (counts - 1) / 2).sum())
    p_same = 1.0 / n_labels
    return (same * p_same + (total - same) * (1 - p_same)) / total


@c(9, "Iris runs under all five algorithm ids; NCARD beats random RI")
def test_iris_pipeline(tmp_path):
    ds = load_csv(IRIS, "species", has_header=True)
    assert (ds.n, ds.dim, np.unique(ds.labels).size) == (150, 4, 3)
    floor = _expected_random_ri(ds.labels)
    for algo in ("ncard", "ncar", "knn1", "knn2", "eps"):
        labels, metrics = tmp_path / f"{algo}.csv", tmp_path / f"{algo}.json"
        argv = ["cluster", "--input", str(IRIS), "--has-header", "--label-col", "species"]
        argv += ["--normalize", "minmax", "--algo", algo, "--out-labels", str(labels), "--out-metrics", str(metrics)]
        assert main(argv) == 0, algo
        doc = json.loads(metrics.read_text())
        assert list(doc) == list(METRIC_KEYS)
        assert doc["n"] == 150 and doc["dim"] == 4 and doc["algo"] == algo
        assert doc["a"] + doc["b"] + doc["c"] + doc["d"] == 150 * 149 // 2
        assert all(0.0 <= doc[k] <= 1.0 for k in ("ri", "ji", "qji"))
        assert len(labels.read_text().splitlines()) == 151
        if algo == "ncard":
            print(f"ncard RI {doc['ri']:.4f} vs random floor {floor:.4f}")
            assert doc["ri"] > floor


# --------------------------------------------------------------------------
@c(10, "repeated runs write byte-identical label files")
@pytest.mark.parametrize("algo", ["ncard", "ncar", "knn1", "knn2", "eps"])
def test_determinism(tmp_path, algo):
    outputs = []
    for i in range(2):
        labels = tmp_path / f"labels{i}.csv"
        argv = ["cluster", "--input", str(IRIS), "--has-header", "--label-col", "species", "--algo", algo]
        assert main(argv + ["--out-labels", str(labels), "--out-metrics", str(tmp_path / f"m{i}.json")]) == 0
        outputs.append(labels.read_bytes())
    assert outputs[0] == outputs[1]

    spec = RunSpec(algo=algo, generator=dict(n_per_cluster=20, n_clusters=3, dim=2, separation=10, spread=1.0, seed=7))
    assert run(spec) == run(spec)
