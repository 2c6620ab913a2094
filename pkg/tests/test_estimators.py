import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from clustertree.estimators import (EdgeRule, VARIANTS, activation_schedule,
                                    build_tree, edge_activation)
from clustertree.geometry import PointSet, knn_radii, pairwise_distances


def test_edge_rule_validation():
    with pytest.raises(ValueError):
        EdgeRule("slink")
    with pytest.raises(ValueError):
        EdgeRule("rsl", 0.0)
    with pytest.raises(ValueError):
        EdgeRule("rsl", math.inf)
    assert EdgeRule("knn", 2).alpha == 2.0


def test_edge_activation_by_hand():
    # d=3 with neighbor radii 1 and 2
    assert edge_activation(EdgeRule("rsl", 1.5), 3.0, 1.0, 2.0) == 2.0
    assert edge_activation(EdgeRule("rsl", 1.0), 3.0, 1.0, 2.0) == 3.0
    assert edge_activation(EdgeRule("knn", 2.0), 3.0, 1.0, 2.0) == 2.0
    assert edge_activation(EdgeRule("knn", 1.0), 3.0, 1.0, 2.0) == math.inf
    # mutual rule gates on the smaller radius: 3 > 2 * 1
    assert edge_activation(EdgeRule("mknn", 2.0), 3.0, 1.0, 2.0) == math.inf
    assert edge_activation(EdgeRule("mknn", 2.0), 1.9, 1.0, 2.0) == 2.0
    with pytest.raises(ValueError):
        edge_activation(EdgeRule("rsl"), -1.0, 1.0, 1.0)


@given(
    variant=st.sampled_from(VARIANTS),
    alpha=st.floats(1.0, 2.0),
    d_ij=st.floats(0.0, 50.0),
    r_ki=st.floats(0.0, 20.0),
    r_kj=st.floats(0.0, 20.0),
)
def test_activation_never_precedes_births(variant, alpha, d_ij, r_ki, r_kj):
    act = edge_activation(EdgeRule(variant, alpha), d_ij, r_ki, r_kj)
    assert act >= max(r_ki, r_kj)


@given(
    variant=st.sampled_from(VARIANTS),
    seed=st.integers(0, 10**6),
    n=st.integers(2, 20),
    k=st.integers(1, 6),
    alpha=st.sampled_from([1.0, math.sqrt(2.0), 2.0]),
)
def test_schedule_matches_scalar_rule(variant, seed, n, k, alpha):
    k = min(k, n)
    pts = np.random.default_rng(seed).uniform(-1, 1, size=(n, 2))
    ps = PointSet(pts)
    rule = EdgeRule(variant, alpha)
    sched = activation_schedule(ps, k, rule)
    radii = knn_radii(ps, k).radii
    dist = pairwise_distances(ps)
    assert np.array_equal(sched.vertex_birth, radii)
    for i in range(n):
        assert sched.edge_birth[i, i] == math.inf
        for j in range(i + 1, n):
            want = edge_activation(rule, dist[i, j], radii[i], radii[j])
            assert sched.edge_birth[i, j] == want
            assert sched.edge_birth[j, i] == want


def test_build_tree_two_points_by_hand():
    # k=2 means each point's radius is the gap; with alpha=1 the merge
    # lands at the same radius
    ps = PointSet(np.array([0.0, 10.0]))
    t = build_tree(ps, 2, EdgeRule("rsl", 1.0))
    kinds = [(e.kind, e.radius) for e in t.events]
    assert kinds == [("birth", 10.0), ("birth", 10.0), ("merge", 10.0)]
    assert t.events[2].components == (0, 1)
    assert t.provenance == {"estimator": "rsl", "k": 2, "alpha": 1.0}


def test_build_tree_equally_spaced_merges_at_common_gap():
    ps = PointSet(np.arange(6, dtype=float) * 2.5)
    t = build_tree(ps, 2, EdgeRule("rsl", 1.0))
    merges = [e for e in t.events if e.kind == "merge"]
    assert len(merges) == 5
    assert all(m.radius == 2.5 for m in merges)
    assert t.components_at(2.5) == [list(range(6))]
    assert t.components_at(2.4999) == []


def test_build_tree_k1_knn_is_edgeless():
    # k=1 radii are zero, so the plain k-NN rule admits no edge between
    # distinct points
    ps = PointSet(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
    t = build_tree(ps, 1, EdgeRule("knn", 2.0))
    assert all(e.kind == "birth" for e in t.events)
    assert t.components_at(100.0) == [[0], [1], [2]]


def test_build_tree_rejects_bad_k():
    ps = PointSet(np.zeros((3, 1)))
    with pytest.raises(ValueError):
        build_tree(ps, 4, EdgeRule("rsl"))
    with pytest.raises(ValueError):
        build_tree(ps, 0, EdgeRule("rsl"))


def test_births_precede_merges_at_ties():
    rng = np.random.default_rng(3)
    ps = PointSet(rng.integers(0, 5, size=(12, 2)).astype(float))
    t = build_tree(ps, 3, EdgeRule("rsl", 1.0))
    seen_merge_at = None
    for e in t.events:
        if e.kind == "merge":
            seen_merge_at = e.radius
        elif seen_merge_at is not None:
            assert e.radius > seen_merge_at
    # radii never decrease
    radii = [e.radius for e in t.events]
    assert radii == sorted(radii)


@given(
    variant=st.sampled_from(VARIANTS),
    seed=st.integers(0, 10**6),
)
def test_forest_reduction_preserves_partitions(variant, seed):
    # the large-n path consumes a spanning forest instead of all candidate
    # edges; partitions at every event radius must be unchanged
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 40))
    pts = rng.uniform(0, 1, size=(n, 2))
    ps = PointSet(pts)
    k = int(rng.integers(1, min(n, 6) + 1))
    rule = EdgeRule(variant, math.sqrt(2.0))
    full = build_tree(ps, k, rule)
    forest = build_tree(ps, k, rule, kruskal_cutoff=0)
    radii = sorted({e.radius for e in full.events})
    for r in radii + [full.max_radius * 1.01 + 1e-9]:
        assert full.components_at(r) == forest.components_at(r), r


def test_mutual_knn_isolates_far_outlier():
    # a tight pair plus one far point: with k=2 the outlier's radius is
    # large but the pair's radii are small, so no mutual edge forms
    ps = PointSet(np.array([0.0, 0.1, 50.0]))
    t = build_tree(ps, 2, EdgeRule("mknn", 2.0))
    assert t.components_at(1000.0) == [[0, 1], [2]]
    # the plain rule connects asymmetrically through the outlier's radius
    t2 = build_tree(ps, 2, EdgeRule("knn", 2.0))
    assert t2.components_at(1000.0) == [[0, 1, 2]]
