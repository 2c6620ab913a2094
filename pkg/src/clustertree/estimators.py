"""Graph-sweep estimators of the cluster tree.

Three edge rules share one sweep.  ``rsl`` grows balls and connects points
within alpha * r; ``knn`` and ``mknn`` connect points whose k-NN radii are
compatible with their distance (max for the plain variant, min for the
mutual one).  Each pair of points gets a single activation radius; the tree
is the union-find filtration of births and activations.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass

import numpy as np

from .geometry import PointSet, knn_radii, pairwise_distances
from .tree import ClusterTree, MergeEvent, UnionFind

__all__ = [
    "VARIANTS",
    "EdgeRule",
    "ActivationSchedule",
    "edge_activation",
    "activation_schedule",
    "build_tree",
]

VARIANTS = ("rsl", "knn", "mknn")

# above this size the sweep consumes a minimum spanning forest of the
# activation graph instead of every pairwise candidate edge; see build_tree
_KRUSKAL_CUTOFF = 1024


@dataclass(frozen=True)
class EdgeRule:
    """Edge rule variant plus the connection slack alpha.

    alpha >= 1 is where the rules make sense (alpha in [1, 2] is the
    analysis-backed band; sqrt(2) is enough for the strongest guarantees).
    """

    variant: str
    alpha: float = 1.0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}, expected one of {VARIANTS}")
        a = float(self.alpha)
        if not (a > 0) or not math.isfinite(a):
            raise ValueError(f"alpha must be a positive real, got {self.alpha}")
        object.__setattr__(self, "alpha", a)


def edge_activation(rule: EdgeRule, d_ij: float, r_ki: float, r_kj: float) -> float:
    """Radius at which the edge between two points becomes active.

    Infinity means the rule never connects the pair.  An activation is never
    below either endpoint's birth radius, so edges cannot precede vertices.
    """
    if d_ij < 0 or r_ki < 0 or r_kj < 0:
        raise ValueError("distances and radii must be nonnegative")
    hi = max(r_ki, r_kj)
    if rule.variant == "rsl":
        return max(hi, d_ij / rule.alpha)
    if rule.variant == "knn":
        return hi if d_ij <= rule.alpha * hi else math.inf
    return hi if d_ij <= rule.alpha * min(r_ki, r_kj) else math.inf


@dataclass(frozen=True)
class ActivationSchedule:
    """Vectorized activation data: per-point births, per-pair edge radii."""

    vertex_birth: np.ndarray   # (n,)
    edge_birth: np.ndarray     # (n, n), +inf where the rule never connects

    def __post_init__(self):
        if self.edge_birth.shape != (len(self.vertex_birth),) * 2:
            raise ValueError("edge matrix shape does not match vertex count")


def _activation_matrix(dist: np.ndarray, radii: np.ndarray, rule: EdgeRule) -> np.ndarray:
    """Vectorized twin of edge_activation (bit-identical per entry)."""
    hi = np.maximum(radii[:, None], radii[None, :])
    if rule.variant == "rsl":
        act = np.maximum(hi, dist / rule.alpha)
    elif rule.variant == "knn":
        act = np.where(dist <= rule.alpha * hi, hi, np.inf)
    else:
        lo = np.minimum(radii[:, None], radii[None, :])
        act = np.where(dist <= rule.alpha * lo, hi, np.inf)
    np.fill_diagonal(act, np.inf)
    return act


def activation_schedule(ps: PointSet, k: int, rule: EdgeRule) -> ActivationSchedule:
    """Births and edge activation radii for every pair of points."""
    radii = knn_radii(ps, k).radii
    dist = pairwise_distances(ps)
    return ActivationSchedule(vertex_birth=radii,
                              edge_birth=_activation_matrix(dist, radii, rule))


def _prim_forest(act: np.ndarray) -> list[tuple[float, int, int]]:
    """Minimum spanning forest of the finite-activation graph, O(n^2).

    Connectivity thresholded at any radius is identical on the forest and on
    the full graph, so the sweep only needs these edges.
    """
    n = act.shape[0]
    in_tree = np.zeros(n, dtype=bool)
    key = np.full(n, np.inf)
    parent = np.full(n, -1, dtype=np.int64)
    edges: list[tuple[float, int, int]] = []
    for _ in range(n):
        candidates = np.where(in_tree, np.inf, key)
        u = int(np.argmin(candidates))
        if not np.isfinite(candidates[u]):
            # no finite edge reaches the rest: open a new forest component
            u = int(np.flatnonzero(~in_tree)[0])
        in_tree[u] = True
        if parent[u] >= 0 and np.isfinite(key[u]):
            a, b = int(parent[u]), u
            edges.append((float(key[u]), min(a, b), max(a, b)))
        row = act[u]
        better = (~in_tree) & (row < key)
        key[better] = row[better]
        parent[better] = u
    return edges


def _candidate_edges(act: np.ndarray) -> list[tuple[float, int, int]]:
    """Every finite-activation pair, for the small-n canonical sweep."""
    iu, ju = np.triu_indices(act.shape[0], k=1)
    w = act[iu, ju]
    keep = np.isfinite(w)
    return list(zip(w[keep].tolist(), iu[keep].tolist(), ju[keep].tolist()))


def build_tree(ps: PointSet, k: int, rule: EdgeRule, *,
               kruskal_cutoff: int = _KRUSKAL_CUTOFF) -> ClusterTree:
    """Sweep the activation schedule into a cluster tree.

    Births happen at each point's k-NN radius; merges at the exact infimum
    radius at which the rule connects two components.  Ties are resolved
    deterministically: births before merges, then ascending index order.

    Beyond ``kruskal_cutoff`` points the candidate edges are reduced to a
    minimum spanning forest first.  Partitions at every radius are unchanged;
    only the pairing of simultaneous equal-radius merges can differ from the
    small-n ordering.
    """
    k = operator.index(k)
    n = ps.n
    if k > n:
        raise ValueError(f"k={k} exceeds the number of points n={n}")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")

    radii = knn_radii(ps, k).radii
    dist = pairwise_distances(ps)
    act = _activation_matrix(dist, radii, rule)

    if n <= kruskal_cutoff:
        edges = _candidate_edges(act)
    else:
        edges = _prim_forest(act)
    edges.sort()

    birth_order = np.lexsort((np.arange(n), radii))

    events: list[MergeEvent] = []
    uf = UnionFind(n)
    bi = 0
    for w, i, j in edges:
        while bi < n and radii[birth_order[bi]] <= w:
            p = int(birth_order[bi])
            events.append(MergeEvent.birth(float(radii[p]), p))
            bi += 1
        ra, rb = uf.find(i), uf.find(j)
        if ra == rb:
            continue
        ida, idb = uf.comp_id[ra], uf.comp_id[rb]
        events.append(MergeEvent.merge(float(w), ida, idb))
        uf.union(i, j)
    while bi < n:
        p = int(birth_order[bi])
        events.append(MergeEvent.birth(float(radii[p]), p))
        bi += 1

    provenance = {"estimator": rule.variant, "k": k, "alpha": rule.alpha}
    return ClusterTree(n=n, events=events, provenance=provenance)
