"""Cluster-tree filtration: vertex births and component merges indexed by radius.

A tree is a validated event sequence (nondecreasing radii, births before
merges at equal radius) compiled into a dendrogram forest for O(n) partition
queries at any radius.  Component identifiers are always the minimum point
index in the component, fixed at creation.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = ["MergeEvent", "ClusterTree", "UnionFind"]

BIRTH = "birth"
MERGE = "merge"


@dataclass(frozen=True)
class MergeEvent:
    """One step of the filtration: a vertex birth or a two-component merge."""

    radius: float
    kind: str
    point: Optional[int] = None
    components: Optional[tuple[int, int]] = None

    def __post_init__(self):
        r = float(self.radius)
        if not (r >= 0.0) or not np.isfinite(r):
            raise ValueError(f"event radius must be finite and nonnegative, got {self.radius}")
        object.__setattr__(self, "radius", r)
        if self.kind == BIRTH:
            if self.point is None or self.components is not None:
                raise ValueError("birth events carry exactly a point index")
            object.__setattr__(self, "point", operator.index(self.point))
            if self.point < 0:
                raise ValueError(f"point index must be nonnegative, got {self.point}")
        elif self.kind == MERGE:
            if self.components is None or self.point is not None:
                raise ValueError("merge events carry exactly a component id pair")
            a, b = self.components
            a = operator.index(a)
            b = operator.index(b)
            if a == b:
                raise ValueError(f"merge needs two distinct components, got {a} twice")
            if a < 0 or b < 0:
                raise ValueError("component ids must be nonnegative")
            object.__setattr__(self, "components", (min(a, b), max(a, b)))
        else:
            raise ValueError(f"unknown event kind {self.kind!r}")

    @staticmethod
    def birth(radius: float, point: int) -> "MergeEvent":
        return MergeEvent(radius=radius, kind=BIRTH, point=point)

    @staticmethod
    def merge(radius: float, a: int, b: int) -> "MergeEvent":
        return MergeEvent(radius=radius, kind=MERGE, components=(a, b))


class UnionFind:
    """Disjoint sets over point indices, tracking min-index component ids."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.comp_id = list(range(n))

    def find(self, i: int) -> int:
        parent = self.parent
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def id_of(self, i: int) -> int:
        return self.comp_id[self.find(i)]

    def union(self, i: int, j: int) -> bool:
        """Join the sets of i and j; returns False if already joined."""
        ri, rj = self.find(i), self.find(j)
        if ri == rj:
            return False
        if self.size[ri] < self.size[rj]:
            ri, rj = rj, ri
        self.parent[rj] = ri
        self.size[ri] += self.size[rj]
        self.comp_id[ri] = min(self.comp_id[ri], self.comp_id[rj])
        return True


class ClusterTree:
    """Validated filtration over n points with radius-indexed partition queries.

    The event sequence is compiled once into a node forest: nodes 0..n-1 are
    the points (creation radius = birth radius, infinity if never born) and
    each merge appends one internal node.  Every node owns a contiguous slice
    of a DFS leaf ordering, so membership, disjointness and label queries are
    array operations.
    """

    def __init__(self, n: int, events: Iterable[MergeEvent], provenance: Optional[dict] = None):
        n = operator.index(n)
        if n < 1:
            raise ValueError(f"need at least one point, got n={n}")
        events = tuple(events)
        self._n = n
        self._events = events
        self._provenance = dict(provenance or {})
        self._compile(events)

    # -- construction -----------------------------------------------------

    def _compile(self, events: Sequence[MergeEvent]) -> None:
        n = self._n
        n_merges = sum(1 for ev in events if ev.kind == MERGE)
        total = n + n_merges
        radius = np.full(total, np.inf)
        parent = np.full(total, -1, dtype=np.int64)
        comp = np.arange(total, dtype=np.int64)
        children: list[Optional[tuple[int, int]]] = [None] * total

        live: dict[int, int] = {}
        next_node = n
        prev_r = -np.inf
        merge_seen_here = False
        for ev in events:
            if ev.radius < prev_r:
                raise ValueError(
                    f"event radii must be nondecreasing, got {ev.radius} after {prev_r}")
            if ev.radius > prev_r:
                prev_r = ev.radius
                merge_seen_here = False
            if ev.kind == BIRTH:
                i = ev.point
                if i >= n:
                    raise ValueError(f"birth of point {i} outside 0..{n - 1}")
                if np.isfinite(radius[i]):
                    raise ValueError(f"point {i} born twice")
                if merge_seen_here:
                    raise ValueError(
                        f"birth of {i} after a merge at the same radius {ev.radius}")
                radius[i] = ev.radius
                live[i] = i
            else:
                merge_seen_here = True
                a, b = ev.components
                if a not in live or b not in live:
                    raise ValueError(
                        f"merge at {ev.radius} references non-live components {a}, {b}")
                node = next_node
                next_node += 1
                na, nb = live[a], live[b]
                radius[node] = ev.radius
                parent[na] = node
                parent[nb] = node
                comp[node] = a  # a < b, and ids are min point indices
                children[node] = (na, nb)
                live[a] = node
                del live[b]

        self._node_radius = radius
        self._node_parent = parent
        self._node_comp = comp
        self._children = children
        self._num_nodes = total
        self._birth = radius[:n].copy()
        self._roots = sorted(live.values(), key=lambda v: comp[v])

        # DFS leaf ordering: every node owns leaf_order[lo:hi]
        leaf_order = np.empty(n, dtype=np.int64)
        lo = np.zeros(total, dtype=np.int64)
        hi = np.zeros(total, dtype=np.int64)
        depth = np.zeros(total, dtype=np.int64)
        pos = 0
        for root in self._roots:
            stack = [(root, 0, False)]
            while stack:
                node, dep, done = stack.pop()
                if done:
                    hi[node] = pos
                    continue
                depth[node] = dep
                lo[node] = pos
                stack.append((node, dep, True))
                kids = children[node]
                if kids is None:
                    leaf_order[pos] = node
                    pos += 1
                else:
                    stack.append((kids[1], dep + 1, False))
                    stack.append((kids[0], dep + 1, False))
        for i in range(n):  # never-born points close out the ordering
            if not np.isfinite(radius[i]):
                leaf_order[pos] = i
                lo[i] = pos
                pos += 1
                hi[i] = pos
        self._leaf_order = leaf_order
        self._range_lo = lo
        self._range_hi = hi
        self._depth = depth

    # -- basic accessors --------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    @property
    def events(self) -> tuple[MergeEvent, ...]:
        return self._events

    @property
    def provenance(self) -> dict:
        return dict(self._provenance)

    @property
    def birth_radii(self) -> np.ndarray:
        """Birth radius per point; infinity for points never born."""
        return self._birth.copy()

    @property
    def max_radius(self) -> float:
        """Largest event radius (0.0 for an event-free tree)."""
        return self._events[-1].radius if self._events else 0.0

    @property
    def node_count(self) -> int:
        return self._num_nodes

    @property
    def node_radius(self) -> np.ndarray:
        return self._node_radius

    @property
    def node_parent(self) -> np.ndarray:
        return self._node_parent

    @property
    def node_component(self) -> np.ndarray:
        return self._node_comp

    @property
    def leaf_order(self) -> np.ndarray:
        return self._leaf_order

    def node_members(self, node: int) -> np.ndarray:
        """Point indices under ``node``, in DFS order."""
        return self._leaf_order[self._range_lo[node]:self._range_hi[node]]

    def node_span(self, node: int) -> tuple[int, int]:
        """Half-open slice of the DFS leaf ordering owned by ``node``."""
        return int(self._range_lo[node]), int(self._range_hi[node])

    def node_children(self, node: int) -> tuple[int, ...]:
        """Child nodes of an internal node; empty for leaves."""
        kids = self._children[node]
        return () if kids is None else kids

    # -- partition queries ------------------------------------------------

    def _top_nodes(self, r: float) -> np.ndarray:
        """Maximal nodes alive at radius r, sorted by component id."""
        if not (r >= 0.0):
            raise ValueError(f"radius must be nonnegative, got {r}")
        if np.isinf(r):  # saturation: same partition as the last event radius
            r = self.max_radius
        nr = self._node_radius
        par = self._node_parent
        active = nr <= r
        par_radius = np.where(par >= 0, nr[np.where(par >= 0, par, 0)], np.inf)
        top = np.flatnonzero(active & (par_radius > r))
        return top[np.argsort(self._node_comp[top], kind="stable")]

    def components_at(self, r: float) -> list[list[int]]:
        """Subpartition of the born points at radius r.

        Components are ordered by id (their minimum point index) and each
        member list is sorted.  Points with birth radius above r are absent.
        """
        out = []
        for node in self._top_nodes(r):
            members = self.node_members(int(node))
            out.append(sorted(int(i) for i in members))
        return out

    def labels_at(self, r: float) -> np.ndarray:
        """Component id per point at radius r, -1 for not-yet-born points."""
        labels = np.full(self._n, -1, dtype=np.int64)
        for node in self._top_nodes(r):
            node = int(node)
            members = self._leaf_order[self._range_lo[node]:self._range_hi[node]]
            labels[members] = self._node_comp[node]
        return labels

    # -- cluster queries --------------------------------------------------

    def _validate_indices(self, s) -> list[int]:
        idx = [operator.index(i) for i in s]
        if not idx:
            raise ValueError("need at least one point index")
        for i in idx:
            if not (0 <= i < self._n):
                raise ValueError(f"point index {i} outside 0..{self._n - 1}")
        return idx

    def _lca(self, u: int, v: int) -> Optional[int]:
        depth = self._depth
        parent = self._node_parent
        while u != v:
            if depth[u] < depth[v]:
                u, v = v, u
            if parent[u] < 0:
                return None
            u = int(parent[u])
        return u

    def _smallest_node(self, s) -> Optional[int]:
        idx = self._validate_indices(s)
        if any(not np.isfinite(self._birth[i]) for i in idx):
            return None
        node = idx[0]
        for i in idx[1:]:
            nxt = self._lca(node, i)
            if nxt is None:
                return None
            node = nxt
        # a node swallowed by an equal-radius merge never exists on its own
        parent = self._node_parent
        radius = self._node_radius
        while parent[node] >= 0 and radius[parent[node]] == radius[node]:
            node = int(parent[node])
        return node

    def smallest_cluster_containing(self, s) -> Optional[tuple[int, float]]:
        """Smallest component ever containing all of ``s``: (id, radius).

        Returns None when the points never co-reside (possible in forests
        whose final graph stays disconnected).
        """
        node = self._smallest_node(s)
        if node is None:
            return None
        return int(self._node_comp[node]), float(self._node_radius[node])

    def disjoint_at(self, s1, s2) -> bool:
        """Whether the smallest clusters around s1 and s2 share no points.

        Disjointness is vertex-set disjointness: nested distinct clusters are
        not disjoint.  If either side has no containing cluster the answer is
        conservatively False.
        """
        set1 = set(self._validate_indices(s1))
        set2 = set(self._validate_indices(s2))
        if set1 & set2:
            raise ValueError("query sets overlap; disjointness is ill-posed")
        u = self._smallest_node(s1)
        v = self._smallest_node(s2)
        if u is None or v is None:
            return False
        lo, hi = self._range_lo, self._range_hi
        return hi[u] <= lo[v] or hi[v] <= lo[u]
