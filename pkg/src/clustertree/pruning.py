"""Lookup-based pruning of spurious fine-scale structure.

At every event radius r of a base tree, components are regrouped by whether
they co-reside at a coarser lookup radius r' = r_of_lambda(max(lambda_tilde(r), 0)).
A nonpositive level sends the lookup to the root partition.  Vertices are
never deleted; pruning only coarsens, and the result is itself a valid
filtration over the same births.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scales import ScaleParams, lambda_tilde, r_of_lambda
from .tree import ClusterTree, MergeEvent, UnionFind

__all__ = ["PrunedTree", "prune", "pruned_components_at", "lookup_radius", "low_level_cutoff"]

# relative inflation of the lookup radius; the float inverse of the
# level/radius maps can land an ulp below the event radius that defines it,
# which would silently drop merges sitting exactly at the lookup level
_LOOKUP_GUARD = 1e-9


def lookup_radius(r: float, p: ScaleParams) -> float:
    """Radius the pruning rule inspects when deciding regroupings at r.

    Infinity encodes "the root partition" (the clamped level hit zero).
    Nondecreasing in r, and never below r itself.
    """
    lam = lambda_tilde(r, p)
    if lam <= 0.0:
        return math.inf
    return r_of_lambda(lam, p)


def low_level_cutoff(p: ScaleParams) -> float:
    """Radius above which the optional full-removal variant reconnects everything.

    (k / (10 n v_d eps_tilde))^(1/d); requires a positive eps_tilde.
    """
    if not (p.eps_tilde > 0):
        raise ValueError("low-level reconnection needs a positive eps_tilde")
    return (p.k / (10.0 * p.n * p.ball_volume * p.eps_tilde)) ** (1.0 / p.d)


@dataclass
class PrunedTree:
    """A base tree plus the coarsened filtration the pruning rule produced."""

    base: ClusterTree
    params: ScaleParams
    eps_tilde: float
    reconnect_low_levels: bool
    pruned_events: tuple[MergeEvent, ...]
    index: ClusterTree

    def components_at(self, r: float) -> list[list[int]]:
        return self.index.components_at(r)

    def labels_at(self, r: float) -> np.ndarray:
        return self.index.labels_at(r)


def pruned_components_at(pt: PrunedTree, r: float) -> list[list[int]]:
    """Post-pruning subpartition at radius r."""
    return pt.index.components_at(r)


def prune(tree: ClusterTree, p: ScaleParams, *, reconnect_low_levels: bool = False) -> PrunedTree:
    """Coarsen ``tree`` with the radius-lookup rule.

    Evaluated at every event radius of the base tree (its partition only
    changes there).  Base merges are always kept; extra merges appear
    whenever two components at r share a component at the lookup radius.
    With ``reconnect_low_levels`` every level above ``low_level_cutoff(p)``
    collapses to a single component per the full-removal variant.

    The lookup radius is nondecreasing in r, so the lookup partition is
    maintained incrementally with a second union-find and a pointer into the
    base merges; one call costs O(events * alpha) instead of a fresh
    partition query per radius.
    """
    if p.n != tree.n:
        raise ValueError(f"params describe n={p.n} but the tree has n={tree.n}")
    prov_k = tree.provenance.get("k")
    if prov_k is not None and prov_k != p.k:
        raise ValueError(f"params use k={p.k} but the tree was built with k={prov_k}")
    cutoff = low_level_cutoff(p) if reconnect_low_levels else math.inf

    events = tree.events
    merges = [e for e in events if e.kind == "merge"]
    out: list[MergeEvent] = []
    uf = UnionFind(tree.n)       # the pruned partition being built
    look_uf = UnionFind(tree.n)  # base partition advanced to the lookup radius
    live: set[int] = set()       # base component ids among born points
    li = 0
    clamped = 0

    pos = 0
    while pos < len(events):
        rho = events[pos].radius
        while pos < len(events) and events[pos].radius == rho:
            ev = events[pos]
            pos += 1
            if ev.kind == "birth":
                live.add(ev.point)
                out.append(ev)
            else:
                a, b = ev.components
                live.discard(b)  # a < b; the merged component keeps id a
                if uf.find(a) != uf.find(b):
                    out.append(MergeEvent.merge(rho, uf.id_of(a), uf.id_of(b)))
                    uf.union(a, b)
        if rho <= 0.0:
            continue  # the lookup map degenerates to the identity at radius 0
        if len(live) < 2:
            continue

        if rho > cutoff:
            ids = sorted(live)
            for c in ids[1:]:
                _union_recording(uf, ids[0], c, rho, out)
            continue

        r_look = lookup_radius(rho, p)
        if math.isinf(r_look):
            clamped += 1
            limit = math.inf
        else:
            limit = r_look * (1.0 + _LOOKUP_GUARD)
        while li < len(merges) and merges[li].radius <= limit:
            ma, mb = merges[li].components
            look_uf.union(ma, mb)
            li += 1
        groups: dict[int, int] = {}
        for c in sorted(live):
            key = look_uf.id_of(c)
            if key in groups:
                _union_recording(uf, groups[key], c, rho, out)
            else:
                groups[key] = c

    provenance = dict(tree.provenance)
    provenance.update({
        "pruned": True,
        "eps_tilde": p.eps_tilde,
        "c_delta": p.c_delta,
        "delta": p.delta,
        "reconnect_low_levels": bool(reconnect_low_levels),
        "low_level_cutoff": cutoff if math.isfinite(cutoff) else None,
        "clamped_lookups": clamped,
    })
    index = ClusterTree(n=tree.n, events=out, provenance=provenance)
    return PrunedTree(base=tree, params=p, eps_tilde=p.eps_tilde,
                      reconnect_low_levels=reconnect_low_levels,
                      pruned_events=tuple(out), index=index)


def _union_recording(uf: UnionFind, a: int, b: int, radius: float,
                     out: list[MergeEvent]) -> None:
    if uf.find(a) != uf.find(b):
        out.append(MergeEvent.merge(radius, uf.id_of(a), uf.id_of(b)))
        uf.union(a, b)
