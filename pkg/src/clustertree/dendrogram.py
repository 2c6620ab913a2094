"""Static SVG dendrograms of cluster trees.

Leaves sit on the x axis in the tree's depth-first order; height encodes the
radius at which each node appears, with merges drawn as brackets.  Output is
plain SVG text assembled by hand and fully determined by the tree.
"""

from __future__ import annotations

from typing import Union

import numpy as np

from .pruning import PrunedTree
from .tree import ClusterTree

__all__ = ["render_dendrogram", "RENDER_CAP"]

RENDER_CAP = 2000

_MARGIN = 40.0
_LEAF_TICK = 4.0


def _fmt(v: float) -> str:
    return format(v, ".2f")


def render_dendrogram(tree: Union[ClusterTree, PrunedTree], *, width: int = 800,
                      height: int = 500, max_leaves: int = RENDER_CAP) -> str:
    """SVG text for the tree; raises if the tree has too many leaves.

    Points born at a finite radius appear as stems; merges as brackets at the
    merge radius.  Never-born points (infinite birth radius) are omitted.
    """
    if isinstance(tree, PrunedTree):
        tree = tree.index
    if tree.n > max_leaves:
        raise ValueError(
            f"tree has {tree.n} leaves, above the render cap {max_leaves}; "
            "subsample the points or raise max_leaves")

    nr = tree.node_radius
    parent = tree.node_parent
    rmax = tree.max_radius
    if not np.isfinite(rmax) or rmax <= 0.0:
        rmax = 1.0

    plot_w = width - 2 * _MARGIN
    plot_h = height - 2 * _MARGIN
    born = [int(i) for i in np.flatnonzero(np.isfinite(nr[:tree.n]))]
    slots = max(len(born), 1)

    # x center of each node: mean leaf slot of its DFS range
    order_pos = np.empty(tree.n, dtype=np.float64)
    order_pos[tree.leaf_order] = np.arange(tree.n)

    def x_of(node: int) -> float:
        lo, hi = tree.node_span(node)
        mid = (lo + hi - 1) / 2.0
        return _MARGIN + (mid + 0.5) / slots * plot_w

    def y_of(r: float) -> float:
        return height - _MARGIN - min(r / rmax, 1.0) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{_fmt(_MARGIN)}" y1="{_fmt(height - _MARGIN)}" '
        f'x2="{_fmt(_MARGIN)}" y2="{_fmt(_MARGIN)}" stroke="black"/>',
    ]
    for frac in (0.0, 0.5, 1.0):
        y = height - _MARGIN - frac * plot_h
        parts.append(
            f'<line x1="{_fmt(_MARGIN - 4)}" y1="{_fmt(y)}" x2="{_fmt(_MARGIN)}" '
            f'y2="{_fmt(y)}" stroke="black"/>')
        parts.append(
            f'<text x="{_fmt(_MARGIN - 8)}" y="{_fmt(y + 4)}" font-size="11" '
            f'text-anchor="end" font-family="monospace">{format(frac * rmax, ".4g")}</text>')

    # stems and brackets, leaves first then internal nodes by index
    for node in range(tree.node_count):
        r = nr[node]
        if not np.isfinite(r):
            continue
        x = x_of(node)
        y = y_of(float(r))
        par = int(parent[node])
        if node < tree.n:
            parts.append(
                f'<line x1="{_fmt(x)}" y1="{_fmt(y + _LEAF_TICK)}" x2="{_fmt(x)}" '
                f'y2="{_fmt(y)}" stroke="black" stroke-width="1"/>')
        else:
            child_xs = [x_of(c) for c in tree.node_children(node)]
            parts.append(
                f'<line x1="{_fmt(min(child_xs))}" y1="{_fmt(y)}" '
                f'x2="{_fmt(max(child_xs))}" y2="{_fmt(y)}" stroke="black" stroke-width="1"/>')
        if par >= 0 and np.isfinite(nr[par]):
            parts.append(
                f'<line x1="{_fmt(x)}" y1="{_fmt(y)}" x2="{_fmt(x)}" '
                f'y2="{_fmt(y_of(float(nr[par])))}" stroke="black" stroke-width="1"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
