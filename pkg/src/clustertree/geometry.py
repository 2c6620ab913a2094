"""Euclidean metric substrate: point sets, ball volumes and k-NN radii.

Everything downstream (graph construction, scale calculus, experiments) sits
on top of these few primitives, so they are kept exact: no approximate
nearest-neighbor shortcuts, closed balls throughout.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PointSet",
    "KnnRadii",
    "distance",
    "pairwise_distances",
    "unit_ball_volume",
    "knn_radii",
]


@dataclass(frozen=True)
class PointSet:
    """n points in R^d stored as an (n, d) float64 array.

    A 1-d input array is promoted to a column, which keeps the 1-d synthetic
    densities convenient to work with.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2:
            raise ValueError(f"points must form a 2-d array, got shape {pts.shape}")
        n, d = pts.shape
        if n < 1 or d < 1:
            raise ValueError(f"need at least one point and one dimension, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("all coordinates must be finite")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class KnnRadii:
    """Per-point radius of the smallest closed ball holding k sample points.

    The center point itself counts toward k, so ``radii`` is identically zero
    for k = 1 and equals the nearest-neighbor distance for k = 2.
    """

    k: int
    radii: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        if r.ndim != 1:
            raise ValueError("radii must be a flat array")
        if np.any(r < 0) or not np.all(np.isfinite(r)):
            raise ValueError("radii must be finite and nonnegative")
        object.__setattr__(self, "radii", r)


def distance(a, b) -> float:
    """Euclidean distance between two points given as coordinate sequences."""
    av = np.asarray(a, dtype=float).ravel()
    bv = np.asarray(b, dtype=float).ravel()
    if av.shape != bv.shape:
        raise ValueError(f"dimension mismatch: {av.shape[0]} vs {bv.shape[0]}")
    diff = av - bv
    return float(np.sqrt(np.sum(diff * diff)))


def pairwise_distances(ps: PointSet) -> np.ndarray:
    """Full symmetric (n, n) Euclidean distance matrix."""
    pts = ps.points
    diff = pts[:, None, :] - pts[None, :, :]
    return np.sqrt(np.sum(diff * diff, axis=-1))


def unit_ball_volume(d: int) -> float:
    """Volume of the unit ball in R^d: pi^(d/2) / Gamma(d/2 + 1)."""
    d = operator.index(d)
    if d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d}")
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


def knn_radii(ps: PointSet, k: int) -> KnnRadii:
    """Exact k-NN radius for every point of ``ps``.

    ``radii[i]`` is the k-th smallest of the distances from point i to all
    points, point i itself included (distance zero).  Computation is exact;
    the sorted sweep used for 1-d inputs is an internal optimization that
    returns bit-identical values to the generic per-row selection.
    """
    k = operator.index(k)
    n = ps.n
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if k > n:
        raise ValueError(f"k={k} exceeds the number of points n={n}")
    if ps.d == 1 and n > 512:
        radii = _knn_radii_1d(ps.points[:, 0], k)
    else:
        radii = _knn_radii_generic(ps.points, k)
    return KnnRadii(k=k, radii=radii)


def _knn_radii_generic(pts: np.ndarray, k: int, chunk: int = 512) -> np.ndarray:
    """k-th smallest distance per row of the (implicit) distance matrix."""
    n = pts.shape[0]
    out = np.empty(n)
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        diff = pts[lo:hi, None, :] - pts[None, :, :]
        block = np.sqrt(np.sum(diff * diff, axis=-1))
        if k == 1:
            # the self-distance, which the sum above makes exactly 0
            out[lo:hi] = 0.0
        else:
            out[lo:hi] = np.partition(block, k - 1, axis=1)[:, k - 1]
    return out


def _knn_radii_1d(x: np.ndarray, k: int) -> np.ndarray:
    """Sorted sliding-window k-NN radii for collinear points.

    The k-th order statistic of |x_i - x_j| equals the smallest half-width of
    a window of k consecutive sorted points that contains x_i.  Distances are
    evaluated as sqrt((x_i - x_j)^2) so the values match the generic path bit
    for bit (the formulas can differ in the last ulp otherwise).
    """
    n = x.shape[0]
    order = np.argsort(x, kind="stable")
    xs = x[order]
    best = np.full(n, np.inf)
    m = n - k + 1
    for j in range(k):
        # windows starting at s = t - j, covering sorted slots [s, s + k - 1]
        center = xs[j:j + m]
        left = center - xs[:m]
        right = xs[k - 1:] - center
        span = np.maximum(left, right)
        best[j:j + m] = np.minimum(best[j:j + m], np.sqrt(span * span))
    radii = np.empty(n)
    radii[order] = best
    return radii
