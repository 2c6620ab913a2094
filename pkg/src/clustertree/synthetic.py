"""Synthetic densities with analytic ground truth, plus exact samplers.

Piecewise-constant densities on an interval carry their level-set components
and separation certificates in closed form, which is what the statistical
experiments check estimators against.  Sampling is inverse-CDF through
numpy's PCG64 generator, so draws are reproducible across platforms given
the seed.
"""

from __future__ import annotations

import operator
from bisect import bisect_right
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .geometry import PointSet, unit_ball_volume

__all__ = [
    "PiecewiseConstant1D",
    "Blob",
    "SeparatedBlobs",
    "SeparationCertificate",
    "two_bump",
    "sample",
    "true_level_components",
    "separation_certificate",
    "sup_on_interval",
]

_MASS_TOL = 1e-9
# relative shave applied so certificate inequalities hold strictly rather
# than with equality in exact arithmetic
_STRICT_MARGIN = 1e-9


@dataclass(frozen=True)
class PiecewiseConstant1D:
    """Density on [0, W] that is constant on consecutive segments.

    ``segments`` is a sequence of (width, density) pairs laid left to right
    starting at 0.  Total mass must be 1 within 1e-9.  Pointwise evaluation
    is upper semicontinuous: at a boundary between two segments the larger
    of the two densities is reported, which makes level sets closed.
    """

    segments: tuple[tuple[float, float], ...]

    def __post_init__(self):
        segs = tuple((float(w), float(rho)) for w, rho in self.segments)
        if not segs:
            raise ValueError("need at least one segment")
        for w, rho in segs:
            if not (w > 0):
                raise ValueError(f"segment widths must be positive, got {w}")
            if not (rho >= 0):
                raise ValueError(f"densities must be nonnegative, got {rho}")
        mass = sum(w * rho for w, rho in segs)
        if abs(mass - 1.0) > _MASS_TOL:
            raise ValueError(f"total mass must be 1 within {_MASS_TOL}, got {mass}")
        object.__setattr__(self, "segments", segs)
        bounds = np.concatenate([[0.0], np.cumsum([w for w, _ in segs])])
        object.__setattr__(self, "_bounds", tuple(float(b) for b in bounds))

    @property
    def boundaries(self) -> np.ndarray:
        """Segment boundary coordinates, 0 through the support width."""
        return np.array(self._bounds)

    @property
    def support_width(self) -> float:
        return float(sum(w for w, _ in self.segments))

    @property
    def masses(self) -> np.ndarray:
        return np.array([w * rho for w, rho in self.segments])

    def value_at(self, x: float) -> float:
        """Density at x (upper semicontinuous at segment boundaries)."""
        x = float(x)
        bounds = self._bounds
        if x < bounds[0] or x > bounds[-1]:
            raise ValueError(f"{x} lies outside the support [0, {bounds[-1]}]")
        j = min(bisect_right(bounds, x) - 1, len(self.segments) - 1)
        val = self.segments[j][1]
        if j > 0 and x == bounds[j]:
            val = max(val, self.segments[j - 1][1])
        return val


@dataclass(frozen=True)
class Blob:
    """A uniform-density ball: center, radius, density."""

    center: tuple[float, ...]
    radius: float
    density: float

    def __post_init__(self):
        c = tuple(float(v) for v in self.center)
        if not c:
            raise ValueError("center needs at least one coordinate")
        if not (self.radius > 0):
            raise ValueError(f"blob radius must be positive, got {self.radius}")
        if not (self.density > 0):
            raise ValueError(f"blob density must be positive, got {self.density}")
        object.__setattr__(self, "center", c)

    @property
    def d(self) -> int:
        return len(self.center)

    def mass(self) -> float:
        return self.density * unit_ball_volume(self.d) * self.radius ** self.d


@dataclass(frozen=True)
class SeparatedBlobs:
    """Disjoint uniform balls in R^d with hand-certified separation.

    ``ground_truth`` carries conservative certificate values (for example
    sigma, eps, lam) chosen by the constructor of the fixture; the class only
    validates geometry: supports pairwise disjoint with gap at least
    2 * ground_truth["sigma"], total mass 1.
    """

    blobs: tuple[Blob, ...]
    ground_truth: dict

    def __post_init__(self):
        blobs = tuple(self.blobs)
        if len(blobs) < 1:
            raise ValueError("need at least one blob")
        d = blobs[0].d
        for b in blobs:
            if b.d != d:
                raise ValueError("all blobs must share one dimension")
        mass = sum(b.mass() for b in blobs)
        if abs(mass - 1.0) > _MASS_TOL:
            raise ValueError(f"total mass must be 1 within {_MASS_TOL}, got {mass}")
        sigma = float(self.ground_truth.get("sigma", 0.0))
        for i in range(len(blobs)):
            for j in range(i + 1, len(blobs)):
                ci = np.array(blobs[i].center)
                cj = np.array(blobs[j].center)
                gap = float(np.linalg.norm(ci - cj)) - blobs[i].radius - blobs[j].radius
                if gap < 2.0 * sigma:
                    raise ValueError(
                        f"blobs {i} and {j} leave gap {gap}, below the stated 2*sigma")
        object.__setattr__(self, "blobs", blobs)

    @property
    def d(self) -> int:
        return self.blobs[0].d


Density = Union[PiecewiseConstant1D, SeparatedBlobs]


def two_bump(lam: float, big_lambda: float) -> PiecewiseConstant1D:
    """Two dense bumps bridged by a shallow middle, all of width 1/(lam + 2*big_lambda).

    Density profile [big_lambda, lam, big_lambda]; the widths make the total
    mass exactly 1.
    """
    lam = float(lam)
    big_lambda = float(big_lambda)
    if not (lam > 0):
        raise ValueError(f"bridge density must be positive, got {lam}")
    if not (big_lambda > lam):
        raise ValueError(
            f"bump density must exceed bridge density, got {big_lambda} <= {lam}")
    width = 1.0 / (lam + 2.0 * big_lambda)
    return PiecewiseConstant1D(segments=(
        (width, big_lambda),
        (width, lam),
        (width, big_lambda),
    ))


def sample(density: Density, n: int, seed) -> PointSet:
    """Draw n i.i.d. points from a synthetic density, deterministically per seed."""
    n = operator.index(n)
    if n < 1:
        raise ValueError(f"need at least one sample, got {n}")
    rng = np.random.default_rng(seed)
    if isinstance(density, PiecewiseConstant1D):
        return _sample_piecewise(density, n, rng)
    if isinstance(density, SeparatedBlobs):
        return _sample_blobs(density, n, rng)
    raise TypeError(f"cannot sample from {type(density).__name__}")


def _sample_piecewise(density: PiecewiseConstant1D, n: int, rng) -> PointSet:
    widths = np.array([w for w, _ in density.segments])
    rhos = np.array([rho for _, rho in density.segments])
    cum = np.concatenate([[0.0], np.cumsum(widths * rhos)])
    cum[-1] = 1.0  # guard the float tail so u < 1 always lands in a segment
    lefts = density.boundaries[:-1]
    u = rng.random(n)
    idx = np.searchsorted(cum, u, side="right") - 1
    idx = np.clip(idx, 0, len(widths) - 1)
    x = lefts[idx] + (u - cum[idx]) / rhos[idx]
    return PointSet(points=x[:, None])


def _sample_blobs(density: SeparatedBlobs, n: int, rng) -> PointSet:
    masses = np.array([b.mass() for b in density.blobs])
    cum = np.concatenate([[0.0], np.cumsum(masses)])
    cum[-1] = 1.0
    u = rng.random(n)
    idx = np.clip(np.searchsorted(cum, u, side="right") - 1, 0, len(masses) - 1)
    d = density.d
    dirs = rng.normal(size=(n, d))
    norms = np.linalg.norm(dirs, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    dirs = dirs / norms
    radial = rng.random(n) ** (1.0 / d)
    pts = np.empty((n, d))
    for i, b in enumerate(density.blobs):
        mask = idx == i
        center = np.array(b.center)
        pts[mask] = center + b.radius * radial[mask, None] * dirs[mask]
    return PointSet(points=pts)


def true_level_components(density: PiecewiseConstant1D, lam: float) -> list[tuple[float, float]]:
    """Closed coordinate intervals forming the level set {f >= lam}.

    At lam = 0 the whole support is one component.  Levels above the maximum
    density give an empty list.
    """
    lam = float(lam)
    if lam < 0:
        raise ValueError(f"level must be nonnegative, got {lam}")
    bounds = density.boundaries
    if lam == 0.0:
        return [(0.0, float(bounds[-1]))]
    out: list[tuple[float, float]] = []
    run_start: Optional[float] = None
    for j, (_, rho) in enumerate(density.segments):
        if rho >= lam:
            if run_start is None:
                run_start = float(bounds[j])
        else:
            if run_start is not None:
                out.append((run_start, float(bounds[j])))
                run_start = None
    if run_start is not None:
        out.append((run_start, float(bounds[-1])))
    return out


@dataclass(frozen=True)
class SeparationCertificate:
    """Analytic witness that two level components are cleanly separated.

    ``a`` and ``a_prime`` are the sigma-interiors of the first two components
    (so their sigma-thickenings are exactly the components), ``separator`` is
    the midpoint of the low-density stretch between them, and ``level`` is
    the infimum density over the thickened sides -- the level whose radius
    the separation experiments probe.
    """

    a: tuple[float, float]
    a_prime: tuple[float, float]
    separator: float
    sigma: float
    eps: float
    level: float


def sup_on_interval(density: PiecewiseConstant1D, lo: float, hi: float) -> float:
    """Pointwise supremum of the density over [lo, hi] (usc convention)."""
    bounds = density.boundaries
    sup = 0.0
    for j, (_, rho) in enumerate(density.segments):
        if bounds[j + 1] >= lo and bounds[j] <= hi:
            sup = max(sup, rho)
    return sup


def _inf_on_component(density: PiecewiseConstant1D, lo: float, hi: float) -> float:
    bounds = density.boundaries
    inf = float("inf")
    for j, (_, rho) in enumerate(density.segments):
        # strict interior overlap: boundary values are the max of neighbors,
        # so only segments with interior intersection drive the infimum
        if bounds[j + 1] > lo and bounds[j] < hi:
            inf = min(inf, rho)
    return inf


def separation_certificate(density: PiecewiseConstant1D, lam: float) -> Optional[SeparationCertificate]:
    """Certificate for the first two components of {f >= lam}, or None.

    sigma is set to half its feasible supremum: pushing sigma to the limit
    collapses the interior sets to points and makes sampling experiments
    vacuous, while half the limit keeps both sides at positive mass.  eps is
    maximal for that sigma up to a 1e-9 relative shave that turns the defining
    inequality strict.
    """
    comps = true_level_components(density, lam)
    if len(comps) < 2:
        return None
    (a1, b1), (a2, b2) = comps[0], comps[1]
    gap_w = a2 - b1
    mid = 0.5 * (b1 + a2)
    sigma_sup = 0.5 * min(gap_w, b1 - a1, b2 - a2)
    sigma = 0.5 * sigma_sup
    level = min(_inf_on_component(density, a1, b1),
                _inf_on_component(density, a2, b2))
    sup_sep = sup_on_interval(density, mid - sigma, mid + sigma)
    if sup_sep >= level:
        return None
    eps = (1.0 - sup_sep / level) * (1.0 - _STRICT_MARGIN)
    return SeparationCertificate(
        a=(a1 + sigma, b1 - sigma),
        a_prime=(a2 + sigma, b2 - sigma),
        separator=mid,
        sigma=sigma,
        eps=eps,
        level=level,
    )
