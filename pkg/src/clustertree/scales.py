"""Radius/level conversions tying graph scale to density level.

All logarithms here are natural logs.  The deviation slack is controlled by a
single constant ``c_delta``; setting it to zero gives the "plug-in" scale in
which the radius-of-level and level-of-radius maps are exact inverses of each
other, which the identity tests rely on.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass

from .geometry import unit_ball_volume

__all__ = [
    "ScaleParams",
    "upper_mass_threshold",
    "lower_mass_threshold",
    "r_of_lambda",
    "lambda_tilde",
    "r_floor",
    "sample_size_bound",
    "k_min_knn",
]

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class ScaleParams:
    """Sample size, neighbor count, dimension and slack knobs in one place."""

    n: int
    k: int
    d: int
    alpha: float = SQRT2
    delta: float = 0.1
    c_delta: float = 0.0
    eps_tilde: float = 0.0

    def __post_init__(self):
        n = operator.index(self.n)
        k = operator.index(self.k)
        d = operator.index(self.d)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "d", d)
        if not (1 <= k <= n):
            raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
        if d < 1:
            raise ValueError(f"dimension must be positive, got {d}")
        if not (self.alpha > 0):
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not (0 < self.delta < 1):
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if not (self.c_delta >= 0):
            raise ValueError(f"c_delta must be nonnegative, got {self.c_delta}")
        if not (self.eps_tilde >= 0):
            raise ValueError(f"eps_tilde must be nonnegative, got {self.eps_tilde}")

    @classmethod
    def from_confidence(cls, n, k, d, *, alpha=SQRT2, delta=0.1, c_0=1.0,
                        eps_tilde=0.0) -> "ScaleParams":
        """Derive ``c_delta = 2 * c_0 * ln(2/delta)`` from a confidence level."""
        if not (c_0 >= 0):
            raise ValueError(f"c_0 must be nonnegative, got {c_0}")
        c_delta = 2.0 * c_0 * math.log(2.0 / delta)
        return cls(n=n, k=k, d=d, alpha=alpha, delta=delta,
                   c_delta=c_delta, eps_tilde=eps_tilde)

    @property
    def ball_volume(self) -> float:
        return unit_ball_volume(self.d)


def _deviation(p: ScaleParams) -> float:
    """The slack term (c_delta / n) * sqrt(k * d * ln n)."""
    return (p.c_delta / p.n) * math.sqrt(p.k * p.d * math.log(p.n))


def upper_mass_threshold(p: ScaleParams) -> float:
    """k/n plus the deviation slack."""
    return p.k / p.n + _deviation(p)


def lower_mass_threshold(p: ScaleParams) -> float:
    """k/n minus the deviation slack.  May be negative for aggressive slack."""
    return p.k / p.n - _deviation(p)


def r_of_lambda(lam: float, p: ScaleParams) -> float:
    """Radius at which balls of mass ``upper_mass_threshold`` sit at level lam.

    Solves v_d * r^d * lam = upper_mass_threshold(p) for r.  Strictly
    decreasing in lam.
    """
    if not (lam > 0):
        raise ValueError(f"level must be positive, got {lam}")
    return (upper_mass_threshold(p) / (p.ball_volume * lam)) ** (1.0 / p.d)


def lambda_tilde(r: float, p: ScaleParams) -> float:
    """Level associated with radius r for the pruning lookup.

    (1 / (v_d r^d)) * lower_mass_threshold(p) - eps_tilde; can be negative,
    which callers clamp to zero (meaning: look up at the root level).
    """
    if not (r > 0):
        raise ValueError(f"radius must be positive, got {r}")
    return lower_mass_threshold(p) / (p.ball_volume * r ** p.d) - p.eps_tilde


def r_floor(big_lambda: float, p: ScaleParams) -> float:
    """Least radius the sweep meaningfully probes under density bound big_lambda.

    (k / (2 n v_d big_lambda))^(1/d).  For every level lam <= big_lambda,
    r_of_lambda(lam, p) >= r_floor(big_lambda, p).
    """
    if not (big_lambda > 0):
        raise ValueError(f"density bound must be positive, got {big_lambda}")
    return (p.k / (2.0 * p.n * p.ball_volume * big_lambda)) ** (1.0 / p.d)


def sample_size_bound(sigma: float, lam: float, eps: float, p: ScaleParams) -> float:
    """Sample size sufficient for separation/connectedness at the given scales.

    k / (v_d (sigma/2)^d lam) * (1 + eps/2).  ``sigma`` is the separation
    thickness, ``lam`` the cluster level, ``eps`` the separation strength.
    """
    if not (sigma > 0):
        raise ValueError(f"sigma must be positive, got {sigma}")
    if not (lam > 0):
        raise ValueError(f"level must be positive, got {lam}")
    if not (0 < eps < 1):
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    return p.k / (p.ball_volume * (sigma / 2.0) ** p.d * lam) * (1.0 + eps / 2.0)


def k_min_knn(big_lambda: float, lam: float, p: ScaleParams, c: float = 1.0) -> float:
    """Neighbor count needed by the k-NN graph sweep at level lam.

    (big_lambda / lam) * c * d * ln(n) * ln(1/delta).  ``big_lambda`` is a
    sup bound on the density; the ratio is the price of connectivity at low
    levels.  ``c`` is an absolute constant left free by the analysis.
    """
    if not (lam > 0):
        raise ValueError(f"level must be positive, got {lam}")
    if big_lambda < lam:
        raise ValueError(f"density bound {big_lambda} below level {lam}")
    if not (c > 0):
        raise ValueError(f"constant must be positive, got {c}")
    return (big_lambda / lam) * c * p.d * math.log(p.n) * math.log(1.0 / p.delta)
