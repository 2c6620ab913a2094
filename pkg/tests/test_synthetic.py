import math

import numpy as np
import pytest

from clustertree.geometry import unit_ball_volume
from clustertree.synthetic import (Blob, PiecewiseConstant1D, SeparatedBlobs,
                                   sample, separation_certificate, sup_on_interval,
                                   true_level_components, two_bump)


def test_piecewise_requires_unit_mass():
    with pytest.raises(ValueError):
        PiecewiseConstant1D(segments=((1.0, 0.5),))
    with pytest.raises(ValueError):
        PiecewiseConstant1D(segments=((0.0, 1.0), (1.0, 1.0)))
    with pytest.raises(ValueError):
        PiecewiseConstant1D(segments=())
    PiecewiseConstant1D(segments=((2.0, 0.5),))  # fine


def test_two_bump_geometry():
    d = two_bump(1.0, 33.0)
    widths = [w for w, _ in d.segments]
    assert widths == [1.0 / 67.0] * 3
    assert [rho for _, rho in d.segments] == [33.0, 1.0, 33.0]
    assert d.masses.tolist() == pytest.approx([33 / 67, 1 / 67, 33 / 67], rel=1e-12)
    assert d.support_width == pytest.approx(3.0 / 67.0, rel=1e-12)
    with pytest.raises(ValueError):
        two_bump(2.0, 2.0)
    with pytest.raises(ValueError):
        two_bump(0.0, 4.0)


def test_value_at_is_upper_semicontinuous():
    d = two_bump(1.0, 4.0)
    w = 1.0 / 9.0
    assert d.value_at(0.0) == 4.0
    assert d.value_at(w / 2) == 4.0
    assert d.value_at(w) == 4.0       # boundary takes the larger side
    assert d.value_at(1.5 * w) == 1.0
    assert d.value_at(2 * w) == 4.0
    assert d.value_at(3 * w) == 4.0
    with pytest.raises(ValueError):
        d.value_at(-0.01)
    with pytest.raises(ValueError):
        d.value_at(3 * w + 0.01)


def test_true_level_components():
    d = two_bump(1.0, 4.0)
    w = 1.0 / 9.0
    assert true_level_components(d, 0.0) == [(0.0, 3 * w)]
    assert true_level_components(d, 1.0) == [(0.0, 3 * w)]
    two = true_level_components(d, 4.0)
    assert len(two) == 2
    assert two[0] == pytest.approx((0.0, w))
    assert two[1] == pytest.approx((2 * w, 3 * w))
    assert true_level_components(d, 4.5) == []
    with pytest.raises(ValueError):
        true_level_components(d, -1.0)


def test_sup_on_interval():
    d = two_bump(1.0, 4.0)
    w = 1.0 / 9.0
    assert sup_on_interval(d, 1.2 * w, 1.8 * w) == 1.0
    assert sup_on_interval(d, 0.5 * w, 1.5 * w) == 4.0
    assert sup_on_interval(d, w, 1.5 * w) == 4.0  # touches the bump boundary
    assert sup_on_interval(d, 0.0, 3 * w) == 4.0


def test_certificate_by_hand():
    # profile [2, 1, 2] on widths of 1/5: components [0, .2] and [.4, .6],
    # gap 0.2, so sigma = 0.05 and the separator sits at 0.3
    d = two_bump(1.0, 2.0)
    cert = separation_certificate(d, 2.0)
    assert cert is not None
    assert cert.separator == pytest.approx(0.3, rel=1e-12)
    assert cert.sigma == pytest.approx(0.05, rel=1e-12)
    assert cert.level == 2.0
    assert cert.eps == pytest.approx(0.5, rel=1e-6)
    assert cert.a == pytest.approx((0.05, 0.15), rel=1e-12)
    assert cert.a_prime == pytest.approx((0.45, 0.55), rel=1e-12)
    # thickening the interior sets by sigma recovers the true components
    assert cert.a[0] - cert.sigma == pytest.approx(0.0, abs=1e-15)
    assert cert.a_prime[1] + cert.sigma == pytest.approx(0.6, rel=1e-12)


def test_certificate_absent_when_level_connected():
    d = two_bump(1.0, 4.0)
    assert separation_certificate(d, 1.0) is None   # one component
    assert separation_certificate(d, 5.0) is None   # empty level set


def test_sample_deterministic_and_in_support():
    d = two_bump(1.0, 4.0)
    a = sample(d, 500, 123).points
    b = sample(d, 500, 123).points
    c = sample(d, 500, 124).points
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert a.shape == (500, 1)
    assert a.min() >= 0.0 and a.max() <= d.support_width
    with pytest.raises(ValueError):
        sample(d, 0, 1)


def test_sample_hits_segment_masses():
    # segment frequencies against analytic masses; tolerance is 4 sigma
    # for a binomial with p about 4/9, n = 20000
    d = two_bump(1.0, 4.0)
    x = sample(d, 20000, 7).points[:, 0]
    bounds = d.boundaries
    for j, mass in enumerate(d.masses):
        frac = np.mean((x >= bounds[j]) & (x < bounds[j + 1]))
        sigma = math.sqrt(mass * (1 - mass) / 20000)
        assert abs(frac - mass) < 4 * sigma, (j, frac, mass)


def test_blob_mass_and_validation():
    b = Blob(center=(0.0, 0.0), radius=0.5, density=1.0 / (math.pi * 0.25))
    assert b.mass() == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(ValueError):
        Blob(center=(), radius=1.0, density=1.0)
    with pytest.raises(ValueError):
        Blob(center=(0.0,), radius=0.0, density=1.0)


def blob_pair():
    # two balls of radius 1/4 at distance 1 in the plane, densities chosen
    # to split the mass evenly
    rho = 0.5 / (math.pi * 0.0625)
    return SeparatedBlobs(
        blobs=(Blob((0.0, 0.0), 0.25, rho), Blob((1.0, 0.0), 0.25, rho)),
        ground_truth={"sigma": 0.2, "lam": rho},
    )


def test_separated_blobs_validation():
    blob_pair()  # valid
    rho = 0.5 / (math.pi * 0.0625)
    with pytest.raises(ValueError):  # gap 0.5 below 2*sigma = 0.6
        SeparatedBlobs(
            blobs=(Blob((0.0, 0.0), 0.25, rho), Blob((1.0, 0.0), 0.25, rho)),
            ground_truth={"sigma": 0.3},
        )
    with pytest.raises(ValueError):  # mass 0.5
        SeparatedBlobs(blobs=(Blob((0.0, 0.0), 0.25, rho),), ground_truth={})
    with pytest.raises(ValueError):  # mixed dimensions
        SeparatedBlobs(
            blobs=(Blob((0.0, 0.0), 0.25, rho), Blob((1.0,), 0.25, 2.0)),
            ground_truth={},
        )


def test_sample_blobs_lands_inside():
    sb = blob_pair()
    pts = sample(sb, 2000, 5).points
    assert pts.shape == (2000, 2)
    d0 = np.linalg.norm(pts - [0.0, 0.0], axis=1)
    d1 = np.linalg.norm(pts - [1.0, 0.0], axis=1)
    inside = (d0 <= 0.25 + 1e-12) | (d1 <= 0.25 + 1e-12)
    assert inside.all()
    # both blobs get close to half the points
    n0 = int((d0 <= 0.25 + 1e-12).sum())
    assert abs(n0 - 1000) < 4 * math.sqrt(2000 * 0.25)


def test_unit_ball_volume_consistency_with_blob_mass():
    b = Blob(center=(0.0, 0.0, 0.0), radius=2.0, density=3.0)
    assert b.mass() == pytest.approx(3.0 * unit_ball_volume(3) * 8.0, rel=1e-12)
