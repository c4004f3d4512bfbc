import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from slithyp.dynamics import MobiusSelfMap
from slithyp.errors import BasePointNotOnCircle, InvalidParameter, PointOutsideDomain, SingularPoint
from slithyp.hyperbolic import (
    INFINITY,
    BusemannLevel,
    Horocycle,
    busemann_disk,
    cayley,
    cayley_inverse,
    disk_density,
    disk_distance,
    halfplane_density,
    halfplane_distance,
    horocycle_contains,
    horocycle_euclidean,
    horocycle_quotient,
    strip_density,
)

radius = st.floats(0.0, 0.99)
angle = st.floats(0.0, 2 * math.pi)
disk_pt = st.builds(lambda r, t: r * complex(math.cos(t), math.sin(t)), radius, angle)
circle_pt = st.builds(lambda t: complex(math.cos(t), math.sin(t)), angle)


# ------------------------------------------------------------ densities

def test_disk_density_examples():
    assert disk_density(0) == 1.0
    assert disk_density(0.5) == pytest.approx(4 / 3, rel=1e-15)
    assert disk_density(0.9j) == pytest.approx(1 / (1 - 0.81), rel=1e-14)
    assert disk_density(0.9j) == pytest.approx(5.263158, abs=1e-6)


def test_disk_density_outside():
    with pytest.raises(PointOutsideDomain):
        disk_density(1.0)
    with pytest.raises(PointOutsideDomain):
        disk_density(np.array([0.1, 2j]))


def test_halfplane_density_examples():
    assert halfplane_density(1) == 0.5
    assert halfplane_density(0.25 + 7j) == 2.0
    assert halfplane_density(10) == pytest.approx(0.05, rel=1e-15)
    with pytest.raises(PointOutsideDomain):
        halfplane_density(-1 + 1j)


def test_strip_density_examples():
    assert strip_density(1j * math.pi / 2, 0, math.pi) == pytest.approx(0.5, rel=1e-15)
    assert strip_density(3 + 1j * math.pi / 2, 0, math.pi) == pytest.approx(0.5, rel=1e-15)
    assert strip_density(0.5j, 0, 1) == pytest.approx(math.pi / 2, rel=1e-15)
    with pytest.raises(PointOutsideDomain):
        strip_density(2j, 0, 1)
    with pytest.raises(InvalidParameter):
        strip_density(0.5j, 1, 0)


def test_strip_density_matches_exp_pushforward():
    # exp maps the strip (0, pi) onto the upper half-plane, density 1/(2 Im)
    z = np.array([0.3 + 0.4j, -1 + 2.5j, 2 + 1.0j])
    w = np.exp(z)
    pulled = np.abs(w) / (2 * w.imag)
    assert np.allclose(strip_density(z, 0, math.pi), pulled, rtol=1e-14)


# ------------------------------------------------------------ distances

def test_disk_distance_examples():
    assert disk_distance(0, 0) == 0
    assert disk_distance(0, 0.5) == pytest.approx(0.5 * math.log(3), rel=1e-15)
    q, _ = quad(lambda t: 1 / (1 - t * t), 0, 0.5, epsabs=1e-13)
    assert disk_distance(0, 0.5) == pytest.approx(q, abs=1e-10)
    assert disk_distance(0.3, -0.3) == pytest.approx(math.atanh(0.6 / 1.09), rel=1e-14)
    # additivity along the diameter through +-0.3
    assert disk_distance(0.3, -0.3) == pytest.approx(2 * math.atanh(0.3), rel=1e-14)
    q, _ = quad(lambda t: 1 / (1 - t * t), -0.3, 0.3, epsabs=1e-13)
    assert disk_distance(0.3, -0.3) == pytest.approx(q, abs=1e-10)


def test_halfplane_distance_examples():
    assert halfplane_distance(1, 1) == 0
    assert halfplane_distance(1, math.e ** 2) == pytest.approx(1.0, rel=1e-15)
    q, _ = quad(lambda t: 1 / (2 * t), 1, math.e ** 2)
    assert halfplane_distance(1, math.e ** 2) == pytest.approx(q, rel=1e-12)
    assert halfplane_distance(1, 1 + 1j) == pytest.approx(math.atanh(1 / math.sqrt(5)), rel=1e-14)
    assert halfplane_distance(1, 1 + 1j) == pytest.approx(0.481212, abs=1e-6)


@pytest.mark.parametrize("r", [0.1, 0.3, 0.5, 0.7, 0.9, 0.99])
def test_radial_quadrature_matches_arctanh(r):
    q, _ = quad(disk_density, 0, r, epsabs=1e-13, epsrel=1e-13)
    assert q == pytest.approx(math.atanh(r), abs=1e-8)
    assert disk_distance(0, r) == pytest.approx(math.atanh(r), rel=1e-13)


def test_disk_distance_near_boundary_is_stable():
    # 1 - |z| = 1e-12: the naive arctanh form loses all digits
    z, w = 1 - 1e-12, 1 - 2e-12
    expected = 0.5 * math.log(2.0)  # distance along the radius is 1/2 ln ratio of (1-r)
    assert disk_distance(z, w) == pytest.approx(expected, rel=1e-4)


@given(disk_pt, disk_pt)
def test_disk_distance_symmetric_and_nonnegative(z, w):
    d = disk_distance(z, w)
    assert d >= 0
    assert d == pytest.approx(disk_distance(w, z), rel=1e-12, abs=1e-15)
    if z == w:
        assert d == 0


@given(disk_pt, disk_pt, disk_pt)
def test_disk_distance_triangle(a, b, c):
    assert disk_distance(a, c) <= disk_distance(a, b) + disk_distance(b, c) + 1e-12


@given(disk_pt, disk_pt, disk_pt, st.floats(0.0, 0.9))
def test_disk_distance_mobius_invariant(z, w, a, s):
    phi = MobiusSelfMap.disk(1.0, a * s, normalize=True)
    d0 = disk_distance(z, w)
    d1 = disk_distance(phi(z), phi(w))
    assert d1 == pytest.approx(d0, rel=1e-10, abs=1e-12)


@given(disk_pt, disk_pt, circle_pt)
def test_halfplane_distance_is_cayley_pullback(z, w, sigma):
    hz, hw = cayley(sigma, z), cayley(sigma, w)
    assert halfplane_distance(hz, hw) == pytest.approx(disk_distance(z, w), rel=1e-9, abs=1e-12)


# ------------------------------------------------------------ horocycles

def test_horocycle_euclidean_examples():
    c, r = horocycle_euclidean(Horocycle(1, 1))
    assert (c, r) == (0.5, 0.5)
    c, r = horocycle_euclidean(Horocycle(1j, 3))
    assert c == pytest.approx(0.25j) and r == 0.75
    c, r = horocycle_euclidean(Horocycle(1, 1e-6))
    assert abs(c - 1) < 1.1e-6 and r == pytest.approx(1e-6, rel=1e-5)


def test_horocycle_sigma_i_membership_agreement():
    rng = np.random.default_rng(5)
    z = np.sqrt(rng.random(10**5)) * np.exp(2j * np.pi * rng.random(10**5)) * 0.999999
    h = Horocycle(1j, 3)
    c, r = horocycle_euclidean(h)
    assert np.array_equal(horocycle_contains(h, z), np.abs(z - c) < r)


def test_horocycle_contains_examples():
    assert horocycle_contains(Horocycle(1, 2), 0) is True
    assert horocycle_contains(Horocycle(1, 0.5), 0) is False
    assert horocycle_quotient(1, 0.5) == pytest.approx(1 / 3)
    assert horocycle_contains(Horocycle(1, 1), 0.5) is True


def test_horocycle_validation():
    with pytest.raises(BasePointNotOnCircle):
        Horocycle(0.5, 1)
    with pytest.raises(InvalidParameter):
        Horocycle(1, 0)
    with pytest.raises(PointOutsideDomain):
        horocycle_contains(Horocycle(1, 1), 1.5)


def test_horocycle_boundary_points_lie_on_circle():
    h = Horocycle(np.exp(0.7j), 2.0)
    c, r = horocycle_euclidean(h)
    p = h.boundary_points(16)
    assert np.allclose(np.abs(p - c), r, atol=1e-15)
    # first point is diametrically opposite the tangency point
    assert abs(p[0] - (c - r * h.base)) < 1e-15


def test_busemann_examples():
    assert busemann_disk(1, 0) == 0
    assert busemann_disk(1, 0.5) == pytest.approx(-0.5 * math.log(3), rel=1e-14)
    assert busemann_disk(1, -0.5) == pytest.approx(0.5 * math.log(3), rel=1e-14)
    w = 1 - 1e-8
    for z in (0.5, -0.5):
        fd = disk_distance(z, w) - disk_distance(0, w)
        assert fd == pytest.approx(busemann_disk(1, z), abs=1e-6)


def test_busemann_validation():
    with pytest.raises(BasePointNotOnCircle):
        busemann_disk(1.1, 0)
    with pytest.raises(PointOutsideDomain):
        busemann_disk(1, 1.0)


@given(disk_pt, circle_pt, st.floats(-3, 3))
def test_busemann_horocycle_duality(z, sigma, M):
    h = Horocycle.from_level(sigma, M)
    q = horocycle_quotient(sigma, z)
    if abs(q - h.radius_param) < 1e-9 * h.radius_param:
        return  # rounding boundary of the two formulas
    assert horocycle_contains(h, z) == (busemann_disk(sigma, z) < 0.5 * math.log(h.radius_param))


def test_busemann_level_rebasing():
    # a ray from p: level M of its Busemann function is a level of the origin ray, shifted
    lev = BusemannLevel(0.3 + 0.2j, 1j, 0.4)
    h = lev.horocycle()
    z = np.array([0.1 + 0.8j, 0.6j, -0.2 + 0.9j])
    b_p = busemann_disk(1j, z) - busemann_disk(1j, 0.3 + 0.2j)
    assert np.all(np.abs(b_p - 0.4) > 1e-6)
    assert np.array_equal(horocycle_contains(h, z), b_p < 0.4)
    assert BusemannLevel(0, 1, 0.25).horocycle().radius_param == pytest.approx(math.exp(0.5))


# ------------------------------------------------------------ Cayley

def test_cayley_examples():
    assert cayley(1, 0) == 1
    assert cayley(1, 1 / 3) == pytest.approx(2.0, rel=1e-15)
    assert cayley(1j, 0) == 1
    with pytest.raises(SingularPoint):
        cayley(1, 1)
    assert cayley_inverse(1j, INFINITY) == 1j


def test_cayley_horocycle_image():
    rng = np.random.default_rng(6)
    h = Horocycle(1, 2)
    c, r = horocycle_euclidean(h)
    z = c + r * np.sqrt(rng.random(10**4)) * np.exp(2j * np.pi * rng.random(10**4))
    z = z[horocycle_contains(h, z)]
    assert np.all(cayley(1, z).real > 1 / 2)


@given(disk_pt, circle_pt)
def test_cayley_round_trip(z, sigma):
    w = cayley(sigma, z)
    assert w.real > 0
    assert abs(cayley_inverse(sigma, w) - z) < 1e-9
