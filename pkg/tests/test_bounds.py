import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from slithyp.bounds import (
    BoundPair,
    ConstantFiber,
    GapFiber,
    GridSpec,
    corridor_lower_bound,
    curve_length_bounds,
    distance_bounds,
    distance_lower,
    distance_upper,
    lemma42_upper,
    quasihyperbolic_length,
    strip_distance,
    two_slit_distance,
)
from slithyp.conformal import conformal_distance
from slithyp.domains import (
    RightHalfPlane,
    ToothSequence,
    UnitDisk,
    make_comb,
    make_petersen,
    petersen_eps,
    petersen_log_y,
    petersen_c,
    petersen_x,
)
from slithyp.errors import (CurveExitsDomain, InvalidInterval, InvalidParameter, PointOutsideDomain,
                            PointsDisconnectedAtResolution)
from slithyp.hyperbolic import disk_distance, halfplane_distance


# ----------------------------------------------------- curve_length_bounds

def test_disk_segment_bounds():
    bp = curve_length_bounds(UnitDisk(), [0, 0.9])
    assert bp.upper == pytest.approx(math.log(10), abs=1e-8)
    assert bp.lower == pytest.approx(math.log(10) / 4, abs=1e-8)
    assert bp.upper == pytest.approx(2.302585, abs=1e-6)
    assert bp.lower == pytest.approx(0.575646, abs=1e-6)
    assert math.atanh(0.9) in bp
    assert 1.472219 in bp


def test_single_point_polyline():
    bp = curve_length_bounds(make_comb(N=2), [0.5 + 0.1j])
    assert (bp.lower, bp.upper) == (0.0, 0.0)


def test_curve_must_stay_inside():
    with pytest.raises(CurveExitsDomain):
        curve_length_bounds(make_comb(N=2), [0.5 + 0.1j, -0.5 + 0.1j, -0.5 + 0.4j])
    with pytest.raises(CurveExitsDomain):
        curve_length_bounds(UnitDisk(), [0, 1.2])


def test_boundpair_invariant():
    with pytest.raises(InvalidParameter):
        BoundPair(2.0, 1.0)
    assert BoundPair(0.0, math.inf).upper == math.inf


def test_quadrature_against_scipy():
    d = make_comb(N=4)
    v = np.array([0.5 + 0.1j, 0.2 + 0.6j, -0.4 + 0.7j])
    Q, err = quasihyperbolic_length(d, v)
    ref = 0.0
    for a, b in zip(v[:-1], v[1:]):
        f = lambda s: abs(b - a) / d.dist_to_boundary(a + s * (b - a))
        ref += quad(f, 0, 1, epsabs=1e-13, epsrel=1e-12, limit=400)[0]
    assert Q == pytest.approx(ref, rel=1e-8)
    assert err < 1e-8 * Q


def disk_geodesic(z, w, segments=64):
    T = lambda x: (x - z) / (1 - np.conj(z) * x)
    Ti = lambda y: (y + z) / (1 + np.conj(z) * y)
    tw = T(w)
    rho = np.tanh(np.linspace(0, 1, segments + 1) * np.arctanh(abs(tw)))
    v = Ti(rho * tw / abs(tw))
    v[0], v[-1] = z, w
    return v


pt = st.builds(lambda r, t: r * complex(math.cos(t), math.sin(t)), st.floats(0, 0.95), st.floats(0, 2 * math.pi))


@given(pt, pt)
@settings(max_examples=40, deadline=None)
def test_disk_sandwich_and_factor_four(z, w):
    if abs(z - w) < 1e-9:
        return
    bp = curve_length_bounds(UnitDisk(), disk_geodesic(z, w))
    assert bp.lower <= disk_distance(z, w) <= bp.upper
    assert bp.upper / bp.lower == pytest.approx(4.0, rel=1e-6)


def test_halfplane_sandwich():
    rng = np.random.default_rng(2)
    H = RightHalfPlane()
    for _ in range(20):
        a, b = rng.uniform(0.1, 3, 2) + 1j * rng.uniform(-2, 2, 2)
        # the geodesic is a semicircle centered on the imaginary axis
        c = 1j * ((abs(b) ** 2 - abs(a) ** 2) / (2 * (b.imag - a.imag)))
        r = abs(a - c)
        ta, tb = np.angle((a - c) / r), np.angle((b - c) / r)
        v = c + r * np.exp(1j * np.linspace(ta, tb, 257))
        bp = curve_length_bounds(H, v)
        assert bp.lower <= halfplane_distance(a, b) <= bp.upper


# ----------------------------------------------------- distance_upper

def test_distance_upper_comb_example():
    d = make_comb(N=4)
    u = distance_upper(d, 0.5, 0.25)
    seg = curve_length_bounds(d, [0.5, 0.25])
    assert math.isfinite(u)
    assert u >= seg.lower
    assert u >= 0.25 * math.log(2)  # j-metric floor: ln(1 + 0.25/0.25)/4


def test_distance_upper_same_point():
    assert distance_upper(make_comb(N=4), 0.3 + 0.2j, 0.3 + 0.2j) == 0.0


def test_distance_upper_petersen_segment():
    d = make_petersen(N=3)
    u = distance_upper(d, 1 + 0j, 2 + 0j)
    seg = curve_length_bounds(d, [1, 2])
    assert u <= seg.upper
    assert seg.upper <= math.log(2) + 1.1  # ln 2 plus the correction near the gap at x_0 = 1


def test_distance_upper_routes_around_slits():
    d = make_comb(N=2)
    z, w = -0.5 + 0.1j, -0.5 + 0.4j  # separated by the tooth at 1/4
    u = distance_upper(d, z, w)
    # any path must reach past the tooth tip at 0, so it is much longer than the gap
    assert u > distance_lower(d, z, w)
    assert u > 2.0


def test_distance_upper_monotone_in_resolution():
    d = make_comb(N=4)
    rng = np.random.default_rng(11)
    pairs = 0
    while pairs < 10:
        z, w = rng.uniform(-0.95, 0.95, 2) + 1j * rng.uniform(-0.95, 0.95, 2)
        # keep clear of strips narrower than the finest grid spacing
        if not (d.contains(z) and d.contains(w)) or min(d.dist_to_boundary(z), d.dist_to_boundary(w)) < 0.13:
            continue
        pairs += 1
        g = GridSpec(0.25, 0, (-1, 1, -1, 1))
        vals = []
        for _ in range(3):
            try:
                vals.append(distance_upper(d, z, w, g))
            except PointsDisconnectedAtResolution:
                vals.append(math.inf)
            g = g.refine()
        assert vals[0] >= vals[1] >= vals[2]
        assert math.isfinite(vals[2])


def test_disconnected_at_coarse_resolution():
    d = make_comb(N=4)
    with pytest.raises(PointsDisconnectedAtResolution):
        distance_upper(d, -0.5 + 0.09j, -0.5 + 0.2j, GridSpec(1.0, 0, (-1, 1, -1, 1)))


def test_distance_upper_is_above_true_distance_in_disk_like_square():
    # the square is close to a disk; compare with the conformal distance of a fitted map
    from slithyp.conformal import fit_map
    from slithyp.domains import SlitDomain
    d = SlitDomain("square")
    m = fit_map(d, 128, 0j)
    for z, w in [(0, 0.5), (0.2j, -0.6 + 0.3j), (0.7 + 0.7j, -0.7 - 0.7j)]:
        k = conformal_distance(m, z, w)
        assert distance_lower(d, z, w) <= k <= distance_upper(d, z, w)


# ----------------------------------------------------- corridors

def test_petersen_gap_corridor():
    j = 2
    x, eps, ly = float(petersen_x(j)), float(petersen_eps(j)), float(petersen_log_y(j))
    lb = corridor_lower_bound(make_petersen(), x - eps, x, GapFiber(x, log_y=ly))
    # exact value 1/4 asinh(eps/y); its leading term is 1/4 ln(2 eps/y) = 1/4 (3^j - ln 2),
    # off by about (y/eps)^2 / 16
    assert lb == pytest.approx(0.25 * math.asinh(eps / math.exp(ly)), rel=1e-14)
    assert lb == pytest.approx(0.25 * (3 ** j - math.log(2)), abs=(math.exp(ly) / eps) ** 2 / 8)
    assert lb == pytest.approx(2.076713, abs=1e-6)


def test_petersen_transit_corridor():
    j = 2
    c, x1 = float(petersen_c(j)), float(petersen_x(j + 1))
    lb = corridor_lower_bound(make_petersen(), x1, c, GapFiber(x1, log_y=float(petersen_log_y(j + 1))))
    assert lb == pytest.approx(3 ** (j + 1) / 4, rel=1e-9)
    assert lb == pytest.approx(6.75, rel=1e-9)


def test_deep_gap_corridor_in_log_space():
    j = 40
    x, eps = float(petersen_x(j)), float(petersen_eps(j))
    lb = corridor_lower_bound(make_petersen(), x - eps, x, GapFiber(x, log_y=float(petersen_log_y(j))))
    assert lb == pytest.approx(0.25 * (3.0 ** j - math.log(2)), rel=1e-12)


def test_comb_strip_corridor():
    eps5 = ToothSequence().half_width(5)
    lb = corridor_lower_bound(make_comb(), -0.5, -0.02, ConstantFiber(eps5))
    assert lb == pytest.approx(15.36, rel=1e-14)


def test_corridor_with_plain_callable():
    f = GapFiber(0.25, y=1e-3)
    lb = corridor_lower_bound(make_petersen(), 0.1, 0.25, lambda t: float(f(t)))
    assert lb == pytest.approx(corridor_lower_bound(make_petersen(), 0.1, 0.25, f), rel=1e-10)


def test_corridor_interval_check():
    with pytest.raises(InvalidInterval):
        corridor_lower_bound(make_comb(), 0.3, 0.3, ConstantFiber(0.1))


# ----------------------------------------------------- Lemma 4.2 bound

def test_lemma42_examples():
    assert lemma42_upper(0.05, 0.1, 0.0, 1.0) == pytest.approx(0.5 + math.log(10 + math.sqrt(101)), rel=1e-15)
    assert lemma42_upper(0.05, 0.1, 0.0, 1.0) == pytest.approx(3.498223, abs=1e-6)
    assert lemma42_upper(0.0, 0.3, 0.1, 0.2) == pytest.approx(math.asinh(1.0), rel=1e-15)
    assert lemma42_upper(0.0, 0.3, 0.1, 0.2) == pytest.approx(0.881374, abs=1e-6)


def test_lemma42_pole():
    with pytest.raises(InvalidParameter):
        lemma42_upper(0.1, 0.1, 0.1, 1.0)
    with pytest.raises(InvalidParameter):
        lemma42_upper(0.1, 0.1, -0.2, 1.0)
    assert lemma42_upper(0.1, 0.1, 0.0999, 1.0) > 100


def test_lemma42_dominates_conformal_distance(comb4_map):
    seq = ToothSequence()
    r0, h = 0.5, 0.3
    for n in (1, 2, 3):
        eps = seq.half_width(n)
        mid = seq.term(n + 1) + eps
        for theta in (-eps / 2, 0.0, eps / 2):
            q = complex(-h, mid + theta)
            k = conformal_distance(comb4_map, q, complex(r0, q.imag))
            assert k <= lemma42_upper(h, eps, theta, r0) + 1e-3


def test_conformal_distance_inside_bounds(comb4_map):
    d = make_comb(N=4)
    rng = np.random.default_rng(4)
    z = 0.85 * np.sqrt(rng.random(12)) * np.exp(2j * np.pi * rng.random(12))
    w = comb4_map.forward(z)
    for a, b in zip(w[::2], w[1::2]):
        k = conformal_distance(comb4_map, a, b)
        assert k in distance_bounds(d, a, b)
        assert k <= curve_length_bounds(d, [a, b]).upper if d.segment_clear(a, b) else True


# ------------------------------------------------- strips and two-slit gaps

def test_strip_distance_on_the_center_line():
    # the strip of width 2 eps is exp-equivalent to a half-plane: distance pi dx/(4 eps)
    for eps, dx in [(0.125, 0.48), (1.0, 3.0), (1e-3, 0.5)]:
        assert strip_distance(-0.5 + 2j, -0.5 + dx + 2j, 2.0, eps) == pytest.approx(math.pi * dx / (4 * eps), rel=1e-12)
    assert strip_distance(0.3j, 0.3j, 0.0, 1.0) == 0.0


@given(st.floats(-3, 3), st.floats(-0.99, 0.99), st.floats(-3, 3), st.floats(-0.99, 0.99), st.floats(1e-3, 10))
def test_gap_distance_is_below_strip_distance(x1, t1, x2, t2, eps):
    z, w = complex(x1 * eps, t1 * eps), complex(x2 * eps, t2 * eps)
    kg, ks = two_slit_distance(z, w, 0.0, eps), strip_distance(z, w, 0.0, eps)
    assert kg <= ks * (1 + 1e-12) + 1e-12
    # scaling and translation leave the distance unchanged
    assert two_slit_distance(3 * z + 1j, 3 * w + 1j, 1.0, 3 * eps) == pytest.approx(kg, rel=1e-9, abs=1e-12)
    assert two_slit_distance(w, z, 0.0, eps) == pytest.approx(kg, rel=1e-12, abs=1e-15)


def test_gap_density_obeys_koebe(rng):
    # hyperbolic density between 1/(4 dist) and 1/dist, dist to the two half-lines
    eps = 0.2
    for _ in range(300):
        z = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
        if z.real <= 0 and abs(abs(z.imag) - eps) < 1e-3:
            continue
        dist = min(math.hypot(max(z.real, 0.0), z.imag - s * eps) for s in (1, -1))
        dl = 1e-6 * dist
        lam = two_slit_distance(z, z + dl, 0.0, eps) / dl
        assert 0.25 / dist * (1 - 1e-4) <= lam <= 1 / dist * (1 + 1e-4)


def test_gap_far_field_is_the_slit_plane():
    # far to the right the two teeth look like one half-line: density 1/(4 X)
    # the channel mouth shifts the tip by O(eps log(X/eps))
    eps = 1e-3
    for X in (1.0, 10.0, 100.0):
        dl = 1e-7 * X
        lam = two_slit_distance(X, X + dl, 0.0, eps) / dl
        assert abs(lam * 4 * X - 1) <= eps / X * (1 + math.log(X / eps))
    # deep in the channel the gap is the strip
    assert two_slit_distance(-5, -4.7 + 0.05j, 0.0, 0.1) == pytest.approx(strip_distance(-5, -4.7 + 0.05j, 0.0, 0.1), rel=1e-12)


def test_gap_errors():
    with pytest.raises(PointOutsideDomain):
        two_slit_distance(-0.5 + 0.1j, 0.5, 0.0, 0.1)
    with pytest.raises(PointOutsideDomain):
        strip_distance(0.2j, 0, 0.0, 0.1)
    with pytest.raises(InvalidParameter):
        two_slit_distance(0, 1, 0.0, 0.0)
