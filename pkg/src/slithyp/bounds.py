"""Certified bounds on hyperbolic lengths and distances in slit domains.

On a simply connected domain the hyperbolic density (curvature -4) is
squeezed between ``1/(4 dist)`` and ``1/dist``, where ``dist`` is the
Euclidean distance to the boundary.  Integrating ``1/dist`` along a curve
therefore brackets its hyperbolic length within a factor of four, and any
curve between two points bounds their distance from above.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

from .domains import Polyline
from .errors import (CurveExitsDomain, InvalidInterval, InvalidParameter, PointOutsideDomain,
                     PointsDisconnectedAtResolution, QuadratureNonconvergence)

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)
# weights extrapolating the degree-7 interpolant through the nodes to t = -1, +1
_VINV = np.linalg.inv(np.polynomial.legendre.legvander(_GL_X, 7))
_GL_END = np.stack([((-1.0) ** np.arange(8)) @ _VINV, np.ones(8) @ _VINV])


@dataclass(frozen=True)
class BoundPair:
    """Certified interval ``lower <= value <= upper``."""

    lower: float
    upper: float

    def __post_init__(self):
        if not (0 <= self.lower <= self.upper):
            raise InvalidParameter(f"invalid bound pair ({self.lower}, {self.upper})")

    def __contains__(self, x):
        return self.lower <= x <= self.upper

    def to_dict(self):
        return {"lower": float(self.lower), "upper": float(self.upper)}


# ------------------------------------------------------------ curve lengths

def _gl(a, b, f, ends=False):
    """8-point Gauss-Legendre on each panel ``[a_i, b_i]`` (parameter space).

    With ``ends=True`` also return, per panel, the largest mismatch between
    ``f`` at the panel ends and the node interpolant extrapolated there.  A
    kink of the integrand between an end and the outermost node is invisible
    to the nodes but shows up in this mismatch.
    """
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    t = mid[:, None] + half[:, None] * _GL_X
    ft = f(t)
    val = (ft * _GL_W).sum(axis=1) * half
    if not ends:
        return val
    fe = f(np.stack([a, b], axis=1))
    return val, np.abs(ft @ _GL_END.T - fe).max(axis=1)


def quasihyperbolic_length(d, vertices, panels=4, rtol=1e-8, max_panels=2_000_000):
    """Quasihyperbolic length ``int |dz|/dist`` of a polyline and its error bound.

    Adaptive composite Gauss-Legendre: each panel is compared with the sum
    over its two halves; panels with a large difference are split until the
    summed difference is below ``rtol`` relative.  The returned error is
    twice the summed difference of the accepted panels.
    """
    v = np.asarray(vertices, dtype=complex)
    if v.size < 2:
        return 0.0, 0.0
    A, B = v[:-1], v[1:]
    keep = A != B
    A, B = A[keep], B[keep]
    if A.size == 0:
        return 0.0, 0.0
    L = np.abs(B - A)
    seg = np.repeat(np.arange(A.size), panels)
    lo = np.tile(np.arange(panels) / panels, A.size)
    hi = lo + 1.0 / panels

    def f_for(s):
        def f(t):
            z = A[s][:, None] + t * (B - A)[s][:, None]
            return L[s][:, None] / d.dist_to_boundary(z)
        return f

    total, err_acc = 0.0, 0.0
    pending_val = _gl(lo, hi, f_for(seg))
    for _ in range(64):
        m = 0.5 * (lo + hi)
        f = f_for(seg)
        (left, el), (right, er) = _gl(lo, m, f, True), _gl(m, hi, f, True)
        fine = left + right
        # halves disagreeing with the parent, or hiding a kink next to an end
        diff = np.maximum(np.abs(fine - pending_val), 0.5 * (hi - lo) * np.maximum(el, er))
        est = total + fine.sum()
        budget = rtol * abs(est)
        # accept panels whose share of the error is small enough
        share = (hi - lo) * L[seg] / L.sum()
        ok = diff <= 0.25 * budget * share
        total += fine[ok].sum()
        err_acc += diff[ok].sum()
        if ok.all():
            break
        bad = ~ok
        if 2 * bad.sum() + lo.size > max_panels:
            raise QuadratureNonconvergence("quadrature panel budget exhausted")
        lo, m_b, hi = lo[bad], m[bad], hi[bad]
        seg = seg[bad]
        pending_val = np.concatenate([left[bad], right[bad]])
        lo, hi = np.concatenate([lo, m_b]), np.concatenate([m_b, hi])
        seg = np.concatenate([seg, seg])
    else:
        raise QuadratureNonconvergence("quadrature did not converge")
    err = 2.0 * err_acc
    if err > rtol * total:
        raise QuadratureNonconvergence(f"quadrature error {err:.3g} above tolerance")
    return float(total), float(err)


def _check_curve(d, v):
    if not np.all(d.contains(v)):
        raise CurveExitsDomain("curve vertex outside the domain")
    if hasattr(d, "segment_clear"):
        for a, b in zip(v[:-1], v[1:]):
            if a != b and not d.segment_clear(a, b):
                raise CurveExitsDomain(f"segment {a} -> {b} leaves the domain")


def curve_length_bounds(d, c, panels: int = 4) -> BoundPair:
    """Bounds on the hyperbolic length of a polyline.

    ``lower = Q/4`` and ``upper = Q`` with ``Q`` the quasihyperbolic length,
    each widened by the quadrature error estimate.
    """
    if panels < 1:
        raise InvalidParameter("panels must be >= 1")
    v = c.vertices if isinstance(c, Polyline) else np.atleast_1d(np.asarray(c, dtype=complex))
    _check_curve(d, v)
    Q, err = quasihyperbolic_length(d, v, panels)
    return BoundPair(max(0.0, (Q - err) / 4.0), Q + err)


# --------------------------------------------------------------- grid search

@dataclass(frozen=True)
class GridSpec:
    """Nested square grids: spacing ``h0 / 2**level`` on a fixed lattice.

    ``bbox = (x0, x1, y0, y1)`` limits the nodes; ``origin`` is a lattice
    point.  Grids of increasing level are nested, which makes
    :func:`distance_upper` non-increasing in ``level``.
    """

    h0: float
    level: int = 0
    bbox: tuple | None = None
    origin: complex = 0j

    def __post_init__(self):
        if not (self.h0 > 0 and self.level >= 0):
            raise InvalidParameter("grid needs h0 > 0 and level >= 0")

    @property
    def h(self):
        return self.h0 / 2 ** self.level

    def refine(self):
        return GridSpec(self.h0, self.level + 1, self.bbox, self.origin)


def _edge_upper(d, a, b, min_len, ratio=0.25):
    """Certified upper bound of ``int_[a,b] |dz|/dist`` per segment.

    ``dist`` is 1-Lipschitz, so on a piece of length ``l`` with end
    distances ``da, db`` it stays above ``max(da - s, db - (l - s))``, whose
    reciprocal integrates to ``ln(da/m) + ln(db/m)`` with
    ``m = (da + db - l)/2``.  Pieces longer than ``ratio * min(da, db)``
    are bisected.  The rule depends only on the piece, so bisected edges of
    a refined grid never get a larger bound.  Segments that cannot be
    certified above ``min_len`` get ``inf``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    out = np.zeros(a.size)
    idx = np.arange(a.size)
    pa, pb = a.copy(), b.copy()

    def dist(z):
        inside = np.asarray(d.contains(z))
        r = np.zeros(z.size)
        r[inside] = d.dist_to_boundary(z[inside])
        return r

    da, db = dist(pa), dist(pb)
    while idx.size:
        ln = np.abs(pb - pa)
        dmin = np.minimum(da, db)
        good = (ln <= ratio * dmin) & (dmin > 0)
        m = 0.5 * (da[good] + db[good] - ln[good])
        np.add.at(out, idx[good], np.log(da[good] / m) + np.log(db[good] / m))
        split = ~good & (ln > min_len)
        out[idx[~good & ~split]] = np.inf
        idx, pa, pb, da, db = idx[split], pa[split], pb[split], da[split], db[split]
        live = np.isfinite(out[idx])
        idx, pa, pb, da, db = idx[live], pa[live], pb[live], da[live], db[live]
        mid = 0.5 * (pa + pb)
        dm = dist(mid)
        idx = np.concatenate([idx, idx])
        pa, pb = np.concatenate([pa, mid]), np.concatenate([mid, pb])
        da, db = np.concatenate([da, dm]), np.concatenate([dm, db])
    return out


def _default_grid(d, z, w):
    bb = d.bbox() if hasattr(d, "bbox") else None
    if bb is None:
        xs = [z.real, w.real]
        ys = [z.imag, w.imag]
        span = max(max(xs), max(ys) - min(ys), 1e-3)
        bb = (0.0, max(xs) + span, min(ys) - span, max(ys) + span)
    size = max(bb[1] - bb[0], bb[3] - bb[2])
    return GridSpec(size / 16, 2, tuple(bb))


def distance_upper(d, z, w, grid: GridSpec | None = None) -> float:
    """Upper bound on the hyperbolic distance from a shortest grid path.

    The graph has the in-domain nodes of an 8-connected lattice, the two
    query points, straight connectors from each query point to every visible
    node within ``1.5 h0``, and the direct segment ``[z, w]`` when it lies in
    the domain.  Edge weights are certified upper bounds of ``int 1/dist``
    (see :func:`_edge_upper`); the direct segment also enters with its
    quadrature bound from :func:`quasihyperbolic_length`.
    """
    z, w = complex(z), complex(w)
    if not (d.contains(z) and d.contains(w)):
        raise PointOutsideDomain("both points must lie in the domain")
    if z == w:
        return 0.0
    grid = grid or _default_grid(d, z, w)
    bb = grid.bbox or _default_grid(d, z, w).bbox
    h = grid.h
    o = grid.origin
    ix = np.arange(math.ceil((bb[0] - o.real) / h), math.floor((bb[1] - o.real) / h) + 1)
    iy = np.arange(math.ceil((bb[2] - o.imag) / h), math.floor((bb[3] - o.imag) / h) + 1)
    if ix.size * iy.size > 4_000_000:
        raise InvalidParameter("grid too fine")
    I, J = np.meshgrid(ix, iy, indexing="ij")
    P = o + h * (I + 1j * J)
    inside = np.asarray(d.contains(P))
    node_id = -np.ones(P.shape, dtype=np.int64)
    node_id[inside] = np.arange(inside.sum())
    nodes = P[inside]
    n = nodes.size
    min_len = 1e-9 * max(bb[1] - bb[0], bb[3] - bb[2])
    rows, cols, wts = [], [], []

    def add(ia, ib, pa, pb):
        if ia.size == 0:
            return
        # cheap clearance: the disc of radius dist(mid) about the midpoint
        mid = 0.5 * (pa + pb)
        clear = np.zeros(ia.size, dtype=bool)
        mid_in = np.asarray(d.contains(mid))
        dm = np.zeros(ia.size)
        dm[mid_in] = d.dist_to_boundary(mid[mid_in])
        clear = dm > 0.5 * np.abs(pb - pa)
        for k in np.nonzero(~clear)[0]:
            clear[k] = d.segment_clear(pa[k], pb[k])
        ia, ib, pa, pb = ia[clear], ib[clear], pa[clear], pb[clear]
        wt = _edge_upper(d, pa, pb, min_len)
        fin = np.isfinite(wt)
        rows.append(ia[fin])
        cols.append(ib[fin])
        wts.append(wt[fin])

    nx, ny = node_id.shape
    for di, dj in ((1, 0), (0, 1), (1, 1), (1, -1)):
        ja, jb = (slice(0, ny - dj), slice(dj, ny)) if dj >= 0 else (slice(-dj, ny), slice(0, ny + dj))
        A = node_id[0:nx - di, ja]
        B = node_id[di:nx, jb]
        both = (A >= 0) & (B >= 0)
        ia, ib = A[both], B[both]
        add(ia, ib, nodes[ia], nodes[ib])

    iz, iw = n, n + 1
    r = 1.5 * grid.h0
    for q, iq in ((z, iz), (w, iw)):
        near = np.nonzero(np.abs(nodes - q) <= r)[0]
        add(np.full(near.size, iq), near, np.full(near.size, q), nodes[near])
    add(np.array([iz]), np.array([iw]), np.array([z]), np.array([w]))
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    wts = np.concatenate(wts)
    G = coo_matrix((wts, (rows, cols)), shape=(n + 2, n + 2)).tocsr()
    dist = dijkstra(G, directed=False, indices=iz)
    best = float(dist[iw])
    if d.segment_clear(z, w):
        # the straight segment with its quadrature-certified length
        Q, err = quasihyperbolic_length(d, np.array([z, w]))
        best = min(best, Q + err)
    if not np.isfinite(best):
        raise PointsDisconnectedAtResolution("no grid path between the points; refine the grid")
    return best


def distance_lower(d, z, w) -> float:
    """Lower bound ``j(z, w)/4`` of the hyperbolic distance.

    ``j = ln(1 + |z - w| / min(dist(z), dist(w)))`` never exceeds the
    quasihyperbolic distance in a proper subdomain of the plane, and the
    hyperbolic distance is at least a quarter of that.
    """
    z, w = complex(z), complex(w)
    if not (d.contains(z) and d.contains(w)):
        raise PointOutsideDomain("both points must lie in the domain")
    dz, dw = float(d.dist_to_boundary(z)), float(d.dist_to_boundary(w))
    return 0.25 * math.log1p(abs(z - w) / min(dz, dw))


def distance_bounds(d, z, w, grid: GridSpec | None = None) -> BoundPair:
    """``BoundPair(distance_lower, distance_upper)``."""
    return BoundPair(distance_lower(d, z, w), distance_upper(d, z, w, grid))


# ---------------------------------------------------------------- corridors

@dataclass(frozen=True)
class ConstantFiber:
    """Fiber bound ``t -> eps`` (a strip of half-width ``eps``)."""

    eps: float

    def __call__(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.eps)

    def integral(self, x0, x1):
        return (x1 - x0) / self.eps


@dataclass(frozen=True)
class GapFiber:
    """Fiber bound ``t -> sqrt((t - anchor)^2 + y^2)`` past a slit gap.

    ``log_y`` may be given instead of ``y`` for gaps below double range.
    """

    anchor: float
    y: float | None = None
    log_y: float | None = None

    def __post_init__(self):
        if self.log_y is None:
            if self.y is None or not self.y > 0:
                raise InvalidParameter("gap fiber needs y > 0 or log_y")
            object.__setattr__(self, "log_y", math.log(self.y))
        elif self.y is None:
            object.__setattr__(self, "y", math.exp(self.log_y))

    def __call__(self, t):
        return np.hypot(np.asarray(t, dtype=float) - self.anchor, self.y)

    def _asinh_over_y(self, X):
        # arcsinh(X / y), stable when y is tiny
        if X == 0:
            return 0.0
        lr = math.log(abs(X)) - self.log_y
        if lr < 300:
            return math.asinh(math.copysign(math.exp(lr), X))
        return math.copysign(math.log(2.0) + lr, X)

    def integral(self, x0, x1):
        return self._asinh_over_y(x1 - self.anchor) - self._asinh_over_y(x0 - self.anchor)


def corridor_lower_bound(d, x0, x1, fiber_bound) -> float:
    """Corridor lower bound ``1/4 int_{x0}^{x1} dt / fiber_bound(t)``.

    Valid for points on either side of the corridor provided every
    connecting curve crosses each line ``Re z = t`` at a point with
    ``dist <= fiber_bound(t)``; that guarantee is the caller's.  ``d`` is
    recorded for interface symmetry and is not inspected.
    """
    if not x0 < x1:
        raise InvalidInterval("corridor needs x0 < x1")
    if hasattr(fiber_bound, "integral"):
        return 0.25 * float(fiber_bound.integral(x0, x1))
    val, err = integrate.quad(lambda t: 1.0 / float(fiber_bound(t)), x0, x1, epsrel=1e-12, limit=200)
    return 0.25 * (val - err)


def lemma42_upper(h, epsilon, theta, r0) -> float:
    """Upper bound ``h/(eps-|theta|) + arcsinh(r0/(eps-|theta|))``.

    Bounds the distance from ``q`` (with ``Re q = -h`` and ``Im q`` offset
    by ``theta`` from the center of a gap of half-width ``eps`` between two
    left-infinite horizontal slits) to ``r0 + i Im q``.
    """
    if not (epsilon > 0 and r0 > 0 and h >= 0):
        raise InvalidParameter("need epsilon > 0, r0 > 0 and h >= 0")
    g = epsilon - abs(theta)
    if g <= 0:
        raise InvalidParameter("|theta| must be smaller than epsilon")
    return h / g + math.asinh(r0 / g)


# ------------------------------------------------- strips and two-slit gaps

def _uhp_log_distance(mu1, mu2):
    """Distance (curvature -4) between ``exp(mu1)`` and ``exp(mu2)`` in the upper half-plane.

    Points are given through logarithms so that images deep in a channel,
    which underflow as numbers, keep full relative accuracy.
    """
    R = max(mu1.real, mu2.real)
    s1, s2 = np.exp(mu1 - R), np.exp(mu2 - R)
    A, B = abs(s1 - np.conj(s2)), abs(s1 - s2)
    # cosh(2d) = 1 + B^2/(2 Im s1 Im s2) and A^2 - B^2 = 4 Im s1 Im s2
    log_im = mu1.real + mu2.real + math.log(math.sin(mu1.imag)) + math.log(math.sin(mu2.imag))
    return 0.5 * (2 * math.log(A + B) + 2 * R - math.log(4.0) - log_im)


def strip_distance(z, w, center, eps) -> float:
    """Hyperbolic distance in the strip ``|Im z - center| < eps``."""
    z, w = complex(z), complex(w)
    if not eps > 0:
        raise InvalidParameter("eps must be positive")
    if not (abs(z.imag - center) < eps and abs(w.imag - center) < eps):
        raise PointOutsideDomain("both points must lie in the strip")
    mu = lambda p: math.pi * (p - 1j * (center - eps)) / (2 * eps)  # exp(mu) in the upper half-plane
    return _uhp_log_distance(mu(z), mu(w))


def _two_slit_log(wp, eps):
    """``Log s`` of the upper half-plane image of ``wp`` in the plane minus ``{x +- i eps, x >= 0}``.

    The upper half of that domain is ``(eps/pi)(zeta - Log zeta - 1) + i eps``
    of the upper half-plane; the square root of ``zeta`` then carries the
    whole (reflected) domain onto the upper half-plane.
    """
    if wp.imag < 0:
        mu = _two_slit_log(wp.conjugate(), eps)
        return mu.conjugate() + 1j * math.pi  # s -> -conj(s)
    c = math.pi * (wp - 1j * eps) / eps + 1
    # solve exp(lam) - lam = c with lam = Log zeta, 0 <= Im lam <= pi
    r = math.log(max(abs(c), 1.0))
    guesses = [np.log(c + np.log(c + 0j))] + [complex(r, t * math.pi) for t in (0.02, 0.5, 0.98)]
    if c.imag < 0:
        guesses.insert(0, -c)  # in the channel; deep inside zeta ~ exp(-c)
    for lam in guesses:
        lam = complex(lam)
        with np.errstate(over="ignore", invalid="ignore"):
            for _ in range(100):
                e = np.exp(lam)
                step = (e - lam - c) / (e - 1)
                if not np.isfinite(step):
                    break
                lam -= step
                if abs(step) <= 1e-15 * max(1.0, abs(lam)):
                    break
        with np.errstate(over="ignore", invalid="ignore"):
            res = abs(np.exp(lam) - lam - c)
        if -1e-12 <= lam.imag <= math.pi + 1e-12 and res <= 1e-12 * max(1.0, abs(c)):
            return complex(lam.real, min(max(lam.imag, 0.0), math.pi)) / 2
    raise InvalidParameter("two-slit map did not converge")  # pragma: no cover


def two_slit_distance(z, w, center, eps) -> float:
    """Hyperbolic distance in the plane minus ``{x + i(center +- eps) : x <= 0}``.

    This is the model gap between two consecutive comb teeth with the rest
    of the boundary removed; it contains the strip ``|Im z - center| < eps``
    and so never exceeds :func:`strip_distance`.
    """
    z, w = complex(z), complex(w)
    if not eps > 0:
        raise InvalidParameter("eps must be positive")
    # a half turn about i*center puts the slits on Re >= 0, at Im = -eps and +eps
    zp, wp = -(z - 1j * center), -(w - 1j * center)
    for p in (zp, wp):
        if p.real >= 0 and abs(p.imag) == eps:
            raise PointOutsideDomain("point lies on a slit")
    return _uhp_log_distance(_two_slit_log(zp, eps), _two_slit_log(wp, eps))
