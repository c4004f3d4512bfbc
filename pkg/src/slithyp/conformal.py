"""Numerical Riemann maps from the unit disk onto truncated slit domains.

The map is built with a zipper-type algorithm.  Boundary samples
``z_0, z_1, ..., z_{n-1}`` are taken in counterclockwise order (slits are
walked along both sides).  A square-root map sends ``z_0`` to infinity and
the segment ``[z_0, z_1]`` onto the negative real axis; then one elementary
map per sample opens the boundary arc up to the next sample onto the real
line.  Each elementary map fixes infinity and sends the hyperbolic geodesic
of the upper half-plane from ``0`` to the current image of the sample onto a
real interval, so both it and its inverse are explicit algebraic formulas.

When the target is symmetric about the real axis and the anchor is real,
only the upper half of the domain is zipped; its real segment is the first,
exact edge, and the lower half is obtained by reflection.  This makes
``forward(conj z) = conj(forward(z))`` hold by construction.  The end of the
real segment sent to infinity is the one reached through the wider openings
along the axis; when that is the right end the point reflection ``-D`` is
zipped instead and ``h(z) = -h'(-z)``, which keeps ``h(1)`` at the left end.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ._io import dumps17
from .boundary import face_walk, sample_walk
from .domains import Polyline, SlitDomain, point_segment_distance
from .errors import (FileFormatError, FitDiverged, InvalidParameter, InversionDiverged, NonJordanBoundary,
                     PointOutsideDomain)
from .hyperbolic import Horocycle, disk_distance

SCHEMA = "slithyp.conformal-map/1"


# ------------------------------------------------------------ elementary maps

def _clean(z):
    # push points of the closed upper half-plane off the lower side of the cut
    z = np.asarray(z, dtype=complex)
    return z.real + 1j * (np.maximum(z.imag, 0.0) + 0.0)


def _upper(x):
    return np.where(x.imag < 0, -x, x)


def _sqrt1p(w, t2):
    """``w * sqrt(1 + t2/w^2)``, continuous on the upper half-plane."""
    with np.errstate(divide="ignore", invalid="ignore"):
        f = w * np.sqrt(1 + t2 / (w * w))
    at0 = 1j * np.sqrt(abs(t2)) if t2 < 0 else np.sqrt(t2 + 0j)
    f = np.where(w == 0, at0, f)
    return _clean(_upper(f))


class GeoStep:
    """Elementary map opening the geodesic from ``0`` to ``zeta``.

    The map fixes infinity.  It is the composition of the Mobius map
    ``z -> b z/(b - z)`` (which straightens the geodesic to a vertical
    segment ``[0, i t]``), the slit map ``w -> sqrt(w^2 + t^2)`` and a Mobius
    map restoring the behaviour at infinity, divided by ``k`` to keep scales
    near one.  Points on the real axis (``zeta.imag <= 0``) and revisited
    boundary points give a pure translation.
    """

    __slots__ = ("zeta", "twin", "shift", "b", "t", "c", "k")

    def __init__(self, zeta, twin=False):
        zeta = complex(zeta)
        self.zeta = zeta
        self.twin = bool(twin) or zeta.imag <= 0
        if self.twin:
            self.shift = zeta.real
            return
        self.b = abs(zeta) ** 2 / zeta.real if zeta.real != 0 else np.inf
        w = zeta if np.isinf(self.b) else zeta / (1 - zeta / self.b)
        self.t = abs(w)
        if np.isinf(self.b):
            self.c, self.k = np.inf, 1.0
        else:
            self.c = -np.sign(self.b) * np.hypot(self.b, self.t)
            self.k = (1 + (self.t / self.b) ** 2) ** 1.5

    def _M(self, f):
        return f / (1 - f / self.c)

    def right_base(self):
        if self.twin:
            return 0.0
        return (self.t if np.isinf(self.c) else self._M(self.t)) / self.k

    def left_base(self):
        if self.twin:
            return 0.0
        return (-self.t if np.isinf(self.c) else self._M(-self.t)) / self.k

    def zip(self, z):
        z = _clean(z)
        if self.twin:
            return z - self.shift
        t2 = self.t ** 2
        if np.isinf(self.b):
            return _sqrt1p(z, t2)
        b, c = self.b, self.c
        w = _clean(b * z / (b - z))
        f = _sqrt1p(w, t2)
        # far from the origin the direct formula cancels; use the expanded form
        far = np.abs(z) > abs(b)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            near_val = f * c / (c - f)
            far_val = f * c * (c + f) * (b - z) ** 2 / (b ** 3 * (b - 2 * z))
        return _clean(np.where(far, far_val, near_val) / self.k)

    def unzip(self, y):
        y = _clean(y)
        if self.twin:
            return y + self.shift
        t2 = self.t ** 2
        if np.isinf(self.b):
            return _sqrt1p(y, -t2)
        b, c = self.b, self.c
        yp = y * self.k
        f = _clean(yp * c / (c + yp))
        w = _sqrt1p(f, -t2)
        far = np.abs(yp) > abs(c)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            near_val = w * b / (b + w)
            far_val = w * b * (c + yp) * (b - w) / (c * c * (c + f))
        return _clean(np.where(far, far_val, near_val))

    def edge(self, tau):
        """Points of the opened arc, ``tau`` in ``(0, 1)``, before the step."""
        if self.twin:
            return tau * self.shift + 0j
        w = 1j * self.t * tau
        return w if np.isinf(self.b) else w / (1 + w / self.b)


def _phi1(z, z0, z1):
    # i sqrt((z - z1)/(z - z0)); the segment [z0, z1] goes to the negative axis
    z = np.asarray(z, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = (z - z1) / (z - z0)
    on = (np.abs(r.imag) <= 1e-300) & (r.real <= 0)
    out = 1j * np.sqrt(r.real + 1j * (r.imag + 0.0))
    return np.where(on, -np.sqrt(np.abs(r.real)) + 0j, out)


def _phi1_inv(u, z0, z1):
    s2 = np.asarray(u, dtype=complex) ** 2
    return (z1 + s2 * z0) / (1 + s2)


class Zipper:
    """Zipper from a sampled boundary onto the upper half-plane.

    ``to_h`` maps the domain onto the upper half-plane with ``z_0`` sent to
    infinity; ``from_h`` is its inverse.
    """

    def __init__(self, z, twin, theta0, zetas=None):
        z = np.asarray(z, dtype=complex)
        twin = np.asarray(twin)
        n = len(z)
        if n < 3:
            raise InvalidParameter("need at least three boundary samples")
        self.z0, self.z1 = complex(z[0]), complex(z[1])
        self.theta0 = float(theta0)
        self.beta = np.pi - self.theta0 / 2
        self.n = n
        self.twin = twin
        if zetas is not None:
            self.steps = [GeoStep(zt, tw >= 0) for zt, tw in zip(zetas, twin[2:])]
            self.positions = None
            return
        img = np.full(n, np.nan + 0j)
        free = np.arange(2, n)[twin[2:] < 0]
        img[free] = _phi1(z[free], self.z0, self.z1)
        # positions of already zipped samples on the real axis
        pos = np.full(n, np.nan)
        pos[1] = 0.0
        self.steps = []
        for k in range(2, n):
            zeta = img[k]
            if not np.isfinite(zeta):
                raise FitDiverged(f"boundary sample {k} left the admissible range")
            st = GeoStep(zeta, twin=twin[k] >= 0)
            self.steps.append(st)
            pend = np.arange(k + 1, n)
            pend = pend[~np.isnan(img[pend])]
            if pend.size:
                img[pend] = st.zip(img[pend])
            done = np.arange(1, k)
            pos[done] = st.zip(pos[done] + 0j).real
            # the previous sample sits at the base of the opened arc, on the domain side
            if not st.twin:
                pos[k - 1] = st.left_base()
            pos[k] = 0.0
            img[k] = 0
            img[np.nonzero(twin == k - 1)[0]] = st.right_base() + 0j
        self.positions = pos  # real stage coordinates; z_0 is at infinity

    @property
    def zetas(self):
        return np.array([s.zeta for s in self.steps])

    def final(self, w):
        return (_clean(w) * np.exp(-1j * self.beta)) ** (2 * np.pi / self.theta0)

    def final_inv(self, u):
        return np.exp(1j * self.beta) * _clean(u) ** (self.theta0 / (2 * np.pi))

    def to_h(self, w):
        u = _phi1(w, self.z0, self.z1)
        for st in self.steps:
            u = st.zip(u)
        return self.final(u)

    def from_h(self, u):
        w = self.final_inv(u)
        for st in reversed(self.steps):
            w = st.unzip(w)
        return _phi1_inv(w, self.z0, self.z1)

    def boundary_h(self):
        """Upper half-plane coordinates (real) of the samples ``z_1 .. z_{n-1}``."""
        return self.final(self.positions[1:] + 0j).real

    def edge_errors(self, z, npts=5):
        """Distance of reconstructed boundary arcs to the true sample edges."""
        tau = np.arange(1, npts + 1) / (npts + 1)
        m = len(self.steps)
        pts = np.empty((m, npts), dtype=complex)
        for j in range(m - 1, -1, -1):
            pts[j] = self.steps[j].edge(tau)
            if j < m - 1:
                pts[j + 1:] = self.steps[j].unzip(pts[j + 1:].ravel()).reshape(-1, npts)
        pts = _phi1_inv(pts, self.z0, self.z1)
        a, b = z[1:-1, None], z[2:, None]
        d = b - a
        t = np.clip(((pts - a) * np.conj(d)).real / np.abs(d) ** 2, 0, 1)
        err = np.abs(pts - (a + t * d)).max(axis=1)
        # closing edge z_{n-1} -> z_0 is the positive axis in final coordinates
        s = np.logspace(-4, 4, 41)
        last = self.from_h(s + 0j)
        e_last = point_segment_distance(last, complex(z[-1]), self.z0).max()
        return np.concatenate([err, [e_last]])


# ------------------------------------------------------------- sample sizing

def _sym_segment(d: SlitDomain, anchor):
    """End points ``p < q`` of the component of the real axis containing ``anchor``."""
    _, X0, X1, Y0, Y1 = d.base
    cuts = {X0, X1}
    covered = []
    for a, b in d.material_slits():
        if a.imag == b.imag == 0:
            covered.append((a.real, b.real))
            cuts.update((a.real, b.real))
        elif a.real == b.real and a.imag <= 0 <= b.imag:
            cuts.add(a.real)
    cuts = sorted(c for c in cuts if X0 <= c <= X1)
    x = anchor.real
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if lo < x < hi and not any(c0 <= lo and hi <= c1 for c0, c1 in covered):
            return lo, hi
    raise PointOutsideDomain("anchor is not on an open real segment of the domain")


def _axis_opening(d: SlitDomain, a, b):
    """Narrowest half-height of the vertical slit gaps crossed by the real segment ``(a, b)``."""
    gap = np.inf
    for s, t in d.material_slits():
        if s.real == t.real and min(a, b) < s.real < max(a, b):
            y0, y1 = sorted((s.imag, t.imag))
            if y1 < 0:
                gap = min(gap, -y1)
            elif y0 > 0:
                gap = min(gap, y0)
    return gap


def _boundary_walk(d: SlitDomain, anchor, symmetric, flip=False):
    if d.base[0] != "rect":
        raise NonJordanBoundary("conformal maps need a bounded base; truncate with a box")
    _, X0, X1, Y0, Y1 = d.base
    slits = d.material_slits()
    if symmetric:
        p, q = _sym_segment(d, anchor)
        segs = [(complex(X0, 0), complex(X1, 0)), (complex(X1, 0), complex(X1, Y1)),
                (complex(X1, Y1), complex(X0, Y1)), (complex(X0, Y1), complex(X0, 0))]
        for a, b in slits:
            y0, y1 = sorted((a.imag, b.imag))
            if y1 < 0:
                continue
            if y0 < 0:
                a, b = complex(a.real, 0.0), complex(a.real, y1)
            segs.append((a, b))
        if flip:
            # -D is symmetric too; its upper half is the mirror image of ours
            segs = [(-np.conj(a), -np.conj(b)) for a, b in segs]
            return face_walk(segs, (complex(-q, 0), complex(-p, 0)))
        return face_walk(segs, (complex(p, 0), complex(q, 0)))
    corners = d.base_corners()
    sides = [(corners[i], corners[(i + 1) % 4]) for i in range(4)]
    i = int(np.argmax([abs(b - a) for a, b in sides]))
    a, b = sides[i]
    m = 0.5 * (a + b)
    segs = [s for j, s in enumerate(sides) if j != i] + [(a, m), (m, b)] + slits
    return face_walk(segs, (m, b))


def _samples_for_budget(walk, budget, exact_first, hmin_ratio=1 / 25, capf=0.5):
    """Graded samples with spacing parameter chosen to fill ``budget``.

    Spacing is at most ``h``, at most ``capf`` times the local feature size
    (but not below ``h/10``), and grows geometrically with ratio 2 from
    ``h * hmin_ratio`` at every vertex.
    """
    diam = max(abs(u - v) for u in walk.vertices for v in walk.vertices)
    sample = lambda h: sample_walk(walk, h, h * hmin_ratio, capf, 1.0, exact_first, floor=0.1 * h)
    count = lambda h: len(sample(h).points)
    lo, hi = 1e-5 * diam, 4 * diam
    if count(hi) > budget:
        raise InvalidParameter(f"{budget} samples cannot resolve this boundary (need {count(hi)})")
    for _ in range(40):
        mid = np.sqrt(lo * hi)
        if count(mid) > budget:
            lo = mid
        else:
            hi = mid
        if hi / lo < 1.01:
            break
    return sample(hi)


# ------------------------------------------------------------------ the map

@dataclass
class ConformalMap:
    """Numerical Riemann map ``h`` from the unit disk onto ``target``.

    ``h(0) = anchor``.  For a symmetric target the disk point ``1`` goes to
    the left end ``p`` of the real segment through the anchor and ``-1`` to
    its right end ``q``; otherwise ``1`` goes to the first boundary sample.
    With ``flip`` the zipper and ``samples`` describe ``-target`` and the
    map is ``z -> -h'(-z)``.
    """

    target: SlitDomain
    anchor: complex
    symmetric: bool
    zipper: Zipper
    samples: np.ndarray
    uq: float = 0.0
    va: complex = 0j
    ua: complex = 0j
    accuracy: float = np.nan
    boundary_nodes: np.ndarray = field(default=None)
    boundary_angles: np.ndarray = field(default=None)
    flip: bool = False

    @property
    def n_samples(self):
        return len(self.samples)

    # -- normalization

    def _h_to_disk(self, u):
        if self.symmetric:
            with np.errstate(divide="ignore", invalid="ignore"):
                v = np.sqrt(-1.0 / (u - self.uq))
            return (self.va - v) / (self.va + v)
        return (u - self.ua) / (u - np.conj(self.ua))

    def _disk_to_h(self, z):
        if self.symmetric:
            with np.errstate(divide="ignore", invalid="ignore"):
                v = self.va * (1 - z) / (1 + z)
                return v, self.uq - 1.0 / (v * v)
        with np.errstate(divide="ignore", invalid="ignore"):
            return None, (self.ua - z * np.conj(self.ua)) / (1 - z)

    # -- evaluation

    def forward(self, z):
        """Image of disk points."""
        z = np.asarray(z, dtype=complex)
        if not np.all(np.isfinite(z)) or np.any(np.abs(z) >= 1):
            raise PointOutsideDomain("forward needs |z| < 1")
        if self.flip:
            w = -self._forward(-z.ravel())
        else:
            w = self._forward(z.ravel())
        w = w.reshape(z.shape)
        return w.item() if w.ndim == 0 else w

    def _forward(self, flat):
        if self.symmetric:
            v = self.va * (1 - flat) / (1 + flat)
            flip = v.imag < 0
            v = np.where(flip, np.conj(v), v)
            u = self.uq - 1.0 / (v * v)
            w = self.zipper.from_h(u)
            w = np.where(flip, np.conj(w), w)
            w = np.where(flat.imag == 0, w.real + 0j, w)
        else:
            _, u = self._disk_to_h(flat)
            w = self.zipper.from_h(u)
        return w

    def inverse(self, w, check=True):
        """Disk preimage of domain points."""
        w = np.asarray(w, dtype=complex)
        if check and not np.all(self.target.contains(w)):
            raise PointOutsideDomain("inverse needs points of the target domain")
        z = -self._inverse(-w.ravel()) if self.flip else self._inverse(w.ravel())
        z = z.reshape(w.shape)
        return z.item() if z.ndim == 0 else z

    def _inverse(self, flat):
        if self.symmetric:
            flip = flat.imag < 0
            ww = np.where(flip, np.conj(flat), flat)
            u = self.zipper.to_h(ww)
            z = self._h_to_disk(u)
            z = np.where(flip, np.conj(z), z)
            z = np.where(flat.imag == 0, z.real + 0j, z)
        else:
            z = self._h_to_disk(self.zipper.to_h(flat))
        if not np.all(np.isfinite(z)) or np.any(np.abs(z) >= 1):
            raise InversionDiverged("preimage is numerically on the unit circle (boundary crowding)")
        return z

    def boundary_point(self, sigma):
        """Boundary value of the map at ``sigma`` on the unit circle."""
        flat = np.ravel(np.asarray(sigma, dtype=complex))
        w = -self._boundary_point(-flat) if self.flip else self._boundary_point(flat)
        w = w.reshape(np.shape(sigma))
        return w.item() if w.ndim == 0 else w

    def _boundary_point(self, flat):
        if self.symmetric:
            with np.errstate(divide="ignore", invalid="ignore"):
                v = self.va * (1 - flat) / (1 + flat)
            flip = v.imag < 0
            s2 = -(v.imag ** 2)  # v is purely imaginary on the circle
            end = (flat == 1) | (flat == -1)
            with np.errstate(divide="ignore"):
                u = np.where(end, 0.0, self.uq - 1.0 / np.where(end, -1.0, s2))
            w = self.zipper.from_h(u + 0j)
            w = np.where(flip, np.conj(w), w)
            # the ends of the symmetry segment
            w = np.where(flat == 1, self.samples[0], np.where(flat == -1, self.samples[1], w))
        else:
            end = flat == 1
            with np.errstate(divide="ignore", invalid="ignore"):
                _, u = self._disk_to_h(np.where(end, 0.0, flat))
            w = self.zipper.from_h(u.real + 0j)
            w = np.where(end, self.samples[0], w)
        return w

    # -- serialization

    def to_dict(self):
        zp = self.zipper
        c = lambda x: [float(np.real(x)), float(np.imag(x))]
        return {
            "schema": SCHEMA,
            "target": self.target.to_dict(),
            "normalization": {"anchor": c(self.anchor), "symmetric": self.symmetric,
                              "flip": self.flip,
                              "uq": float(self.uq), "va": c(self.va), "ua": c(self.ua)},
            "first_edge": [c(zp.z0), c(zp.z1)],
            "theta0": zp.theta0,
            "stages": [{"zeta": c(s.zeta), "twin": int(t)} for s, t in zip(zp.steps, zp.twin[2:])],
            "boundary_nodes": [c(p) + [float(a)] for p, a in zip(self.boundary_nodes, self.boundary_angles)],
            "samples": [c(p) for p in self.samples],
            "accuracy": float(self.accuracy),
        }

    def to_json(self, indent=None):
        return dumps17(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, d):
        try:
            if d.get("schema") != SCHEMA:
                raise FileFormatError(f"unsupported map schema {d.get('schema')!r}")
            cz = lambda p: complex(p[0], p[1])
            target = SlitDomain.from_dict(d["target"])
            nrm = d["normalization"]
            samples = np.array([cz(p) for p in d["samples"]])
            twin = np.concatenate([[-1, -1], [s["twin"] for s in d["stages"]]])
            zetas = [cz(s["zeta"]) for s in d["stages"]]
            zp = Zipper(samples, twin, d["theta0"], zetas=zetas)
            zp.z0, zp.z1 = cz(d["first_edge"][0]), cz(d["first_edge"][1])
            nodes = np.array([complex(p[0], p[1]) for p in d["boundary_nodes"]])
            angles = np.array([p[2] for p in d["boundary_nodes"]])
            return cls(target, cz(nrm["anchor"]), bool(nrm["symmetric"]), zp, samples, float(nrm["uq"]),
                       cz(nrm["va"]), cz(nrm["ua"]), float(d["accuracy"]), nodes, angles,
                       bool(nrm.get("flip", False)))
        except (KeyError, TypeError, IndexError) as exc:
            raise FileFormatError(f"bad map file: missing or malformed field {exc}") from exc

    @classmethod
    def from_json(cls, text):
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FileFormatError(f"map file: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
        return cls.from_dict(d)


def fit_map(d: SlitDomain, boundary_samples: int = 512, anchor=None, symmetric=None) -> ConformalMap:
    """Fit a Riemann map from the unit disk onto a truncated slit domain.

    Parameters
    ----------
    d : bounded target with finite truncation.
    boundary_samples : sample budget of the zipped boundary.  For symmetric
        targets only the upper half is zipped, so the budget applies to it.
    anchor : image of ``0``; defaults to the center of the base rectangle
        (moved right off slits if needed).
    symmetric : use the reflection construction; defaults to ``True`` when
        both the domain and the anchor are symmetric about the real axis.

    The reported ``accuracy`` is the largest distance from reconstructed
    boundary arcs between consecutive samples to the true boundary.
    """
    if boundary_samples < 16:
        raise InvalidParameter("boundary_samples must be at least 16")
    if d.base[0] != "rect":
        raise NonJordanBoundary("conformal maps need a bounded base; truncate with a box")
    if d.family is not None and d.index_range[1] is None:
        raise NonJordanBoundary("the slit family must be truncated")
    d.material_slits()  # raises TruncationUnderflow for deep Petersen truncations
    if anchor is None:
        _, X0, X1, Y0, Y1 = d.base
        c = complex(0.5 * (X0 + X1), 0.5 * (Y0 + Y1))
        # move right along the horizontal through the center when it sits on a slit
        tries = [c + f * (X1 - c.real) for f in (0.0, 0.5, 0.25, 0.75, 0.125, 0.875)]
        anchor = next((t for t in tries if d.contains(t)), c)
    anchor = complex(anchor)
    if not d.contains(anchor):
        raise PointOutsideDomain("anchor must lie in the domain")
    if symmetric is None:
        symmetric = d.is_symmetric() and anchor.imag == 0
    if symmetric and not (d.is_symmetric() and anchor.imag == 0):
        raise InvalidParameter("symmetric construction needs a symmetric domain and a real anchor")
    flip = False
    if symmetric:
        p, q = _sym_segment(d, anchor)
        flip = _axis_opening(d, anchor.real, q) > _axis_opening(d, p, anchor.real)
    walk = _boundary_walk(d, anchor, symmetric, flip)
    bs = _samples_for_budget(walk, boundary_samples, symmetric)
    zp = Zipper(bs.points, bs.twin, bs.theta0)
    m = ConformalMap(d, anchor, symmetric, zp, bs.points, flip=flip)
    a0 = -anchor if flip else anchor  # anchor in the zipped frame
    ua = complex(zp.to_h(np.array([a0]))[0])
    if not np.isfinite(ua):
        raise FitDiverged("anchor image is not finite")
    uq = float(zp.final(np.array([zp.positions[1] + 0j]))[0].real)
    if symmetric:
        m.uq = uq
        if not ua.real < uq:
            raise FitDiverged("anchor image collapsed onto the boundary (crowding)")
        m.va = complex(np.sqrt(-1.0 / (ua.real - uq)))
        if not m.va.real > 0:
            raise FitDiverged("anchor is not mapped onto the symmetry axis")
    else:
        if not ua.imag > 0:
            raise FitDiverged("anchor image is on the boundary")
        m.ua = ua
    m.accuracy = float(zp.edge_errors(bs.points).max())
    # boundary correspondence; skip z_0 (at infinity) and the exact first edge
    xs = zp.boundary_h()
    if symmetric:
        with np.errstate(divide="ignore", invalid="ignore"):
            v = np.sqrt(-1.0 / (xs - uq) + 0j)
        with np.errstate(invalid="ignore"):
            zb = np.where(xs == uq, -1.0, (m.va - v) / (m.va + v))
        ang = np.angle(zb)
        pts = bs.points[1:]
        ang = np.concatenate([[0.0], ang, -ang[1:]])
        pts = np.concatenate([[bs.points[0]], pts, np.conj(pts[1:])])
    else:
        zb = (xs - ua) / (xs - np.conj(ua))
        ang = np.concatenate([[0.0], np.angle(zb)])
        pts = bs.points
    if flip:
        pts, ang = -pts, ang + np.pi
    order = np.argsort(np.mod(ang, 2 * np.pi), kind="stable")
    m.boundary_nodes, m.boundary_angles = pts[order], np.mod(ang[order], 2 * np.pi)
    return m


def save_map(m: ConformalMap, path):
    from ._io import atomic_write
    atomic_write(path, m.to_json(indent=1))


def load_map(path) -> ConformalMap:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise FileFormatError(f"cannot read map file {path!r}: {exc.strerror}") from None
    return ConformalMap.from_json(text)


# ------------------------------------------------------- derived operations

def forward(m: ConformalMap, z):
    return m.forward(z)


def inverse(m: ConformalMap, w):
    return m.inverse(w)


def geodesic_ray(m: ConformalMap, sigma, t_samples) -> Polyline:
    """Image of the radius ``t sigma``, ``t`` in ``t_samples``."""
    from .hyperbolic import check_on_circle
    sigma = complex(check_on_circle(sigma))
    t = np.asarray(t_samples, dtype=float)
    if np.any((t < 0) | (t >= 1)):
        raise InvalidParameter("t_samples must lie in [0, 1)")
    return Polyline(np.atleast_1d(m.forward(t * sigma)))


def conformal_distance(m: ConformalMap, w1, w2):
    """Hyperbolic distance of the target between ``w1`` and ``w2``."""
    z = m.inverse(np.array([w1, w2], dtype=complex))
    return disk_distance(z[0], z[1])


def pushforward_horocycle(m: ConformalMap, h: Horocycle, samples: int = 256) -> Polyline:
    """Image of the horocycle boundary ``dE(sigma, R)``.

    The tangency point itself is omitted; the curve returns toward the
    boundary point corresponding to ``sigma`` at both ends.
    """
    t = (np.arange(samples) + 0.5) / samples
    from .hyperbolic import horocycle_euclidean
    c, r = horocycle_euclidean(h)
    z = c - r * h.base * np.exp(2j * np.pi * t)
    z = z[np.abs(z) < 1]
    return Polyline(m.forward(z))
