"""Cluster sets of a numerical Riemann map at a boundary point.

All approach sets are deterministic.  At refinement level ``l`` the sample
points lie on the arc ``|z - sigma| = 10^-l`` inside the disk, on a common
angular grid that clusters toward the unit circle.  The three kinds keep
the arc points of their approach region:

* ``unrestricted``: all of them;
* ``horospheric``: those in the horocycle ``E(sigma, R)``;
* ``nontangential``: those in the cone ``1 - |z| >= c |sigma - z|``.

Because the kinds filter one grid, the witness sets are nested once the
cone lies inside the horocycle.  Reports are only about the truncated
target the map was fitted to.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameter
from .hyperbolic import Horocycle, check_on_circle, horocycle_euclidean, horocycle_quotient

KINDS = ("unrestricted", "nontangential", "horospheric")
ARC_POINTS = 257


def chordal(z, w):
    """Chordal distance on the Riemann sphere (``inf`` allowed)."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    zi, wi = ~np.isfinite(z), ~np.isfinite(w)
    with np.errstate(invalid="ignore", over="ignore"):
        num = 2 * np.abs(z - w)
        den = np.sqrt(1 + np.abs(z) ** 2) * np.sqrt(1 + np.abs(w) ** 2)
        d = num / den
        d = np.where(zi & ~wi, 2 / np.sqrt(1 + np.abs(w) ** 2), d)
        d = np.where(wi & ~zi, 2 / np.sqrt(1 + np.abs(z) ** 2), d)
        d = np.where(zi & wi, 0.0, d)
    return d


def diameter(points, spherical=False):
    p = np.asarray(points, dtype=complex).ravel()
    if p.size < 2:
        return 0.0
    if spherical:
        return float(chordal(p[:, None], p[None, :]).max())
    return float(np.abs(p[:, None] - p[None, :]).max())


def arc_samples(sigma, level, n=ARC_POINTS):
    """Points of ``|z - sigma| = 10^-level`` inside the disk.

    Angles are measured from the inward radius; the grid is dense near the
    two ends of the arc, where it meets the unit circle.
    """
    delta = 10.0 ** (-level)
    phimax = np.arccos(0.5 * delta)  # the arc meets the circle at +-phimax
    t = np.cos(np.pi * (np.arange(n) + 0.5) / n)  # Chebyshev nodes, open ends
    phi = phimax * t
    z = sigma * (1.0 - delta * np.exp(1j * phi))
    return z[np.abs(z) < 1]


def approach_filter(sigma, z, kind, params):
    if kind == "unrestricted":
        return np.ones(z.shape, dtype=bool)
    if kind == "horospheric":
        return horocycle_quotient(sigma, z) < params["R"]
    if kind == "nontangential":
        return (1.0 - np.abs(z)) >= params["c"] * np.abs(sigma - z)
    raise InvalidParameter(f"unknown cluster kind {kind!r}")


def _check_params(kind, params):
    params = dict(params or {})
    if kind == "horospheric":
        params.setdefault("R", 1.0)
        if not params["R"] > 0:
            raise InvalidParameter("horospheric approach needs R > 0")
    elif kind == "nontangential":
        params.setdefault("c", 0.5)
        if not 0 < params["c"] <= 1:
            raise InvalidParameter("nontangential aperture c must lie in (0, 1]")
    elif kind != "unrestricted":
        raise InvalidParameter(f"unknown cluster kind {kind!r}")
    return params


@dataclass
class ClusterEstimate:
    """Witnesses of a cluster set and their spread.

    ``points`` are the witnesses of the deepest two levels and ``diameter``
    is their largest pairwise distance (chordal for unbounded targets).
    ``per_level`` holds the diameter of each single level.
    """

    kind: str
    base: complex
    points: np.ndarray
    diameter: float
    approach_parameters: dict
    levels: np.ndarray = field(default=None)  # level of each witness in ``points``
    per_level: dict = field(default_factory=dict)
    truncation: int | None = None
    spherical: bool = False

    def witness_rows(self):
        return [(int(l), p.real, p.imag) for l, p in zip(self.levels, self.points)]

    def summary(self):
        return {
            "kind": self.kind,
            "base": [self.base.real, self.base.imag],
            "truncation": self.truncation,
            "metric": "chordal" if self.spherical else "euclidean",
            "approach_parameters": self.approach_parameters,
            "diameter": self.diameter,
            "diameter_per_level": {str(k): v for k, v in self.per_level.items()},
        }


def _unbounded(m):
    return m.target.base[0] == "halfplane"


def cluster_set(m, sigma, kind="unrestricted", params=None, levels: int = 6) -> ClusterEstimate:
    """Cluster set estimate of the map ``m`` at ``sigma``.

    Witnesses are forward images of the approach samples at levels
    ``1..levels``; the radial point ``sigma (1 - 10^-l)`` belongs to every
    kind.
    """
    sigma = complex(check_on_circle(sigma))
    params = _check_params(kind, params)
    if not (isinstance(levels, (int, np.integer)) and levels >= 1):
        raise InvalidParameter("levels must be a positive integer")
    sph = _unbounded(m)
    pts, lev, per = [], [], {}
    for l in range(1, levels + 1):
        z = arc_samples(sigma, l)
        z = z[approach_filter(sigma, z, kind, params)]
        radial = sigma * (1.0 - 10.0 ** (-l))
        z = np.concatenate([[radial], z[z != radial]])
        w = np.asarray(m.forward(z), dtype=complex)
        per[l] = diameter(w, sph)
        pts.append(w)
        lev.append(np.full(w.size, l))
    deep = slice(max(0, levels - 2), levels)
    P = np.concatenate(pts[deep])
    L = np.concatenate(lev[deep])
    ap = dict(params)
    ap["levels"] = int(levels)
    return ClusterEstimate(kind, sigma, P, diameter(P, sph), ap, L, per,
                           m.target.index_range[1] if m.target.family else None, sph)


@dataclass(frozen=True)
class HLimitResult:
    exists: bool
    point: complex | None
    witnesses: tuple
    diameter: float
    diameter_4R: float
    agreement: bool
    label: str

    def to_dict(self):
        c = lambda z: None if z is None else [z.real, z.imag]
        return {"verdict": "exists" if self.exists else "fails", "point": c(self.point),
                "witnesses": [c(w) for w in self.witnesses], "diameter": self.diameter,
                "diameter_4R": self.diameter_4R, "R_4R_agreement": self.agreement, "label": self.label}


def _farthest_pair(P, sph):
    P = np.asarray(P)
    D = chordal(P[:, None], P[None, :]) if sph else np.abs(P[:, None] - P[None, :])
    i, j = np.unravel_index(np.argmax(D), D.shape)
    return complex(P[i]), complex(P[j])


def h_limit_test(m, sigma, R, tol, levels: int = 6) -> HLimitResult:
    """Decide numerically whether the horospheric limit at ``sigma`` exists.

    ``exists`` when the deepest-level horospheric diameter is below
    ``tol``; the witness centroid is returned.  Otherwise the farthest
    pair of witnesses is returned.  The run is repeated with ``4R`` and
    ``agreement`` records whether both diameters stay within twice the
    larger deepest-level diameter (or both below ``tol``).  The verdict
    concerns the truncated target only and is labelled "suggestive".
    """
    if not tol > 0:
        raise InvalidParameter("tol must be positive")
    e1 = cluster_set(m, sigma, "horospheric", {"R": R}, levels)
    e4 = cluster_set(m, sigma, "horospheric", {"R": 4 * R}, levels)
    d1, d4 = e1.per_level[levels], e4.per_level[levels]
    deep = e1.points[e1.levels == levels]
    agree = bool(abs(d1 - d4) <= 2 * max(d1, d4) or max(d1, d4) < tol)
    label = f"suggestive (truncation N={e1.truncation})"
    if d1 < tol:
        return HLimitResult(True, complex(deep.mean()), (), d1, d4, agree, label)
    return HLimitResult(False, None, _farthest_pair(deep, e1.spherical), d1, d4, agree, label)


def busemann_horosphere_contact(m, sigma, M, arc_samples: int = 64, levels: int = 6, merge_tol=1e-3):
    """Witnesses of where the Busemann horosphere of level ``M`` touches the boundary.

    The boundary circle of ``E(sigma, e^{2M})`` is followed toward
    ``sigma`` from both sides: at level ``l`` the ``arc_samples`` points
    closest to ``sigma`` with ``|z - sigma| <= 10^-l`` are mapped forward.
    The returned witness array collects the deepest level, greedily merged
    so that kept witnesses are more than ``merge_tol`` apart; a single
    contact point returns one witness.
    """
    sigma = complex(check_on_circle(sigma))
    h = Horocycle.from_level(sigma, M)
    c, r = horocycle_euclidean(h)
    # angle t from the tangency point along the horocycle circle
    wit = None
    for l in range(1, levels + 1):
        delta = 10.0 ** (-l)
        # chord |z - sigma| = 2 r sin(t/2) <= delta
        tmax = 2 * np.arcsin(min(1.0, delta / (2 * r)))
        t = tmax * (np.arange(1, arc_samples + 1) / arc_samples)
        t = np.concatenate([t, -t])
        z = c + r * sigma * np.exp(1j * t)
        z = z[np.abs(z) < 1]
        wit = np.asarray(m.forward(z), dtype=complex)
    sph = _unbounded(m)
    keep = [wit[0]]
    for w in wit[1:]:
        dd = chordal(np.array(keep), w) if sph else np.abs(np.array(keep) - w)
        if dd.min() > merge_tol:
            keep.append(w)
    return np.array(keep)


class IdentityMap:
    """The identity of the disk, shaped like a conformal map."""

    class _Target:
        base = ("disk",)
        family = None
        index_range = (None, None)

    target = _Target()

    def forward(self, z):
        return np.asarray(z, dtype=complex)
