"""Holomorphic self-maps of the disk and the right half-plane.

Disk automorphisms are stored as ``z -> (a z + b)/(conj(b) z + conj(a))``
with ``|a|^2 - |b|^2 = 1``.  Half-plane automorphisms act on the right
half-plane ``Re w > 0``; they are stored as a real ``SL(2)`` matrix
``(alpha, beta, gamma, delta)`` acting on the upper half-plane chart
``u = i w``, so in the ``w`` chart the map reads
``w -> (alpha w - i beta)/(i gamma w + delta)``.  The translation
``w -> w + i`` is ``(1, -1, 0, 1)`` and the dilation ``w -> 2w`` is
``diag(sqrt 2, 1/sqrt 2)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConvergenceFailure,
    FileFormatError,
    InvalidParameter,
    NotAnAutomorphism,
    PointOutsideDomain,
    SelfMapViolation,
)
from .hyperbolic import (
    Horocycle,
    check_on_circle,
    disk_distance,
    halfplane_distance,
    horocycle_euclidean,
    horocycle_quotient,
)

NORM_TOL = 1e-12
PARABOLIC_TOL = 1e-10
EXIT_TOL = 1e-12

#: iteration budget and convergence tolerances of :func:`denjoy_wolff_point`
DW_BUDGET = 100_000
DW_TOL = {"parabolic": 1e-4, "hyperbolic-automorphism": 1e-8, "generic": 1e-6}
DW_STARTS = (0.0, 0.3j, -0.5)


def _inside(model, z):
    z = np.asarray(z, dtype=complex)
    if model == "disk":
        return np.isfinite(z) & (np.abs(z) < 1)
    return np.isfinite(z) & (z.real > 0)


def _exit_excess(model, z):
    """How far ``z`` lies outside the model domain (0 inside)."""
    z = np.asarray(z, dtype=complex)
    if model == "disk":
        return np.maximum(np.abs(z) - 1.0, 0.0)
    return np.maximum(-z.real, 0.0)


def _model_distance(model, z, w):
    if model == "disk":
        return disk_distance(z, w)
    return halfplane_distance(z, w)


class SelfMap:
    """Black-box holomorphic self-map of a model domain.

    ``func`` must map the model domain into itself and accept numpy arrays.
    """

    def __init__(self, func, model="disk", name="custom"):
        if model not in ("disk", "halfplane"):
            raise InvalidParameter("model must be 'disk' or 'halfplane'")
        self.func = func
        self.model = model
        self.name = name

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.asarray(self.func(z), dtype=complex)
        return out.item() if out.ndim == 0 else out

    def __repr__(self):
        return f"SelfMap({self.name!r}, model={self.model!r})"


class Blaschke(SelfMap):
    """Finite Blaschke product ``c prod (z - a_k)/(1 - conj(a_k) z)``."""

    def __init__(self, zeros, factor=1.0):
        zeros = np.atleast_1d(np.asarray(zeros, dtype=complex))
        if zeros.size == 0 or np.any(np.abs(zeros) >= 1):
            raise InvalidParameter("Blaschke zeros must lie in the open disk")
        if abs(abs(factor) - 1.0) > NORM_TOL:
            raise InvalidParameter("Blaschke factor must be unimodular")
        self.zeros = zeros
        self.factor = complex(factor)
        super().__init__(self._eval, "disk", "blaschke")

    def _eval(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self.factor)
        for a in self.zeros:
            out = out * (z - a) / (1.0 - np.conj(a) * z)
        return out

    def to_dict(self):
        c = [[self.factor.real, self.factor.imag]]
        c += [[float(a.real), float(a.imag)] for a in self.zeros]
        return {"model": "disk", "kind": "blaschke", "coeffs": c}


class MobiusSelfMap(SelfMap):
    """Automorphism of the disk or of the right half-plane.

    Use :meth:`disk` / :meth:`halfplane` (which validate the normalization)
    or the named constructors.
    """

    def __init__(self, a=1.0, b=0.0, model="disk", hp=None):
        if model == "disk":
            a, b = complex(a), complex(b)
            if abs(abs(a) ** 2 - abs(b) ** 2 - 1.0) > NORM_TOL:
                raise NotAnAutomorphism("disk automorphism needs |a|^2 - |b|^2 = 1")
            self.a, self.b = a, b
            self.hp = None
        elif model == "halfplane":
            hp = tuple(float(x) for x in hp)
            al, be, ga, de = hp
            if not all(np.isfinite(hp)) or abs(al * de - be * ga - 1.0) > NORM_TOL:
                raise NotAnAutomorphism("half-plane automorphism needs a real matrix with determinant 1")
            self.hp = hp
            self.a = self.b = None
        else:
            raise InvalidParameter("model must be 'disk' or 'halfplane'")
        super().__init__(self._eval, model, "mobius")

    # -- constructors

    @classmethod
    def disk(cls, a, b, normalize=False):
        """Disk automorphism from ``(a, b)``; ``normalize`` rescales to ``|a|^2-|b|^2=1``."""
        a, b = complex(a), complex(b)
        if normalize:
            det = abs(a) ** 2 - abs(b) ** 2
            if not det > 0:
                raise NotAnAutomorphism("|a|^2 - |b|^2 must be positive")
            s = np.sqrt(det)
            a, b = a / s, b / s
        return cls(a, b, "disk")

    @classmethod
    def halfplane(cls, alpha, beta, gamma, delta, normalize=False):
        m = np.array([alpha, beta, gamma, delta], dtype=float)
        if normalize:
            det = m[0] * m[3] - m[1] * m[2]
            if not det > 0:
                raise NotAnAutomorphism("determinant must be positive")
            m = m / np.sqrt(det)
        return cls(model="halfplane", hp=m)

    @classmethod
    def halfplane_translation(cls, t):
        """``w -> w + i t`` on the right half-plane."""
        return cls.halfplane(1.0, -float(t), 0.0, 1.0)

    @classmethod
    def halfplane_dilation(cls, lam):
        """``w -> lam w`` on the right half-plane, ``lam > 0``."""
        if not lam > 0:
            raise InvalidParameter("dilation factor must be positive")
        s = np.sqrt(lam)
        return cls.halfplane(s, 0.0, 0.0, 1.0 / s)

    @classmethod
    def rotation(cls, theta):
        """``z -> e^{i theta} z``."""
        return cls(np.exp(0.5j * theta), 0.0, "disk")

    @classmethod
    def from_complex_matrix(cls, M):
        """Disk automorphism from a complex matrix proportional to ``SU(1,1)``."""
        M = np.asarray(M, dtype=complex)
        det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
        M = M / np.sqrt(det)
        a, b = M[0, 0], M[0, 1]
        if abs(M[1, 1] - np.conj(a)) > 1e-9 * max(1, abs(a)) or abs(M[1, 0] - np.conj(b)) > 1e-9 * max(1, abs(b)):
            raise NotAnAutomorphism("matrix does not preserve the unit disk")
        return cls.disk(a, b, normalize=True)

    def w_matrix(self):
        """Complex matrix of a half-plane map in the ``w`` chart."""
        al, be, ga, de = self.hp
        return np.array([[al, -1j * be], [1j * ga, de]])

    def matrix(self):
        """Complex ``2x2`` matrix of the map in its own chart."""
        if self.model == "disk":
            return np.array([[self.a, self.b], [np.conj(self.b), np.conj(self.a)]])
        return self.w_matrix()

    def to_disk(self, sigma=1.0):
        """Conjugate a half-plane map to the disk via ``w = (sigma+z)/(sigma-z)``.

        ``w = infinity`` corresponds to ``sigma`` and ``w = 0`` to ``-sigma``.
        """
        if self.model == "disk":
            return self
        sigma = complex(check_on_circle(sigma))
        C = np.array([[1.0, sigma], [-1.0, sigma]])
        Ci = np.array([[sigma, -sigma], [1.0, 1.0]])
        return MobiusSelfMap.from_complex_matrix(Ci @ self.w_matrix() @ C)

    @classmethod
    def parabolic(cls, sigma=1.0, t=1.0):
        """Parabolic automorphism fixing ``sigma``, conjugate of ``w -> w + i t``."""
        return cls.halfplane_translation(t).to_disk(sigma)

    @classmethod
    def hyperbolic(cls, sigma=1.0, lam=2.0):
        """Hyperbolic automorphism attracting to ``sigma`` and repelling from ``-sigma``."""
        return cls.halfplane_dilation(lam).to_disk(sigma)

    # -- evaluation

    def _eval(self, z):
        z = np.asarray(z, dtype=complex)
        if self.model == "disk":
            return (self.a * z + self.b) / (np.conj(self.b) * z + np.conj(self.a))
        al, be, ga, de = self.hp
        return (al * z - 1j * be) / (1j * ga * z + de)

    def trace(self):
        if self.model == "disk":
            return 2.0 * self.a.real
        return self.hp[0] + self.hp[3]

    def to_dict(self):
        if self.model == "disk":
            c = [[self.a.real, self.a.imag], [self.b.real, self.b.imag]]
        else:
            M = self.w_matrix()
            c = [[float(x.real), float(x.imag)] for x in M.ravel()]
        return {"model": self.model, "kind": "mobius", "coeffs": c}

    def __repr__(self):
        if self.model == "disk":
            return f"MobiusSelfMap(a={self.a}, b={self.b})"
        return f"MobiusSelfMap(halfplane={self.hp})"


# -------------------------------------------------------------- classify

@dataclass(frozen=True)
class Classification:
    kind: str
    trace: float
    fixed_points: tuple
    multiplier: float = 1.0


def _quadratic_roots(A, B, C):
    if A == 0:
        if B == 0:
            return ()
        return (-C / B,)
    disc = np.sqrt(complex(B * B - 4 * A * C))
    q = -0.5 * (B + (disc if (np.conj(B) * disc).real >= 0 else -disc))
    if q == 0:
        return (0j, 0j)
    return (q / A, C / q)


def classify(m: MobiusSelfMap) -> Classification:
    """Classify an automorphism by its normalized trace.

    Returns the kind, the trace, the fixed points (boundary ones for
    parabolic and hyperbolic maps, the interior one for elliptic maps) and,
    for hyperbolic maps, the multiplier ``lam > 1`` at the attracting point
    (listed first).  Half-plane fixed points use ``inf`` for infinity.
    """
    if not isinstance(m, MobiusSelfMap):
        raise NotAnAutomorphism("classify needs a MobiusSelfMap")
    tr = m.trace()
    at = abs(tr)
    if abs(at - 2.0) <= PARABOLIC_TOL:
        kind = "parabolic"
    elif at < 2.0:
        kind = "elliptic"
    else:
        kind = "hyperbolic-automorphism"
    lam = 1.0
    if kind == "hyperbolic-automorphism":
        s = 0.5 * (at + np.sqrt(at * at - 4.0))
        lam = s * s
    if m.model == "disk":
        a, b = m.a, m.b
        if abs(b) <= 1e-15 * abs(a):  # a rotation up to rounding
            return Classification("elliptic", tr, (0j,), 1.0)
        # conj(b) z^2 + (conj(a) - a) z - b = 0
        roots = _quadratic_roots(np.conj(b), np.conj(a) - a, -b)
        if not roots:  # identity
            return Classification("elliptic", tr, (0j,), 1.0)
        if kind == "elliptic":
            fp = tuple(r for r in roots if abs(r) < 1) or (0j,)
            return Classification(kind, tr, fp[:1], 1.0)
        if kind == "parabolic":
            r = roots[0] if len(roots) == 1 else 0.5 * (roots[0] + roots[1])
            return Classification(kind, tr, (r / abs(r),), 1.0)
        # attracting point has derivative 1/lam there
        deriv = lambda z: 1.0 / (np.conj(b) * z + np.conj(a)) ** 2
        rs = sorted(roots, key=lambda r: abs(deriv(r)))
        return Classification(kind, tr, tuple(r / abs(r) for r in rs), float(lam))
    # half-plane, via the disk conjugate (sigma = 1 <-> infinity, -1 <-> 0)
    dk = classify(m.to_disk(1.0))
    fps = []
    for z in dk.fixed_points:
        if kind == "elliptic":
            fps.append((1.0 + z) / (1.0 - z))
        elif abs(z - 1.0) < 1e-8:
            fps.append(complex(np.inf, 0.0))
        else:
            fps.append(complex(0.0, ((1.0 + z) / (1.0 - z)).imag))
    return Classification(kind, tr, tuple(fps), dk.multiplier)


# --------------------------------------------------------------- orbits

@dataclass
class OrbitRecord:
    """Orbit ``z_0, f(z_0), ...`` with hyperbolic step sizes.

    ``step_distances[k]`` is the distance from ``points[k]`` to ``points[k+1]``.
    """

    start: complex
    points: np.ndarray
    step_distances: np.ndarray
    model: str = "disk"
    hint: str | None = None
    diagnostics: dict = field(default_factory=dict)

    def schwarz_pick_ok(self, slack=1e-12):
        """Step sizes are non-increasing up to ``slack`` plus rounding of far steps.

        Steps touching a point that rounded onto the boundary are infinite and
        carry no information; they are skipped.
        """
        s = self.step_distances
        if s.size < 2:
            return True
        # an iterate carrying a few ulps of rounding moves by ~eps/(1-|z|) hyperbolically
        u = 64 * np.finfo(float).eps
        if self.model == "disk":
            cond = u / np.maximum(1.0 - np.abs(self.points), 1e-300)
        else:
            cond = u * np.abs(self.points) / np.maximum(self.points.real, 1e-300)
        tol = slack + cond[1:-1] * np.maximum(s[1:], 1.0)
        fin = np.isfinite(s[1:]) & np.isfinite(s[:-1])
        return bool(np.all(s[1:][fin] <= s[:-1][fin] + tol[fin]))

    def to_csv(self):
        from ._io import csv_text
        sd = np.concatenate([[np.nan], self.step_distances])
        rows = [(k, p.real, p.imag, sd[k]) for k, p in enumerate(self.points)]
        return csv_text(["n", "re", "im", "step_distance"], rows)


def _hint(m):
    if isinstance(m, MobiusSelfMap):
        return classify(m).kind
    return None


def _check_start(model, z0):
    if not bool(_inside(model, z0)):
        raise PointOutsideDomain("start point must lie in the model domain")


def _iterate_points(m, z0, n):
    """Array of ``n + 1`` iterates of one or several starts (last axis = n)."""
    z = np.asarray(z0, dtype=complex)
    out = np.empty(z.shape + (n + 1,), dtype=complex)
    out[..., 0] = z
    for k in range(n):
        z = np.asarray(m(z), dtype=complex)
        exc = _exit_excess(m.model, z)
        if np.any(~np.isfinite(z)) or np.any(exc > EXIT_TOL):
            raise SelfMapViolation(f"iterate {k + 1} left the model domain")
        out[..., k + 1] = z
    return out


def iterate(m, z0, n: int) -> OrbitRecord:
    """Orbit of length ``n + 1`` of ``z0`` under the self-map ``m``.

    Iterates that leave the model domain by more than ``1e-12`` raise
    :class:`SelfMapViolation`; smaller excursions are rounding and are kept.
    """
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise InvalidParameter("n must be a positive integer")
    _check_start(m.model, z0)
    pts = _iterate_points(m, complex(z0), int(n))
    steps = _steps(m.model, pts)
    return OrbitRecord(complex(z0), pts, steps, m.model, _hint(m))


def _steps(model, pts):
    a, b = pts[:-1], pts[1:]
    ok = _inside(model, a) & _inside(model, b)
    s = np.full(a.shape, np.inf)
    if np.any(ok):
        s[ok] = _model_distance(model, a[ok], b[ok])
    return s


# --------------------------------------------------------- Denjoy-Wolff

@dataclass(frozen=True)
class NoneIndicator:
    """No Denjoy-Wolff point: the map has an interior fixed point."""

    fixed_point: complex

    def __bool__(self):
        return False


@dataclass(frozen=True)
class DenjoyWolff:
    point: complex
    iterations: int
    spread: float
    tolerance: float


def _interior_fixed_point(m, z, tol=1e-12, its=200):
    # polish a fixed point estimate by Newton on f(z) - z
    for _ in range(its):
        h = 1e-7
        f = m(z)
        df = (m(z + h) - m(z - h)) / (2 * h)
        step = (f - z) / (df - 1.0) if df != 1.0 else 0.0
        z = z - step
        if abs(step) < tol:
            break
    return complex(z)


def denjoy_wolff_point(m, starts=DW_STARTS, budget=DW_BUDGET, tol=None):
    """Denjoy-Wolff point of a disk self-map by iteration.

    Three starts are iterated in blocks.  Convergence needs every orbit to
    move by less than ``tol/2`` between iterate ``n/2`` and ``n`` and all
    orbits to agree within ``tol``.  The tolerance is 1e-4 for parabolic
    automorphisms, 1e-8 for hyperbolic ones and 1e-6 otherwise.

    Returns
    -------
    DenjoyWolff, or NoneIndicator when an interior fixed point is found.

    Raises
    ------
    ConvergenceFailure
        when the budget is exhausted without a verdict.
    """
    if isinstance(m, MobiusSelfMap) and m.model == "halfplane":
        m = m.to_disk(1.0)
    if m.model != "disk":
        raise InvalidParameter("denjoy_wolff_point needs a disk self-map")
    kind = None
    if isinstance(m, MobiusSelfMap):
        c = classify(m)
        kind = c.kind
        if kind == "elliptic":
            return NoneIndicator(complex(c.fixed_points[0]))
    if tol is None:
        tol = DW_TOL.get(kind, DW_TOL["generic"])
    z = np.asarray(starts, dtype=complex)
    for s in z:
        _check_start("disk", s)
    hist = {0: z.copy()}
    n = 0
    block = 1
    prev_step = None
    while n < budget:
        nb = min(block, budget - n)
        pts = _iterate_points(m, z, nb)
        z = pts[:, -1]
        n += nb
        hist[n] = z.copy()
        half = hist.get(n // 2)
        if half is None:
            half = pts[:, nb // 2] if nb > 1 else hist[n - nb]
        move = np.abs(z - half).max()
        spread = np.abs(z - z[0]).max()
        if move < 0.5 * tol and spread < tol:
            r = np.abs(z).max()
            if r < 1.0 - 10 * tol:
                return NoneIndicator(_interior_fixed_point(m, complex(z.mean())))
            p = complex(z.mean())
            return DenjoyWolff(p / abs(p), n, float(spread), float(tol))
        # stalled contraction toward an interior point
        step = np.abs(pts[:, -1] - pts[:, -2]).max() if nb > 1 else move
        if prev_step is not None and step < 1e-14 and np.abs(z).max() < 1 - 1e-6:
            return NoneIndicator(_interior_fixed_point(m, complex(z.mean())))
        prev_step = step
        hist = {k: v for k, v in hist.items() if k >= n // 4}
        block = n  # doubling: iterate counts n = 1, 2, 4, ...
    raise ConvergenceFailure(f"no Denjoy-Wolff verdict within {budget} iterations")


# ------------------------------------------------------- divergence rate

@dataclass(frozen=True)
class DivergenceRate:
    """``k(f^n(z0), z0)/n`` with the difference to the ``n/2`` estimate."""

    rate: float
    diagnostic: float
    n: int
    half_rate: float

    def __float__(self):
        return self.rate


def divergence_rate(m, z0, n: int) -> DivergenceRate:
    """Divergence rate estimate ``k(f^n(z0), z0)/n`` in the model metric."""
    orb = iterate(m, z0, n)
    pts = orb.points
    k_n = float(_model_distance(m.model, pts[-1], pts[0]))
    rate = k_n / n
    h = n // 2
    half = float(_model_distance(m.model, pts[h], pts[0])) / h if h >= 1 else rate
    return DivergenceRate(rate, abs(rate - half), int(n), half)


# ------------------------------------------------------ Julia invariance

@dataclass
class JuliaReport:
    tau: complex
    samples: int
    rows: list  # dicts per R

    @property
    def violations(self):
        return int(sum(r["violations"] for r in self.rows))

    def to_dict(self):
        return {"tau": [self.tau.real, self.tau.imag], "samples": self.samples,
                "violations": self.violations, "per_R": self.rows}


def horocycle_samples(h: Horocycle, samples: int, seed=0):
    """Seeded uniform samples of the Euclidean disc of a horocycle."""
    rng = np.random.default_rng(seed)
    c, r = horocycle_euclidean(h)
    rad = r * np.sqrt(rng.random(samples))
    ang = 2 * np.pi * rng.random(samples)
    z = c + rad * np.exp(1j * ang)
    return z[np.abs(z) < 1]


def julia_invariance_check(m, tau, R_list, samples: int, seed=0, rel_tol=1e-10) -> JuliaReport:
    """Check ``m(E(tau, R)) subset E(tau, R)`` on sampled points.

    An image counts as a violation when its horocycle quotient exceeds
    ``R (1 + rel_tol)``; the widening absorbs rounding for maps that
    preserve every horocycle.  Each row also reports the largest quotient
    increase ``q(m z) - q(z)`` and the largest ratio ``q(m z)/q(z)``.
    """
    if isinstance(m, MobiusSelfMap) and m.model == "halfplane":
        m = m.to_disk(1.0)
    tau = complex(check_on_circle(tau, "tau"))
    rows = []
    for R in R_list:
        h = Horocycle(tau, R)
        z = horocycle_samples(h, samples, seed)
        fz = np.asarray(m(z), dtype=complex)
        inside = np.abs(fz) < 1
        q0 = horocycle_quotient(tau, z)
        q1 = np.where(inside, horocycle_quotient(tau, np.where(inside, fz, 0)), np.inf)
        viol = int(np.count_nonzero(~(q1 < R * (1 + rel_tol))))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(q0 > 0, q1 / q0, np.nan)
        rows.append({
            "R": float(R),
            "violations": viol,
            "max_quotient_increase": float(np.max(q1 - q0)),
            "max_quotient_ratio": float(np.nanmax(ratio)),
        })
    return JuliaReport(tau, int(samples), rows)


# ------------------------------------------------------ conjugated orbits

def conjugated_orbit(map_m, phi, w0, n: int, tail=0.25) -> OrbitRecord:
    """Orbit of ``g = h o phi o h^-1`` in the target of the conformal map ``h``.

    Step distances are disk distances of the preimages, which equal the
    hyperbolic step sizes in the target.  ``diagnostics`` holds the
    Euclidean diameter of the last ``tail`` fraction of the orbit and the
    smallest distance to the boundary along it.
    """
    if isinstance(phi, MobiusSelfMap) and phi.model == "halfplane":
        phi = phi.to_disk(1.0)
    z0 = complex(map_m.inverse(w0))
    orb = iterate(phi, z0, n)
    w = np.asarray(map_m.forward(orb.points), dtype=complex)
    w[0] = complex(w0)
    k = max(2, int(np.ceil(tail * w.size)))
    t = w[-k:]
    diam = float(np.abs(t[:, None] - t[None, :]).max())
    d = map_m.target
    dist = np.array([d.dist_to_boundary(x) if d.contains(x) else 0.0 for x in w])
    diag = {"tail_diameter": diam, "tail_size": int(k), "min_dist_to_boundary": float(dist.min()),
            "disk_points": orb.points}
    return OrbitRecord(complex(w0), w, orb.step_distances, "target", orb.hint, diag)


# ------------------------------------------------------------- self-map IO

def _cx(v, what):
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    raise FileFormatError(f"{what}: expected a number or a [re, im] pair, got {v!r}")


def selfmap_from_dict(spec) -> SelfMap:
    """Self-map from ``{"model", "kind", "coeffs"}``.

    * disk mobius: ``coeffs = [a, b]``;
    * halfplane mobius: ``coeffs = [a, b, c, d]`` of ``w -> (a w + b)/(c w + d)``
      on the right half-plane (complex entries; ``w -> w + i`` is
      ``[1, [0, 1], 0, 1]``);
    * disk blaschke: ``coeffs = [factor, zero_1, ...]``.

    Complex entries are numbers or ``[re, im]`` pairs.
    """
    if not isinstance(spec, dict):
        raise FileFormatError("self-map spec must be a JSON object")
    for key in ("model", "kind", "coeffs"):
        if key not in spec:
            raise FileFormatError(f"self-map spec: missing field {key!r}")
    model, kind, coeffs = spec["model"], spec["kind"], spec["coeffs"]
    if model not in ("disk", "halfplane"):
        raise FileFormatError(f"self-map spec: field 'model' must be disk or halfplane, got {model!r}")
    if not isinstance(coeffs, list):
        raise FileFormatError("self-map spec: field 'coeffs' must be a list")
    cs = [_cx(c, f"coeffs[{i}]") for i, c in enumerate(coeffs)]
    if kind == "mobius":
        if model == "disk":
            if len(cs) != 2:
                raise FileFormatError("self-map spec: disk mobius needs coeffs [a, b]")
            return MobiusSelfMap.disk(cs[0], cs[1])
        if len(cs) != 4:
            raise FileFormatError("self-map spec: halfplane mobius needs coeffs [a, b, c, d]")
        a, b, c, d = cs
        u = np.array([a, 1j * b, -1j * c, d])  # upper half-plane chart
        k = next((x for x in u if x != 0), 1.0)
        ph = k / abs(k)
        u = u / ph
        if np.abs(u.imag).max() > 1e-12 * np.abs(u).max():
            raise NotAnAutomorphism("coefficients do not preserve the right half-plane")
        return MobiusSelfMap.halfplane(*u.real)
    if kind == "blaschke":
        if model != "disk" or len(cs) < 2:
            raise FileFormatError("self-map spec: blaschke needs model disk and coeffs [factor, zeros...]")
        return Blaschke(cs[1:], cs[0])
    raise FileFormatError(f"self-map spec: unknown kind {kind!r}")


def selfmap_from_json(text) -> SelfMap:
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as e:
        raise FileFormatError(f"self-map spec: line {e.lineno} column {e.colno}: {e.msg}") from None
    return selfmap_from_dict(spec)


def parabolic_example() -> MobiusSelfMap:
    """``z -> ((1-i) z + i)/(-i z + 1 + i)``, parabolic with fixed point 1."""
    return MobiusSelfMap.disk(1 - 1j, 1j)
