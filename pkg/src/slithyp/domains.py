"""Slit domains with exact distance-to-boundary and containment oracles.

A :class:`SlitDomain` is a base region (the square ``(-1,1)^2``, the right
half-plane or a user rectangle) minus closed rectilinear slits.  Two infinite
families are built in:

``comb``
    the square minus ``L_0 = [-1, 0]`` and the teeth
    ``L_{+-a_n} = {-1 <= Re z <= 0, Im z = +-a_n}`` for a decreasing
    sequence ``a_n -> 0``;
``petersen``
    the base minus the vertical rays ``{Re z = x_n, |Im z| >= y_n}`` with
    ``x_n = 2^-n`` and ``y_n = 2^-n exp(-3^n)``, ``n = 0, 1, ...``.

Infinite families are never materialized.  Distances are computed from the
few slit indices nearest to the query coordinate, found with a logarithm.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (CurveExitsDomain, FileFormatError, InvalidParameter, InvalidSequence,
                     NonJordanBoundary, PointOutsideDomain, TruncationUnderflow)

LN2 = math.log(2.0)

# Petersen y_n = 2^-n e^{-3^n} stays a normal double up to n = 5.
PETERSEN_MAX_MATERIAL = 5


# ------------------------------------------------------------ geometry kernel

def point_segment_distance(z, a, b):
    """Euclidean distance from ``z`` (array) to the closed segment ``[a, b]``."""
    z = np.asarray(z, dtype=complex)
    d = b - a
    L2 = (d * d.conjugate()).real
    if L2 == 0:
        return np.abs(z - a)
    t = np.clip(((z - a) * np.conj(d)).real / L2, 0.0, 1.0)
    return np.abs(z - (a + t * d))


def _orient(p, q, r):
    v = (q.real - p.real) * (r.imag - p.imag) - (q.imag - p.imag) * (r.real - p.real)
    return (v > 0) - (v < 0)


def _on_seg(p, q, r):
    # r collinear with p, q: is r within the bounding box of [p, q]
    return (min(p.real, q.real) <= r.real <= max(p.real, q.real)
            and min(p.imag, q.imag) <= r.imag <= max(p.imag, q.imag))


def segments_intersect(p, q, a, b) -> bool:
    """True if the closed segments ``[p, q]`` and ``[a, b]`` meet."""
    o1, o2 = _orient(p, q, a), _orient(p, q, b)
    o3, o4 = _orient(a, b, p), _orient(a, b, q)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and _on_seg(p, q, a):
        return True
    if o2 == 0 and _on_seg(p, q, b):
        return True
    if o3 == 0 and _on_seg(a, b, p):
        return True
    if o4 == 0 and _on_seg(a, b, q):
        return True
    return False


# ----------------------------------------------------------------- sequences

@dataclass(frozen=True)
class ToothSequence:
    """Decreasing positive sequence ``a_1 > a_2 > ... -> 0`` for the comb.

    ``rule`` is ``"geometric"`` (``a_n = ratio**n``), ``"power"``
    (``a_n = (n+1)**-power``) or ``"explicit"`` (finite list ``values``).
    """

    rule: str = "geometric"
    ratio: float = 0.5
    power: float = 1.0
    values: tuple = ()

    def __post_init__(self):
        if self.rule == "geometric":
            if not 0 < self.ratio < 1:
                raise InvalidSequence("geometric ratio must lie in (0, 1)")
        elif self.rule == "power":
            if not self.power > 0:
                raise InvalidSequence("power must be positive")
        elif self.rule == "explicit":
            v = np.asarray(self.values, dtype=float)
            if v.size == 0 or np.any(~np.isfinite(v)) or np.any(v <= 0) or np.any(np.diff(v) >= 0) or v[0] >= 1:
                raise InvalidSequence("explicit values must be strictly decreasing in (0, 1)")
            object.__setattr__(self, "values", tuple(float(x) for x in v))
        else:
            raise InvalidSequence(f"unknown sequence rule {self.rule!r}")

    @property
    def length(self):
        """Number of terms, or ``None`` for an infinite sequence."""
        return len(self.values) if self.rule == "explicit" else None

    def term(self, n):
        n = np.asarray(n)
        if self.rule == "geometric":
            out = self.ratio ** n.astype(float)
        elif self.rule == "power":
            out = (n + 1.0) ** (-self.power)
        else:
            out = np.asarray(self.values)[n - 1]
        return out.item() if out.ndim == 0 else out

    def half_width(self, n):
        """``eps_n = (a_n - a_{n+1})/2``."""
        return 0.5 * (self.term(n) - self.term(np.asarray(n) + 1))

    def index_guess(self, t):
        """Vectorized estimate, within +-2, of the first index with ``a_n <= t``."""
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if self.rule == "explicit":
                v = np.asarray(self.values)[::-1]
                g = len(self.values) - np.searchsorted(v, t, side="right") + 1.0
            elif self.rule == "geometric":
                g = np.ceil(np.log(t) / math.log(self.ratio))
            else:
                g = np.ceil(t ** (-1.0 / self.power) - 1.0)
        g = np.where(np.isfinite(g), g, 1e15)
        return np.clip(g, 1, 1e15).astype(np.int64)

    def first_at_or_below(self, t: float) -> int:
        """Smallest ``n >= 1`` with ``a_n <= t`` (``t > 0``)."""
        if self.rule == "explicit":
            v = np.asarray(self.values)
            # v is decreasing; count terms strictly above t
            return int(np.sum(v > t)) + 1
        if self.rule == "geometric":
            guess = math.log(t) / math.log(self.ratio)
        else:
            guess = t ** (-1.0 / self.power) - 1.0
        if not np.isfinite(guess):
            guess = 1e18
        n = max(1, int(math.ceil(guess)) - 1)
        while n > 1 and self.term(n - 1) <= t:
            n -= 1
        while self.term(n) > t:
            n += 1
        return n

    def to_dict(self):
        if self.rule == "geometric":
            return {"rule": "geometric", "ratio": self.ratio}
        if self.rule == "power":
            return {"rule": "power", "power": self.power}
        return {"rule": "explicit", "values": list(self.values)}

    @classmethod
    def from_dict(cls, d):
        d = dict(d or {})
        rule = d.pop("rule", "geometric")
        if rule == "explicit":
            return cls(rule, values=tuple(d.get("values", ())))
        if rule == "power":
            return cls(rule, power=float(d.get("power", 1.0)))
        return cls(rule, ratio=float(d.get("ratio", 0.5)))


# Petersen sequences; logs avoid underflow of y_n
def petersen_x(n):
    return 2.0 ** (-np.asarray(n, dtype=float))


def petersen_log_y(n):
    n = np.asarray(n, dtype=float)
    return -n * LN2 - 3.0 ** n


def petersen_y(n):
    return np.exp(petersen_log_y(n))


def petersen_c(n):
    return 3.0 * 2.0 ** (-(np.asarray(n, dtype=float) + 2))


def petersen_eps(n):
    return 2.0 ** (-(np.asarray(n, dtype=float) + 2))


# -------------------------------------------------------------- model domains

class UnitDisk:
    """The unit disk as a domain with ``dist(z) = 1 - |z|``."""

    def contains(self, z):
        return np.abs(np.asarray(z, dtype=complex)) < 1.0

    def dist_to_boundary(self, z):
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) >= 1):
            raise PointOutsideDomain("point outside the unit disk")
        return 1.0 - np.abs(z)

    def segment_clear(self, p, q):
        return bool(self.contains(p) and self.contains(q))


class RightHalfPlane:
    """The right half-plane with ``dist(w) = Re w``."""

    def contains(self, w):
        return np.asarray(w, dtype=complex).real > 0

    def dist_to_boundary(self, w):
        w = np.asarray(w, dtype=complex)
        if np.any(w.real <= 0):
            raise PointOutsideDomain("point outside the half-plane")
        return w.real

    def segment_clear(self, p, q):
        return bool(self.contains(p) and self.contains(q))


# --------------------------------------------------------------- slit domain

def _parse_base(base):
    if base == "square":
        return ("rect", -1.0, 1.0, -1.0, 1.0)
    if base == "halfplane":
        return ("halfplane",)
    if isinstance(base, dict) and "rect" in base:
        base = ("rect",) + tuple(base["rect"])
    if isinstance(base, (tuple, list)) and len(base) == 5 and base[0] == "rect":
        x0, x1, y0, y1 = (float(v) for v in base[1:])
        if not (x0 < x1 and y0 < y1) or not all(map(math.isfinite, (x0, x1, y0, y1))):
            raise InvalidParameter("rectangle needs x0 < x1 and y0 < y1")
        return ("rect", x0, x1, y0, y1)
    raise InvalidParameter(f"unknown base {base!r}")


@dataclass(frozen=True)
class SlitDomain:
    """Base region minus closed rectilinear slits.

    Parameters
    ----------
    base : ``"square"``, ``"halfplane"`` or ``("rect", x0, x1, y0, y1)``.
    family : ``None``, ``"comb"`` or ``"petersen"``.
    params : family parameters; for the comb a :class:`ToothSequence`.
    truncation : ``None`` for the full family, else the largest slit index
        kept.  Comb teeth are indexed from 1 and at least the first pair is
        always present; Petersen rays are indexed from 0.
    extra_slits : tuple of ``(x0, y0, x1, y1)`` horizontal or vertical
        closed segments.
    """

    base: tuple = ("rect", -1.0, 1.0, -1.0, 1.0)
    family: str | None = None
    params: object = None
    truncation: int | None = None
    extra_slits: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "base", _parse_base(self.base))
        if self.family not in (None, "comb", "petersen"):
            raise InvalidParameter(f"unknown family {self.family!r}")
        if self.family == "comb":
            p = self.params
            if p is None:
                p = ToothSequence()
            elif isinstance(p, dict):
                p = ToothSequence.from_dict(p)
            object.__setattr__(self, "params", p)
            if p.length is not None:
                N = p.length if self.truncation is None else min(self.truncation, p.length)
                object.__setattr__(self, "truncation", N)
        if self.truncation is not None:
            if int(self.truncation) != self.truncation or self.truncation < 0:
                raise InvalidParameter("truncation must be a nonnegative integer")
            object.__setattr__(self, "truncation", int(self.truncation))
        slits = []
        for s in self.extra_slits:
            x0, y0, x1, y1 = (float(v) for v in s)
            if not all(map(math.isfinite, (x0, y0, x1, y1))):
                raise InvalidParameter("extra slits must have finite endpoints")
            if x0 != x1 and y0 != y1:
                raise InvalidParameter("extra slits must be horizontal or vertical")
            slits.append((x0, y0, x1, y1))
        object.__setattr__(self, "extra_slits", tuple(slits))

    # -- descriptors

    @property
    def is_bounded(self):
        return self.base[0] == "rect"

    @property
    def index_range(self):
        """``(first, last)`` materialized slit index of the family; last may be ``None``."""
        if self.family == "comb":
            return 1, None if self.truncation is None else max(self.truncation, 1)
        if self.family == "petersen":
            return 0, self.truncation
        return None

    def is_symmetric(self) -> bool:
        """Whether the domain is symmetric about the real axis."""
        if self.base[0] == "rect" and self.base[3] != -self.base[4]:
            return False
        mirrored = {(x0, -y0, x1, -y1) for x0, y0, x1, y1 in self.extra_slits}
        norm = lambda S: {(min(a, c), min(b, d), max(a, c), max(b, d)) for a, b, c, d in S}
        return norm(mirrored) == norm(self.extra_slits)

    # -- base geometry

    def _base_dist(self, z):
        if self.base[0] == "halfplane":
            return z.real
        _, x0, x1, y0, y1 = self.base
        return np.minimum(np.minimum(z.real - x0, x1 - z.real), np.minimum(z.imag - y0, y1 - z.imag))

    def _in_base(self, z):
        return self._base_dist(z) > 0

    # -- family distance

    def _comb_dist(self, z):
        seq = self.params
        lo, hi = self.index_range
        x, ay = z.real, np.abs(z.imag)
        hx = np.maximum(x, 0.0)
        d = np.hypot(hx, ay)  # L_0
        m = seq.index_guess(ay)
        if hi is not None:
            m = np.minimum(m, hi)
        cand = m[..., None] + np.arange(-3, 4)
        ok = cand >= lo
        if hi is not None:
            ok &= cand <= hi
        a = np.where(ok, seq.term(np.where(ok, cand, lo).astype(np.int64)), np.inf)
        dt = np.hypot(hx[..., None], ay[..., None] - a)
        return np.minimum(d, dt.min(axis=-1))

    def _petersen_dist(self, z):
        lo, hi = self.index_range
        x, ay = z.real, np.abs(z.imag)
        with np.errstate(divide="ignore"):
            m = np.floor(-np.log2(np.maximum(x, 1e-300)))
        cand = m[..., None] + np.arange(-2, 4)
        ok = cand >= lo
        if hi is not None:
            ok &= cand <= hi
        n = np.where(ok, cand, lo)
        xn, yn = petersen_x(n), petersen_y(n)
        dx = x[..., None] - xn
        gap = np.maximum(yn - ay[..., None], 0.0)
        dd = np.where(ok, np.hypot(dx, gap), np.inf)
        return dd.min(axis=-1)

    def _extra_dist(self, z):
        d = np.full(z.shape, np.inf)
        for x0, y0, x1, y1 in self.extra_slits:
            d = np.minimum(d, point_segment_distance(z, complex(x0, y0), complex(x1, y1)))
        return d

    def _raw_dist(self, z):
        d = self._base_dist(z)
        if self.family == "comb":
            d = np.minimum(d, self._comb_dist(z))
        elif self.family == "petersen":
            d = np.minimum(d, self._petersen_dist(z))
        if self.extra_slits:
            d = np.minimum(d, self._extra_dist(z))
        return d

    # -- public oracles

    def contains(self, z):
        """Membership in the open domain; slit points are outside."""
        z = np.asarray(z, dtype=complex)
        ok = np.isfinite(z) & self._in_base(np.where(np.isfinite(z), z, 0))
        zz = np.where(ok, z, 0)
        if self.family == "comb":
            ok &= ~self._on_comb(zz)
        elif self.family == "petersen":
            ok &= ~self._on_petersen(zz)
        if self.extra_slits:
            ok &= self._extra_dist(zz) > 0
        return ok.item() if ok.ndim == 0 else ok

    def _on_comb(self, z):
        seq = self.params
        lo, hi = self.index_range
        x, ay = z.real, np.abs(z.imag)
        left = (x <= 0)
        cand = seq.index_guess(ay)[..., None] + np.arange(-3, 4)
        ok = cand >= lo
        if hi is not None:
            ok &= cand <= hi
        a = np.where(ok, seq.term(np.where(ok, cand, lo)), np.nan)
        hit = (ay == 0) | np.any(a == ay[..., None], axis=-1)
        return hit & left

    def _on_petersen(self, z):
        lo, hi = self.index_range
        x, ay = z.real, np.abs(z.imag)
        mant, ex = np.frexp(x)
        n = 1 - ex  # x = 2^-n exactly when mant == 0.5
        on_line = (mant == 0.5) & (n >= lo)
        if hi is not None:
            on_line &= n <= hi
        with np.errstate(divide="ignore"):
            above = np.log(ay) >= petersen_log_y(np.where(on_line, n, 0))
        return on_line & above & (ay > 0)

    def dist_to_boundary(self, z):
        """Exact Euclidean distance to the boundary of the domain."""
        z = np.asarray(z, dtype=complex)
        if not np.all(self.contains(z)):
            raise PointOutsideDomain("point is not in the domain")
        d = self._raw_dist(z)
        return d.item() if d.ndim == 0 else d

    # -- segments

    def segment_clear(self, p, q) -> bool:
        """True if the closed segment ``[p, q]`` lies in the domain."""
        p, q = complex(p), complex(q)
        if not (self.contains(p) and self.contains(q)):
            return False
        # the base is convex, so only slits can block the segment
        if self.family == "comb" and self._comb_blocks(p, q):
            return False
        if self.family == "petersen" and self._petersen_blocks(p, q):
            return False
        for x0, y0, x1, y1 in self.extra_slits:
            if segments_intersect(p, q, complex(x0, y0), complex(x1, y1)):
                return False
        return True

    def _comb_blocks(self, p, q):
        # part of the segment with Re <= 0, as an interval of Im
        dx = q.real - p.real
        if dx == 0:
            if p.real > 0:
                return False
            t0, t1 = 0.0, 1.0
        else:
            tz = -p.real / dx
            if dx > 0:
                t0, t1 = 0.0, min(1.0, tz)
            else:
                t0, t1 = max(0.0, tz), 1.0
            if t0 > t1:
                return False
        ya = p.imag + t0 * (q.imag - p.imag)
        yb = p.imag + t1 * (q.imag - p.imag)
        lo_y, hi_y = min(ya, yb), max(ya, yb)
        if lo_y <= 0 <= hi_y:
            return True
        lo, hi = abs(lo_y), abs(hi_y)
        if lo > hi:
            lo, hi = hi, lo
        m = self.params.first_at_or_below(hi)
        last = self.index_range[1]
        return (last is None or m <= last) and self.params.term(m) >= lo

    def _petersen_blocks(self, p, q):
        lo, hi = self.index_range
        xa, xb = sorted((p.real, q.real))
        n_lo = max(lo, int(math.ceil(-math.log2(xb))))
        n_hi = int(math.floor(-math.log2(xa)))
        if hi is not None:
            n_hi = min(n_hi, hi)
        for n in range(n_lo, n_hi + 1):
            xn = 2.0 ** -n
            if not xa <= xn <= xb:
                continue
            if xb == xa:
                ys = [abs(p.imag), abs(q.imag)]
                if p.imag * q.imag <= 0:
                    ys.append(0.0)
                y = max(ys)
            else:
                t = (xn - p.real) / (q.real - p.real)
                y = abs(p.imag + t * (q.imag - p.imag))
            if y > 0 and math.log(y) >= petersen_log_y(n):
                return True
        return False

    # -- materialization

    def material_slits(self):
        """Finite list of slits as ``(a, b)`` complex endpoint pairs, clipped to the base."""
        if self.base[0] != "rect":
            raise NonJordanBoundary("materialization needs a bounded base")
        _, X0, X1, Y0, Y1 = self.base
        out = []

        def clip(a, b):
            x0, x1 = sorted((a.real, b.real))
            y0, y1 = sorted((a.imag, b.imag))
            x0, x1 = max(x0, X0), min(x1, X1)
            y0, y1 = max(y0, Y0), min(y1, Y1)
            if x0 <= x1 and y0 <= y1 and (x0 < x1 or y0 < y1):
                out.append((complex(x0, y0), complex(x1, y1)))

        lo_hi = self.index_range
        if self.family == "comb":
            if lo_hi[1] is None:
                raise NonJordanBoundary("comb must be truncated to materialize")
            clip(complex(-1, 0), complex(0, 0))
            for n in range(1, lo_hi[1] + 1):
                a = self.params.term(n)
                clip(complex(-1, a), complex(0, a))
                clip(complex(-1, -a), complex(0, -a))
        elif self.family == "petersen":
            if lo_hi[1] is None:
                raise NonJordanBoundary("petersen domain must be truncated to materialize")
            if lo_hi[1] > PETERSEN_MAX_MATERIAL:
                raise TruncationUnderflow(
                    f"y_n underflows for n > {PETERSEN_MAX_MATERIAL}; use N <= {PETERSEN_MAX_MATERIAL}")
            for n in range(lo_hi[0], lo_hi[1] + 1):
                xn, yn = float(petersen_x(n)), float(petersen_y(n))
                clip(complex(xn, yn), complex(xn, Y1))
                clip(complex(xn, Y0), complex(xn, -yn))
        for x0, y0, x1, y1 in self.extra_slits:
            clip(complex(x0, y0), complex(x1, y1))
        return out

    def base_corners(self):
        _, X0, X1, Y0, Y1 = self.base
        return [complex(X0, Y0), complex(X1, Y0), complex(X1, Y1), complex(X0, Y1)]

    def bbox(self):
        if self.base[0] == "rect":
            return self.base[1:]
        return None

    # -- serialization

    def to_dict(self):
        if self.base == ("rect", -1.0, 1.0, -1.0, 1.0):
            base = "square"
        elif self.base[0] == "halfplane":
            base = "halfplane"
        else:
            base = {"rect": list(self.base[1:])}
        if self.family == "comb":
            params = self.params.to_dict()
        else:
            params = {}
        return {"base": base, "family": self.family, "params": params,
                "truncation": self.truncation, "extra_slits": [list(s) for s in self.extra_slits]}

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise FileFormatError("domain spec must be a JSON object")
        unknown = set(d) - {"base", "family", "params", "truncation", "extra_slits"}
        if unknown:
            raise FileFormatError(f"unknown domain-spec fields: {sorted(unknown)}")
        if "base" not in d:
            raise FileFormatError("domain spec field 'base' is required")
        try:
            return cls(base=d["base"], family=d.get("family"), params=d.get("params") or None,
                       truncation=d.get("truncation"),
                       extra_slits=tuple(tuple(s) for s in d.get("extra_slits") or ()))
        except (TypeError, ValueError) as exc:
            if isinstance(exc, (InvalidParameter, InvalidSequence)):
                raise
            raise FileFormatError(f"bad domain spec: {exc}") from exc

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FileFormatError(f"domain spec: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
        return cls.from_dict(d)


def make_comb(a_rule=None, N=None) -> SlitDomain:
    """Comb domain: square minus ``L_0`` and the teeth ``L_{+-a_n}``, ``n <= N``.

    ``a_rule`` is a :class:`ToothSequence`, a dict accepted by
    :meth:`ToothSequence.from_dict`, or ``None`` for ``a_n = 2^-n``.
    ``N=None`` (or ``inf``) keeps every tooth.
    """
    if a_rule is None:
        a_rule = ToothSequence()
    elif isinstance(a_rule, dict):
        a_rule = ToothSequence.from_dict(a_rule)
    if N is not None and math.isinf(N):
        N = None
    return SlitDomain("square", "comb", a_rule, N)


def make_petersen(N=None, box=None) -> SlitDomain:
    """Petersen domain: right half-plane minus ``{Re z = x_n, |Im z| >= y_n}``, ``n <= N``.

    ``box=(X, Y)`` replaces the half-plane by the rectangle
    ``(0, X) x (-Y, Y)``, which makes a truncated domain Jordan.
    """
    if N is not None and math.isinf(N):
        N = None
    base = "halfplane" if box is None else ("rect", 0.0, float(box[0]), -float(box[1]), float(box[1]))
    d = SlitDomain(base, "petersen", None, N)
    if box is not None and N is not None and N > PETERSEN_MAX_MATERIAL:
        raise TruncationUnderflow(f"y_n underflows for n > {PETERSEN_MAX_MATERIAL}")
    return d


# ------------------------------------------------------------------ polylines

@dataclass(frozen=True)
class Polyline:
    """Ordered vertices of a piecewise linear curve."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.atleast_1d(np.asarray(self.vertices, dtype=complex))
        if v.ndim != 1:
            raise InvalidParameter("polyline vertices must be one-dimensional")
        object.__setattr__(self, "vertices", v)

    def __len__(self):
        return self.vertices.size

    def length(self):
        return float(np.abs(np.diff(self.vertices)).sum())

    def validate(self, domain, check_segments=True):
        """Raise :class:`CurveExitsDomain` unless the curve lies in ``domain``."""
        v = self.vertices
        if not np.all(domain.contains(v)):
            raise CurveExitsDomain("a polyline vertex lies outside the domain")
        if check_segments and hasattr(domain, "segment_clear"):
            for a, b in zip(v[:-1], v[1:]):
                if not domain.segment_clear(a, b):
                    raise CurveExitsDomain(f"segment {a} -> {b} leaves the domain")
        return self
