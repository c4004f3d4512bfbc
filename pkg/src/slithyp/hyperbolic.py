"""Closed-form hyperbolic geometry of the model domains.

All quantities use the curvature -4 normalization, so the disk density is
``1/(1-|z|^2)`` and the right half-plane density is ``1/(2 Re w)``.  Every
function accepts scalars or numpy arrays of complex numbers.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BasePointNotOnCircle, InvalidParameter, PointOutsideDomain, SingularPoint

#: Sentinel for the point at infinity of the Riemann sphere.
INFINITY = complex(np.inf, 0.0)

#: Relative tolerance for "on the unit circle".
CIRCLE_TOL = 1e-12


def is_infinity(z) -> bool:
    return bool(np.isinf(np.real(z)) or np.isinf(np.imag(z)))


def _out(x):
    # numpy 0-d results go back to Python scalars
    if isinstance(x, np.generic) or (isinstance(x, np.ndarray) and x.ndim == 0):
        return x.item()
    return x


def _one_minus_abs2(z):
    r = np.abs(z)
    return (1.0 - r) * (1.0 + r)


def _check_disk(z, name="z"):
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)) or np.any(np.abs(z) >= 1.0):
        raise PointOutsideDomain(f"{name} must lie in the open unit disk")
    return z


def _check_halfplane(w, name="w"):
    w = np.asarray(w, dtype=complex)
    if not np.all(np.isfinite(w)) or np.any(w.real <= 0.0):
        raise PointOutsideDomain(f"{name} must lie in the right half-plane")
    return w


def check_on_circle(sigma, name="sigma"):
    """Return ``sigma`` as a complex array, checking ``|sigma| = 1``."""
    sigma = np.asarray(sigma, dtype=complex)
    if np.any(np.abs(np.abs(sigma) - 1.0) > CIRCLE_TOL):
        raise BasePointNotOnCircle(f"{name} must lie on the unit circle")
    return sigma


# ---------------------------------------------------------------- densities

def disk_density(z):
    """Hyperbolic density of the unit disk, ``1/(1-|z|^2)``."""
    z = _check_disk(z)
    return _out(1.0 / _one_minus_abs2(z))


def halfplane_density(w):
    """Hyperbolic density of the right half-plane, ``1/(2 Re w)``."""
    w = _check_halfplane(w)
    return _out(0.5 / w.real)


def strip_density(z, a, a_prime):
    """Hyperbolic density of the horizontal strip ``a < Im z < a_prime``."""
    if not a < a_prime:
        raise InvalidParameter("strip needs a < a_prime")
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)) or np.any((z.imag <= a) | (z.imag >= a_prime)):
        raise PointOutsideDomain("point outside the strip")
    width = a_prime - a
    return _out((np.pi / (2 * width)) / np.sin(np.pi * (z.imag - a) / width))


# ---------------------------------------------------------------- distances

def disk_distance(z, w):
    """Hyperbolic distance in the unit disk.

    Equal to ``arctanh(|z-w|/|1-conj(z)w|)``.  It is evaluated as
    ``arcsinh(|z-w| / sqrt((1-|z|^2)(1-|w|^2)))``, which avoids the
    cancellation in ``1 - rho`` near the boundary.
    """
    z = _check_disk(z, "z")
    w = _check_disk(w, "w")
    den = np.sqrt(_one_minus_abs2(z) * _one_minus_abs2(w))
    return _out(np.arcsinh(np.abs(z - w) / den))


def halfplane_distance(w1, w2):
    """Hyperbolic distance in the right half-plane."""
    w1 = _check_halfplane(w1, "w1")
    w2 = _check_halfplane(w2, "w2")
    return _out(np.arcsinh(np.abs(w1 - w2) / (2.0 * np.sqrt(w1.real * w2.real))))


# --------------------------------------------------------------- horocycles

@dataclass(frozen=True)
class Horocycle:
    """Disk horocycle ``E(base, R) = {z : |base-z|^2/(1-|z|^2) < R}``."""

    base: complex
    radius_param: float

    def __post_init__(self):
        check_on_circle(self.base, "base")
        if not (np.isfinite(self.radius_param) and self.radius_param > 0):
            raise InvalidParameter("radius_param must be positive")
        object.__setattr__(self, "base", complex(self.base))
        object.__setattr__(self, "radius_param", float(self.radius_param))

    @classmethod
    def from_level(cls, base, M):
        """Horocycle of Busemann level ``M`` (``R = e^{2M}``)."""
        return cls(base, float(np.exp(2.0 * M)))

    @property
    def level(self) -> float:
        return 0.5 * float(np.log(self.radius_param))

    def boundary_points(self, n, endpoint=False):
        """``n`` points of the boundary circle, starting opposite the base."""
        c, r = horocycle_euclidean(self)
        t = np.linspace(0.0, 2 * np.pi, n, endpoint=endpoint)
        # t = 0 is the point diametrically opposite the tangency point
        return c - r * self.base * np.exp(1j * t)


@dataclass(frozen=True)
class BusemannLevel:
    """Sublevel set of the Busemann function of a ray from ``ray_base``."""

    ray_base: complex
    boundary_base: complex
    level: float

    def horocycle(self) -> Horocycle:
        """Disk horocycle of this level for a ray from the origin.

        For a ray starting elsewhere the level is shifted by the Busemann
        value of the start point.
        """
        shift = busemann_disk(self.boundary_base, 0.0) - busemann_disk(self.boundary_base, self.ray_base)
        return Horocycle.from_level(self.boundary_base, self.level - shift)


def horocycle_euclidean(h: Horocycle):
    """Euclidean ``(center, radius)`` of a horocycle."""
    R = h.radius_param
    return h.base / (1.0 + R), R / (1.0 + R)


def horocycle_quotient(sigma, z):
    """The quotient ``|sigma-z|^2/(1-|z|^2)``."""
    z = np.asarray(z, dtype=complex)
    return np.abs(sigma - z) ** 2 / _one_minus_abs2(z)


def horocycle_contains(h: Horocycle, z):
    """Strict membership ``z in E(base, R)``."""
    z = _check_disk(z)
    return _out(horocycle_quotient(h.base, z) < h.radius_param)


def busemann_disk(sigma, z):
    """Busemann function ``1/2 ln(|sigma-z|^2/(1-|z|^2))`` of the radius to ``sigma``."""
    sigma = check_on_circle(sigma)
    z = _check_disk(z)
    return _out(np.log(np.abs(sigma - z)) - 0.5 * np.log(_one_minus_abs2(z)))


def cayley(sigma, z):
    """The map ``(sigma+z)/(sigma-z)`` from the disk onto the right half-plane.

    Sends ``sigma`` to :data:`INFINITY`; for arrays that entry raises
    :class:`SingularPoint`.
    """
    sigma = check_on_circle(sigma)
    z = np.asarray(z, dtype=complex)
    if np.any(z == sigma):
        raise SingularPoint("cayley is singular at z = sigma")
    return _out((sigma + z) / (sigma - z))


def cayley_inverse(sigma, w):
    """Inverse of :func:`cayley`; ``INFINITY`` maps back to ``sigma``."""
    sigma = complex(check_on_circle(sigma))
    if np.ndim(w) == 0 and is_infinity(w):
        return sigma
    w = np.asarray(w, dtype=complex)
    return _out(sigma * (w - 1.0) / (w + 1.0))
