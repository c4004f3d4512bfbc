"""Horocycles, Busemann functions and the disk metric.

Run with ``python3 demos/horocycles.py``.  The disk carries the metric of
curvature -4, so ``k(0, r) = artanh r``.
"""
import numpy as np

from slithyp import Horocycle, busemann_disk, disk_distance, horocycle_contains, horocycle_euclidean

# distances from the origin along a radius
r = np.array([0.0, 0.5, 0.9, 0.99, 0.999])
print("k(0, r)      ", np.round(disk_distance(0, r), 6))
print("artanh(r)    ", np.round(np.arctanh(r), 6))

# a horocycle is a Euclidean disc tangent to the circle at sigma
sigma = np.exp(0.7j)
for R in (0.25, 1.0, 4.0):
    c, rad = horocycle_euclidean(Horocycle(sigma, R))
    print(f"E(sigma, {R:4}) center {c:.4f} radius {rad:.4f} touches |z|=1 at {c + rad * sigma:.4f}")

# membership agrees with the disc on a grid
x = np.linspace(-1, 1, 401)
Z = (x[None, :] + 1j * x[:, None]).ravel()
Z = Z[np.abs(Z) < 1]
h = Horocycle(sigma, 1.0)
c, rad = horocycle_euclidean(h)
inside = horocycle_contains(h, Z)
print("grid points", Z.size, "disagreements", int(np.count_nonzero(inside != (np.abs(Z - c) < rad))))

# the Busemann function is constant on horocycles: 1/2 ln R
t = np.linspace(0, 2 * np.pi, 9)[:-1]
ring = c + rad * np.exp(1j * t)
ring = ring[np.abs(ring) < 1 - 1e-9]
print("busemann on the ring", np.round(busemann_disk(sigma, ring), 12), "1/2 ln R =", 0.5 * np.log(1.0))

# a finite difference of distances reproduces it
z = 0.3 - 0.2j
w = (1 - 1e-8) * sigma
print("k(z, w) - k(0, w) =", disk_distance(z, w) - disk_distance(0, w), " formula", busemann_disk(sigma, z))
