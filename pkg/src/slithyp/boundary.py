"""Boundary graphs and ordered boundary samples of materialized slit domains.

A truncated slit domain is bounded by a polygon with slits attached.  Its
boundary is read off as a planar graph; walking the face that contains the
domain (interior on the left) traverses every slit twice, once along each
side, which turns the boundary into a closed curve the zipper can follow.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domains import point_segment_distance
from .errors import NonJordanBoundary


def _split_segments(segs):
    """Split axis-parallel segments at every vertex lying on another segment."""
    pts = set()
    for a, b in segs:
        pts.add(a)
        pts.add(b)
    # crossings of horizontal and vertical segments
    hor = [(a, b) for a, b in segs if a.imag == b.imag]
    ver = [(a, b) for a, b in segs if a.real == b.real]
    for a, b in hor:
        x0, x1 = sorted((a.real, b.real))
        for c, d in ver:
            y0, y1 = sorted((c.imag, d.imag))
            if x0 <= c.real <= x1 and y0 <= a.imag <= y1:
                pts.add(complex(c.real, a.imag))
    pts = list(pts)
    P = np.array(pts)
    edges = set()
    for a, b in segs:
        d = b - a
        L2 = abs(d) ** 2
        t = ((P - a) * np.conj(d)).real / L2
        on = (t >= 0) & (t <= 1) & (point_segment_distance(P, a, b) == 0)
        cuts = sorted(set(t[on].tolist()) | {0.0, 1.0})
        loc = {float(tt): pts[i] for i, tt in zip(np.nonzero(on)[0], t[on])}
        loc[0.0], loc[1.0] = a, b
        for t0, t1 in zip(cuts[:-1], cuts[1:]):
            u, v = loc[t0], loc[t1]
            if u != v:
                edges.add((u, v) if (u.real, u.imag) < (v.real, v.imag) else (v, u))
    return sorted(edges, key=lambda e: (e[0].real, e[0].imag, e[1].real, e[1].imag))


@dataclass
class BoundaryWalk:
    """Counterclockwise face walk of a planar boundary graph.

    ``vertices[i] -> vertices[i+1]`` are the walked edges (cyclically) and
    ``angles[i]`` is the interior angle at ``vertices[i]``; a slit tip has
    angle ``2 pi``.
    """

    vertices: list
    angles: np.ndarray
    edges: list  # undirected graph edges, for feature-size estimates


def face_walk(segs, start):
    """Walk the face to the left of the directed edge ``start = (u, v)``."""
    edges = _split_segments(segs)
    adj = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    u0, v0 = start
    if v0 not in adj.get(u0, ()):
        raise NonJordanBoundary("start edge is not an edge of the boundary graph")
    walk = [u0]
    angles = []
    u, v = u0, v0
    for _ in range(4 * len(edges) + 4):
        back = np.angle(u - v)
        best, best_a = None, None
        for w in adj[v]:
            a = (back - np.angle(w - v)) % (2 * np.pi)
            if a <= 1e-15:
                a = 2 * np.pi
            if best_a is None or a < best_a:
                best, best_a = w, a
        angles.append(best_a)
        if (v, best) == (u0, v0):
            break
        walk.append(v)
        u, v = v, best
    else:
        raise NonJordanBoundary("boundary walk did not close")
    # angles[i] belongs to walk[i+1]; rotate so angles align with vertices
    angles = np.roll(np.array(angles), 1)
    return BoundaryWalk(walk, angles, edges)


def _half_sequence(half, hmin, hmax, rho):
    d = [hmin]
    while True:
        step = min(max(rho * d[-1], hmin), hmax)
        if d[-1] + step > half:
            break
        d.append(d[-1] + step)
    return np.array(d)


def graded_positions(length, hmin, hmax, rho=1.0, hmin_end=None):
    """Interior sample abscissae on ``(0, length)``, graded toward both ends.

    ``hmin`` is the first spacing at ``0`` and ``hmin_end`` (default
    ``hmin``) the one at ``length``.
    """
    hl = min(hmin, hmax)
    hr = hl if hmin_end is None else min(hmin_end, hmax)
    half = 0.5 * length
    if length <= 2 * max(hl, hr):
        return np.array([half]) if length > min(hl, hr) else np.array([])
    cut = half - 0.3 * min(hmax, rho * half)
    dl = _half_sequence(half, hl, hmax, rho)
    dr = _half_sequence(half, hr, hmax, rho)
    return np.concatenate([dl[dl < cut], [half], length - dr[dr < cut][::-1]])


def feature_sizes(edges, n_probe=33):
    """Distance from each edge to the nearest non-adjacent edge."""
    out = np.empty(len(edges))
    t = np.linspace(0, 1, n_probe)
    for i, (a, b) in enumerate(edges):
        z = a + t * (b - a)
        best = np.inf
        for j, (c, d) in enumerate(edges):
            if j == i or {a, b} & {c, d}:
                continue
            best = min(best, float(point_segment_distance(z, c, d).min()))
        out[i] = best
    return out


def vertex_feature_sizes(vertices, edges):
    """Distance from each vertex to the nearest edge not incident to it."""
    out = {}
    for u in set(vertices):
        best = np.inf
        for c, d in edges:
            if u in (c, d):
                continue
            best = min(best, float(point_segment_distance(np.array([u]), c, d)[0]))
        out[u] = best
    return out


@dataclass
class BoundarySamples:
    """Ordered boundary samples with twin links.

    ``twin[k] = j >= 0`` when sample ``k`` revisits the boundary point of an
    earlier sample ``j`` from the other side (second side of a slit, or a
    vertex reached again).
    """

    points: np.ndarray
    twin: np.ndarray
    theta0: float
    exact_first_edge: bool


def sample_walk(walk: BoundaryWalk, h, hmin, capf=0.5, rho=1.0, exact_first_edge=False, floor=0.0):
    """Place graded samples along a boundary walk."""
    key = lambda u, v: (u, v) if (u.real, u.imag) < (v.real, v.imag) else (v, u)
    lfs = dict(zip(walk.edges, feature_sizes(walk.edges)))
    # narrow passages at vertices (a slit tip close to another edge) get finer first spacings
    vfs = vertex_feature_sizes(walk.vertices, walk.edges)
    end_h = lambda x: min(hmin, max(capf * vfs[x], 1e-15))
    pts, twin = [], []
    seen, edge_ids = {}, {}
    V = walk.vertices
    n = len(V)
    for i in range(n):
        u, v = V[i], V[(i + 1) % n]
        twin.append(seen.get(u, -1) if i > 0 else -1)
        seen[u] = len(pts)
        pts.append(u)
        k = key(u, v)
        if k in edge_ids:
            for j in edge_ids[k][::-1]:
                twin.append(j)
                pts.append(pts[j])
            continue
        if i == 0 and exact_first_edge:
            edge_ids[k] = []
            continue
        L = abs(v - u)
        hmax = min(h, max(capf * lfs.get(k, np.inf), floor))
        s = graded_positions(L, end_h(u), hmax, rho, end_h(v))
        ids = []
        for tt in s:
            ids.append(len(pts))
            pts.append(u + (v - u) * (tt / L))
            twin.append(-1)
        edge_ids[k] = ids
    return BoundarySamples(np.array(pts), np.array(twin), float(walk.angles[0]), exact_first_edge)


