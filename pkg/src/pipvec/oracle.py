"""Winding-number reference classifier.

Used to cross-check the ray-casting counters.  It shares no code with them
beyond the boundary-distance definition: each ring's enclosure is decided
from the accumulated signed angle subtended by its edges at the point.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import DEFAULT_BOUNDARY_EPS, Classification, Polygon, _xy, on_boundary

TWO_PI = 2.0 * math.pi


def winding_number(p, coords) -> int:
    px, py = _xy(p)
    pts = np.asarray(coords, dtype=np.float64).tolist()
    total = 0.0
    for (ax, ay), (bx, by) in zip(pts, pts[1:]):
        ux, uy = ax - px, ay - py
        vx, vy = bx - px, by - py
        total += math.atan2(ux * vy - uy * vx, ux * vx + uy * vy)
    return round(total / TWO_PI)


def oracle_classify(p, poly: Polygon, eps: float = DEFAULT_BOUNDARY_EPS) -> Classification:
    if on_boundary(p, poly, eps):
        return Classification.BOUNDARY
    enclosing = sum(1 for ring in poly.rings if winding_number(p, ring.coords) != 0)
    return Classification.INSIDE if enclosing % 2 else Classification.OUTSIDE


def winding_numbers(points: np.ndarray, coords: np.ndarray) -> np.ndarray:
    """Vectorised winding number of one closed ring about many points."""
    points = np.asarray(points, dtype=np.float64)
    px, py = points[:, 0], points[:, 1]
    total = np.zeros(len(points))
    for (ax, ay), (bx, by) in zip(coords[:-1].tolist(), coords[1:].tolist()):
        ux, uy = ax - px, ay - py
        vx, vy = bx - px, by - py
        total += np.arctan2(ux * vy - uy * vx, ux * vx + uy * vy)
    return np.rint(total / TWO_PI).astype(np.int64)


def min_edge_distance(points: np.ndarray, poly: Polygon) -> np.ndarray:
    """Distance from each point to the nearest edge of any ring."""
    points = np.asarray(points, dtype=np.float64)
    px, py = points[:, 0], points[:, 1]
    best = np.full(len(points), np.inf)
    for ring in poly.rings:
        c = ring.coords
        for (ax, ay), (bx, by) in zip(c[:-1].tolist(), c[1:].tolist()):
            dx, dy = bx - ax, by - ay
            wx, wy = px - ax, py - ay
            t = np.clip((wx * dx + wy * dy) / (dx * dx + dy * dy), 0.0, 1.0)
            np.minimum(best, np.hypot(wx - t * dx, wy - t * dy), out=best)
    return best


def oracle_classify_many(points: np.ndarray, poly: Polygon,
                         eps: float = DEFAULT_BOUNDARY_EPS) -> np.ndarray:
    """``oracle_classify`` over an ``(N, 2)`` array; returns Classification codes."""
    points = np.asarray(points, dtype=np.float64)
    enclosing = np.zeros(len(points), dtype=np.int64)
    for ring in poly.rings:
        enclosing += winding_numbers(points, ring.coords) != 0
    out = np.where(enclosing % 2 == 1, Classification.INSIDE, Classification.OUTSIDE).astype(np.int8)
    out[min_edge_distance(points, poly) <= eps] = Classification.BOUNDARY
    return out
