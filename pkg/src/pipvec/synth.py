"""Random simple polygons for benchmarks and cross-checks."""

from __future__ import annotations

import numpy as np

from .geometry import Polygon, Ring


def _sorted_angles(rng, n):
    # strictly increasing angles on [0, 2pi): every polar polygon is simple
    while True:
        a = np.sort(rng.uniform(0.0, 2.0 * np.pi, n))
        if np.all(np.diff(a) > 0):
            return a


def star_polygon(n_vertices: int, rng: np.random.Generator, center=(0.0, 0.0),
                 radius: float = 1.0, min_radius_frac: float = 0.2) -> Polygon:
    """Star-shaped (generally non-convex) simple polygon about ``center``."""
    if n_vertices < 3:
        raise ValueError("a polygon needs at least 3 vertices")
    a = _sorted_angles(rng, n_vertices)
    r = radius * rng.uniform(min_radius_frac, 1.0, n_vertices)
    xy = np.column_stack([center[0] + r * np.cos(a), center[1] + r * np.sin(a)])
    return Polygon(Ring.closed(xy))


def convex_polygon(n_vertices: int, rng: np.random.Generator, center=(0.0, 0.0),
                   radius: float = 1.0, aspect: float = 1.0) -> Polygon:
    """Convex polygon inscribed in an axis-aligned ellipse."""
    if n_vertices < 3:
        raise ValueError("a polygon needs at least 3 vertices")
    a = _sorted_angles(rng, n_vertices)
    xy = np.column_stack([center[0] + radius * np.cos(a),
                          center[1] + radius * aspect * np.sin(a)])
    return Polygon(Ring.closed(xy))


def polygon_with_hole(n_vertices: int, rng: np.random.Generator, radius: float = 1.0) -> Polygon:
    """Convex outer ring with a smaller star-shaped hole at its centre."""
    outer = convex_polygon(n_vertices, rng, radius=radius)
    hole = star_polygon(max(3, n_vertices // 2), rng, radius=0.5 * radius)
    return Polygon(outer.outer, (hole.outer,))


def random_polygon_corpus(count: int, rng: np.random.Generator,
                          min_vertices: int = 5, max_vertices: int = 500,
                          log_vertices: bool = False) -> list[Polygon]:
    """Alternating convex / star-shaped polygons with random size and offset.

    Vertex counts are uniform on ``[min_vertices, max_vertices]``, or
    log-uniform when ``log_vertices`` is set.
    """
    polys = []
    lo, hi = np.log(min_vertices), np.log(max_vertices + 1)
    for i in range(count):
        if log_vertices:
            n = min(int(np.exp(rng.uniform(lo, hi))), max_vertices)
        else:
            n = int(rng.integers(min_vertices, max_vertices + 1))
        center = tuple(rng.uniform(-100.0, 100.0, 2))
        radius = float(10.0 ** rng.uniform(-1.0, 1.5))
        if i % 2 == 0:
            polys.append(convex_polygon(n, rng, center, radius, aspect=float(rng.uniform(0.3, 1.0))))
        else:
            polys.append(star_polygon(n, rng, center, radius))
    return polys
