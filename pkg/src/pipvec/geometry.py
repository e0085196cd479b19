"""Planar geometry types and the ray-casting crossing counters.

A horizontal ray is shot from the query point towards +x.  Edges whose
endpoints straddle the ray's supporting line are found from the sign of
``f_i = y_i - p_y`` and then restricted to the ray's half by one of two
tests:

* constraint 1, a side-of-line test against the edge normal oriented to
  point along +x (``count_crossings_c1``);
* constraint 2, the x-coordinate where the edge meets the line, kept when it
  lies strictly to the right of the point (``count_crossings_c2``).

Both counters reproduce the reference listings, including the non-strict
``f_i * f_{i+1} <= 0`` selection that counts a vertex lying on the ray in
both adjacent edges.  ``CrossingMode.ROBUST`` uses the half-open vertex rule
and reports points on the boundary explicitly instead.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import DegenerateEdge, InvalidGeometry, RingTooShort

DEFAULT_BOUNDARY_EPS = 1e-12


class Classification(enum.IntEnum):
    OUTSIDE = 0
    INSIDE = 1
    BOUNDARY = 2

    @property
    def label(self) -> str:
        return self.name.lower()


class CrossingMode(enum.Enum):
    PAPER_C1 = "paper-c1"
    PAPER_C2 = "paper-c2"
    ROBUST = "robust"

    @classmethod
    def parse(cls, value: "str | CrossingMode") -> "CrossingMode":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        for mode in cls:
            if key in (mode.value, mode.name.lower().replace("_", "-")):
                return mode
        raise ValueError(f"unknown crossing mode {value!r}; expected one of "
                         + ", ".join(m.value for m in cls))


@dataclass(frozen=True, slots=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        x, y = float(self.x), float(self.y)
        if not (math.isfinite(x) and math.isfinite(y)):
            raise InvalidGeometry(f"non-finite coordinate ({self.x}, {self.y})")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __iter__(self):
        yield self.x
        yield self.y

    def translated(self, dx: float, dy: float) -> "Point2":
        return Point2(self.x + dx, self.y + dy)


class EdgeNormal(NamedTuple):
    n_x: float
    n_y: float


def _as_coords(vertices) -> np.ndarray:
    if isinstance(vertices, np.ndarray):
        arr = np.array(vertices, dtype=np.float64)
    else:
        arr = np.array([tuple(v) for v in vertices], dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InvalidGeometry(f"expected an (n, 2) vertex array, got shape {arr.shape}")
    return arr


class Ring:
    """Closed vertex sequence ``R_0 .. R_n`` with ``R_0 == R_n``.

    Coordinates are held in a read-only ``(n + 1, 2)`` float64 array.
    Consecutive duplicate vertices are rejected since they form zero-length
    edges with no normal.
    """

    __slots__ = ("_coords",)

    def __init__(self, vertices):
        coords = _as_coords(vertices)
        if len(coords) < 4:
            raise RingTooShort(f"ring needs at least 4 vertices (closed triangle), got {len(coords)}")
        if not np.isfinite(coords).all():
            raise InvalidGeometry("ring contains non-finite coordinates")
        if not np.array_equal(coords[0], coords[-1]):
            raise InvalidGeometry("ring is not closed: first vertex differs from last")
        repeated = np.flatnonzero((coords[1:] == coords[:-1]).all(axis=1))
        if repeated.size:
            raise InvalidGeometry(f"repeated consecutive vertex at index {int(repeated[0]) + 1}")
        coords.setflags(write=False)
        self._coords = coords

    @classmethod
    def closed(cls, vertices) -> "Ring":
        """Build a ring, appending the first vertex if the input is open."""
        coords = _as_coords(vertices)
        if len(coords) and not np.array_equal(coords[0], coords[-1]):
            coords = np.vstack([coords, coords[:1]])
        return cls(coords)

    @property
    def coords(self) -> np.ndarray:
        return self._coords

    @property
    def vertices(self) -> tuple[Point2, ...]:
        return tuple(Point2(x, y) for x, y in self._coords.tolist())

    @property
    def n_edges(self) -> int:
        return len(self._coords) - 1

    def edge(self, i: int) -> tuple[Point2, Point2]:
        if not 0 <= i < self.n_edges:
            raise IndexError(f"edge index {i} out of range for {self.n_edges} edges")
        (xa, ya), (xb, yb) = self._coords[i].tolist(), self._coords[i + 1].tolist()
        return Point2(xa, ya), Point2(xb, yb)

    def translated(self, dx: float, dy: float) -> "Ring":
        return Ring(self._coords + np.array([dx, dy]))

    def rotated(self, k: int) -> "Ring":
        """Same closed curve starting from vertex ``k``."""
        open_ = self._coords[:-1]
        k %= len(open_)
        return Ring.closed(np.roll(open_, -k, axis=0))

    def __len__(self):
        return len(self._coords)

    def __eq__(self, other):
        if not isinstance(other, Ring):
            return NotImplemented
        return np.array_equal(self._coords, other._coords)

    def __hash__(self):
        return hash(self._coords.tobytes())

    def __repr__(self):
        return f"Ring({self._coords.tolist()!r})"


@dataclass(frozen=True)
class Polygon:
    outer: Ring
    holes: tuple[Ring, ...] = ()

    def __post_init__(self):
        if not isinstance(self.outer, Ring):
            object.__setattr__(self, "outer", Ring(self.outer))
        holes = tuple(h if isinstance(h, Ring) else Ring(h) for h in self.holes)
        object.__setattr__(self, "holes", holes)

    @classmethod
    def from_coords(cls, outer, holes: Iterable = ()) -> "Polygon":
        return cls(Ring.closed(outer), tuple(Ring.closed(h) for h in holes))

    @property
    def rings(self) -> tuple[Ring, ...]:
        return (self.outer, *self.holes)

    @property
    def n_edges(self) -> int:
        return sum(r.n_edges for r in self.rings)

    def translated(self, dx: float, dy: float) -> "Polygon":
        return Polygon(self.outer.translated(dx, dy),
                       tuple(h.translated(dx, dy) for h in self.holes))


def _xy(p) -> tuple[float, float]:
    if isinstance(p, Point2):
        return p.x, p.y
    x, y = p
    return float(x), float(y)


# --------------------------------------------------------------------------
# building blocks of the crossing test
# --------------------------------------------------------------------------

def signed_offsets(ring: Ring, p_y: float) -> np.ndarray:
    """Signed offset ``y_i - p_y`` of every ring vertex from the ray's line."""
    return ring.coords[:, 1] - p_y


def detect_sign_changes(offsets: Sequence[float]) -> np.ndarray:
    """Indices ``i`` with ``offsets[i] * offsets[i + 1] <= 0``, ascending.

    Zero products are kept, so an edge with an endpoint on the line counts.
    """
    f = np.asarray(offsets, dtype=np.float64)
    if f.size < 2:
        raise ValueError("need at least two offsets")
    return np.flatnonzero(f[1:] * f[:-1] <= 0)


def crossing_x_c2(ring: Ring, edge_index: int, p_y: float) -> float:
    """x where the line through edge ``edge_index`` meets ``y = p_y``.

    Raises
    ------
    DegenerateEdge
        If the edge is horizontal, leaving the line parameter undefined.
    """
    c = ring.coords
    xi, yi = c[edge_index].tolist()
    xj, yj = c[edge_index + 1].tolist()
    d_x, d_y = xj - xi, yj - yi
    if d_y == 0:
        raise DegenerateEdge(f"edge {edge_index} is horizontal at y={yi}", edge_index)
    lam = (p_y - yi) / d_y
    return xi + lam * d_x


def edge_normal_c1(ring: Ring, edge_index: int) -> EdgeNormal:
    """Normal of edge ``edge_index`` oriented so that ``n_x >= 0``."""
    c = ring.coords
    xi, yi = c[edge_index].tolist()
    xj, yj = c[edge_index + 1].tolist()
    if xi == xj and yi == yj:
        raise DegenerateEdge(f"edge {edge_index} has zero length", edge_index)
    n_x, n_y = yj - yi, xi - xj
    if n_x < 0:
        n_x, n_y = -n_x, -n_y
    return EdgeNormal(n_x, n_y)


def count_crossings_c1(p, ring: Ring) -> int:
    """Ray crossings counted with the edge-normal side test.

    An edge selected by the sign-change test counts when
    ``(p - R_i) . n <= 0`` for its +x oriented normal ``n``; points lying
    on the edge's line therefore count.
    """
    x, y = _xy(p)
    c = ring.coords
    idx = detect_sign_changes(signed_offsets(ring, y))
    start, end = c[idx], c[idx + 1]
    n_x = end[:, 1] - start[:, 1]
    n_y = start[:, 0] - end[:, 0]
    flip = n_x < 0
    n_x[flip] = -n_x[flip]
    n_y[flip] = -n_y[flip]
    line_pos = (x - start[:, 0]) * n_x + (y - start[:, 1]) * n_y
    return int(np.count_nonzero(line_pos <= 0))


def count_crossings_c2(p, ring: Ring) -> int:
    """Ray crossings counted from the edge/line intersection abscissa.

    Raises
    ------
    DegenerateEdge
        When a horizontal edge lies on the ray's line.
    """
    x, y = _xy(p)
    c = ring.coords
    idx = detect_sign_changes(signed_offsets(ring, y))
    start = c[idx]
    d = c[idx + 1] - start
    flat = np.flatnonzero(d[:, 1] == 0)
    if flat.size:
        i = int(idx[flat[0]])
        raise DegenerateEdge(f"edge {i} is horizontal on the ray y={y}", i)
    lam = (y - start[:, 1]) / d[:, 1]
    x_new = start[:, 0] + lam * d[:, 0]
    return int(np.count_nonzero(x_new > x))


def segment_distance(p, a, b) -> float:
    """Euclidean distance from ``p`` to the closed segment ``ab``."""
    px, py = _xy(p)
    ax, ay = _xy(a)
    bx, by = _xy(b)
    return _segment_distance(px, py, ax, ay, bx, by)


def _segment_distance(px, py, ax, ay, bx, by):
    dx, dy = bx - ax, by - ay
    wx, wy = px - ax, py - ay
    ll = dx * dx + dy * dy
    if ll == 0.0:
        return math.sqrt(wx * wx + wy * wy)
    t = (wx * dx + wy * dy) / ll
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    ex, ey = wx - t * dx, wy - t * dy
    return math.sqrt(ex * ex + ey * ey)


def _near_segment(px, py, ax, ay, bx, by, eps):
    # cheap band rejection before the distance; mirrored in the batch kernel
    if ay < by:
        lo_y, hi_y = ay, by
    else:
        lo_y, hi_y = by, ay
    if py < lo_y - eps or py > hi_y + eps:
        return False
    if ax < bx:
        lo_x, hi_x = ax, bx
    else:
        lo_x, hi_x = bx, ax
    if px < lo_x - eps or px > hi_x + eps:
        return False
    return _segment_distance(px, py, ax, ay, bx, by) <= eps


def on_boundary(p, poly: Polygon, eps: float = DEFAULT_BOUNDARY_EPS) -> bool:
    px, py = _xy(p)
    for ring in poly.rings:
        c = ring.coords.tolist()
        for (ax, ay), (bx, by) in zip(c, c[1:]):
            if _near_segment(px, py, ax, ay, bx, by, eps):
                return True
    return False


def count_crossings_robust(p, ring: Ring) -> int:
    """Crossings under the half-open rule: an edge counts when exactly one
    endpoint lies strictly above the ray and the crossing is right of ``p``.
    Horizontal edges never count."""
    px, py = _xy(p)
    c = ring.coords.tolist()
    count = 0
    for (xa, ya), (xb, yb) in zip(c, c[1:]):
        if (ya <= py < yb) or (yb <= py < ya):
            xc = xa + (py - ya) * (xb - xa) / (yb - ya)
            if px < xc:
                count += 1
    return count


def contains(p, poly: Polygon, mode: CrossingMode | str = CrossingMode.ROBUST,
             eps: float = DEFAULT_BOUNDARY_EPS) -> Classification:
    """Classify ``p`` against ``poly`` by even-odd parity over all rings.

    The paper modes never return ``BOUNDARY``.  ``PAPER_C2`` propagates
    ``DegenerateEdge`` when a horizontal edge lies on the ray.
    """
    mode = CrossingMode.parse(mode)
    if mode is CrossingMode.ROBUST:
        if on_boundary(p, poly, eps):
            return Classification.BOUNDARY
        counter = count_crossings_robust
    elif mode is CrossingMode.PAPER_C1:
        counter = count_crossings_c1
    else:
        counter = count_crossings_c2
    total = sum(counter(p, ring) for ring in poly.rings)
    return Classification.INSIDE if total % 2 else Classification.OUTSIDE
