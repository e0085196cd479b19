"""Batch classification of many points against one polygon.

Points are split into contiguous chunks, one per worker thread, and each
worker writes its verdicts into disjoint slots of a preallocated array, so
the output does not depend on the worker count or on scheduling.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import InvalidGeometry
from .geometry import DEFAULT_BOUNDARY_EPS, Classification, CrossingMode, Polygon

ERROR = _kernels.ERROR

VERDICT_LABELS = {
    int(Classification.OUTSIDE): "outside",
    int(Classification.INSIDE): "inside",
    int(Classification.BOUNDARY): "boundary",
    ERROR: "error",
}

_MODE_CODES = {
    CrossingMode.PAPER_C1: _kernels.MODE_C1,
    CrossingMode.PAPER_C2: _kernels.MODE_C2,
    CrossingMode.ROBUST: _kernels.MODE_ROBUST,
}


@dataclass(frozen=True, eq=False)
class PointBatch:
    """Order-significant batch of finite 2-D points.

    ``ids`` carries a caller-defined identifier per point (by default its
    position); readers use it for the source row of each point.
    """

    coords: np.ndarray
    ids: np.ndarray | None = None

    def __post_init__(self):
        coords = np.ascontiguousarray(self.coords, dtype=np.float64).reshape(-1, 2)
        if not np.isfinite(coords).all():
            bad = int(np.flatnonzero(~np.isfinite(coords).all(axis=1))[0])
            raise InvalidGeometry(f"non-finite coordinate at point {bad}")
        ids = np.arange(len(coords), dtype=np.int64) if self.ids is None else np.asarray(self.ids, dtype=np.int64)
        if ids.shape != (len(coords),):
            raise ValueError("ids must have one entry per point")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "ids", ids)

    @classmethod
    def from_points(cls, points) -> "PointBatch":
        return cls(np.array([tuple(p) for p in points], dtype=np.float64).reshape(-1, 2))

    @property
    def count(self) -> int:
        return len(self.coords)

    def __len__(self):
        return self.count


@dataclass(frozen=True)
class BBox:
    min_x: float
    min_y: float
    max_x: float
    max_y: float

    def __post_init__(self):
        if not (self.min_x <= self.max_x and self.min_y <= self.max_y):
            raise ValueError(f"inverted bounding box {self}")

    def as_array(self) -> np.ndarray:
        return np.array([self.min_x, self.min_y, self.max_x, self.max_y], dtype=np.float64)

    def contains_mask(self, coords: np.ndarray) -> np.ndarray:
        x, y = coords[:, 0], coords[:, 1]
        return (x >= self.min_x) & (x <= self.max_x) & (y >= self.min_y) & (y <= self.max_y)

    def inflated(self, fraction: float) -> "BBox":
        """Grow by ``fraction`` of the width/height, split evenly per side."""
        hx = 0.5 * fraction * (self.max_x - self.min_x)
        hy = 0.5 * fraction * (self.max_y - self.min_y)
        return BBox(self.min_x - hx, self.min_y - hy, self.max_x + hx, self.max_y + hy)


def bbox_of(poly: Polygon) -> BBox:
    c = poly.outer.coords
    lo, hi = c.min(axis=0), c.max(axis=0)
    return BBox(float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))


@dataclass(frozen=True)
class Prefiltered:
    inside_box: PointBatch
    index_map: np.ndarray
    outside_count: int

    def scatter(self, verdicts: np.ndarray, total: int) -> np.ndarray:
        """Expand verdicts of ``inside_box`` back to the original order,
        filling excluded points with ``OUTSIDE``."""
        full = np.full(total, int(Classification.OUTSIDE), dtype=np.int8)
        full[self.index_map] = verdicts
        return full


def prefilter_bbox(batch: PointBatch, box: BBox) -> Prefiltered:
    """Keep points inside the closed box, remembering their original positions."""
    mask = box.contains_mask(batch.coords)
    index_map = np.flatnonzero(mask)
    kept = PointBatch(batch.coords[index_map], batch.ids[index_map])
    return Prefiltered(kept, index_map, int(batch.count - len(index_map)))


@dataclass(frozen=True)
class BatchStats:
    inside: int = 0
    outside: int = 0
    boundary: int = 0
    error: int = 0

    @classmethod
    def from_verdicts(cls, verdicts: np.ndarray) -> "BatchStats":
        return cls(
            inside=int(np.count_nonzero(verdicts == Classification.INSIDE)),
            outside=int(np.count_nonzero(verdicts == Classification.OUTSIDE)),
            boundary=int(np.count_nonzero(verdicts == Classification.BOUNDARY)),
            error=int(np.count_nonzero(verdicts == ERROR)),
        )

    @property
    def total(self) -> int:
        return self.inside + self.outside + self.boundary + self.error


@dataclass(frozen=True, eq=False)
class BatchResult:
    """Per-point verdict codes (``Classification`` values, or ``ERROR``)."""

    verdicts: np.ndarray
    stats: BatchStats = field(default_factory=BatchStats)

    def __eq__(self, other):
        if not isinstance(other, BatchResult):
            return NotImplemented
        return (self.verdicts.dtype == other.verdicts.dtype
                and self.verdicts.tobytes() == other.verdicts.tobytes()
                and self.stats == other.stats)

    def __len__(self):
        return len(self.verdicts)

    def classification(self, i: int) -> Classification | None:
        """Verdict of point ``i``; ``None`` marks a DegenerateEdge failure."""
        code = int(self.verdicts[i])
        return None if code == ERROR else Classification(code)

    def labels(self) -> list[str]:
        return [VERDICT_LABELS[c] for c in self.verdicts.tolist()]


def resolve_parallelism(parallelism: int | str | None) -> int:
    if parallelism is None or parallelism == "auto":
        return os.cpu_count() or 1
    n = int(parallelism)
    if n < 1:
        raise ValueError(f"parallelism must be >= 1 or 'auto', got {parallelism!r}")
    return n


def pack_rings(poly: Polygon) -> tuple[np.ndarray, np.ndarray]:
    """Stack every ring's vertices; ``offsets[r]:offsets[r+1]`` slices ring r."""
    rings = poly.rings
    verts = np.ascontiguousarray(np.vstack([r.coords for r in rings]))
    offsets = np.zeros(len(rings) + 1, dtype=np.int64)
    offsets[1:] = np.cumsum([len(r) for r in rings])
    return verts, offsets


def classify_batch(batch: PointBatch, poly: Polygon,
                   mode: CrossingMode | str = CrossingMode.ROBUST,
                   parallelism: int | str | None = "auto",
                   eps: float = DEFAULT_BOUNDARY_EPS) -> BatchResult:
    """Classify every point of ``batch``; ``verdicts[i]`` matches
    ``contains(batch[i], poly, mode)``.

    Points outside ``bbox_of(poly)`` are reported ``OUTSIDE`` without
    running the crossing count.  Under ``PAPER_C2`` a point whose ray runs
    along a horizontal edge gets the ``ERROR`` code and is tallied in
    ``stats.error``; the rest of the batch is unaffected.
    """
    mode = CrossingMode.parse(mode)
    workers = resolve_parallelism(parallelism)
    points = batch.coords
    n = len(points)
    verts, offsets = pack_rings(poly)
    box = bbox_of(poly).as_array()
    out = np.empty(n, dtype=np.int8)
    code = _MODE_CODES[mode]

    def run(lo, hi):
        _kernels.classify_range(points, verts, offsets, box, code, eps, out, lo, hi)

    workers = max(1, min(workers, n))
    if workers == 1:
        run(0, n)
    else:
        bounds = np.linspace(0, n, workers + 1).astype(np.int64).tolist()
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for fut in [pool.submit(run, lo, hi) for lo, hi in zip(bounds, bounds[1:])]:
                fut.result()
    return BatchResult(out, BatchStats.from_verdicts(out))
