import numpy as np
import pytest

from pipvec import (BBox, BatchResult, Classification, CrossingMode, DegenerateEdge, PointBatch,
                    Polygon, bbox_of, classify_batch, contains, prefilter_bbox)
from pipvec.batch import ERROR, BatchStats, resolve_parallelism
from pipvec.errors import InvalidGeometry
from pipvec.oracle import oracle_classify_many
from pipvec.synth import polygon_with_hole, random_polygon_corpus, star_polygon


def test_bbox_of(unit_square):
    assert bbox_of(unit_square) == BBox(0, 0, 1, 1)
    assert bbox_of(Polygon.from_coords([(-2, 3), (5, 3), (5, 7), (-2, 7)])) == BBox(-2, 3, 5, 7)
    assert bbox_of(Polygon.from_coords([(0, 0), (4, 0), (0, 3)])) == BBox(0, 0, 4, 3)


def test_bbox_rejects_inverted():
    with pytest.raises(ValueError):
        BBox(1, 0, 0, 1)


def test_point_batch_validation():
    with pytest.raises(InvalidGeometry):
        PointBatch(np.array([[0.0, np.nan]]))
    b = PointBatch.from_points([(1, 2), (3, 4)])
    assert b.count == 2
    assert b.ids.tolist() == [0, 1]


def test_prefilter_examples():
    box = BBox(0, 0, 1, 1)
    pre = prefilter_bbox(PointBatch.from_points([(0.5, 0.5), (2, 2)]), box)
    assert pre.inside_box.coords.tolist() == [[0.5, 0.5]]
    assert pre.index_map.tolist() == [0]
    assert pre.outside_count == 1
    # closed interval
    edge = prefilter_bbox(PointBatch.from_points([(1, 0.5)]), box)
    assert edge.index_map.tolist() == [0] and edge.outside_count == 0


def test_prefilter_scatter_restores_order(rng, unit_square):
    pts = rng.uniform(-1, 2, (1000, 2))
    batch = PointBatch(pts)
    pre = prefilter_bbox(batch, bbox_of(unit_square))
    assert np.all(np.diff(pre.index_map) > 0)
    inner = classify_batch(pre.inside_box, unit_square, parallelism=1)
    full = pre.scatter(inner.verdicts, batch.count)
    direct = classify_batch(batch, unit_square, parallelism=1)
    assert full.tobytes() == direct.verdicts.tobytes()


def test_classify_batch_probe_points(unit_square):
    batch = PointBatch.from_points([(0.5, 0.5), (1.5, 0.5), (0.5, -0.5), (-0.5, 0.5)])
    for mode in CrossingMode:
        res = classify_batch(batch, unit_square, mode)
        assert [res.classification(i) for i in range(4)] == [
            Classification.INSIDE, Classification.OUTSIDE, Classification.OUTSIDE, Classification.OUTSIDE]
        assert res.stats == BatchStats(inside=1, outside=3)


def test_classify_batch_empty(unit_square):
    res = classify_batch(PointBatch(np.empty((0, 2))), unit_square)
    assert len(res) == 0 and res.stats.total == 0


def test_error_slot_under_paper_c2(unit_square):
    batch = PointBatch.from_points([(0.5, 0.0), (0.5, 0.5), (0.2, 1.0)])
    res = classify_batch(batch, unit_square, "paper-c2")
    assert res.verdicts.tolist() == [ERROR, 1, ERROR]
    assert res.classification(0) is None
    assert res.stats == BatchStats(inside=1, error=2)
    assert res.labels() == ["error", "inside", "error"]
    robust = classify_batch(batch, unit_square, "robust")
    assert robust.labels() == ["boundary", "inside", "boundary"]


@pytest.mark.parametrize("workers", [1, 2, 3, 8, "auto"])
def test_parallel_determinism(rng, workers):
    poly = star_polygon(200, rng)
    batch = PointBatch(rng.uniform(-1.2, 1.2, (20000, 2)))
    base = classify_batch(batch, poly, "robust", parallelism=1)
    assert classify_batch(batch, poly, "robust", parallelism=workers) == base


def test_resolve_parallelism():
    assert resolve_parallelism(3) == 3
    assert resolve_parallelism("auto") >= 1
    with pytest.raises(ValueError):
        resolve_parallelism(0)


def _scalar_codes(pts, poly, mode):
    # classify_batch answers OUTSIDE for points outside the bbox without counting
    box = bbox_of(poly)
    inbox = box.contains_mask(pts).tolist()
    out = []
    for p, keep in zip(pts.tolist(), inbox):
        if not keep:
            out.append(int(Classification.OUTSIDE))
            continue
        try:
            out.append(int(contains(p, poly, mode)))
        except DegenerateEdge:
            out.append(ERROR)
    return out


@pytest.mark.parametrize("mode", list(CrossingMode))
def test_batch_matches_scalar_contains(rng, mode):
    polys = random_polygon_corpus(10, rng, 5, 80) + [polygon_with_hole(40, rng)]
    for poly in polys:
        lo = poly.outer.coords.min(axis=0)
        hi = poly.outer.coords.max(axis=0)
        pts = rng.uniform(lo - 0.05 * (hi - lo), hi + 0.05 * (hi - lo), (300, 2))
        # include vertices and edge midpoints to exercise the degenerate branches
        c = poly.outer.coords
        pts = np.vstack([pts, c[:-1], 0.5 * (c[:-1] + c[1:])])
        got = classify_batch(PointBatch(pts), poly, mode, parallelism=2)
        assert got.verdicts.tolist() == _scalar_codes(pts, poly, mode)


def test_batch_matches_scalar_on_grid_polygon():
    # integer grid: many vertex-on-ray and horizontal-edge coincidences
    poly = Polygon.from_coords([(0, 0), (4, 0), (4, 3), (3, 3), (3, 1), (2, 2), (1, 1), (1, 3), (0, 3)])
    xs, ys = np.meshgrid(np.arange(-1, 5.5, 0.5), np.arange(-1, 4.5, 0.5))
    pts = np.column_stack([xs.ravel(), ys.ravel()])
    for mode in CrossingMode:
        got = classify_batch(PointBatch(pts), poly, mode)
        assert got.verdicts.tolist() == _scalar_codes(pts, poly, mode)


def test_bbox_short_circuit_skips_constraint_degeneracies():
    # left of the bbox on the line of a horizontal edge: the edge-normal test
    # counts the horizontal edge and constraint 2 cannot divide, but the
    # prefilter answers first
    poly = Polygon.from_coords([(0, 0), (4, 0), (4, 3), (0, 3)])
    assert contains((-1, 0), poly, "paper-c1") is Classification.INSIDE
    with pytest.raises(DegenerateEdge):
        contains((-1, 0), poly, "paper-c2")
    batch = PointBatch.from_points([(-1, 0)])
    for mode in CrossingMode:
        assert classify_batch(batch, poly, mode).verdicts.tolist() == [0]


def test_oracle_sweep_100_vertices(rng):
    poly = star_polygon(100, rng, radius=5.0)
    pts = rng.uniform(-5.5, 5.5, (100_000, 2))
    got = classify_batch(PointBatch(pts), poly, "robust")
    ref = oracle_classify_many(pts, poly)
    assert np.array_equal(got.verdicts, ref)
    assert np.array_equal(np.bincount(got.verdicts, minlength=3), np.bincount(ref, minlength=3))


def test_batch_result_equality(unit_square):
    a = BatchResult(np.array([0, 1], dtype=np.int8), BatchStats(inside=1, outside=1))
    b = BatchResult(np.array([0, 1], dtype=np.int8), BatchStats(inside=1, outside=1))
    c = BatchResult(np.array([1, 0], dtype=np.int8), BatchStats(inside=1, outside=1))
    assert a == b and a != c
