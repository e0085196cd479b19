import json

import numpy as np
import pytest

from pipvec import (Classification, ColumnMissing, InvalidGeoJSON, ParseError, Polygon,
                    RingTooShort, UnsupportedGeometry)
from pipvec.batch import PointBatch, classify_batch
from pipvec.geoio import (PointsFileSpec, ResultRecord, read_points_csv, read_polygon_geojson,
                          read_results_csv, records_from_result, write_batch_results_csv,
                          write_polygon_geojson, write_results_csv)

SQUARE_RING = [[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]]


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


# -- points ---------------------------------------------------------------

def test_read_points_with_header(tmp_path):
    p = _write(tmp_path, "pts.csv", "x,y\n0.5,0.5\n2,3\n")
    b = read_points_csv(PointsFileSpec(p))
    assert b.coords.tolist() == [[0.5, 0.5], [2.0, 3.0]]
    assert b.ids.tolist() == [0, 1]


def test_read_points_strict_parse_error(tmp_path):
    p = _write(tmp_path, "pts.csv", "x,y\nabc,0.5\n2,3\n")
    with pytest.raises(ParseError) as info:
        read_points_csv(PointsFileSpec(p))
    assert info.value.row == 2
    assert info.value.column == "x"


def test_read_points_rejects_non_finite(tmp_path):
    p = _write(tmp_path, "pts.csv", "x,y\n1,2\n3,nan\n")
    with pytest.raises(ParseError) as info:
        read_points_csv(PointsFileSpec(p))
    assert (info.value.row, info.value.column) == (3, "y")


def test_read_points_lenient_skips(tmp_path, caplog):
    p = _write(tmp_path, "pts.csv", "x,y\n1,2\nbad,2\n3,inf\n4,5\n")
    b = read_points_csv(PointsFileSpec(p, lenient=True))
    assert b.coords.tolist() == [[1, 2], [4, 5]]
    assert b.ids.tolist() == [0, 3]
    assert "skipped 2" in caplog.text


def test_read_points_named_columns_and_delimiter(tmp_path):
    p = _write(tmp_path, "pts.tsv", "id;latitude;longitude\n7;5.5;-0.2\n8;6.0;-1.5\n")
    b = read_points_csv(PointsFileSpec(p, x_column="longitude", y_column="latitude", delimiter=";"))
    assert b.coords.tolist() == [[-0.2, 5.5], [-1.5, 6.0]]


def test_read_points_headerless_by_index(tmp_path):
    p = _write(tmp_path, "pts.csv", "1,2\n3,4\n")
    b = read_points_csv(PointsFileSpec(p, x_column=0, y_column=1, has_header=False))
    assert b.coords.tolist() == [[1, 2], [3, 4]]
    with pytest.raises(ColumnMissing):
        read_points_csv(PointsFileSpec(p, has_header=False))


def test_read_points_missing_column_and_file(tmp_path):
    p = _write(tmp_path, "pts.csv", "lon,lat\n1,2\n")
    with pytest.raises(ColumnMissing):
        read_points_csv(PointsFileSpec(p))
    with pytest.raises(FileNotFoundError):
        read_points_csv(PointsFileSpec(tmp_path / "nope.csv"))


def test_points_spec_requires_distinct_columns(tmp_path):
    with pytest.raises(ValueError):
        PointsFileSpec(tmp_path / "a.csv", "x", "x")


# -- polygons -------------------------------------------------------------

def test_geojson_polygon(tmp_path, unit_square):
    p = _write(tmp_path, "sq.geojson", json.dumps({"type": "Polygon", "coordinates": [SQUARE_RING]}))
    poly = read_polygon_geojson(p)
    assert poly == unit_square
    assert poly.holes == ()


def test_geojson_auto_close_is_idempotent(tmp_path, unit_square):
    p = _write(tmp_path, "open.geojson", json.dumps({"type": "Polygon", "coordinates": [SQUARE_RING[:-1]]}))
    assert read_polygon_geojson(p) == unit_square
    assert len(read_polygon_geojson(p).outer) == 5


def test_geojson_feature_collection_with_hole(tmp_path, square_with_hole):
    hole = [[0.25, 0.25], [0.75, 0.25], [0.75, 0.75], [0.25, 0.75]]
    doc = {"type": "FeatureCollection", "features": [
        {"type": "Feature", "properties": {"name": "a"},
         "geometry": {"type": "Polygon", "coordinates": [SQUARE_RING, hole]}},
        {"type": "Feature", "properties": {}, "geometry": {"type": "Point", "coordinates": [0, 0]}},
    ]}
    p = _write(tmp_path, "fc.geojson", json.dumps(doc))
    assert read_polygon_geojson(p) == square_with_hole


@pytest.mark.parametrize("doc, exc", [
    ({"type": "Point", "coordinates": [0, 0]}, UnsupportedGeometry),
    ({"type": "MultiPolygon", "coordinates": [[SQUARE_RING]]}, UnsupportedGeometry),
    ({"type": "FeatureCollection", "features": []}, InvalidGeoJSON),
    ({"type": "Feature", "geometry": None}, InvalidGeoJSON),
    ({"type": "Polygon", "coordinates": [[[0, 0], [1, 0], [0, 0]]]}, RingTooShort),
    ({"type": "Polygon", "coordinates": [[[0, 0], [1, 0], [1, 0], [0, 1]]]}, InvalidGeoJSON),
    ({"coordinates": []}, InvalidGeoJSON),
])
def test_geojson_errors(tmp_path, doc, exc):
    p = _write(tmp_path, "bad.geojson", json.dumps(doc))
    with pytest.raises(exc) as info:
        read_polygon_geojson(p)
    if doc.get("type") == "Point":
        assert info.value.geometry_type == "Point"
    if doc.get("type") == "MultiPolygon":
        assert "MultiPolygon" in str(info.value)


def test_geojson_not_json(tmp_path):
    with pytest.raises(InvalidGeoJSON):
        read_polygon_geojson(_write(tmp_path, "x.geojson", "{nope"))


def test_geojson_round_trip(tmp_path, square_with_hole):
    path = tmp_path / "rt.geojson"
    write_polygon_geojson(square_with_hole, path)
    assert read_polygon_geojson(path) == square_with_hole


# -- results --------------------------------------------------------------

def test_write_results_single_record(tmp_path):
    path = tmp_path / "out.csv"
    write_results_csv([ResultRecord(0, 0.5, 0.5, Classification.INSIDE)], path)
    assert path.read_text() == "index,x,y,verdict\n0,0.5,0.5,inside\n"


def test_write_results_empty(tmp_path):
    path = tmp_path / "out.csv"
    write_results_csv([], path)
    assert path.read_text() == "index,x,y,verdict\n"
    assert read_results_csv(path) == []


def test_results_round_trip(tmp_path, rng):
    xs = rng.normal(size=10_000) * 10.0 ** rng.integers(-8, 8, 10_000)
    ys = rng.uniform(-180, 180, 10_000)
    verdicts = [None, *Classification]
    records = [ResultRecord(i, x, y, verdicts[i % 4]) for i, (x, y) in enumerate(zip(xs.tolist(), ys.tolist()))]
    path = tmp_path / "out.csv"
    write_results_csv(records, path)
    assert read_results_csv(path) == records


def test_batch_writer_matches_record_writer(tmp_path, rng, unit_square):
    batch = PointBatch(rng.uniform(-0.5, 1.5, (500, 2)))
    res = classify_batch(batch, unit_square, "robust")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_results_csv(records_from_result(batch, res), a)
    write_batch_results_csv(batch, res, b)
    assert a.read_bytes() == b.read_bytes()


def test_coordinates_round_trip_through_points_reader(tmp_path, rng):
    coords = rng.normal(size=(2000, 2)) * 1e3
    path = tmp_path / "out.csv"
    write_results_csv((ResultRecord(i, x, y, Classification.OUTSIDE)
                       for i, (x, y) in enumerate(coords.tolist())), path)
    back = read_points_csv(PointsFileSpec(path))
    assert back.coords.tobytes() == np.ascontiguousarray(coords).tobytes()
