"""Reading point CSVs and GeoJSON polygons, writing result CSVs."""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .batch import ERROR, VERDICT_LABELS, BatchResult, PointBatch
from .errors import (ColumnMissing, InvalidGeoJSON, InvalidGeometry, ParseError,
                     RingTooShort, UnsupportedGeometry)
from .geometry import Classification, Polygon, Ring

log = logging.getLogger(__name__)

RESULTS_HEADER = ("index", "x", "y", "verdict")
_LABEL_TO_CODE = {v: k for k, v in VERDICT_LABELS.items()}


@dataclass(frozen=True)
class PointsFileSpec:
    path: Path | str
    x_column: str | int = "x"
    y_column: str | int = "y"
    has_header: bool = True
    delimiter: str = ","
    lenient: bool = False

    def __post_init__(self):
        if self.x_column == self.y_column:
            raise ValueError("x_column and y_column must differ")
        if len(self.delimiter) != 1:
            raise ValueError("delimiter must be a single character")


@dataclass(frozen=True)
class ResultRecord:
    index: int
    x: float
    y: float
    verdict: Classification | None  # None marks an error

    @property
    def label(self) -> str:
        return "error" if self.verdict is None else self.verdict.label


def _resolve_column(col, header, path):
    if header is None:
        if isinstance(col, int) or (isinstance(col, str) and col.isdigit()):
            return int(col), str(col)
        raise ColumnMissing(col, path)
    if isinstance(col, int):
        if not 0 <= col < len(header):
            raise ColumnMissing(col, path)
        return col, header[col]
    names = [h.strip() for h in header]
    if col in names:
        return names.index(col), col
    if col.isdigit() and int(col) < len(header):
        return int(col), header[int(col)]
    raise ColumnMissing(col, path)


def read_points_csv(spec: PointsFileSpec) -> PointBatch:
    """Read one point per data row, in file order.

    In strict mode (default) the first bad row raises ``ParseError`` with
    its 1-based line number.  In lenient mode bad rows are skipped and
    counted; the returned batch's ``ids`` hold the data-row index of each
    kept point.
    """
    path = Path(spec.path)
    xs: list[float] = []
    ys: list[float] = []
    ids: list[int] = []
    skipped = 0
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=spec.delimiter)
        header = None
        if spec.has_header:
            header = next(reader, None)
            if header is None:
                raise ColumnMissing(spec.x_column, path)
        xi, xname = _resolve_column(spec.x_column, header, path)
        yi, yname = _resolve_column(spec.y_column, header, path)
        need = max(xi, yi)
        data_row = -1
        for row in reader:
            if not row:
                continue
            data_row += 1
            try:
                if len(row) <= need:
                    missing = xname if len(row) <= xi else yname
                    raise ParseError(reader.line_num, missing, f"row has only {len(row)} fields", path)
                x = _parse_coord(row[xi], reader.line_num, xname, path)
                y = _parse_coord(row[yi], reader.line_num, yname, path)
            except ParseError:
                if not spec.lenient:
                    raise
                skipped += 1
                continue
            xs.append(x)
            ys.append(y)
            ids.append(data_row)
    if skipped:
        log.warning("%s: skipped %d unparseable rows", path, skipped)
    coords = np.column_stack([np.asarray(xs, dtype=np.float64), np.asarray(ys, dtype=np.float64)])
    return PointBatch(coords, np.asarray(ids, dtype=np.int64))


def _parse_coord(text, line, column, path):
    try:
        v = float(text)
    except ValueError:
        raise ParseError(line, column, f"cannot parse {text!r} as a number", path) from None
    if not math.isfinite(v):
        raise ParseError(line, column, f"non-finite value {text!r}", path)
    return v


def write_points_csv(coords: np.ndarray, path, header=("x", "y")) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        fh.writelines(f"{x:.17g},{y:.17g}\n" for x, y in np.asarray(coords).tolist())


# -- GeoJSON ---------------------------------------------------------------

def _first_polygon_geometry(doc):
    if not isinstance(doc, dict) or "type" not in doc:
        raise InvalidGeoJSON("document is not a GeoJSON object with a 'type' member")
    kind = doc["type"]
    if kind == "FeatureCollection":
        features = doc.get("features")
        if not isinstance(features, list) or not features:
            raise InvalidGeoJSON("FeatureCollection has no features")
        return _first_polygon_geometry(features[0])
    if kind == "Feature":
        geom = doc.get("geometry")
        if geom is None:
            raise InvalidGeoJSON("Feature has a null geometry")
        return _first_polygon_geometry(geom)
    if kind == "Polygon":
        return doc
    if kind == "MultiPolygon":
        raise UnsupportedGeometry(kind, "only single Polygon geometries are supported; "
                                        "split the MultiPolygon into separate files")
    raise UnsupportedGeometry(kind)


def _ring_from_positions(positions, which):
    if not isinstance(positions, list):
        raise InvalidGeoJSON(f"{which} ring is not an array of positions")
    try:
        coords = [(float(p[0]), float(p[1])) for p in positions]
    except (TypeError, IndexError, ValueError) as exc:
        raise InvalidGeoJSON(f"{which} ring has a malformed position: {exc}") from None
    if coords and coords[0] != coords[-1]:
        coords.append(coords[0])
    if len(coords) < 4:
        raise RingTooShort(f"{which} ring has {len(coords)} vertices after closure; need at least 4")
    try:
        return Ring(coords)
    except RingTooShort:
        raise
    except InvalidGeometry as exc:
        raise InvalidGeoJSON(f"{which} ring: {exc}") from None


def parse_polygon_geojson(doc) -> Polygon:
    geom = _first_polygon_geometry(doc)
    rings = geom.get("coordinates")
    if not isinstance(rings, list) or not rings:
        raise InvalidGeoJSON("Polygon has no coordinate rings")
    outer = _ring_from_positions(rings[0], "outer")
    holes = tuple(_ring_from_positions(r, f"hole {i}") for i, r in enumerate(rings[1:], 1))
    return Polygon(outer, holes)


def read_polygon_geojson(path) -> Polygon:
    """Load the polygon of a GeoJSON Polygon, Feature or FeatureCollection.

    GeoJSON positions are (longitude, latitude) and map to (x, y).  Open
    rings are closed by repeating the first position.
    """
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidGeoJSON(f"{path}: {exc}") from None
    return parse_polygon_geojson(doc)


def polygon_to_geojson(poly: Polygon) -> dict:
    return {"type": "Polygon",
            "coordinates": [ring.coords.tolist() for ring in poly.rings]}


def write_polygon_geojson(poly: Polygon, path) -> None:
    Path(path).write_text(json.dumps(polygon_to_geojson(poly)), encoding="utf-8")


# -- results ---------------------------------------------------------------

def records_from_result(batch: PointBatch, result: BatchResult) -> Iterator[ResultRecord]:
    for idx, (x, y), code in zip(batch.ids.tolist(), batch.coords.tolist(), result.verdicts.tolist()):
        yield ResultRecord(idx, x, y, None if code == ERROR else Classification(code))


def write_results_csv(records: Iterable[ResultRecord], path) -> None:
    """Write ``index,x,y,verdict`` rows; coordinates use 17 significant digits."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        fh.write(",".join(RESULTS_HEADER) + "\n")
        fh.writelines(f"{r.index},{r.x:.17g},{r.y:.17g},{r.label}\n" for r in records)


def write_batch_results_csv(batch: PointBatch, result: BatchResult, path) -> None:
    """Fast path of ``write_results_csv`` for a whole batch."""
    labels = [VERDICT_LABELS[c] for c in range(-1, 3)]
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        fh.write(",".join(RESULTS_HEADER) + "\n")
        fh.writelines(
            f"{i},{x:.17g},{y:.17g},{labels[c + 1]}\n"
            for i, (x, y), c in zip(batch.ids.tolist(), batch.coords.tolist(), result.verdicts.tolist())
        )


def read_results_csv(path) -> list[ResultRecord]:
    out = []
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != RESULTS_HEADER:
            raise ParseError(1, "header", f"expected {','.join(RESULTS_HEADER)}, got {header}", path)
        for row in reader:
            try:
                code = _LABEL_TO_CODE[row[3]]
                out.append(ResultRecord(int(row[0]), float(row[1]), float(row[2]),
                                        None if code == ERROR else Classification(code)))
            except (IndexError, KeyError, ValueError) as exc:
                raise ParseError(reader.line_num, "verdict", str(exc), path) from None
    return out
