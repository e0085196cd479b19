"""Point-in-polygon classification by vector-geometric ray casting."""

from .batch import (BatchResult, BatchStats, BBox, PointBatch, bbox_of, classify_batch,
                    prefilter_bbox)
from .errors import (ColumnMissing, DegenerateEdge, DegenerateFit, InvalidGeoJSON,
                     InvalidGeometry, MissingFit, ParseError, RingTooShort, UnsupportedGeometry)
from .geometry import (Classification, CrossingMode, EdgeNormal, Point2, Polygon, Ring,
                       contains, count_crossings_c1, count_crossings_c2, crossing_x_c2,
                       detect_sign_changes, edge_normal_c1, segment_distance, signed_offsets)
from .oracle import oracle_classify

__all__ = [
    "BBox", "BatchResult", "BatchStats", "Classification", "ColumnMissing", "CrossingMode",
    "DegenerateEdge", "DegenerateFit", "EdgeNormal", "InvalidGeoJSON", "InvalidGeometry",
    "MissingFit", "ParseError", "Point2", "PointBatch", "Polygon", "Ring", "RingTooShort",
    "UnsupportedGeometry", "bbox_of", "classify_batch", "contains", "count_crossings_c1",
    "count_crossings_c2", "crossing_x_c2", "detect_sign_changes", "edge_normal_c1",
    "oracle_classify", "prefilter_bbox", "segment_distance", "signed_offsets",
]
