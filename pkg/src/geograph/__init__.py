"""Exact geometric graphs, forbidden-pattern detection and halving-line decompositions."""

__version__ = "0.1.0"

from .detect import DetectionResult, ForbiddenQuery, QueryKind, SearchBudget, Status, detect
from .errors import (
    CoordinateRangeError,
    DegenerateGeometryError,
    GeoGraphError,
    NotAMatchingError,
    ParseError,
    ValidationError,
)
from .geometry import DirectedLine, IntersectionType, Point, Segment, classify_pair, orient
from .graph import GeometricGraph, IntersectionMatrix, build_intersection_matrix, load_graph, save_graph

__all__ = [
    "CoordinateRangeError",
    "DegenerateGeometryError",
    "DetectionResult",
    "DirectedLine",
    "ForbiddenQuery",
    "GeoGraphError",
    "GeometricGraph",
    "IntersectionMatrix",
    "IntersectionType",
    "NotAMatchingError",
    "ParseError",
    "Point",
    "QueryKind",
    "SearchBudget",
    "Segment",
    "Status",
    "ValidationError",
    "build_intersection_matrix",
    "classify_pair",
    "detect",
    "load_graph",
    "orient",
    "save_graph",
]
