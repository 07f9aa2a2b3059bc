"""Geometric graphs, intersection matrices and their JSON form."""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .errors import NotAMatchingError, ParseError, ValidationError
from .geometry import (
    IntersectionType,
    Point,
    Segment,
    check_coordinates,
    classify_against,
    coords_array,
    validate_general_position,
)


@dataclass(frozen=True)
class GeometricGraph:
    """Integer points plus straight-line edges, validated on construction.

    Edges are normalised to ``(u, v)`` with ``u < v``; order is preserved
    otherwise, so edge indices are stable.
    """

    points: tuple
    edges: tuple

    def __init__(self, points, edges=(), validate=True):
        pts = tuple(Point(int(p[0]), int(p[1])) for p in points)
        es = tuple((min(int(u), int(v)), max(int(u), int(v))) for u, v in edges)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "edges", es)
        if validate:
            self.validate()

    def validate(self):
        check_coordinates(self.points)
        n = len(self.points)
        seen = set()
        for i, (u, v) in enumerate(self.edges):
            if u == v:
                raise ValidationError(f"edge {i} is a self-loop at vertex {u}", ("self-loop", i))
            if u < 0 or v >= n:
                raise ValidationError(f"edge {i} references a vertex out of range", ("range", i))
            if (u, v) in seen:
                raise ValidationError(f"edge {i} duplicates ({u}, {v})", ("duplicate-edge", i))
            seen.add((u, v))
        report = validate_general_position(self.points)
        if not report:
            raise ValidationError(f"points not in general position: {report.describe()}", report)

    @property
    def n(self) -> int:
        return len(self.points)

    def segment(self, i) -> Segment:
        u, v = self.edges[i]
        return Segment(self.points[u], self.points[v])

    def segment_coords(self, edge_ids=None) -> np.ndarray:
        ids = range(len(self.edges)) if edge_ids is None else edge_ids
        rows = [(*self.points[self.edges[i][0]], *self.points[self.edges[i][1]]) for i in ids]
        if not rows:
            return np.zeros((0, 4), dtype=np.int64)
        # two points per row, so reuse the point-array overflow guard
        flat = coords_array([(r[0], r[1]) for r in rows] + [(r[2], r[3]) for r in rows])
        return np.concatenate([flat[: len(rows)], flat[len(rows):]], axis=1)

    def degree(self):
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def with_edges(self, edges) -> "GeometricGraph":
        g = GeometricGraph(self.points, (), validate=False)
        object.__setattr__(g, "edges", tuple((min(u, v), max(u, v)) for u, v in edges))
        return g


class IntersectionMatrix:
    """Dense symmetric classification of every pair of distinct edges.

    ``provenance`` is ``"geometric"`` when built from a :class:`GeometricGraph`
    and ``"topological"`` for matrices supplied directly (abstract simple
    topological graphs, trusted as given).
    """

    def __init__(self, types, provenance="topological"):
        types = np.asarray(types, dtype=np.int8)
        if types.ndim != 2 or types.shape[0] != types.shape[1]:
            raise ValueError("intersection matrix must be square")
        if not np.array_equal(types, types.T):
            raise ValueError("intersection matrix must be symmetric")
        self.types = types
        self.provenance = provenance
        self._masks = {}

    @property
    def edge_count(self) -> int:
        return self.types.shape[0]

    def __getitem__(self, ij) -> IntersectionType:
        i, j = ij
        if i == j:
            raise KeyError("diagonal entries are undefined")
        return IntersectionType(int(self.types[i, j]))

    def __eq__(self, other):
        return isinstance(other, IntersectionMatrix) and np.array_equal(self.types, other.types)

    def pairs(self):
        for i, j in combinations(range(self.edge_count), 2):
            yield i, j, IntersectionType(int(self.types[i, j]))

    def masks(self, kind: IntersectionType):
        """Per-edge bitmask (Python int) of partners related by ``kind``."""
        kind = IntersectionType(kind)
        if kind not in self._masks:
            rel = self.types == kind
            np.fill_diagonal(rel, False)
            packed = np.packbits(rel, axis=1, bitorder="little")
            self._masks[kind] = [int.from_bytes(row.tobytes(), "little") for row in packed]
        return self._masks[kind]

    @classmethod
    def from_pairs(cls, edge_count, pairs: Iterable, provenance="topological"):
        types = np.full((edge_count, edge_count), -1, dtype=np.int8)
        for i, j, t in pairs:
            t = IntersectionType[t] if isinstance(t, str) else IntersectionType(t)
            if i == j or not (0 <= i < edge_count and 0 <= j < edge_count):
                raise ValidationError(f"bad matrix pair ({i}, {j})")
            types[i, j] = types[j, i] = t
        np.fill_diagonal(types, 0)
        off = ~np.eye(edge_count, dtype=bool)
        if (types[off] < 0).any():
            raise ValidationError("matrix does not list every unordered edge pair")
        np.fill_diagonal(types, -1)
        return cls(types, provenance)


def build_intersection_matrix(g: GeometricGraph) -> IntersectionMatrix:
    m = len(g.edges)
    types = np.full((m, m), -1, dtype=np.int8)
    coords = g.segment_coords()
    for i in range(m):
        if i + 1 < m:
            row = classify_against(coords[i], coords[i + 1:])
            types[i, i + 1:] = row
            types[i + 1:, i] = row
    return IntersectionMatrix(types, provenance="geometric")


def matching_intersection_graph(m: IntersectionMatrix, edge_ids) -> dict:
    """Adjacency (edge id -> set of ids) of the crossing relation on a matching."""
    ids = sorted(edge_ids)
    adj = {i: set() for i in ids}
    for i, j in combinations(ids, 2):
        t = m[i, j]
        if t == IntersectionType.SHARE_ENDPOINT:
            raise NotAMatchingError(f"edges {i} and {j} share an endpoint")
        if t == IntersectionType.CROSS:
            adj[i].add(j)
            adj[j].add(i)
    return adj


class CircleGraphPattern3(enum.Enum):
    """The four graphs on three vertices, in Figure-1 order.

    Values are (number of edges, sorted degree sequence) of the crossing graph.
    """

    TRIPLE_CROSSING = (3, (2, 2, 2))
    TRIPLE_DISJOINT = (0, (0, 0, 0))
    GRID_21 = (2, (1, 1, 2))
    FAMILY_21 = (1, (0, 1, 1))

    @classmethod
    def of(cls, adj: dict) -> "CircleGraphPattern3":
        degs = tuple(sorted(len(v) for v in adj.values()))
        return cls((sum(degs) // 2, degs))


PATTERN_LABELS = {
    "k3": CircleGraphPattern3.TRIPLE_CROSSING,
    "empty": CircleGraphPattern3.TRIPLE_DISJOINT,
    "grid21": CircleGraphPattern3.GRID_21,
    "family21": CircleGraphPattern3.FAMILY_21,
}


# ---------------------------------------------------------------------------
# serialisation


def _int(v, what):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"{what}: expected an integer, got {v!r}")
    return v


def graph_from_dict(doc):
    """Parse the JSON graph document.

    Returns a :class:`GeometricGraph`, or an :class:`IntersectionMatrix` when
    the document carries a ``matrix`` key (abstract topological input).
    """
    if not isinstance(doc, dict):
        raise ParseError("graph document must be a JSON object")
    if "matrix" in doc:
        mat = doc["matrix"]
        if not isinstance(mat, dict) or "edge_count" not in mat or "pairs" not in mat:
            raise ParseError("matrix needs edge_count and pairs")
        e = _int(mat["edge_count"], "edge_count")
        pairs = []
        for p in mat["pairs"]:
            if not isinstance(p, list) or len(p) != 3 or p[2] not in IntersectionType.__members__:
                raise ParseError(f"bad matrix pair {p!r}")
            pairs.append((_int(p[0], "pair index"), _int(p[1], "pair index"), p[2]))
        return IntersectionMatrix.from_pairs(e, pairs)
    if "points" not in doc:
        raise ParseError("missing 'points'")
    pts, edges = doc["points"], doc.get("edges", [])
    if not isinstance(pts, list) or not isinstance(edges, list):
        raise ParseError("'points' and 'edges' must be lists")
    points = []
    for p in pts:
        if not isinstance(p, list) or len(p) != 2:
            raise ParseError(f"bad point {p!r}")
        points.append((_int(p[0], "coordinate"), _int(p[1], "coordinate")))
    es = []
    for e in edges:
        if not isinstance(e, list) or len(e) != 2:
            raise ParseError(f"bad edge {e!r}")
        es.append((_int(e[0], "edge index"), _int(e[1], "edge index")))
    return GeometricGraph(points, es)


def graph_to_dict(g):
    if isinstance(g, IntersectionMatrix):
        return {
            "matrix": {
                "edge_count": g.edge_count,
                "pairs": [[i, j, t.name] for i, j, t in g.pairs()],
            }
        }
    return {"points": [list(p) for p in g.points], "edges": [list(e) for e in g.edges]}


def load_graph(source):
    """Load from a path, an open text file, or a JSON string."""
    try:
        if hasattr(source, "read"):
            doc = json.load(source)
        elif isinstance(source, str) and source.lstrip()[:1] in ("{", "["):
            doc = json.loads(source)
        else:
            with open(source, encoding="utf-8") as fh:
                doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return graph_from_dict(doc)


def dumps_graph(g) -> str:
    return json.dumps(graph_to_dict(g), separators=(",", ":")) + "\n"


def save_graph(g, sink):
    text = dumps_graph(g)
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        with open(sink, "w", encoding="utf-8") as fh:
            fh.write(text)
