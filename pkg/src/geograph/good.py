"""Good endpoints of pairwise disjoint matchings.

An endpoint ``v`` of a matching edge is good when no ray from ``v`` meets
every edge of the matching.  A ray from ``v`` always meets ``v``'s own edge,
so this asks whether the rays hitting each *other* edge have a common
direction.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import DegenerateGeometryError, GenerationError, SizeError, ValidationError
from .geometry import (
    DirectedLine,
    IntersectionType,
    Point,
    Segment,
    classify_pair,
    common_direction,
    line_intersection,
    ray_hit_interval,
    validate_general_position,
)


@dataclass(frozen=True)
class DisjointMatching:
    segments: tuple
    owner_graph: object = None

    def __init__(self, segments, owner_graph=None, validate=True):
        segs = tuple(s if isinstance(s, Segment) else Segment(*s) for s in segments)
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "owner_graph", owner_graph)
        if validate:
            report = validate_general_position([p for s in segs for p in s.endpoints])
            if not report:
                raise ValidationError(f"matching endpoints not in general position: {report.describe()}", report)
            for i, j in combinations(range(len(segs)), 2):
                if classify_pair(segs[i], segs[j]) != IntersectionType.DISJOINT:
                    raise ValidationError(f"matching edges {i} and {j} are not disjoint", (i, j))

    def __len__(self):
        return len(self.segments)

    def endpoint(self, ep) -> Point:
        i, end = ep
        return self.segments[i].endpoints[end]

    def endpoints(self):
        return [(i, end) for i in range(len(self.segments)) for end in (0, 1)]

    @classmethod
    def from_graph(cls, g):
        return cls([g.segment(i) for i in range(len(g.edges))], owner_graph=g)


def hitting_direction(m: DisjointMatching, ep):
    """A ray direction from the endpoint that meets every edge, or None."""
    v = m.endpoint(ep)
    intervals = [ray_hit_interval(v, s) for j, s in enumerate(m.segments) if j != ep[0]]
    return common_direction(intervals)


def is_good(m: DisjointMatching, ep) -> bool:
    return hitting_direction(m, ep) is None


def good_endpoints(m: DisjointMatching) -> set:
    return {ep for ep in m.endpoints() if is_good(m, ep)}


def check_lama(m: DisjointMatching) -> bool:
    """At least ``|M| - 2`` good endpoints; defined for matchings of four or more edges."""
    if len(m) < 4:
        raise SizeError("the good-endpoint bound needs at least four edges")
    return len(good_endpoints(m)) >= len(m) - 2


# ---------------------------------------------------------------------------
# triangle frames


@dataclass(frozen=True)
class TriangleFrame:
    """Three disjoint edges arranged as a pinwheel around a triangle.

    Each edge's supporting line carries one side of the triangle ``T``; the
    edge runs through one corner of ``T`` and stops short of the next, so
    prolonging it ends on the following edge.
    """

    segments: tuple
    corners: tuple  # exact intersection points of the supporting lines

    @property
    def matching(self) -> DisjointMatching:
        return DisjointMatching(self.segments)

    def contains(self, p) -> int:
        """+1 strictly inside T, 0 on its boundary, -1 outside."""
        a, b, c = self.corners
        s = [_orient_exact(a, b, p), _orient_exact(b, c, p), _orient_exact(c, a, p)]
        if all(x > 0 for x in s) or all(x < 0 for x in s):
            return 1
        if 0 in s and (all(x >= 0 for x in s) or all(x <= 0 for x in s)):
            return 0
        return -1


def _orient_exact(p, q, r):
    v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (v > 0) - (v < 0)


def _frame_corners(segs):
    lines = [DirectedLine.through(s.a, s.b) for s in segs]
    corners = []
    for i, j in ((0, 1), (1, 2), (2, 0)):
        x = line_intersection(lines[i], lines[j])
        if x is None:
            raise DegenerateGeometryError("frame edges have parallel supporting lines")
        corners.append(x)
    return tuple(corners)


def _is_pinwheel(segs, corners):
    """Each edge contains exactly one corner of T in its interior."""
    for s in segs:
        inside = sum(
            1
            for c in corners
            if _orient_exact(s.a, s.b, c) == 0
            and (c[0] - s.a[0]) * (c[0] - s.b[0]) + (c[1] - s.a[1]) * (c[1] - s.b[1]) < 0
        )
        if inside != 1:
            return False
    return True


def make_triangle_frame(segments) -> TriangleFrame:
    segs = tuple(s if isinstance(s, Segment) else Segment(*s) for s in segments)
    if len(segs) != 3:
        raise ValidationError("a triangle frame has exactly three edges")
    m = DisjointMatching(segs)
    corners = _frame_corners(segs)
    if not _is_pinwheel(segs, corners):
        raise ValidationError("edges are not arranged as a pinwheel around a triangle")
    if good_endpoints(m):
        raise ValidationError("configuration has good endpoints, so it is not a triangle frame")
    return TriangleFrame(segs, corners)


# corners (0,0), (1000,0), (500,900); each edge passes one corner and stops short of the next
_TEMPLATE = (
    ((-300, 0), (800, 0)),
    ((1150, -270), (600, 720)),
    ((650, 1170), (100, 180)),
)


def generate_triangle_frame(seed, attempts=1000) -> TriangleFrame:
    """Random integer realisation of the pinwheel, validated before returning."""
    rng = random.Random(seed)
    for _ in range(attempts):
        scale = rng.randint(1, 4)
        turns = rng.randint(0, 3)
        mirror = rng.random() < 0.5
        tx, ty = rng.randint(-5000, 5000), rng.randint(-5000, 5000)
        segs = []
        for a, b in _TEMPLATE:
            ends = []
            for x, y in (a, b):
                x += rng.randint(-60, 60)
                y += rng.randint(-60, 60)
                if mirror:
                    x = -x
                for _ in range(turns):
                    x, y = -y, x
                ends.append((x * scale + tx, y * scale + ty))
            segs.append(ends)
        try:
            return make_triangle_frame(segs)
        except (ValidationError, DegenerateGeometryError):
            continue
    raise GenerationError(f"no valid triangle frame in {attempts} attempts")


class FourthEdgeCase(str, enum.Enum):
    INSIDE_T = "INSIDE_T"
    ONE_IN_ONE_OUT = "ONE_IN_ONE_OUT"
    OUTSIDE_T = "OUTSIDE_T"


class NotDisjointError(ValidationError):
    pass


class BoundaryDegeneracyError(ValidationError):
    pass


def classify_fourth_edge(frame: TriangleFrame, e) -> FourthEdgeCase:
    e = e if isinstance(e, Segment) else Segment(*e)
    for s in frame.segments:
        try:
            t = classify_pair(s, e)
        except DegenerateGeometryError as exc:
            raise NotDisjointError(f"added edge touches a frame edge: {exc}") from exc
        if t != IntersectionType.DISJOINT:
            raise NotDisjointError("added edge is not disjoint from the frame")
    where = [frame.contains(p) for p in e.endpoints]
    if 0 in where:
        raise BoundaryDegeneracyError("added edge has an endpoint on the boundary of T")
    inside = where.count(1)
    return (FourthEdgeCase.OUTSIDE_T, FourthEdgeCase.ONE_IN_ONE_OUT, FourthEdgeCase.INSIDE_T)[inside]


def verify_appendix(frame: TriangleFrame, e) -> bool:
    """Adding ``e`` to the frame yields at least two good endpoints."""
    e = e if isinstance(e, Segment) else Segment(*e)
    classify_fourth_edge(frame, e)
    m = DisjointMatching(frame.segments + (e,))
    return len(good_endpoints(m)) >= 2


def centroid(frame: TriangleFrame):
    a, b, c = frame.corners
    return (Fraction(a[0] + b[0] + c[0], 3), Fraction(a[1] + b[1] + c[1], 3))
