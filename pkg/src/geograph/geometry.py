"""Exact predicates over integer coordinates.

Every predicate here is exact: integer inputs, Python integers or
:class:`fractions.Fraction` for anything derived.  The vectorised helpers at
the bottom use ``int64`` only when the operands are small enough that no
intermediate can overflow, and fall back to object arrays of Python integers
otherwise.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import NamedTuple, Sequence

import numpy as np

from .errors import CoordinateRangeError, DegenerateGeometryError, PerturbationError

COORD_LIMIT = 2**30
# int64 is safe for 2x2 determinants of differences when |coord| <= 2**29
_INT64_SAFE = 2**29


class Point(NamedTuple):
    x: int
    y: int


class Orientation(enum.IntEnum):
    CW = -1
    COLLINEAR = 0
    CCW = 1


class Side(enum.IntEnum):
    RIGHT = -1
    ON = 0
    LEFT = 1


class IntersectionType(enum.IntEnum):
    DISJOINT = 0
    SHARE_ENDPOINT = 1
    CROSS = 2


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self):
        if tuple(self.a) == tuple(self.b):
            raise DegenerateGeometryError(f"degenerate segment at {tuple(self.a)}")
        object.__setattr__(self, "a", Point(*self.a))
        object.__setattr__(self, "b", Point(*self.b))

    @property
    def endpoints(self):
        return (self.a, self.b)


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def _sign(v):
    return (v > 0) - (v < 0)


def check_coordinates(points, limit=COORD_LIMIT):
    """Raise :class:`CoordinateRangeError` unless every coordinate is an int within ``limit``."""
    for i, p in enumerate(points):
        for c in p:
            if isinstance(c, bool) or not isinstance(c, (int, np.integer)):
                raise CoordinateRangeError(f"point {i}: coordinate {c!r} is not an integer")
            if abs(int(c)) > limit:
                raise CoordinateRangeError(f"point {i}: |{c}| exceeds 2^30")


def orient(p, q, r) -> int:
    """Sign (-1, 0, 1) of the determinant of (q - p, r - p)."""
    return _sign((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]))


def orientation(p, q, r) -> Orientation:
    return Orientation(orient(p, q, r))


def _on_closed_segment(p, a, b):
    # p is known to be collinear with a, b
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def classify_pair(s1: Segment, s2: Segment) -> IntersectionType:
    """Classify two segments as DISJOINT, SHARE_ENDPOINT or CROSS.

    Any configuration outside general position that produces a common point
    other than a shared endpoint or a single interior crossing (collinear
    overlap, an endpoint resting on the other segment) raises
    :class:`DegenerateGeometryError`.
    """
    a, b = tuple(s1.a), tuple(s1.b)
    c, d = tuple(s2.a), tuple(s2.b)
    shared = {a, b} & {c, d}
    if len(shared) == 2:
        raise DegenerateGeometryError("identical segments")
    if shared:
        p = shared.pop()
        x = b if a == p else a
        y = d if c == p else c
        if orient(p, x, y) == 0:
            if (x[0] - p[0]) * (y[0] - p[0]) + (x[1] - p[1]) * (y[1] - p[1]) > 0:
                raise DegenerateGeometryError(f"collinear overlap at {p}")
        return IntersectionType.SHARE_ENDPOINT

    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    if o1 == 0 and _on_closed_segment(c, a, b):
        raise DegenerateGeometryError(f"endpoint {c} lies on segment {a}-{b}")
    if o2 == 0 and _on_closed_segment(d, a, b):
        raise DegenerateGeometryError(f"endpoint {d} lies on segment {a}-{b}")
    if o3 == 0 and _on_closed_segment(a, c, d):
        raise DegenerateGeometryError(f"endpoint {a} lies on segment {c}-{d}")
    if o4 == 0 and _on_closed_segment(b, c, d):
        raise DegenerateGeometryError(f"endpoint {b} lies on segment {c}-{d}")
    if o1 * o2 < 0 and o3 * o4 < 0:
        return IntersectionType.CROSS
    return IntersectionType.DISJOINT


@dataclass(frozen=True)
class DirectedLine:
    """Directed line with exact rational anchor and direction."""

    origin: tuple
    direction: tuple

    def __post_init__(self):
        o = tuple(Fraction(c) for c in self.origin)
        d = tuple(Fraction(c) for c in self.direction)
        if d == (0, 0):
            raise ValueError("direction must be nonzero")
        object.__setattr__(self, "origin", o)
        object.__setattr__(self, "direction", d)

    @classmethod
    def through(cls, p, q) -> "DirectedLine":
        """Line through ``p`` directed towards ``q``."""
        return cls(tuple(p), (q[0] - p[0], q[1] - p[1]))

    def reversed(self) -> "DirectedLine":
        return DirectedLine(self.origin, (-self.direction[0], -self.direction[1]))

    def translated(self, offset) -> "DirectedLine":
        return DirectedLine(
            (self.origin[0] + offset[0], self.origin[1] + offset[1]), self.direction
        )

    def side_value(self, p) -> Fraction:
        """Signed cross product of the direction with ``p - origin``."""
        dx, dy = self.direction
        return dx * (p[1] - self.origin[1]) - dy * (p[0] - self.origin[0])

    def integer_form(self):
        """Integers ``(A, B, C)`` with ``sign(A*y - B*x - C)`` equal to the side of ``(x, y)``."""
        dx, dy = self.direction
        ox, oy = self.origin
        den = dx.denominator * dy.denominator // gcd(dx.denominator, dy.denominator)
        A, B = int(dx * den), int(dy * den)
        C = A * oy - B * ox
        return A * C.denominator, B * C.denominator, C.numerator

    def as_json(self):
        return {
            "origin": [[c.numerator, c.denominator] for c in self.origin],
            "direction": [[c.numerator, c.denominator] for c in self.direction],
        }


def side_of_line(line: DirectedLine, p) -> Side:
    return Side(_sign(line.side_value(p)))


def line_intersection(l1: DirectedLine, l2: DirectedLine):
    """Exact intersection point of two non-parallel lines, or None if parallel."""
    (ox, oy), (dx, dy) = l1.origin, l1.direction
    (px, py), (ex, ey) = l2.origin, l2.direction
    den = _cross(dx, dy, ex, ey)
    if den == 0:
        return None
    t = _cross(px - ox, py - oy, ex, ey) / den
    return (ox + t * dx, oy + t * dy)


@dataclass(frozen=True)
class AngularInterval:
    """Closed arc of ray directions, shorter than a half-turn.

    ``first`` and ``second`` are the boundary directions in the order they
    were supplied; ``ccw`` tells whether the arc sweeps counterclockwise from
    ``first`` to ``second``.
    """

    first: tuple
    second: tuple
    ccw: bool

    @property
    def start(self):
        return self.first if self.ccw else self.second

    @property
    def end(self):
        return self.second if self.ccw else self.first

    def contains(self, d) -> bool:
        s, e = self.start, self.end
        return _cross(s[0], s[1], d[0], d[1]) >= 0 and _cross(d[0], d[1], e[0], e[1]) >= 0


def ray_hit_interval(v, s: Segment) -> AngularInterval:
    """Directions of the rays from ``v`` that hit segment ``s``."""
    da = (s.a[0] - v[0], s.a[1] - v[1])
    db = (s.b[0] - v[0], s.b[1] - v[1])
    c = _cross(*da, *db)
    if c == 0:
        raise DegenerateGeometryError(f"{tuple(v)} lies on the line through {tuple(s.a)}-{tuple(s.b)}")
    return AngularInterval(da, db, c > 0)


def common_direction(intervals: Sequence[AngularInterval]):
    """A direction lying in every interval, or None if their intersection is empty.

    The intersection of arcs shorter than a half-turn is a single arc whose
    counterclockwise start is the start of one of the inputs, so testing the
    starts is exhaustive.  An empty sequence yields the direction (1, 0).
    """
    if not intervals:
        return (1, 0)
    for iv in intervals:
        d = iv.start
        if all(other.contains(d) for other in intervals):
            return d
    return None


def ray_hits_segment(v, d, s: Segment) -> bool:
    """Exact test whether the ray ``v + t*d`` (t >= 0) meets the closed segment ``s``.

    Solved parametrically with rationals; deliberately independent of
    :func:`ray_hit_interval`.
    """
    ax, ay = s.a
    ex, ey = s.b[0] - ax, s.b[1] - ay
    den = _cross(d[0], d[1], ex, ey)
    wx, wy = ax - v[0], ay - v[1]
    if den == 0:
        if _cross(wx, wy, d[0], d[1]) != 0:
            return False
        # collinear: hit iff some point of the segment is ahead of v
        return wx * d[0] + wy * d[1] >= 0 or (s.b[0] - v[0]) * d[0] + (s.b[1] - v[1]) * d[1] >= 0
    t = Fraction(_cross(wx, wy, ex, ey), den)
    u = Fraction(_cross(wx, wy, d[0], d[1]), den)
    return t >= 0 and 0 <= u <= 1


class GeneralPositionReport(NamedTuple):
    ok: bool
    kind: str | None = None  # "duplicate" or "collinear"
    indices: tuple = ()

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "OK"
        return f"{self.kind} {'/'.join(map(str, self.indices))}"


def _direction_key(dx, dy):
    g = gcd(dx, dy)
    dx, dy = dx // g, dy // g
    if dy < 0 or (dy == 0 and dx < 0):
        dx, dy = -dx, -dy
    return dx, dy


def validate_general_position(points) -> GeneralPositionReport:
    """Check that all points are distinct and no three are collinear.

    Reports the lexicographically first duplicate pair, otherwise the
    lexicographically first collinear triple.
    """
    pts = [tuple(p) for p in points]
    seen = {}
    first_dup = None
    for j, p in enumerate(pts):
        if p in seen:
            cand = (seen[p], j)
            if first_dup is None or cand < first_dup:
                first_dup = cand
        else:
            seen[p] = j
    if first_dup is not None:
        return GeneralPositionReport(False, "duplicate", first_dup)
    n = len(pts)
    for i in range(n):
        xi, yi = pts[i]
        by_dir = {}
        best = None
        for j in range(i + 1, n):
            key = _direction_key(pts[j][0] - xi, pts[j][1] - yi)
            if key in by_dir:
                cand = (by_dir[key], j)
                if best is None or cand < best:
                    best = cand
            else:
                by_dir[key] = j
        if best is not None:
            return GeneralPositionReport(False, "collinear", (i,) + best)
    return GeneralPositionReport(True)


def perturb(points, seed, magnitude, attempts=100):
    """Jitter every coordinate by a uniform integer in [-magnitude, magnitude].

    Retries with fresh draws until the result is in general position.
    """
    if magnitude < 0:
        raise ValueError("magnitude must be nonnegative")
    rng = random.Random(seed)
    for _ in range(attempts):
        out = [
            Point(p[0] + rng.randint(-magnitude, magnitude), p[1] + rng.randint(-magnitude, magnitude))
            for p in points
        ]
        if validate_general_position(out):
            check_coordinates(out)
            return out
    raise PerturbationError(f"no general-position perturbation found in {attempts} attempts")


# ---------------------------------------------------------------------------
# vectorised helpers


def coords_array(points) -> np.ndarray:
    """``(n, 2)`` array, int64 when safe for exact determinants, else object."""
    pts = list(points)
    if not pts:
        return np.zeros((0, 2), dtype=np.int64)
    big = max(max(abs(int(p[0])), abs(int(p[1]))) for p in pts)
    if big <= _INT64_SAFE:
        return np.array(pts, dtype=np.int64).reshape(-1, 2)
    return np.array([[int(p[0]), int(p[1])] for p in pts], dtype=object).reshape(-1, 2)


def side_signs(line: DirectedLine, coords: np.ndarray) -> np.ndarray:
    """Side of every row of ``coords`` relative to ``line`` (+1 left, -1 right, 0 on)."""
    A, B, C = line.integer_form()
    if len(coords) == 0:
        return np.zeros(0, dtype=np.int64)
    safe = (
        coords.dtype != object
        and max(abs(A), abs(B)) <= 2**31
        and abs(C) <= 2**61
    )
    if safe:
        vals = A * coords[:, 1] - B * coords[:, 0] - C
        return np.sign(vals).astype(np.int64)
    xs = [int(v) for v in coords[:, 0]]
    ys = [int(v) for v in coords[:, 1]]
    return np.array([_sign(A * y - B * x - C) for x, y in zip(xs, ys)], dtype=np.int64)


def orient_many(p, q, coords: np.ndarray) -> np.ndarray:
    """``orient(p, q, r)`` for every row ``r`` of ``coords``."""
    return side_signs(DirectedLine.through(p, q), coords)


def classify_against(seg, seg_coords: np.ndarray) -> np.ndarray:
    """Classify ``seg`` (4-tuple ax, ay, bx, by) against each row of an ``(m, 4)`` array.

    Returns an int8 array of :class:`IntersectionType` values.  Rows that are
    degenerate relative to ``seg`` raise :class:`DegenerateGeometryError`.
    """
    m = len(seg_coords)
    if m == 0:
        return np.zeros(0, dtype=np.int8)
    ax, ay, bx, by = (int(v) for v in seg)
    big = max(abs(ax), abs(ay), abs(bx), abs(by))
    if seg_coords.dtype == object or big > _INT64_SAFE:
        out = np.empty(m, dtype=np.int8)
        s1 = Segment((ax, ay), (bx, by))
        for i, row in enumerate(seg_coords):
            r = [int(v) for v in row]
            out[i] = classify_pair(s1, Segment((r[0], r[1]), (r[2], r[3])))
        return out
    cx, cy, dx, dy = (seg_coords[:, i] for i in range(4))
    ex, ey = bx - ax, by - ay
    o1 = np.sign(ex * (cy - ay) - ey * (cx - ax))
    o2 = np.sign(ex * (dy - ay) - ey * (dx - ax))
    fx, fy = dx - cx, dy - cy
    o3 = np.sign(fx * (ay - cy) - fy * (ax - cx))
    o4 = np.sign(fx * (by - cy) - fy * (bx - cx))
    share = ((cx == ax) & (cy == ay)) | ((cx == bx) & (cy == by)) | ((dx == ax) & (dy == ay)) | ((dx == bx) & (dy == by))
    cross = (o1 * o2 < 0) & (o3 * o4 < 0) & ~share
    out = np.where(share, np.int8(IntersectionType.SHARE_ENDPOINT), np.int8(IntersectionType.DISJOINT)).astype(np.int8)
    out[cross] = IntersectionType.CROSS
    suspicious = (o1 == 0) | (o2 == 0) | (o3 == 0) | (o4 == 0)
    if suspicious.any():
        s1 = Segment((ax, ay), (bx, by))
        for i in np.nonzero(suspicious)[0]:
            r = [int(v) for v in seg_coords[i]]
            out[i] = classify_pair(s1, Segment((r[0], r[1]), (r[2], r[3])))
    return out
