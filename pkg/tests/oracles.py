"""Independent reference implementations used to check the library.

Nothing here imports the library's predicates: intersections are solved
parametrically with rationals, collinearity is brute force, and witnesses are
found by plain enumeration.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import combinations

DEGENERATE = "DEGENERATE"


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _sub(p, q):
    return (p[0] - q[0], p[1] - q[1])


def oracle_classify(s1, s2) -> str:
    """Classify two closed segments by solving a + t*r = c + u*s exactly."""
    a, b = tuple(s1[0]), tuple(s1[1])
    c, d = tuple(s2[0]), tuple(s2[1])
    if {a, b} == {c, d}:
        return DEGENERATE
    r, s, w = _sub(b, a), _sub(d, c), _sub(c, a)
    den = _cross(r, s)
    if den == 0:
        if _cross(w, r) != 0:
            return "DISJOINT"
        rr = r[0] * r[0] + r[1] * r[1]
        tc = Fraction(w[0] * r[0] + w[1] * r[1], rr)
        e = _sub(d, a)
        td = Fraction(e[0] * r[0] + e[1] * r[1], rr)
        lo, hi = max(Fraction(0), min(tc, td)), min(Fraction(1), max(tc, td))
        if lo > hi:
            return "DISJOINT"
        if lo == hi:
            return "SHARE_ENDPOINT"
        return DEGENERATE
    t = Fraction(_cross(w, s), den)
    u = Fraction(_cross(w, r), den)
    if 0 < t < 1 and 0 < u < 1:
        return "CROSS"
    if 0 <= t <= 1 and 0 <= u <= 1:
        if t in (0, 1) and u in (0, 1):
            return "SHARE_ENDPOINT"
        return DEGENERATE
    return "DISJOINT"


def collinear_or_duplicate(points) -> bool:
    pts = [tuple(p) for p in points]
    if len(set(pts)) != len(pts):
        return True
    for p, q, r in combinations(pts, 3):
        if _cross(_sub(q, p), _sub(r, p)) == 0:
            return True
    return False


def gp_points(rng: random.Random, n, lo=-1000, hi=1000):
    """``n`` random integer points with no duplicates and no three collinear."""
    pts = []
    while len(pts) < n:
        p = (rng.randint(lo, hi), rng.randint(lo, hi))
        if p in pts:
            continue
        if any(_cross(_sub(q, p), _sub(r, p)) == 0 for q, r in combinations(pts, 2)):
            continue
        pts.append(p)
    return pts


def gp_points_fast(rng: random.Random, n, lo=-1000, hi=1000):
    """Same contract as :func:`gp_points`, O(n^2) per point via reduced directions."""
    pts = []
    while len(pts) < n:
        p = (rng.randint(lo, hi), rng.randint(lo, hi))
        seen = set()
        ok = True
        for q in pts:
            dx, dy = q[0] - p[0], q[1] - p[1]
            if dx == 0 and dy == 0:
                ok = False
                break
            g = math.gcd(dx, dy)
            key = (dx // g, dy // g)
            if key[1] < 0 or (key[1] == 0 and key[0] < 0):
                key = (-key[0], -key[1])
            if key in seen:
                ok = False
                break
            seen.add(key)
        if ok:
            pts.append(p)
    return pts


def random_edges(rng: random.Random, n, m):
    pairs = list(combinations(range(n), 2))
    rng.shuffle(pairs)
    return sorted(pairs[: min(m, len(pairs))])


def random_disjoint_matching(rng: random.Random, k, box=200, max_len=80, attempts=100000):
    """Rejection-sample ``k`` pairwise disjoint segments with endpoints in general position."""
    segs = []
    for _ in range(attempts):
        if len(segs) == k:
            return segs
        a = (rng.randint(0, box), rng.randint(0, box))
        b = (a[0] + rng.randint(-max_len, max_len), a[1] + rng.randint(-max_len, max_len))
        if a == b:
            continue
        pts = [p for s in segs for p in s] + [a, b]
        if collinear_or_duplicate(pts):
            continue
        if all(oracle_classify((a, b), s) == "DISJOINT" for s in segs):
            segs.append((a, b))
    raise RuntimeError("sampler exhausted")


def ray_hits(v, d, seg) -> bool:
    """Does the ray v + t*d, t >= 0, meet the closed segment?"""
    a, b = seg
    e = _sub(b, a)
    w = _sub(a, v)
    den = _cross(d, e)
    if den == 0:
        if _cross(w, d) != 0:
            return False
        return w[0] * d[0] + w[1] * d[1] >= 0 or (b[0] - v[0]) * d[0] + (b[1] - v[1]) * d[1] >= 0
    t = Fraction(_cross(w, e), den)
    u = Fraction(_cross(w, d), den)
    return t >= 0 and 0 <= u <= 1


def sample_directions(count=720, scale=10**6):
    return [
        (round(scale * math.cos(2 * math.pi * k / count)), round(scale * math.sin(2 * math.pi * k / count)))
        for k in range(count)
    ]


def sampled_good(v, own, segments, count=720) -> bool:
    """Good iff no sampled ray (plus the boundary directions) from v hits every other segment."""
    others = [s for s in segments if s is not own]
    dirs = sample_directions(count)
    for s in others:
        for p in s:
            dirs.append(_sub(p, v))
    return not any(all(ray_hits(v, d, s) for s in others) for d in dirs)


def line_sides(line, points):
    """Exact side (+1 left, 0 on, -1 right) of every point, computed from the rational line."""
    (ox, oy), (dx, dy) = line.origin, line.direction
    out = []
    for x, y in points:
        v = Fraction(dx) * (y - Fraction(oy)) - Fraction(dy) * (x - Fraction(ox))
        out.append((v > 0) - (v < 0))
    return out


def integer_sides(line, points):
    """Faster exact variant for lines whose origin and direction are integral."""
    (ox, oy), (dx, dy) = line.origin, line.direction
    if any(Fraction(c).denominator != 1 for c in (ox, oy, dx, dy)):
        return line_sides(line, points)
    ox, oy, dx, dy = int(ox), int(oy), int(dx), int(dy)
    out = []
    for x, y in points:
        v = dx * (y - oy) - dy * (x - ox)
        out.append((v > 0) - (v < 0))
    return out


def full_side_counts(sides, edges):
    left = sum(1 for u, v in edges if sides[u] > 0 and sides[v] > 0)
    right = sum(1 for u, v in edges if sides[u] < 0 and sides[v] < 0)
    return left, right


# ---------------------------------------------------------------------------
# brute-force witness enumeration over a dense type matrix (ints 0/1/2)

DISJ, SHARE, CROSS = 0, 1, 2


def _all_pairs(T, items, rel):
    return all(T[i][j] == rel for i, j in combinations(items, 2))


def brute_witness(T, kind, k=1, l=1, pattern=None, required=None):
    """First witness by plain enumeration, or None.

    ``T`` is a list-of-lists type matrix.  ``kind`` is one of
    'family', 'grid', 'crossing', 'disjoint', 'circle3' (pattern = (edges, degrees)).
    """
    E = len(T)
    idx = range(E)

    def has(items):
        return required is None or required in items

    if kind in ("crossing", "disjoint"):
        rel = CROSS if kind == "crossing" else DISJ
        for c in combinations(idx, k):
            if has(c) and _all_pairs(T, c, rel):
                return c
        return None
    if kind == "circle3":
        for c in combinations(idx, 3):
            if not has(c):
                continue
            if any(T[i][j] == SHARE for i, j in combinations(c, 2)):
                continue
            deg = {i: 0 for i in c}
            cnt = 0
            for i, j in combinations(c, 2):
                if T[i][j] == CROSS:
                    deg[i] += 1
                    deg[j] += 1
                    cnt += 1
            if (cnt, tuple(sorted(deg.values()))) == pattern:
                return c
        return None
    inner, across = (CROSS, DISJ) if kind == "family" else (DISJ, CROSS)
    for e1 in combinations(idx, k):
        if not _all_pairs(T, e1, inner):
            continue
        rest = [i for i in idx if i not in e1 and all(T[i][j] == across for j in e1)]
        for e2 in combinations(rest, l):
            if has(e1 + e2) and _all_pairs(T, e2, inner):
                return e1, e2
    return None


# ---------------------------------------------------------------------------
# fourth edges for triangle frames


def _orient(p, q, r):
    v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (v > 0) - (v < 0)


def in_triangle(corners, p) -> int:
    """+1 strictly inside, 0 on the boundary, -1 outside (exact)."""
    a, b, c = corners
    s = {_orient(a, b, p), _orient(b, c, p), _orient(c, a, p)}
    if s in ({1}, {-1}):
        return 1
    if 0 in s and not {1, -1} <= s:
        return 0
    return -1


def sample_fourth_edge(rng: random.Random, frame_segments, corners, case, attempts=20000):
    """Random segment disjoint from the frame with the requested number of endpoints inside T.

    ``case`` counts endpoints strictly inside: 2, 1 or 0.
    """
    xs = [float(c[0]) for c in corners]
    ys = [float(c[1]) for c in corners]
    span = max(max(xs) - min(xs), max(ys) - min(ys))
    lo_x, hi_x = int(min(xs) - span), int(max(xs) + span)
    lo_y, hi_y = int(min(ys) - span), int(max(ys) + span)
    frame_pts = [p for s in frame_segments for p in s]

    def rand_point(inside):
        for _ in range(1000):
            if inside:
                w = [rng.random() for _ in range(3)]
                t = sum(w)
                p = (
                    round(sum(wi * float(c[0]) for wi, c in zip(w, corners)) / t),
                    round(sum(wi * float(c[1]) for wi, c in zip(w, corners)) / t),
                )
            else:
                p = (rng.randint(lo_x, hi_x), rng.randint(lo_y, hi_y))
            if in_triangle(corners, p) == (1 if inside else -1):
                return p
        return None

    for _ in range(attempts):
        a = rand_point(case >= 1)
        b = rand_point(case >= 2)
        if a is None or b is None or a == b:
            continue
        if collinear_or_duplicate(frame_pts + [a, b]):
            continue
        if all(oracle_classify((a, b), s) == "DISJOINT" for s in frame_segments):
            return (a, b)
    raise RuntimeError("no fourth edge found")
