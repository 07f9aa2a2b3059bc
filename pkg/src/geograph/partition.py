"""Halving lines, ham-sandwich cuts and the recursive line decomposition.

The rotation is event driven and exact.  Between events the rotating line
carries one vertex (the pivot); one open side holds ``n/2`` vertices and the
other ``n/2 - 1``.  When the line meets a vertex coming from the larger side
it is a halving line and a step is recorded; a vertex arriving from the
smaller side becomes the new pivot instead.
"""
from __future__ import annotations

import bisect
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

import numpy as np

from .errors import InvariantError, SizeError, ValidationError
from .geometry import DirectedLine, coords_array, side_signs
from .graph import GeometricGraph

DISCARD_REASONS = ("LEFT_OF_L", "RIGHT_OF_L", "SAME_SIDE_OF_L_PRIME", "BETWEEN_CHILDREN", "ODD_VERTEX_DROP")


@dataclass(frozen=True)
class HalvingState:
    line: DirectedLine
    pivot: int
    partner: int
    e_left: int
    e_right: int
    step: int

    @property
    def imbalance(self) -> int:
        return abs(self.e_left - self.e_right)


@dataclass(frozen=True)
class RotationResult:
    final: HalvingState
    trace: tuple
    events: int


@dataclass(frozen=True)
class HamSandwichCut:
    line: DirectedLine
    counts: tuple  # ((left, on, right) for V1, (left, on, right) for V2)
    anchors: tuple = ()


class _Sub:
    """A vertex subset of a point set with the edges induced on it, in local indices."""

    def __init__(self, points, vertex_ids, edges):
        self.ids = list(vertex_ids)
        self.local = {v: i for i, v in enumerate(self.ids)}
        self.pts = [points[v] for v in self.ids]
        self.P = coords_array(self.pts)
        es = [(self.local[u], self.local[v]) for u, v in edges]
        self.E = np.array(es, dtype=np.int64).reshape(-1, 2)

    @property
    def n(self):
        return len(self.ids)

    def signs(self, line):
        return side_signs(line, self.P)

    def edge_counts(self, signs):
        if len(self.E) == 0:
            return 0, 0
        su, sv = signs[self.E[:, 0]], signs[self.E[:, 1]]
        return int(np.sum((su > 0) & (sv > 0))), int(np.sum((su < 0) & (sv < 0)))


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _halving_pair_local(pts):
    n = len(pts)
    if n < 2 or n % 2:
        raise SizeError(f"halving edge needs an even number (>= 2) of vertices, got {n}")
    o = min(range(n), key=lambda i: (pts[i][1], pts[i][0]))
    ox, oy = pts[o]
    others = [i for i in range(n) if i != o]

    def cmp(i, j):
        c = _cross((pts[i][0] - ox, pts[i][1] - oy), (pts[j][0] - ox, pts[j][1] - oy))
        return -1 if c > 0 else (1 if c < 0 else 0)

    others.sort(key=cmp_to_key(cmp))
    return o, others[(n - 2) // 2]


def find_halving_edge(g: GeometricGraph):
    """A vertex pair whose line leaves (n-2)/2 vertices strictly on each side."""
    u, v = _halving_pair_local(g.points)
    return (u, v)


def _next_event(sub, p, d):
    """Next vertex met when the line through pivot ``p`` turns counterclockwise from ``d``.

    Returns ``(w, new_direction, came_from_left)``.
    """
    P = sub.P
    W = P - P[p]
    c = d[0] * W[:, 1] - d[1] * W[:, 0]
    cand = np.flatnonzero(c != 0)
    if len(cand) == 0:
        # only the partner is left: it is met again after a half-turn
        w = next(i for i in range(sub.n) if i != p)
        return w, (-d[0], -d[1]), False
    sgn = np.sign(c[cand])
    Nx = W[cand, 0] * sgn
    Ny = W[cand, 1] * sgn
    fx, fy = float(d[0]), float(d[1])
    ang = np.arctan2(fx * Ny.astype(float) - fy * Nx.astype(float), fx * Nx.astype(float) + fy * Ny.astype(float))
    b = int(np.argmin(ang))
    bx, by = Nx[b], Ny[b]
    later = bx * Ny - by * Nx
    later[b] = 1
    if not np.all(later > 0):
        # float ordering was not trustworthy; exact scan
        b = 0
        for j in range(1, len(cand)):
            if _cross((int(Nx[j]), int(Ny[j])), (int(Nx[b]), int(Ny[b]))) > 0:
                b = j
    w = int(cand[b])
    return w, (int(Nx[b]), int(Ny[b])), bool(sgn[b] > 0)


def _state(sub, p, q, d, step):
    line = DirectedLine(sub.pts[p], d)
    s = sub.signs(line)
    el, er = sub.edge_counts(s)
    return HalvingState(line, sub.ids[p], sub.ids[q], el, er, step)


def _rotate(sub, max_events=None):
    n = sub.n
    u, v = _halving_pair_local(sub.pts)
    d0 = (sub.pts[v][0] - sub.pts[u][0], sub.pts[v][1] - sub.pts[u][1])
    first = _state(sub, u, v, d0, 0)
    if first.e_left > first.e_right:
        u, v = v, u
        d0 = (-d0[0], -d0[1])
        first = _state(sub, u, v, d0, 0)
    trace = [first]
    if max_events is None:
        max_events = n * (n - 1) + 2
    p, q, d = u, v, d0
    # the partner leaves to the right when it is ahead of the pivot
    ahead = (sub.pts[q][0] - sub.pts[p][0]) * d[0] + (sub.pts[q][1] - sub.pts[p][1]) * d[1] > 0
    large_left = not ahead
    events = 0
    while True:
        events += 1
        if events > max_events:
            raise InvariantError("rotation did not return to the starting halving pair")
        w, d, from_left = _next_event(sub, p, d)
        if from_left == large_left:
            q = w
            st = _state(sub, p, q, d, len(trace))
            trace.append(st)
            ahead = (sub.pts[q][0] - sub.pts[p][0]) * d[0] + (sub.pts[q][1] - sub.pts[p][1]) * d[1] > 0
            large_left = not ahead
            if {p, q} == {u, v}:
                break
        else:
            p, q = w, p
    return trace, events


def _pick_final(trace, n):
    for st in trace:
        if st.imbalance <= 2 * n:
            return st
    raise InvariantError("no balanced halving line in a full half-turn")


def rotate_to_balance(g: GeometricGraph) -> RotationResult:
    """Rotate a halving line through a half-turn, recording every halving position.

    ``final`` is the first recorded position whose left/right fully-contained
    edge counts differ by at most ``2n``.
    """
    sub = _Sub(g.points, range(g.n), g.edges)
    trace, events = _rotate(sub)
    return RotationResult(_pick_final(trace, g.n), tuple(trace), events)


# ---------------------------------------------------------------------------
# ham-sandwich


def _class_counts(signs, mask):
    return (int(np.sum((signs > 0) & mask)), int(np.sum((signs == 0) & mask)), int(np.sum((signs < 0) & mask)))


def ham_sandwich(v1, v2, avoid_direction=None) -> HamSandwichCut:
    """Line leaving at most half of each class strictly on either side.

    Exhaustive over lines through two input points; among valid cuts the one
    with the smallest total left/right imbalance wins, ties to the
    lexicographically first point pair (V1 points indexed before V2 points).
    Candidates parallel to ``avoid_direction`` are skipped unless nothing else
    is valid.
    """
    pts = [tuple(p) for p in v1] + [tuple(p) for p in v2]
    n1, n2 = len(v1), len(v2)
    N = n1 + n2
    if N == 0:
        return HamSandwichCut(DirectedLine((0, 0), (1, 0)), ((0, 0, 0), (0, 0, 0)))
    if N == 1:
        line = DirectedLine(pts[0], (1, 0))
        c = (0, 1, 0)
        return HamSandwichCut(line, (c, (0, 0, 0)) if n1 else ((0, 0, 0), c), (0,))
    P = coords_array(pts)
    is1 = np.zeros(N, dtype=bool)
    is1[:n1] = True
    is2 = ~is1
    h1, h2 = n1 // 2, n2 // 2
    if avoid_direction is not None:
        ax, ay = (Fraction(c) for c in avoid_direction)
        den = ax.denominator * ay.denominator
        ax, ay = int(ax * den), int(ay * den)
        g = math.gcd(ax, ay)
        ax, ay = ax // g, ay // g
    best = fallback = None
    for i in range(N - 1):
        D = P - P[i]
        rest = D[i + 1:]
        C = rest[:, 0:1] * D[None, :, 1] - rest[:, 1:2] * D[None, :, 0]
        pos, neg = C > 0, C < 0
        l1 = pos[:, is1].sum(axis=1)
        r1 = neg[:, is1].sum(axis=1)
        l2 = pos[:, is2].sum(axis=1)
        r2 = neg[:, is2].sum(axis=1)
        ok = (l1 <= h1) & (r1 <= h1) & (l2 <= h2) & (r2 <= h2)
        if not ok.any():
            continue
        if fallback is None:
            fallback = (0, i, i + 1 + int(np.argmax(ok)))
        if avoid_direction is not None:
            par = (ax * rest[:, 1] - ay * rest[:, 0]) == 0
            ok &= ~par
            if not ok.any():
                continue
        score = np.abs(l1 - r1) + np.abs(l2 - r2)
        score = np.where(ok, score, np.iinfo(np.int64).max)
        j = int(np.argmin(score))
        s = int(score[j])
        if best is None or s < best[0]:
            best = (s, i, i + 1 + j)
    if best is None:
        best = fallback
    if best is None:
        raise InvariantError("no valid ham-sandwich cut among candidate lines")
    _, i, j = best
    line = DirectedLine.through(pts[i], pts[j])
    s = side_signs(line, P)
    return HamSandwichCut(line, (_class_counts(s, is1), _class_counts(s, is2)), (i, j))


# ---------------------------------------------------------------------------
# translation balancing


def _translate(line_l, line_p, pts, edges):
    """Core of :func:`translate_balance`; returns (line, left_count, right_count)."""
    if not edges:
        return line_p, 0, 0
    d = line_l.direction
    d2 = line_p.direction
    A, B, _ = line_p.integer_form()
    rate = A * d[1] - B * d[0]  # change of the offset per unit move along l
    if rate == 0:
        return line_p, None, None
    s = {v: A * p[1] - B * p[0] for v, p in pts.items()}
    vals = sorted(set(s.values()))
    gaps = [Fraction(vals[0] - 1)]
    gaps += [Fraction(a + b, 2) for a, b in zip(vals, vals[1:])]
    gaps.append(Fraction(vals[-1] + 1))
    mins = sorted(min(s[u], s[v]) for u, v in edges)
    maxs = sorted(max(s[u], s[v]) for u, v in edges)
    # walk gaps in the order of movement along l
    order = gaps if rate > 0 else gaps[::-1]
    best = None
    for c in order:
        left = len(mins) - bisect.bisect_right(mins, c)
        right = bisect.bisect_left(maxs, c)
        score = max(left, right)
        if best is None or score < best[0]:
            best = (score, c, left, right)
    _, c, left, right = best
    # origin on l: solve A*y - B*x = c for the point o + t*d
    ox, oy = line_l.origin
    t = (c - (A * oy - B * ox)) / rate
    origin = (ox + t * d[0], oy + t * d[1])
    return DirectedLine(origin, d2), left, right


def translate_balance(l: DirectedLine, l_prime: DirectedLine, crossing_edges, g: GeometricGraph) -> DirectedLine:
    """Translate ``l_prime`` along ``l`` to minimise max(fully-left, fully-right) edges.

    Only positions strictly between consecutive vertex events (and beyond the
    extreme ones) are considered, so the result passes through no vertex.
    Ties go to the position earliest along ``l``'s direction.
    """
    edges = [tuple(e) for e in crossing_edges]
    pts = {v: g.points[v] for v in range(g.n)}
    return _translate(l, l_prime, pts, edges)[0]


# ---------------------------------------------------------------------------
# decomposition


@dataclass
class Split:
    l: DirectedLine
    l_prime: DirectedLine
    quadrants: dict
    discarded: dict
    balance: Fraction


@dataclass
class PartitionNode:
    vertex_set: tuple
    edges: tuple
    split: Split | None = None
    children: tuple = ()
    depth: int = 0

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    def to_json(self):
        out = {"vertices": list(self.vertex_set), "edge_count": len(self.edges)}
        if self.split is not None:
            sp = self.split
            out["split"] = {
                "l": sp.l.as_json(),
                "l_prime": sp.l_prime.as_json(),
                "quadrants": {k: list(v) for k, v in sp.quadrants.items()},
                "discarded": {r: len(sp.discarded.get(r, ())) for r in DISCARD_REASONS},
                "balance": [sp.balance.numerator, sp.balance.denominator],
            }
        out["children"] = [c.to_json() for c in self.children]
        return out


@dataclass
class PartitionTree:
    root: PartitionNode
    n_edges: int = 0
    leaf_size: int = 2

    def nodes(self):
        return list(self.root.walk())

    def leaves(self):
        return [nd for nd in self.root.walk() if not nd.children]

    @property
    def depth(self) -> int:
        return max(nd.depth for nd in self.root.walk())

    def discard_totals(self):
        tot = defaultdict(int)
        for nd in self.root.walk():
            if nd.split is not None:
                for r, es in nd.split.discarded.items():
                    tot[r] += len(es)
        return {r: tot[r] for r in DISCARD_REASONS}

    def to_json(self):
        return {"leaf_size": self.leaf_size, "edge_count": self.n_edges, "root": self.root.to_json()}


def _assign_sides(line, ids, points):
    """Side (+1 / -1) of every vertex; vertices on the line split along its direction.

    Equivalent to turning the line slightly counterclockwise about a point
    between its on-line vertices: earlier ones go left, later ones right.
    """
    P = coords_array([points[v] for v in ids])
    s = side_signs(line, P)
    on = [i for i in range(len(ids)) if s[i] == 0]
    if on:
        dx, dy = line.direction
        on.sort(key=lambda i: dx * points[ids[i]][0] + dy * points[ids[i]][1])
        for rank, i in enumerate(on):
            s[i] = 1 if rank < len(on) / 2 else -1
    return {v: int(s[i]) for i, v in enumerate(ids)}


def _split_node(points, ids, edges):
    discarded = defaultdict(list)
    ids = list(ids)
    edges = list(edges)
    if len(ids) % 2:
        deg = {v: 0 for v in ids}
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
        drop = min(ids, key=lambda v: (deg[v], v))
        ids.remove(drop)
        keep = []
        for e in edges:
            (discarded["ODD_VERTEX_DROP"] if drop in e else keep).append(e)
        edges = keep
    sub = _Sub(points, ids, edges)
    trace, _ = _rotate(sub)
    st = _pick_final(trace, sub.n)
    l = st.line
    side1 = _assign_sides(l, ids, points)
    V1 = [v for v in ids if side1[v] > 0]
    V2 = [v for v in ids if side1[v] < 0]
    cross_edges = []
    for e in edges:
        a, b = side1[e[0]], side1[e[1]]
        if a > 0 and b > 0:
            discarded["LEFT_OF_L"].append(e)
        elif a < 0 and b < 0:
            discarded["RIGHT_OF_L"].append(e)
        else:
            cross_edges.append(e)
    cut = ham_sandwich([points[v] for v in V1], [points[v] for v in V2], avoid_direction=l.direction)
    lp, _, _ = _translate(l, cut.line, {v: points[v] for v in ids}, cross_edges)
    side2 = _assign_sides(lp, ids, points)
    quads = {
        "V11": tuple(v for v in V1 if side2[v] > 0),
        "V12": tuple(v for v in V1 if side2[v] < 0),
        "V21": tuple(v for v in V2 if side2[v] > 0),
        "V22": tuple(v for v in V2 if side2[v] < 0),
    }
    child_a = set(quads["V11"]) | set(quads["V22"])
    child_b = set(quads["V12"]) | set(quads["V21"])
    kept_a, kept_b = [], []
    for e in cross_edges:
        if side2[e[0]] == side2[e[1]]:
            discarded["SAME_SIDE_OF_L_PRIME"].append(e)
        elif e[0] in child_a and e[1] in child_a:
            kept_a.append(e)
        elif e[0] in child_b and e[1] in child_b:
            kept_b.append(e)
        else:
            discarded["BETWEEN_CHILDREN"].append(e)
    n = len(ids)
    balance = Fraction(len(child_a), n) - Fraction(1, 2) if n else Fraction(0)
    split = Split(l, lp, quads, {r: tuple(discarded.get(r, ())) for r in DISCARD_REASONS}, balance)
    return split, (tuple(sorted(child_a)), tuple(kept_a)), (tuple(sorted(child_b)), tuple(kept_b))


def _decompose(points, ids, edges, leaf_size, depth):
    node = PartitionNode(tuple(sorted(ids)), tuple(edges), depth=depth)
    if len(ids) <= leaf_size:
        return node
    split, a, b = _split_node(points, ids, edges)
    if max(len(a[0]), len(b[0])) >= len(ids):
        # no progress possible at this size; keep as a leaf
        return node
    node.split = split
    node.children = (
        _decompose(points, a[0], a[1], leaf_size, depth + 1),
        _decompose(points, b[0], b[1], leaf_size, depth + 1),
    )
    return node


def decompose(g: GeometricGraph, leaf_size: int = 4) -> PartitionTree:
    """Recursive halving-line / ham-sandwich decomposition of ``g``.

    Every edge ends up either inside exactly one leaf or in exactly one
    node's discard list, tagged with the reason it was dropped.
    """
    if leaf_size < 2:
        raise ValidationError("leaf_size must be >= 2")
    root = _decompose(g.points, list(range(g.n)), list(g.edges), leaf_size, 0)
    return PartitionTree(root, len(g.edges), leaf_size)


def recurrence_bound(n: int, exl) -> int:
    """``ceil(log_{4/3}(n) * (4 * exl(2n) + 6n))``."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return math.ceil(math.log(n) / math.log(4 / 3) * (4 * exl(2 * n) + 6 * n))
