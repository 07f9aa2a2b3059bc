"""Greedy pattern-free graph construction and growth experiments.

A trial shuffles all vertex pairs with a seeded RNG and keeps an edge
whenever the detector certifies that no witness of the query uses it.  Since
the graph before the insertion was already pattern-free, any new witness
must contain the new edge, so each check is a search anchored at that edge.
"""
from __future__ import annotations

import csv
import enum
import io
import math
import random
import time
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .detect import ForbiddenQuery, SearchBudget, Status, detect
from .errors import GenerationError, GeoGraphError, InvariantError
from .geometry import IntersectionType, Point, classify_against, coords_array, validate_general_position
from .graph import GeometricGraph, build_intersection_matrix

CSV_COLUMNS = ("n", "trial", "seed", "query", "edges", "maximal", "status", "elapsed_ms")


class GeneratorKind(str, enum.Enum):
    RANDOM_DISK = "RANDOM_DISK"
    CONVEX = "CONVEX"
    PERTURBED_GRID = "PERTURBED_GRID"


@dataclass(frozen=True)
class GeneratorSpec:
    kind: GeneratorKind = GeneratorKind.RANDOM_DISK
    n: int = 10
    seed: int = 0
    coordinate_scale: int = 10**6

    def with_n(self, n, seed=None):
        return GeneratorSpec(self.kind, n, self.seed if seed is None else seed, self.coordinate_scale)


def _reduced(dx, dy):
    g = math.gcd(dx, dy)
    dx, dy = dx // g, dy // g
    if dy < 0 or (dy == 0 and dx < 0):
        return -dx, -dy
    return dx, dy


def _fits(pts, p):
    """True if ``p`` is new and forms no collinear triple with ``pts``."""
    seen = set()
    for q in pts:
        if q == p:
            return False
        key = _reduced(q[0] - p[0], q[1] - p[1])
        if key in seen:
            return False
        seen.add(key)
    return True


def _is_convex_position(pts):
    n = len(pts)
    if n < 3:
        return True
    for i in range(n):
        a, b, c = pts[i], pts[(i + 1) % n], pts[(i + 2) % n]
        if (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]) <= 0:
            return False
    return True


def generate_points(spec: GeneratorSpec, attempts=1000):
    """``spec.n`` integer points in general position, deterministic in ``spec.seed``."""
    if spec.n < 2:
        raise ValueError("n must be >= 2")
    rng = np.random.default_rng(spec.seed)
    R = spec.coordinate_scale
    if spec.kind == GeneratorKind.CONVEX:
        for _ in range(attempts):
            ang = 2 * np.pi * (np.arange(spec.n) + rng.uniform(0, 0.5, spec.n)) / spec.n
            pts = [Point(int(round(R * math.cos(a))), int(round(R * math.sin(a)))) for a in ang]
            if _is_convex_position(pts) and validate_general_position(pts):
                return pts
        raise GenerationError("could not place points in convex position")

    if spec.kind == GeneratorKind.PERTURBED_GRID:
        side = math.isqrt(spec.n - 1) + 1
        step = max(R // side, 8)
        slots = [(i, j) for j in range(side) for i in range(side)][: spec.n]

        def draw(slot):
            i, j = slot
            jit = step // 4
            return Point(i * step + int(rng.integers(-jit, jit + 1)), j * step + int(rng.integers(-jit, jit + 1)))
    else:
        slots = [None] * spec.n

        def draw(_):
            while True:
                x, y = (int(v) for v in rng.integers(-R, R + 1, size=2))
                if x * x + y * y <= R * R:
                    return Point(x, y)

    pts = []
    for slot in slots:
        for _ in range(attempts):
            p = draw(slot)
            if _fits(pts, p):
                pts.append(p)
                break
        else:
            raise GenerationError(f"could not place point {len(pts)} in general position")
    return pts


@dataclass
class ExperimentRecord:
    n: int
    trial: int
    seed: int
    query: str
    edges_achieved: int
    maximal: bool
    elapsed_ms: float
    detector_status: str
    error: str | None = None
    graph: GeometricGraph | None = field(default=None, repr=False, compare=False)

    def row(self):
        return (
            self.n,
            self.trial,
            self.seed,
            self.query,
            self.edges_achieved,
            str(self.maximal).lower(),
            self.detector_status,
            f"{self.elapsed_ms:.3f}",
        )


def _to_mask(flags) -> int:
    return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")


class _GrowingMatrix:
    """Bitmask view of the intersection relations of a graph under construction.

    Masks of accepted edges are kept current.  A candidate edge is exposed as
    the last index; its own masks are exact, but it is not yet recorded in
    the other edges' masks (anchored searches never look it up there).
    """

    def __init__(self):
        self._m = {IntersectionType.CROSS: [], IntersectionType.DISJOINT: []}
        self.count = 0
        self._cand = None

    @property
    def edge_count(self):
        return self.count + (self._cand is not None)

    def masks(self, kind):
        base = self._m[IntersectionType(kind)]
        if self._cand is None:
            return base
        return base + [self._cand[IntersectionType(kind)]]

    def propose(self, row):
        self._cand = {kind: _to_mask(row == kind) for kind in self._m}
        return self.count

    def accept(self):
        idx = self.count
        bit = 1 << idx
        for kind, mask in self._cand.items():
            lst = self._m[kind]
            m = mask
            while m:
                low = m & -m
                lst[low.bit_length() - 1] |= bit
                m ^= low
            lst.append(mask)
        self.count += 1
        self._cand = None

    def reject(self):
        self._cand = None


def maximal_pattern_free(points, query: ForbiddenQuery, seed, budget: SearchBudget | None = None, n_label=None, trial=0):
    """Greedy random insertion of edges that create no witness of ``query``."""
    budget = budget or SearchBudget()
    t0 = time.monotonic()
    pts = [Point(*p) for p in points]
    n = len(pts)
    cands = list(combinations(range(n), 2))
    random.Random(seed).shuffle(cands)
    grow = _GrowingMatrix()
    edges = []
    xy = coords_array(pts)
    seg_arr = np.empty((len(cands), 4), dtype=xy.dtype)
    any_budget = False
    for u, v in cands:
        seg = (*pts[u], *pts[v])
        row = classify_against(seg, seg_arr[: len(edges)])
        idx = grow.propose(row)
        res = detect(grow, query, budget, required=idx)
        if res.status == Status.NONE:
            grow.accept()
            seg_arr[len(edges), :2] = xy[u]
            seg_arr[len(edges), 2:] = xy[v]
            edges.append((u, v))
        else:
            grow.reject()
            if res.status == Status.BUDGET:
                any_budget = True
    g = GeometricGraph(pts, edges)
    elapsed = (time.monotonic() - t0) * 1000
    rec = ExperimentRecord(
        n if n_label is None else n_label,
        trial,
        seed,
        query.label(),
        len(edges),
        not any_budget,
        elapsed,
        Status.BUDGET.value if any_budget else Status.NONE.value,
        graph=g,
    )
    return g, rec


def recheck(g: GeometricGraph, query: ForbiddenQuery, budget: SearchBudget | None = None):
    """Fresh, unanchored detector pass over a finished graph."""
    return detect(build_intersection_matrix(g), query, budget or SearchBudget(node_limit=10**7))


def trial_seed(master_seed, n, trial) -> int:
    ss = np.random.SeedSequence([int(master_seed), int(n), int(trial)])
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def growth_experiment(spec: GeneratorSpec, query: ForbiddenQuery, n_values, trials, budget=None, master_seed=None, do_recheck=True):
    """One record per (n, trial); each trial owns an RNG derived from (seed, n, trial)."""
    n_values = list(n_values)
    if not n_values or trials < 1:
        raise ValueError("need at least one n value and one trial")
    master = spec.seed if master_seed is None else master_seed
    records = []
    for n in n_values:
        for t in range(trials):
            seed = trial_seed(master, n, t)
            try:
                pts = generate_points(spec.with_n(n, seed))
                g, rec = maximal_pattern_free(pts, query, seed, budget, trial=t)
                if do_recheck:
                    r = recheck(g, query)
                    if r.status == Status.FOUND:
                        raise InvariantError(f"greedy graph contains a witness {r.e1} {r.e2}")
                    if r.status == Status.BUDGET:
                        rec.detector_status = Status.BUDGET.value
            except GeoGraphError as exc:
                rec = ExperimentRecord(n, t, seed, query.label(), 0, False, 0.0, "ERROR", error=str(exc))
            records.append(rec)
    records.sort(key=lambda r: (r.n, r.trial))
    return records


def records_to_csv(records, include_elapsed=True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = CSV_COLUMNS if include_elapsed else CSV_COLUMNS[:-1]
    w.writerow(cols)
    for r in sorted(records, key=lambda r: (r.n, r.trial)):
        row = r.row()
        w.writerow(row if include_elapsed else row[:-1])
    return buf.getvalue()
