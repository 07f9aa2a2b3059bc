"""Witness search for forbidden substructures over an intersection matrix.

All detectors are branch-and-bound clique searches on bitsets.  A crossing
family is a pair of cliques in the CROSS relation joined completely by
DISJOINT pairs; a natural grid swaps the roles of the two relations.  The
search never reports NONE unless it has finished; running out of budget is a
separate outcome.
"""
from __future__ import annotations

import enum
import math
import re
import time
from dataclasses import dataclass, field
from itertools import combinations

from .errors import SizeError
from .graph import CircleGraphPattern3, IntersectionMatrix, PATTERN_LABELS
from .geometry import IntersectionType

CROSS = IntersectionType.CROSS
DISJOINT = IntersectionType.DISJOINT
SHARE = IntersectionType.SHARE_ENDPOINT

ORACLE_CAP = 10**7


class Status(str, enum.Enum):
    FOUND = "FOUND"
    NONE = "NONE"
    BUDGET = "BUDGET"


class QueryKind(str, enum.Enum):
    CROSSING_FAMILY = "CROSSING_FAMILY"
    NATURAL_GRID = "NATURAL_GRID"
    PAIRWISE_CROSSING = "PAIRWISE_CROSSING"
    DISJOINT_MATCHING = "DISJOINT_MATCHING"
    CIRCLE3 = "CIRCLE3"


@dataclass(frozen=True)
class SearchBudget:
    node_limit: int = 10**6
    deadline_ms: float | None = None

    def __post_init__(self):
        if self.node_limit < 1:
            raise ValueError("node_limit must be >= 1")


@dataclass(frozen=True)
class FamilyWitness:
    e1: frozenset
    e2: frozenset
    kind: QueryKind

    def __post_init__(self):
        object.__setattr__(self, "e1", frozenset(self.e1))
        object.__setattr__(self, "e2", frozenset(self.e2))


@dataclass(frozen=True)
class ForbiddenQuery:
    kind: QueryKind
    k: int = 1
    l: int = 1
    pattern: CircleGraphPattern3 | None = None

    def __post_init__(self):
        if self.kind == QueryKind.CIRCLE3:
            if self.pattern is None:
                raise ValueError("CIRCLE3 query needs a pattern")
            return
        if self.k < 1 or self.l < 1:
            raise ValueError("k and l must be >= 1")

    @classmethod
    def parse(cls, text: str) -> "ForbiddenQuery":
        """Parse the pattern grammar, e.g. ``crossing-family:2,1`` or ``circle3:k3``."""
        m = re.fullmatch(r"\s*([a-z0-9-]+)\s*:\s*([a-z0-9, ]+)\s*", text)
        if not m:
            raise ValueError(f"bad pattern {text!r}")
        name, args = m.group(1), m.group(2).replace(" ", "")
        if name == "circle3":
            if args not in PATTERN_LABELS:
                raise ValueError(f"unknown circle3 pattern {args!r}")
            return cls(QueryKind.CIRCLE3, pattern=PATTERN_LABELS[args])
        try:
            nums = [int(a) for a in args.split(",")]
        except ValueError:
            raise ValueError(f"bad parameters in {text!r}") from None
        two = {"crossing-family": QueryKind.CROSSING_FAMILY, "grid": QueryKind.NATURAL_GRID}
        one = {"pairwise-crossing": QueryKind.PAIRWISE_CROSSING, "disjoint-matching": QueryKind.DISJOINT_MATCHING}
        if name in two and len(nums) == 2:
            return cls(two[name], nums[0], nums[1])
        if name in one and len(nums) == 1:
            return cls(one[name], nums[0])
        raise ValueError(f"bad pattern {text!r}")

    def label(self) -> str:
        if self.kind == QueryKind.CIRCLE3:
            inv = {v: k for k, v in PATTERN_LABELS.items()}
            return f"circle3:{inv[self.pattern]}"
        names = {
            QueryKind.CROSSING_FAMILY: "crossing-family",
            QueryKind.NATURAL_GRID: "grid",
            QueryKind.PAIRWISE_CROSSING: "pairwise-crossing",
            QueryKind.DISJOINT_MATCHING: "disjoint-matching",
        }
        if self.kind in (QueryKind.CROSSING_FAMILY, QueryKind.NATURAL_GRID):
            return f"{names[self.kind]}:{self.k},{self.l}"
        return f"{names[self.kind]}:{self.k}"


@dataclass
class DetectionResult:
    status: Status
    kind: QueryKind
    e1: tuple = ()
    e2: tuple = ()
    nodes_explored: int = 0

    @property
    def found(self) -> bool:
        return self.status == Status.FOUND

    @property
    def edges(self) -> tuple:
        return tuple(sorted(self.e1 + self.e2))

    @property
    def witness(self) -> FamilyWitness | None:
        if not self.found or self.kind not in (QueryKind.CROSSING_FAMILY, QueryKind.NATURAL_GRID):
            return None
        return FamilyWitness(self.e1, self.e2, self.kind)

    def to_json(self) -> dict:
        return {
            "found": self.found,
            "kind": self.kind.value,
            "e1": list(self.e1),
            "e2": list(self.e2),
            "nodes_explored": self.nodes_explored,
            "status": self.status.value,
        }


class _Exhausted(Exception):
    pass


@dataclass
class _Counter:
    budget: SearchBudget
    nodes: int = 0
    t0: float = field(default_factory=time.monotonic)

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget.node_limit:
            self.nodes = self.budget.node_limit
            raise _Exhausted
        if self.budget.deadline_ms is not None and self.nodes % 256 == 0:
            if (time.monotonic() - self.t0) * 1000 > self.budget.deadline_ms:
                raise _Exhausted


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _popcount(x):
    return x.bit_count()


RELABEL_LIMIT = 64


class _Relabel:
    """Relabel edges so bit order equals search order: descending degree, then index.

    Relabelling costs a pass over every mask, which dominates cheap anchored
    queries on large graphs, so big universes keep their original labels.
    """

    def __init__(self, degree_masks, universe):
        self.identity = _popcount(universe) > RELABEL_LIMIT
        if self.identity:
            self.old = None
            self.P = universe
            return
        ids = list(_bits(universe))
        ids.sort(key=lambda i: (-_popcount(degree_masks[i] & universe), i))
        self.old = ids
        self.new = {old: new for new, old in enumerate(ids)}
        self.P = (1 << len(ids)) - 1

    def mask(self, m):
        if self.identity:
            return m
        out = 0
        for i in _bits(m):
            j = self.new.get(i)
            if j is not None:
                out |= 1 << j
        return out

    def adj(self, masks, restrict=None):
        """Adjacency in the new labels, optionally intersected with ``restrict`` (old labels)."""
        if self.identity:
            if restrict is None:
                return masks
            return _Restricted(masks, restrict)
        if restrict is None:
            return [self.mask(masks[i]) for i in self.old]
        return [masks[i] & restrict for i in self.old]

    def back(self, items):
        if self.identity:
            return tuple(sorted(items))
        return tuple(sorted(self.old[i] for i in items))


class _Restricted:
    __slots__ = ("masks", "restrict")

    def __init__(self, masks, restrict):
        self.masks, self.restrict = masks, restrict

    def __getitem__(self, i):
        return self.masks[i] & self.restrict


def _color_classes(P, adj):
    """Greedy colouring of ``P`` in bit order; returns [(vertex, colour)] by ascending colour."""
    out = []
    colour = 0
    U = P
    while U:
        colour += 1
        Q = U
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            Q &= ~(adj[v] | low)
            U ^= low
            out.append((v, colour))
    return out


def _clique(adj, P, k, counter, R, accept=None, filt=None):
    """Extend clique ``R`` by vertices of ``P`` to size ``k``.

    ``accept(R)`` may veto a complete clique; ``filt(R, P)`` may shrink the
    candidate set before bounding.  Returns the clique or None.
    """
    if len(R) == k:
        return list(R) if accept is None or accept(R) else None
    counter.tick()
    if filt is not None:
        P = filt(R, P)
    need = k - len(R)
    if _popcount(P) < need:
        return None
    ordered = _color_classes(P, adj)
    for v, c in reversed(ordered):
        if c < need:
            return None
        R.append(v)
        found = _clique(adj, P & adj[v], k, counter, R, accept, filt)
        R.pop()
        if found is not None:
            return found
        P &= ~(1 << v)
    return None


def _universe(m: IntersectionMatrix):
    return (1 << m.edge_count) - 1


def _run(kind, search, counter):
    try:
        res = search()
    except _Exhausted:
        return DetectionResult(Status.BUDGET, kind, nodes_explored=counter.nodes)
    if res is None:
        return DetectionResult(Status.NONE, kind, nodes_explored=counter.nodes)
    e1, e2 = res
    return DetectionResult(Status.FOUND, kind, tuple(sorted(e1)), tuple(sorted(e2)), counter.nodes)


def _check_params(*vals):
    for v in vals:
        if v < 1:
            raise ValueError("size parameters must be >= 1")


def _find_clique(m, relation, k, budget, kind, required=None):
    _check_params(k)
    counter = _Counter(budget or SearchBudget())
    masks = m.masks(relation)
    universe = _universe(m)

    def search():
        start, P = [], universe
        if required is not None:
            start, P = [required], masks[required]
        if len(start) > k:
            return None
        lab = _Relabel(masks, P)
        clique = _clique(lab.adj(masks), lab.P, k - len(start), counter, [])
        if clique is None:
            return None
        return tuple(start) + lab.back(clique), ()

    return _run(kind, search, counter)


def find_pairwise_crossing(m: IntersectionMatrix, k: int, budget: SearchBudget | None = None, required=None):
    """k pairwise crossing edges."""
    return _find_clique(m, CROSS, k, budget, QueryKind.PAIRWISE_CROSSING, required)


def find_disjoint_matching(m: IntersectionMatrix, k: int, budget: SearchBudget | None = None, required=None):
    """k pairwise disjoint edges."""
    return _find_clique(m, DISJOINT, k, budget, QueryKind.DISJOINT_MATCHING, required)


def _family_search(inner, across, universe, k, l, counter, first=None):
    """Find a k-clique E1 and an l-clique E2 of ``inner`` with E1 x E2 inside ``across``.

    Works in original edge labels; relabels per stage for ordering.  When
    ``first`` is given it is forced into E1.
    """
    base_P = universe
    start = []
    pool0 = universe
    if first is not None:
        start = [first]
        base_P = inner[first] & universe
        pool0 = across[first] & universe
    lab = _Relabel(inner, base_P)
    adj = lab.adj(inner)
    # across masks restricted to the pool universe, in original labels
    across_new = lab.adj(across, restrict=pool0)
    need1 = k - len(start)
    result = {}

    def pool_of(R):
        pool = pool0
        for v in R:
            pool &= across_new[v]
        return pool

    def filt(R, P):
        pool = pool_of(R)
        if _popcount(pool) < l:
            return 0
        keep = 0
        for v in _bits(P):
            if _popcount(pool & across_new[v]) >= l:
                keep |= 1 << v
        return keep

    def accept(R):
        pool = pool_of(R)
        if _popcount(pool) < l:
            return False
        lab2 = _Relabel(inner, pool)
        e2 = _clique(lab2.adj(inner), lab2.P, l, counter, [])
        if e2 is None:
            return False
        result["e2"] = lab2.back(e2)
        return True

    if need1 < 0:
        return None
    if need1 == 0:
        if not accept([]):
            return None
        return tuple(start), result["e2"]
    e1 = _clique(adj, lab.P, need1, counter, [], accept=accept, filt=filt)
    if e1 is None:
        return None
    return tuple(start) + lab.back(e1), result["e2"]


def _find_family(m, inner_rel, across_rel, k, l, budget, kind, required=None):
    _check_params(k, l)
    counter = _Counter(budget or SearchBudget())
    inner = m.masks(inner_rel)
    across = m.masks(across_rel)
    universe = _universe(m)

    def search():
        if m.edge_count < k + l:
            return None
        if required is None:
            return _family_search(inner, across, universe, k, l, counter)
        res = _family_search(inner, across, universe, k, l, counter, first=required)
        if res is not None:
            return res
        res = _family_search(inner, across, universe, l, k, counter, first=required)
        if res is not None:
            return res[1], res[0]
        return None

    return _run(kind, search, counter)


def find_crossing_family(m: IntersectionMatrix, k: int, l: int, budget: SearchBudget | None = None, required=None):
    """(k, l)-crossing family: two crossing cliques, every cross pair disjoint."""
    return _find_family(m, CROSS, DISJOINT, k, l, budget, QueryKind.CROSSING_FAMILY, required)


def find_natural_grid(m: IntersectionMatrix, k: int, l: int, budget: SearchBudget | None = None, required=None):
    """Natural (k, l)-grid: k disjoint edges each crossing l disjoint edges."""
    return _find_family(m, DISJOINT, CROSS, k, l, budget, QueryKind.NATURAL_GRID, required)


def find_matching_with_pattern(m: IntersectionMatrix, pattern: CircleGraphPattern3, budget=None, required=None):
    """Three edges, no two sharing an endpoint, whose crossing graph is ``pattern``.

    Each 3-vertex pattern coincides with one of the other detectors; the
    result keeps that detector's e1/e2 split.
    """
    pattern = CircleGraphPattern3(pattern)
    if pattern == CircleGraphPattern3.TRIPLE_CROSSING:
        r = find_pairwise_crossing(m, 3, budget, required)
    elif pattern == CircleGraphPattern3.TRIPLE_DISJOINT:
        r = find_disjoint_matching(m, 3, budget, required)
    elif pattern == CircleGraphPattern3.GRID_21:
        r = find_natural_grid(m, 2, 1, budget, required)
    else:
        r = find_crossing_family(m, 2, 1, budget, required)
    r.kind = QueryKind.CIRCLE3
    return r


def detect(m: IntersectionMatrix, query: ForbiddenQuery, budget: SearchBudget | None = None, required=None):
    if query.kind == QueryKind.CROSSING_FAMILY:
        return find_crossing_family(m, query.k, query.l, budget, required)
    if query.kind == QueryKind.NATURAL_GRID:
        return find_natural_grid(m, query.k, query.l, budget, required)
    if query.kind == QueryKind.PAIRWISE_CROSSING:
        return find_pairwise_crossing(m, query.k, budget, required)
    if query.kind == QueryKind.DISJOINT_MATCHING:
        return find_disjoint_matching(m, query.k, budget, required)
    return find_matching_with_pattern(m, query.pattern, budget, required)


def verify_witness(m: IntersectionMatrix, w: FamilyWitness) -> bool:
    e1, e2 = set(w.e1), set(w.e2)
    if not e1 or not e2 or e1 & e2:
        return False
    if any(not 0 <= i < m.edge_count for i in e1 | e2):
        return False
    if w.kind == QueryKind.CROSSING_FAMILY:
        inner, across = CROSS, DISJOINT
    elif w.kind == QueryKind.NATURAL_GRID:
        inner, across = DISJOINT, CROSS
    else:
        return False
    for part in (e1, e2):
        if any(m[i, j] != inner for i, j in combinations(sorted(part), 2)):
            return False
    return all(m[i, j] == across for i in e1 for j in e2)


def verify_result(m: IntersectionMatrix, query: ForbiddenQuery, r: DetectionResult) -> bool:
    """Check that a FOUND result really is a witness of ``query``."""
    if not r.found:
        return False
    if query.kind in (QueryKind.CROSSING_FAMILY, QueryKind.NATURAL_GRID):
        return (
            len(r.e1) == query.k
            and len(r.e2) == query.l
            and verify_witness(m, FamilyWitness(r.e1, r.e2, query.kind))
        )
    edges = r.edges
    if len(set(edges)) != len(edges) or any(not 0 <= i < m.edge_count for i in edges):
        return False
    if query.kind == QueryKind.PAIRWISE_CROSSING:
        return len(edges) == query.k and all(m[i, j] == CROSS for i, j in combinations(edges, 2))
    if query.kind == QueryKind.DISJOINT_MATCHING:
        return len(edges) == query.k and all(m[i, j] == DISJOINT for i, j in combinations(edges, 2))
    return _triple_pattern(m, edges) == query.pattern


def _triple_pattern(m, triple):
    if len(triple) != 3:
        return None
    types = [m[i, j] for i, j in combinations(triple, 2)]
    if SHARE in types:
        return None
    degs = {i: 0 for i in triple}
    for (i, j), t in zip(combinations(triple, 2), types):
        if t == CROSS:
            degs[i] += 1
            degs[j] += 1
    d = tuple(sorted(degs.values()))
    return CircleGraphPattern3((sum(d) // 2, d))


def exhaustive_oracle(m: IntersectionMatrix, query: ForbiddenQuery) -> DetectionResult:
    """Ground truth by enumerating every index subset of the right size."""
    E = m.edge_count
    if query.kind == QueryKind.CIRCLE3:
        size = 3
    elif query.kind in (QueryKind.CROSSING_FAMILY, QueryKind.NATURAL_GRID):
        size = query.k + query.l
    else:
        size = query.k
    if math.comb(E, size) > ORACLE_CAP:
        raise SizeError(f"C({E}, {size}) exceeds the enumeration cap")
    t = m.types
    examined = 0

    def rel_all(items, rel):
        return all(t[i, j] == rel for i, j in combinations(items, 2))

    for combo in combinations(range(E), size):
        examined += 1
        if query.kind == QueryKind.PAIRWISE_CROSSING and rel_all(combo, CROSS):
            return DetectionResult(Status.FOUND, query.kind, combo, (), examined)
        if query.kind == QueryKind.DISJOINT_MATCHING and rel_all(combo, DISJOINT):
            return DetectionResult(Status.FOUND, query.kind, combo, (), examined)
        if query.kind == QueryKind.CIRCLE3 and _triple_pattern(m, combo) == query.pattern:
            return DetectionResult(Status.FOUND, query.kind, combo, (), examined)
        if query.kind in (QueryKind.CROSSING_FAMILY, QueryKind.NATURAL_GRID):
            inner, across = (CROSS, DISJOINT) if query.kind == QueryKind.CROSSING_FAMILY else (DISJOINT, CROSS)
            for e1 in combinations(combo, query.k):
                e2 = tuple(i for i in combo if i not in e1)
                if rel_all(e1, inner) and rel_all(e2, inner) and all(t[i, j] == across for i in e1 for j in e2):
                    return DetectionResult(Status.FOUND, query.kind, e1, e2, examined)
    return DetectionResult(Status.NONE, query.kind, nodes_explored=examined)
