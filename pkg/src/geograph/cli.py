"""Command-line entry point.

Exit codes: 0 success (whatever the detection outcome), 1 internal error,
2 parse or flag error, 3 input validation error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .detect import ForbiddenQuery, SearchBudget, detect
from .errors import (
    CoordinateRangeError,
    DegenerateGeometryError,
    GeoGraphError,
    NotAMatchingError,
    ParseError,
    SizeError,
    ValidationError,
)
from .extremal import GeneratorKind, GeneratorSpec, growth_experiment, records_to_csv
from .good import DisjointMatching, good_endpoints
from .graph import IntersectionMatrix, build_intersection_matrix, load_graph
from .partition import decompose, ham_sandwich, rotate_to_balance
from .render import matching_graph, render

EXIT_OK, EXIT_INTERNAL, EXIT_PARSE, EXIT_INVALID = 0, 1, 2, 3

VALIDATION_ERRORS = (ValidationError, CoordinateRangeError, DegenerateGeometryError, NotAMatchingError, SizeError)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _state_json(st):
    return {
        "line": st.line.as_json(),
        "pivot": st.pivot,
        "partner": st.partner,
        "e_left": st.e_left,
        "e_right": st.e_right,
        "step": st.step,
    }


def _n_list(text):
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise _UsageError(f"--n expects a comma-separated list of integers, got {text!r}") from None
    if not vals or any(v < 2 for v in vals):
        raise _UsageError("--n values must be integers >= 2")
    return vals


def _query(args):
    if not args.pattern:
        raise _UsageError("--pattern is required for this command")
    try:
        return ForbiddenQuery.parse(args.pattern)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _budget(args):
    return SearchBudget(node_limit=args.budget) if args.budget else SearchBudget()


def _read_input(args):
    if not args.input:
        raise _UsageError("--input is required for this command")
    try:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _UsageError(f"cannot read {args.input}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None


def _graph(args, allow_matrix=False):
    doc = _read_input(args)
    g = load_graph(json.dumps(doc))
    if isinstance(g, IntersectionMatrix) and not allow_matrix:
        raise ValidationError("this command needs point coordinates, not an abstract matrix")
    return g


def _dump(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def cmd_validate(args):
    try:
        g = _graph(args, allow_matrix=True)
    except VALIDATION_ERRORS as exc:
        detail = getattr(exc, "detail", None)
        out = {"valid": False, "error": str(exc)}
        if hasattr(detail, "kind"):
            out["kind"], out["indices"] = detail.kind, list(detail.indices)
        return _dump(out), EXIT_INVALID, str(exc)
    if isinstance(g, IntersectionMatrix):
        return _dump({"valid": True, "kind": "matrix", "edge_count": g.edge_count})
    return _dump({"valid": True, "kind": "graph", "n": g.n, "edge_count": len(g.edges)})


def cmd_detect(args):
    q = _query(args)
    g = _graph(args, allow_matrix=True)
    m = g if isinstance(g, IntersectionMatrix) else build_intersection_matrix(g)
    res = detect(m, q, _budget(args))
    if args.format == "svg":
        if isinstance(g, IntersectionMatrix):
            raise ValidationError("cannot draw an abstract matrix")
        return render(g, (res.e1, res.e2))
    out = res.to_json()
    out["pattern"] = q.label()
    return _dump(out)


def cmd_render(args):
    g = _graph(args)
    witness = None
    if args.pattern:
        res = detect(build_intersection_matrix(g), _query(args), _budget(args))
        witness = (res.e1, res.e2) if res.found else None
    return render(g, witness)


def cmd_decompose(args):
    g = _graph(args)
    tree = decompose(g, leaf_size=args.leaf_size)
    out = tree.to_json()
    out["depth"] = tree.depth
    out["discard_totals"] = tree.discard_totals()
    return _dump(out)


def cmd_halving(args):
    g = _graph(args)
    if g.n < 2 or g.n % 2:
        raise ValidationError("halving rotation needs an even number of points, at least 2")
    res = rotate_to_balance(g)
    return _dump(
        {
            "n": g.n,
            "final": _state_json(res.final),
            "imbalance": res.final.imbalance,
            "bound": 2 * g.n,
            "trace": [_state_json(s) for s in res.trace],
            "events": res.events,
        }
    )


def cmd_hamsandwich(args):
    doc = _read_input(args)
    if "v1" in doc and "v2" in doc:
        raw = {"points": doc["v1"] + doc["v2"]}
        n1 = len(doc["v1"])
        g = load_graph(json.dumps(raw))
        v1, v2 = g.points[:n1], g.points[n1:]
    else:
        g = load_graph(json.dumps(doc))
        if isinstance(g, IntersectionMatrix):
            raise ValidationError("ham-sandwich needs point coordinates")
        classes = doc.get("classes")
        if classes is None:
            classes = [0] * (g.n // 2) + [1] * (g.n - g.n // 2)
        if len(classes) != g.n or any(c not in (0, 1) for c in classes):
            raise ParseError("'classes' must list 0 or 1 for every point")
        v1 = [p for p, c in zip(g.points, classes) if c == 0]
        v2 = [p for p, c in zip(g.points, classes) if c == 1]
    cut = ham_sandwich(v1, v2)
    return _dump(
        {
            "line": cut.line.as_json(),
            "v1": dict(zip(("left", "on", "right"), cut.counts[0])),
            "v2": dict(zip(("left", "on", "right"), cut.counts[1])),
        }
    )


def cmd_good(args):
    g = _graph(args)
    m = DisjointMatching.from_graph(g)
    good = sorted(good_endpoints(m))
    if args.format == "svg":
        mg = matching_graph(m)
        return render(mg, good=[2 * i + end for i, end in good])
    out = {
        "matching_size": len(m),
        "good": [{"edge": i, "end": end, "vertex": g.edges[i][end], "point": list(m.endpoint((i, end)))} for i, end in good],
        "good_count": len(good),
    }
    if len(m) >= 4:
        out["bound"] = len(m) - 2
        out["bound_holds"] = len(good) >= len(m) - 2
    return _dump(out)


def cmd_extremal(args):
    q = _query(args)
    if not args.n:
        raise _UsageError("--n is required for extremal")
    if args.trials < 1:
        raise _UsageError("--trials must be >= 1")
    spec = GeneratorSpec(GeneratorKind(args.generator), seed=args.seed)
    recs = growth_experiment(spec, q, _n_list(args.n), args.trials, _budget(args))
    if args.format == "json":
        rows = []
        for r in recs:
            row = dict(zip(("n", "trial", "seed", "query", "edges", "maximal", "status"), r.row()[:7]))
            row["maximal"] = r.maximal
            row["elapsed_ms"] = round(r.elapsed_ms, 3)
            if r.error:
                row["error"] = r.error
            rows.append(row)
        return _dump({"records": rows})
    return records_to_csv(recs)


COMMANDS = {
    "detect": cmd_detect,
    "decompose": cmd_decompose,
    "halving": cmd_halving,
    "hamsandwich": cmd_hamsandwich,
    "good": cmd_good,
    "extremal": cmd_extremal,
    "render": cmd_render,
    "validate": cmd_validate,
}

DEFAULT_FORMAT = {"extremal": "csv", "render": "svg"}


def build_parser():
    p = _Parser(prog="geograph", description="Geometric graph pattern tools")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--input")
    p.add_argument("--output")
    p.add_argument("--pattern")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--budget", type=int)
    p.add_argument("--leaf-size", type=int, default=4)
    p.add_argument("--format", choices=("json", "csv", "svg"))
    p.add_argument("--generator", choices=[k.value for k in GeneratorKind], default=GeneratorKind.RANDOM_DISK.value)
    return p


def _check_format(args):
    fmt = args.format or DEFAULT_FORMAT.get(args.command, "json")
    allowed = {
        "detect": ("json", "svg"),
        "good": ("json", "svg"),
        "extremal": ("csv", "json"),
        "render": ("svg",),
    }.get(args.command, ("json",))
    if fmt not in allowed:
        raise _UsageError(f"--format {fmt} is not available for {args.command}")
    args.format = fmt


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _check_format(args)
        if args.seed < 0 or args.seed >= 2**64:
            raise _UsageError("--seed must be an unsigned 64-bit integer")
        if args.budget is not None and args.budget < 1:
            raise _UsageError("--budget must be >= 1")
        payload = COMMANDS[args.command](args)
        code = EXIT_OK
        if isinstance(payload, tuple):
            payload, code, message = payload
            print(f"geograph: invalid input: {message}", file=sys.stderr)
        if args.output:
            with open(args.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(payload)
        else:
            sys.stdout.write(payload)
        return code
    except _UsageError as exc:
        print(f"geograph: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ParseError as exc:
        print(f"geograph: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except VALIDATION_ERRORS as exc:
        print(f"geograph: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except GeoGraphError as exc:
        print(f"geograph: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        print(f"geograph: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
