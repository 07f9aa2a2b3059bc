"""Deterministic SVG scenes of geometric graphs, witnesses and good endpoints."""
from __future__ import annotations

from .graph import GeometricGraph

STYLE = (
    ".edge{stroke:#555;stroke-width:var(--w)}"
    ".edge.e1{stroke:#c0392b}"
    ".edge.e2{stroke:#2471a3}"
    ".vertex{fill:#111}"
    ".good{fill:#f1c40f;stroke:#111;stroke-width:var(--w)}"
)


def _num(v) -> str:
    s = f"{float(v):.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def matching_graph(m) -> GeometricGraph:
    """Graph on the endpoints of a matching: vertex ``2*i + end`` is endpoint ``(i, end)``."""
    pts = [p for s in m.segments for p in s.endpoints]
    return GeometricGraph(pts, [(2 * i, 2 * i + 1) for i in range(len(m.segments))], validate=False)


def render(g: GeometricGraph, witness=None, good=(), sink=None) -> str:
    """SVG document with one disc per vertex and one line per edge.

    ``witness`` is a pair ``(e1, e2)`` of edge-index collections drawn in two
    stroke classes; ``good`` lists vertex indices marked with a small extra disc.
    The y axis points up, as in the usual drawings.
    """
    e1, e2 = (set(witness[0]), set(witness[1])) if witness else (set(), set())
    for i in e1 | e2:
        if not 0 <= i < len(g.edges):
            raise IndexError(f"witness edge {i} out of range")
    good = sorted(set(good))
    for v in good:
        if not 0 <= v < g.n:
            raise IndexError(f"good vertex {v} out of range")

    if g.n:
        xs = [p[0] for p in g.points]
        ys = [-p[1] for p in g.points]
        x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    else:
        x0 = x1 = y0 = y1 = 0
    span = max(x1 - x0, y1 - y0, 1)
    mx = my = span * 0.05
    r = span * 0.012
    w = span * 0.004

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_num(x0 - mx)} {_num(y0 - my)} {_num(x1 - x0 + 2 * mx)} {_num(y1 - y0 + 2 * my)}" '
        f'style="--w:{_num(w)}">',
        f"<style>{STYLE}</style>",
        '<g id="edges">',
    ]
    for i, (u, v) in enumerate(g.edges):
        cls = "edge e1" if i in e1 else "edge e2" if i in e2 else "edge"
        (ax, ay), (bx, by) = g.points[u], g.points[v]
        out.append(f'<line class="{cls}" data-edge="{i}" x1="{ax}" y1="{-ay}" x2="{bx}" y2="{-by}"/>')
    out.append("</g>")
    out.append('<g id="vertices">')
    for i, (x, y) in enumerate(g.points):
        out.append(f'<circle class="vertex" data-vertex="{i}" cx="{x}" cy="{-y}" r="{_num(r)}"/>')
    out.append("</g>")
    if good:
        out.append('<g id="good">')
        for v in good:
            x, y = g.points[v]
            out.append(f'<circle class="good" data-vertex="{v}" cx="{x}" cy="{-y}" r="{_num(r * 0.6)}"/>')
        out.append("</g>")
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    if sink is not None:
        if hasattr(sink, "write"):
            sink.write(text)
        else:
            with open(sink, "w", encoding="utf-8") as fh:
                fh.write(text)
    return text
