import random
import xml.etree.ElementTree as ET

import pytest

from geograph.good import DisjointMatching, generate_triangle_frame, good_endpoints
from geograph.graph import GeometricGraph
from geograph.render import matching_graph, render

from oracles import sample_fourth_edge

NS = "{http://www.w3.org/2000/svg}"


def parse(svg):
    return ET.fromstring(svg)


def test_square_diagonals_svg():
    g = GeometricGraph([(0, 0), (2, 0), (2, 2), (0, 2)], [(0, 2), (1, 3)])
    root = parse(render(g))
    assert root.tag == NS + "svg"
    assert len(root.findall(f".//{NS}line")) == 2
    assert len(root.findall(f".//{NS}circle[@class='vertex']")) == 4


def test_witness_classes():
    g = GeometricGraph([(0, 0), (4, 4), (0, 4), (4, 0), (10, 1), (11, 5)], [(0, 1), (2, 3), (4, 5)])
    root = parse(render(g, witness=((0, 1), (2,))))
    classes = {ln.get("data-edge"): ln.get("class") for ln in root.iter(NS + "line")}
    assert classes == {"0": "edge e1", "1": "edge e1", "2": "edge e2"}
    with pytest.raises(IndexError):
        render(g, witness=((7,), ()))


def test_frame_with_fourth_edge_marks_good():
    f = generate_triangle_frame(1)
    e = sample_fourth_edge(random.Random(0), [(s.a, s.b) for s in f.segments], f.corners, 2)
    m = DisjointMatching(list(f.segments) + [e])
    good = good_endpoints(m)
    svg = render(matching_graph(m), good=[2 * i + end for i, end in good])
    assert len(parse(svg).findall(f".//{NS}circle[@class='good']")) == len(good) >= 2


def test_render_deterministic(tmp_path):
    g = GeometricGraph([(0, 0), (7, 1), (3, 9), (-4, 5)], [(0, 2), (1, 3)])
    a = render(g, good=[1])
    p = tmp_path / "x.svg"
    with open(p, "w") as fh:
        render(g, good=[1], sink=fh)
    assert p.read_text() == a == render(g, good=[1])
