from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from fanplanar.drawing import (
    DrawingError,
    TwoLayerDrawing,
    compose,
    concatenate,
    crossing_edges,
    crossing_pairs,
    crossing_pairs_scan,
    drawing_from_json,
    is_consistent,
    merge_orders,
    render_svg,
    verify_drawing,
)
from fanplanar.graph import BipartiteGraph, complete_bipartite, path_graph

from conftest import drawings

C4 = BipartiteGraph(["w", "v"], ["u1", "u2"], [("w", "u1"), ("w", "u2"), ("v", "u1"), ("v", "u2")])
K23 = BipartiteGraph(["w", "v"], ["u1", "u2", "u3"], [(x, y) for x in "wv" for y in ("u1", "u2", "u3")])
MATCHING = BipartiteGraph(["a", "b", "c"], ["p", "q", "r"], [("a", "p"), ("b", "q"), ("c", "r")])


def c4_drawing() -> TwoLayerDrawing:
    return TwoLayerDrawing(("w", "v"), ("u1", "u2"), C4)


def k23_drawing() -> TwoLayerDrawing:
    return TwoLayerDrawing(("w", "v"), ("u1", "u2", "u3"), K23)


def crossed_matching() -> TwoLayerDrawing:
    return TwoLayerDrawing(("a", "b", "c"), ("r", "q", "p"), MATCHING)


def natural(g: BipartiteGraph) -> TwoLayerDrawing:
    return TwoLayerDrawing(tuple(sorted(g.x_vertices)), tuple(sorted(g.y_vertices)), g)


def test_drawing_rejects_non_permutations():
    with pytest.raises(DrawingError):
        TwoLayerDrawing(("w",), ("u1", "u2"), C4)
    with pytest.raises(DrawingError):
        TwoLayerDrawing(("w", "v"), ("u1", "u1"), C4)


def test_c4_single_crossing():
    assert crossing_pairs(c4_drawing()) == {(("v", "u1"), ("w", "u2"))}
    assert crossing_edges(c4_drawing(), ("v", "u1")) == [("w", "u2")]


def test_natural_path_is_planar():
    assert crossing_pairs(natural(path_graph(9))) == set()


def test_reversed_matching_all_cross():
    assert len(crossing_pairs(crossed_matching())) == 3


def test_star_edges_never_cross():
    star = BipartiteGraph(["c"], ["l1", "l2", "l3"], [("c", "l1"), ("c", "l2"), ("c", "l3")])
    d = TwoLayerDrawing(("c",), ("l3", "l1", "l2"), star)
    assert all(crossing_edges(d, e) == [] for e in star.edges)
    rep = verify_drawing(d)
    assert rep.fan_planar and rep.max_crossings_per_edge == 0


def test_k23_crossings_of_w_u3():
    # frozen from the all-pairs scan
    assert crossing_edges(k23_drawing(), ("w", "u3")) == [("v", "u1"), ("v", "u2")]
    assert {f for e, f in crossing_pairs_scan(k23_drawing()) if e == ("v", "u1")} | {
        e for e, f in crossing_pairs_scan(k23_drawing()) if f == ("v", "u1")
    } == {("w", "u2"), ("w", "u3")}


def test_k23_report():
    rep = verify_drawing(k23_drawing(), k=2)
    assert rep.fan_planar and rep.max_crossings_per_edge == 2 and rep.k_planar
    assert verify_drawing(k23_drawing(), k=1).k_planar is False


def test_crossed_matching_report():
    rep = verify_drawing(crossed_matching())
    assert not rep.fan_planar
    assert set(rep.violating_triple) == MATCHING.edges
    assert rep.violating_triple == tuple(sorted(MATCHING.edges))


def test_unknown_edge():
    with pytest.raises(DrawingError):
        crossing_edges(c4_drawing(), ("w", "zz"))


def test_consistency_examples():
    d = k23_drawing()
    assert is_consistent(d, d)
    flipped = TwoLayerDrawing(("v", "w"), ("u1", "u2", "u3"), K23)
    assert not is_consistent(d, flipped)
    g = complete_bipartite(2, 2)
    a = natural(g).restrict(["x0", "y0"])
    b = natural(g).restrict(["x1", "y1"])
    assert is_consistent(a, b)


def test_compose_identity():
    d = natural(path_graph(6))
    assert compose(d, d) == d


def test_compose_disjoint_concatenates():
    d = natural(complete_bipartite(2, 2))
    left = d.restrict(["x1", "y1"])
    right = d.restrict(["x0", "y0"])
    out = compose(left, right)
    assert out.x_order == ("x1", "x0") and out.y_order == ("y1", "y0")


def test_compose_overlapping_path_windows():
    g = path_graph(10)
    d = natural(g)
    names = sorted(g.vertices)
    left, right = d.restrict(names[:6]), d.restrict(names[3:])
    out = compose(left, right)
    assert out == d
    # the three defining clauses
    assert out.restrict(left.vertices) == left and out.restrict(right.vertices) == right
    pos = out.positions()
    for a in left.vertices - right.vertices:
        for b in right.vertices - left.vertices:
            if g.is_x(a) == g.is_x(b):
                assert pos[a] < pos[b]


def test_compose_rejects_bad_inputs():
    g = path_graph(6)
    d = natural(g)
    other = natural(path_graph(8))
    with pytest.raises(DrawingError):
        compose(d.restrict(["v00", "v01"]), other.restrict(["v02", "v03"]))
    swapped = TwoLayerDrawing(("v02", "v00", "v04"), d.y_order, g)
    with pytest.raises(DrawingError):
        compose(d.restrict(["v00", "v02"]), swapped.restrict(["v00", "v02"]))
    # a left-only vertex would have to follow a right-only one
    mirrored = TwoLayerDrawing(("v04", "v02", "v00"), d.y_order, g)
    with pytest.raises(DrawingError):
        compose(d.restrict(["v00", "v02"]), mirrored.restrict(["v04", "v00"]))
    # same gap: left-only simply goes first
    out = compose(d.restrict(["v02", "v04"]), d.restrict(["v00", "v04"]))
    assert out.x_order == ("v02", "v00", "v04")


def test_merge_orders():
    assert merge_orders(("a", "s", "b"), ("s", "c")) == ("a", "s", "b", "c")
    assert merge_orders(("a", "s"), ("c", "s")) == ("a", "c", "s")
    with pytest.raises(DrawingError):
        merge_orders(("s", "a"), ("c", "s"))


def test_concatenate_and_json_round_trip():
    g = BipartiteGraph(["a", "c"], ["b", "d"], [("a", "b"), ("c", "d")])
    d = concatenate([natural(g).restrict(["a", "b"]), natural(g).restrict(["c", "d"])], g)
    assert crossing_pairs(d) == set()
    assert drawing_from_json(d.to_json(), g) == d
    for bad in ("{", '{"x_order": 1, "y_order": []}', '{"x_order": []}'):
        with pytest.raises(DrawingError):
            drawing_from_json(bad, g)


def _svg_counts(svg: str) -> tuple[int, int, int]:
    return svg.count('<circle class="vertex"'), svg.count('<line class="edge'), svg.count("edge violating")


def test_svg_counts():
    edge = BipartiteGraph(["a"], ["b"], [("a", "b")])
    assert _svg_counts(render_svg(natural(edge)))[:2] == (2, 1)
    assert _svg_counts(render_svg(c4_drawing()))[:2] == (4, 4)
    d = crossed_matching()
    assert _svg_counts(render_svg(d, verify_drawing(d))) == (6, 3, 3)
    assert render_svg(d).startswith("<svg") and render_svg(d) == render_svg(d)


@given(drawings())
def test_sweep_matches_scan(d):
    assert crossing_pairs(d) == crossing_pairs_scan(d)


@given(drawings())
def test_reversal_preserves_crossings(d):
    assert crossing_pairs(d.reversed()) == crossing_pairs(d)


@given(drawings())
def test_adjacent_edges_never_cross(d):
    assert all(not set(e) & set(f) for e, f in crossing_pairs(d))


@given(drawings(), st.data())
def test_induced_subdrawing_closure(d, data):
    keep = data.draw(st.sets(st.sampled_from(sorted(d.vertices)))) if d.vertices else set()
    sub = d.restrict(keep)
    assert crossing_pairs(sub) <= crossing_pairs(d)
    if verify_drawing(d).fan_planar:
        assert verify_drawing(sub).fan_planar


@given(drawings())
def test_fan_planar_drawings_are_degree_planar(d):
    rep = verify_drawing(d)
    if rep.fan_planar:
        assert rep.max_crossings_per_edge <= d.host.max_degree()


@given(drawings())
def test_violating_triple_is_smallest(d):
    rep = verify_drawing(d)
    if rep.fan_planar:
        assert rep.violating_triple is None
        return
    e, f, g = rep.violating_triple
    assert e < f < g
    pairs = crossing_pairs_scan(d)
    crosses = lambda a, b: (min(a, b), max(a, b)) in pairs
    # some member crosses the other two, which are disjoint
    assert any(
        crosses(a, b) and crosses(a, c) and not set(b) & set(c) for a, b, c in ((e, f, g), (f, e, g), (g, e, f))
    )
