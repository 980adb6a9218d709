from __future__ import annotations

from hypothesis import strategies as st

from fanplanar.drawing import TwoLayerDrawing
from fanplanar.graph import BipartiteGraph


@st.composite
def graphs(draw, max_side: int = 4, min_side: int = 0) -> BipartiteGraph:
    nx = draw(st.integers(min_side, max_side))
    ny = draw(st.integers(min_side, max_side))
    xs = [f"x{i}" for i in range(nx)]
    ys = [f"y{j}" for j in range(ny)]
    pairs = [(x, y) for x in xs for y in ys]
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return BipartiteGraph(xs, ys, [p for p, keep in zip(pairs, chosen) if keep])


@st.composite
def drawings(draw, max_side: int = 4) -> TwoLayerDrawing:
    g = draw(graphs(max_side))
    xs = draw(st.permutations(g.x_vertices))
    ys = draw(st.permutations(g.y_vertices))
    return TwoLayerDrawing(tuple(xs), tuple(ys), g)
