"""2-layer drawings: crossings, fan-planarity checks, composition and SVG output."""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .graph import BipartiteGraph, Edge, Vertex


class DrawingError(ValueError):
    pass


@dataclass(frozen=True)
class TwoLayerDrawing:
    """A pair of linear orders, one per side, of the vertices of ``host``.

    Equality and hashing use the two orders only.
    """

    x_order: tuple[Vertex, ...]
    y_order: tuple[Vertex, ...]
    host: BipartiteGraph = field(compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "x_order", tuple(self.x_order))
        object.__setattr__(self, "y_order", tuple(self.y_order))
        if sorted(self.x_order) != sorted(self.host.x_vertices):
            raise DrawingError("x_order is not a permutation of the host's X side")
        if sorted(self.y_order) != sorted(self.host.y_vertices):
            raise DrawingError("y_order is not a permutation of the host's Y side")

    @property
    def vertices(self) -> frozenset[Vertex]:
        return frozenset(self.x_order) | frozenset(self.y_order)

    def positions(self) -> dict[Vertex, int]:
        pos = {v: i for i, v in enumerate(self.x_order)}
        pos.update((v, i) for i, v in enumerate(self.y_order))
        return pos

    def reversed(self) -> "TwoLayerDrawing":
        return TwoLayerDrawing(self.x_order[::-1], self.y_order[::-1], self.host)

    def restrict(self, keep: Iterable[Vertex]) -> "TwoLayerDrawing":
        """Subdrawing induced by ``keep``."""
        keep = set(keep)
        return TwoLayerDrawing(
            tuple(v for v in self.x_order if v in keep),
            tuple(v for v in self.y_order if v in keep),
            self.host.induced(keep),
        )

    def to_json(self) -> str:
        return json.dumps({"x_order": list(self.x_order), "y_order": list(self.y_order)})


def drawing_from_json(text: str, host: BipartiteGraph) -> TwoLayerDrawing:
    try:
        data = json.loads(text)
        xs, ys = data["x_order"], data["y_order"]
    except (ValueError, KeyError, TypeError) as exc:
        raise DrawingError(f"malformed drawing JSON: {exc}") from None
    if not isinstance(xs, list) or not isinstance(ys, list):
        raise DrawingError("x_order and y_order must be lists")
    return TwoLayerDrawing(tuple(xs), tuple(ys), host)


def _pair(e: Edge, f: Edge) -> tuple[Edge, Edge]:
    return (e, f) if e < f else (f, e)


def crossing_pairs(d: TwoLayerDrawing) -> set[tuple[Edge, Edge]]:
    """All crossing edge pairs ``(e, f)`` with ``e < f``.

    Sweeps edges by X position; an edge crosses every edge with a strictly
    smaller X position and a strictly larger Y position.
    """
    pos = d.positions()
    edges = sorted(d.host.edges, key=lambda e: (pos[e[0]], pos[e[1]]))
    out: set[tuple[Edge, Edge]] = set()
    done_y: list[int] = []  # sorted y positions of edges in finished X groups
    done_e: list[Edge] = []
    i = 0
    while i < len(edges):
        px = pos[edges[i][0]]
        j = i
        while j < len(edges) and pos[edges[j][0]] == px:
            j += 1
        group = edges[i:j]
        for e in group:
            for f in done_e[bisect_right(done_y, pos[e[1]]):]:
                out.add(_pair(e, f))
        for e in group:
            at = bisect_right(done_y, pos[e[1]])
            done_y.insert(at, pos[e[1]])
            done_e.insert(at, e)
        i = j
    return out


def crossing_pairs_scan(d: TwoLayerDrawing) -> set[tuple[Edge, Edge]]:
    """Quadratic all-pairs transcription of the crossing definition."""
    pos = d.positions()
    out = set()
    for e, f in combinations(d.host.sorted_edges(), 2):
        (x, y), (x2, y2) = e, f
        if (pos[x] < pos[x2] and pos[y2] < pos[y]) or (pos[x2] < pos[x] and pos[y] < pos[y2]):
            out.add(_pair(e, f))
    return out


def crossing_map(d: TwoLayerDrawing) -> dict[Edge, set[Edge]]:
    cross: dict[Edge, set[Edge]] = {e: set() for e in d.host.edges}
    for e, f in crossing_pairs(d):
        cross[e].add(f)
        cross[f].add(e)
    return cross


def crossing_edges(d: TwoLayerDrawing, e: Edge) -> list[Edge]:
    """χ_D(e), canonically sorted."""
    if e not in d.host.edges:
        raise DrawingError(f"edge {e} is not in the drawn graph")
    return sorted(crossing_map(d)[e])


@dataclass(frozen=True)
class CrossingReport:
    fan_planar: bool
    max_crossings_per_edge: int
    crossings_per_edge: dict[Edge, int]
    violating_triple: Optional[tuple[Edge, Edge, Edge]] = None
    k: Optional[int] = None
    k_planar: Optional[bool] = None

    @property
    def k_planar_for(self) -> int:
        return self.max_crossings_per_edge


def common_endpoints(edges: Iterable[Edge]) -> Optional[set[Vertex]]:
    """Intersection of endpoint sets; None for an empty family."""
    common: Optional[set[Vertex]] = None
    for f in edges:
        common = set(f) if common is None else common & set(f)
    return common


def verify_drawing(d: TwoLayerDrawing, k: Optional[int] = None) -> CrossingReport:
    cross = crossing_map(d)
    fan = all(common_endpoints(fs) != set() for fs in cross.values())
    triple = None
    if not fan:
        triples = []
        for e, fs in cross.items():
            for f, g in combinations(sorted(fs), 2):
                if not set(f) & set(g):
                    triples.append(tuple(sorted((e, f, g))))
        triple = min(triples)
    counts = {e: len(fs) for e, fs in sorted(cross.items())}
    top = max(counts.values(), default=0)
    return CrossingReport(
        fan_planar=fan,
        max_crossings_per_edge=top,
        crossings_per_edge=counts,
        violating_triple=triple,
        k=k,
        k_planar=None if k is None else top <= k,
    )


def is_consistent(d: TwoLayerDrawing, d2: TwoLayerDrawing) -> bool:
    for a, b in ((d.x_order, d2.x_order), (d.y_order, d2.y_order)):
        shared = set(a) & set(b)
        if [v for v in a if v in shared] != [v for v in b if v in shared]:
            return False
    return True


def merge_orders(left: Sequence[Vertex], right: Sequence[Vertex]) -> tuple[Vertex, ...]:
    """Merge two orders that agree on their shared vertices; vertices only in
    ``left`` go before vertices only in ``right``.

    Each exclusive vertex falls into a gap between consecutive shared
    vertices. A valid merge exists iff no left-only vertex sits in a later gap
    than some right-only vertex; it is then unique.
    """
    rset, lset = set(right), set(left)
    shared = [v for v in left if v in rset]
    if shared != [v for v in right if v in lset]:
        raise DrawingError("orders disagree on shared vertices")

    def gaps(order: Sequence[Vertex], other: set) -> list[list[Vertex]]:
        out: list[list[Vertex]] = [[]]
        for v in order:
            if v in other:
                out.append([])
            else:
                out[-1].append(v)
        return out

    lgaps, rgaps = gaps(left, rset), gaps(right, lset)
    last_left = max((i for i, g in enumerate(lgaps) if g), default=-1)
    first_right = min((i for i, g in enumerate(rgaps) if g), default=len(rgaps))
    if last_left > first_right:
        raise DrawingError("composition has no consistent linear order")
    merged: list[Vertex] = []
    for i in range(len(shared) + 1):
        merged += lgaps[i] + rgaps[i]
        if i < len(shared):
            merged.append(shared[i])
    return tuple(merged)


def compose(d_left: TwoLayerDrawing, d_right: TwoLayerDrawing) -> TwoLayerDrawing:
    """``d_left ∘ d_right``: the unique drawing of the union that restricts to
    both inputs and puts vertices exclusive to ``d_left`` left of vertices
    exclusive to ``d_right`` on each layer."""
    if d_left.host.root is not d_right.host.root and d_left.host.root != d_right.host.root:
        raise DrawingError("drawings are not of subgraphs of one graph")
    if not is_consistent(d_left, d_right):
        raise DrawingError("drawings are not consistent")
    xs = merge_orders(d_left.x_order, d_right.x_order)
    ys = merge_orders(d_left.y_order, d_right.y_order)
    host = d_left.host.root.induced(set(xs) | set(ys))
    return TwoLayerDrawing(xs, ys, host)


def concatenate(drawings: Sequence[TwoLayerDrawing], host: BipartiteGraph) -> TwoLayerDrawing:
    """Side-by-side placement of drawings of vertex-disjoint subgraphs."""
    xs = tuple(v for d in drawings for v in d.x_order)
    ys = tuple(v for d in drawings for v in d.y_order)
    return TwoLayerDrawing(xs, ys, host)


def render_svg(d: TwoLayerDrawing, report: Optional[CrossingReport] = None) -> str:
    """Two rails (X on top), unit spacing, straight edges. Edges of a
    violating triple get class ``violating``."""
    unit, margin, gap = 40, 30, 120
    width = 2 * margin + unit * max(len(d.x_order), len(d.y_order), 1)
    height = 2 * margin + gap
    pos = d.positions()
    bad = set(report.violating_triple) if report and report.violating_triple else set()

    def cx(v: Vertex) -> int:
        return margin + unit * pos[v] + unit // 2

    top, bottom = margin, margin + gap
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        "<style>.rail{stroke:#bbb;stroke-width:1;fill:none}"
        ".edge{stroke:#333;stroke-width:1.5}"
        ".violating{stroke:#d62728;stroke-width:3}"
        ".vertex{fill:#fff;stroke:#000;stroke-width:1.5}"
        ".label{font:10px sans-serif;text-anchor:middle}</style>",
        f'<path class="rail" d="M{margin} {top}H{width - margin}"/>',
        f'<path class="rail" d="M{margin} {bottom}H{width - margin}"/>',
    ]
    for e in d.host.sorted_edges():
        cls = "edge violating" if e in bad else "edge"
        out.append(f'<line class="{cls}" x1="{cx(e[0])}" y1="{top}" x2="{cx(e[1])}" y2="{bottom}"/>')
    for v, y, dy in [(v, top, -8) for v in d.x_order] + [(v, bottom, 16) for v in d.y_order]:
        out.append(f'<circle class="vertex" cx="{cx(v)}" cy="{y}" r="5"/>')
        out.append(f'<text class="label" x="{cx(v)}" y="{y + dy}">{v}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
