"""Degree reduction for 2-layer fan-planarity.

Three safe removals are applied to a fixpoint:

* ``ISOLATED``: a vertex without neighbors.
* ``DEG1``: a vertex with two or more degree-1 neighbors keeps the
  canonically smallest one; the rest go.
* ``DEG2_TWIN``: when three or more degree-2 vertices share the same pair of
  neighbors ``{v, w}``, the two smallest stay and the rest go.

Every removal is logged so a drawing of the reduced graph can be lifted back
to the input graph, and :func:`early_reject` recognises reduced graphs that
cannot have a fan-planar drawing at all.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .drawing import DrawingError, TwoLayerDrawing, verify_drawing
from .graph import BipartiteGraph, Vertex

MAX_REDUCED_DEGREE = 13


class Rule(str, Enum):
    ISOLATED = "ISOLATED"
    DEG1 = "DEG1"
    DEG2_TWIN = "DEG2_TWIN"


class RejectKind(str, Enum):
    FIVE_HIGH_DEGREE = "FIVE_HIGH_DEGREE"
    FIVE_MATCHED_DEG2 = "FIVE_MATCHED_DEG2"
    DEGREE_GATE = "DEGREE_GATE"


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class Step:
    removed: Vertex
    rule: Rule
    anchors: tuple[Vertex, ...]  # DEG1: (u, v); DEG2_TWIN: (u1, u2, v, w)


@dataclass(frozen=True)
class ReductionTrace:
    source: BipartiteGraph = field(repr=False)
    steps: tuple[Step, ...] = ()

    def to_json(self) -> str:
        return json.dumps(
            {"steps": [{"removed": s.removed, "rule": s.rule.value, "anchors": list(s.anchors)} for s in self.steps]}
        )


def trace_from_json(text: str, source: BipartiteGraph) -> ReductionTrace:
    data = json.loads(text)
    steps = tuple(Step(s["removed"], Rule(s["rule"]), tuple(s["anchors"])) for s in data["steps"])
    return ReductionTrace(source, steps)


@dataclass(frozen=True)
class RejectReason:
    kind: RejectKind
    vertex: Vertex
    witness: tuple[tuple[Vertex, ...], ...]  # (neighbors,) or (neighbors, partners) or ()

    def describe(self) -> str:
        if self.kind is RejectKind.FIVE_HIGH_DEGREE:
            return f"{self.vertex} has five neighbors of degree >= 3: {', '.join(self.witness[0])}"
        if self.kind is RejectKind.FIVE_MATCHED_DEG2:
            pairs = ", ".join(f"{u}-{w}" for u, w in zip(*self.witness))
            return f"{self.vertex} has five degree-2 neighbors matched outside it: {pairs}"
        return f"{self.vertex} has degree above {MAX_REDUCED_DEGREE} in a reduced graph"


# -- rule detection ---------------------------------------------------------


def _deg1_group(g: BipartiteGraph, v: Vertex) -> list[Vertex]:
    return [u for u in g.neighbors(v) if g.degree(u) == 1]


def _twin_groups(g: BipartiteGraph, v: Vertex) -> dict[Vertex, list[Vertex]]:
    """Degree-2 neighbors of v keyed by their other neighbor."""
    groups: dict[Vertex, list[Vertex]] = defaultdict(list)
    for u in g.neighbors(v):
        if g.degree(u) == 2:
            a, b = g.neighbors(u)
            groups[b if a == v else a].append(u)
    return groups


def _next_removals(g: BipartiteGraph) -> list[Step]:
    order = sorted(g.vertices)
    isolated = [v for v in order if g.degree(v) == 0]
    if isolated:
        return [Step(v, Rule.ISOLATED, ()) for v in isolated]
    for v in order:
        leaves = _deg1_group(g, v)
        if len(leaves) >= 2:
            return [Step(w, Rule.DEG1, (leaves[0], v)) for w in leaves[1:]]
    for v in order:
        for w, twins in sorted(_twin_groups(g, v).items()):
            if len(twins) >= 3:
                a, b = sorted((v, w))
                return [Step(u, Rule.DEG2_TWIN, (twins[0], twins[1], a, b)) for u in twins[2:]]
    return []


def is_reduced(g: BipartiteGraph) -> bool:
    return not _next_removals(g)


def apply_reductions(g: BipartiteGraph) -> tuple[BipartiteGraph, ReductionTrace]:
    steps: list[Step] = []
    current = g
    while True:
        batch = _next_removals(current)
        if not batch:
            return current, ReductionTrace(g, tuple(steps))
        steps.extend(batch)
        current = current.remove_vertices(s.removed for s in batch)


def replay_trace(trace: ReductionTrace) -> BipartiteGraph:
    """Re-apply the logged removals, checking each precondition."""
    current = trace.source
    for step in trace.steps:
        v = step.removed
        if v not in current:
            raise ReductionError(f"{v} is not present when the trace removes it")
        if step.rule is Rule.ISOLATED:
            ok = current.degree(v) == 0
        elif step.rule is Rule.DEG1:
            u, c = step.anchors
            ok = u != v and u in current and current.neighbors(v) == (c,) and current.neighbors(u) == (c,)
        else:
            u1, u2, a, b = step.anchors
            pair = (a, b)
            ok = len({u1, u2, v}) == 3 and all(
                u in current and current.neighbors(u) == pair for u in (u1, u2, v)
            )
        if not ok:
            raise ReductionError(f"precondition of {step.rule.value} fails for {v}")
        current = current.remove_vertices([v])
    return current


# -- early rejection --------------------------------------------------------


def early_reject(g: BipartiteGraph) -> Optional[RejectReason]:
    """A certificate that a reduced graph has no 2-layer fan-planar drawing,
    or None.

    For the matched degree-2 test, each degree-2 neighbor u of v has exactly
    one neighbor in G - v, so a matching saturating five of them exists iff
    five of them have pairwise distinct second neighbors.
    """
    if not is_reduced(g):
        raise ReductionError("early_reject needs a reduced graph")
    order = sorted(g.vertices)
    for v in order:
        # by counting (1 + 4 + 2*4 = 13) one of the tests below would fire as
        # well; checking the gate first reports the plainer reason
        if g.degree(v) > MAX_REDUCED_DEGREE:
            return RejectReason(RejectKind.DEGREE_GATE, v, ())
    for v in order:
        high = [u for u in g.neighbors(v) if g.degree(u) >= 3]
        if len(high) >= 5:
            return RejectReason(RejectKind.FIVE_HIGH_DEGREE, v, (tuple(high[:5]),))
    for v in order:
        groups = sorted(_twin_groups(g, v).items())
        if len(groups) >= 5:
            partners = tuple(w for w, _ in groups[:5])
            twins = tuple(us[0] for _, us in groups[:5])
            return RejectReason(RejectKind.FIVE_MATCHED_DEG2, v, (twins, partners))
    return None


def witness_holds(g: BipartiteGraph, reason: RejectReason) -> bool:
    v = reason.vertex
    if reason.kind is RejectKind.FIVE_HIGH_DEGREE:
        us = reason.witness[0]
        return len(set(us)) == 5 and all(u in g.neighbors(v) and g.degree(u) >= 3 for u in us)
    if reason.kind is RejectKind.FIVE_MATCHED_DEG2:
        us, ws = reason.witness
        return (
            len(set(us)) == 5
            and len(set(ws)) == 5
            and all(u in g.neighbors(v) and g.degree(u) == 2 and w in g.neighbors(u) and w != v for u, w in zip(us, ws))
        )
    return g.degree(v) > MAX_REDUCED_DEGREE


# -- lifting ----------------------------------------------------------------


def _insert_after(order: list[Vertex], anchor: Vertex, v: Vertex) -> None:
    order.insert(order.index(anchor) + 1, v)


def lift_drawing(trace: ReductionTrace, d_reduced: TwoLayerDrawing, *, check: bool = True) -> TwoLayerDrawing:
    """Reinsert removed vertices in reverse trace order.

    DEG1 vertices go immediately right of the kept sibling and DEG2_TWIN
    vertices immediately right of the first kept twin; either way the new
    vertex duplicates its neighbor's edges. Isolated vertices go to the right
    end of their layer.
    """
    source = trace.source
    removed = {s.removed for s in trace.steps}
    expected = set(source.vertices) - removed
    if d_reduced.vertices != expected:
        raise ReductionError("drawing does not match the graph produced by the trace")
    if check and not verify_drawing(d_reduced).fan_planar:
        raise ReductionError("lifting needs a fan-planar drawing of the reduced graph")
    xs, ys = list(d_reduced.x_order), list(d_reduced.y_order)
    for step in reversed(trace.steps):
        v = step.removed
        layer = xs if source.is_x(v) else ys
        if step.rule is Rule.ISOLATED:
            layer.append(v)
        elif step.rule is Rule.DEG1:
            _insert_after(layer, step.anchors[0], v)
        else:
            _insert_after(layer, step.anchors[0], v)
    lifted = TwoLayerDrawing(tuple(xs), tuple(ys), source)
    if check and not verify_drawing(lifted).fan_planar:
        raise DrawingError("lifted drawing is not fan-planar")
    return lifted
