"""Recognition of 2-layer fan-planar bipartite graphs."""

from __future__ import annotations

from .dpsolver import Decision, Method, decide, decide_dp
from .drawing import TwoLayerDrawing, render_svg, verify_drawing
from .graph import BipartiteGraph, parse_graph, serialize_graph
from .oracle import Outcome, SearchBudget, decide_bruteforce
from .reduction import apply_reductions, early_reject, lift_drawing

__all__ = [
    "BipartiteGraph",
    "Decision",
    "Method",
    "Outcome",
    "SearchBudget",
    "TwoLayerDrawing",
    "apply_reductions",
    "decide",
    "decide_bruteforce",
    "decide_dp",
    "early_reject",
    "lift_drawing",
    "parse_graph",
    "render_svg",
    "serialize_graph",
    "verify_drawing",
]
