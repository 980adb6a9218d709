"""Exact decision by enumerating 2-layer drawings, plus graph generators.

The search fixes the order of one side and builds the other side's order
left to right. Once both endpoints of two edges are placed their crossing
status is final, so a prefix already holding a violating triple, or an edge
with more than ``k_cap`` crossings, is cut.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum
from itertools import permutations
from typing import Iterator, Optional

from .drawing import TwoLayerDrawing
from .graph import BipartiteGraph


class Outcome(str, Enum):
    YES = "YES"
    NO = "NO"
    BUDGET_EXCEEDED = "BUDGET_EXCEEDED"


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: Optional[int] = None
    max_seconds: Optional[float] = None


@dataclass(frozen=True)
class SearchResult:
    outcome: Outcome
    drawing: Optional[TwoLayerDrawing] = None
    nodes: int = 0


class _OutOfBudget(Exception):
    pass


class _Search:
    def __init__(self, g: BipartiteGraph, k_cap: Optional[int], budget: SearchBudget) -> None:
        # the fixed ("outer") side is the smaller one; crossings are symmetric in the two layers
        swap = len(g.y_vertices) < len(g.x_vertices)
        self.outer = sorted(g.y_vertices if swap else g.x_vertices)
        self.inner = sorted(g.x_vertices if swap else g.y_vertices)
        self.swap = swap
        self.g = g
        self.k_cap = k_cap
        self.budget = budget
        self.nodes = 0
        self.deadline = None if budget.max_seconds is None else time.monotonic() + budget.max_seconds
        oi = {v: i for i, v in enumerate(self.outer)}
        ii = {v: j for j, v in enumerate(self.inner)}
        n_out = len(self.outer)
        self.edge_mask: list[int] = []
        self.inner_edges: list[list[tuple[int, int]]] = [[] for _ in self.inner]  # (edge id, outer idx)
        for x, y in g.sorted_edges():
            a, b = (y, x) if swap else (x, y)
            eid = len(self.edge_mask)
            self.edge_mask.append((1 << oi[a]) | (1 << (n_out + ii[b])))
            self.inner_edges[ii[b]].append((eid, oi[a]))

    def _tick(self) -> None:
        self.nodes += 1
        if self.budget.max_nodes is not None and self.nodes > self.budget.max_nodes:
            raise _OutOfBudget
        if self.deadline is not None and self.nodes % 1024 == 0 and time.monotonic() > self.deadline:
            raise _OutOfBudget

    def outer_orders(self) -> Iterator[tuple[int, ...]]:
        n = len(self.outer)
        for perm in permutations(range(n)):
            # both-layer reversal preserves crossings
            if n >= 2 and perm[0] > perm[-1]:
                continue
            yield perm

    def run(self, outer_orders=None) -> SearchResult:
        try:
            for perm in outer_orders if outer_orders is not None else self.outer_orders():
                found = self._inner_search(perm)
                if found is not None:
                    return SearchResult(Outcome.YES, self._drawing(perm, found), self.nodes)
        except _OutOfBudget:
            return SearchResult(Outcome.BUDGET_EXCEEDED, None, self.nodes)
        return SearchResult(Outcome.NO, None, self.nodes)

    def _inner_search(self, perm: tuple[int, ...]) -> Optional[list[int]]:
        pos = [0] * len(perm)
        for p, a in enumerate(perm):
            pos[a] = p
        m = len(self.edge_mask)
        count = [0] * m
        common = [-1] * m  # -1: no crossing yet
        mask = self.edge_mask
        cap = self.k_cap
        placed: list[tuple[int, int]] = []  # (edge id, outer position)
        order: list[int] = []
        used = [False] * len(self.inner)
        inner_edges = [[(e, pos[a]) for e, a in es] for es in self.inner_edges]

        def place(b: int) -> Optional[list[tuple[int, int, int]]]:
            undo: list[tuple[int, int, int]] = []
            ok = True
            for e, pe in inner_edges[b]:
                for f, pf in placed:
                    if pf <= pe:
                        continue
                    for u, v in ((e, f), (f, e)):
                        undo.append((u, count[u], common[u]))
                        count[u] += 1
                        common[u] = mask[v] if common[u] == -1 else common[u] & mask[v]
                        if common[u] == 0 or (cap is not None and count[u] > cap):
                            ok = False
                    if not ok:
                        break
                if not ok:
                    break
            if not ok:
                restore(undo)
                return None
            return undo

        def restore(undo: list[tuple[int, int, int]]) -> None:
            for u, c, cm in reversed(undo):
                count[u] = c
                common[u] = cm

        def dfs() -> bool:
            self._tick()
            if len(order) == len(self.inner):
                return True
            for b in range(len(self.inner)):
                if used[b]:
                    continue
                undo = place(b)
                if undo is None:
                    continue
                used[b] = True
                order.append(b)
                n_placed = len(placed)
                placed.extend(inner_edges[b])
                if dfs():
                    return True
                del placed[n_placed:]
                order.pop()
                used[b] = False
                restore(undo)
            return False

        return list(order) if dfs() else None

    def _drawing(self, perm: tuple[int, ...], inner_order: list[int]) -> TwoLayerDrawing:
        outer = tuple(self.outer[a] for a in perm)
        inner = tuple(self.inner[b] for b in inner_order)
        xs, ys = (inner, outer) if self.swap else (outer, inner)
        return TwoLayerDrawing(xs, ys, self.g)


def decide_bruteforce(
    g: BipartiteGraph, k_cap: Optional[int] = None, budget: Optional[SearchBudget] = None
) -> SearchResult:
    """YES with a fan-planar (and ``k_cap``-planar, if given) drawing, NO when
    no pair of orders qualifies, or BUDGET_EXCEEDED."""
    return _Search(g, k_cap, budget or SearchBudget()).run()


def _run_slice(args) -> SearchResult:
    g, k_cap, budget, first = args
    search = _Search(g, k_cap, budget)
    return search.run(p for p in search.outer_orders() if p and p[0] == first)


def decide_bruteforce_parallel(
    g: BipartiteGraph, k_cap: Optional[int] = None, budget: Optional[SearchBudget] = None, workers: int = 1
) -> SearchResult:
    """Same answer as :func:`decide_bruteforce`, with the fixed-side orders
    split by their first vertex across ``workers`` processes. The budget
    applies per slice. The witness is the one from the lowest YES slice, so
    it is deterministic too."""
    budget = budget or SearchBudget()
    n = min(len(g.x_vertices), len(g.y_vertices))
    if workers <= 1 or n < 3:
        return decide_bruteforce(g, k_cap, budget)
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_run_slice, [(g, k_cap, budget, i) for i in range(n)]))
    nodes = sum(r.nodes for r in results)
    for r in results:
        if r.outcome is Outcome.YES:
            return SearchResult(Outcome.YES, r.drawing, nodes)
    if any(r.outcome is Outcome.BUDGET_EXCEEDED for r in results):
        return SearchResult(Outcome.BUDGET_EXCEEDED, None, nodes)
    return SearchResult(Outcome.NO, None, nodes)


def min_k(g: BipartiteGraph, budget: Optional[SearchBudget] = None) -> Optional[int]:
    """Smallest k admitting a fan-planar k-planar drawing, or None if there is
    no fan-planar drawing. Raises RuntimeError when the budget runs out."""
    budget = budget or SearchBudget()
    first = decide_bruteforce(g, None, budget)
    if first.outcome is Outcome.BUDGET_EXCEEDED:
        raise RuntimeError("search budget exceeded")
    if first.outcome is Outcome.NO:
        return None
    k = 0
    while True:
        res = decide_bruteforce(g, k, budget)
        if res.outcome is Outcome.BUDGET_EXCEEDED:
            raise RuntimeError("search budget exceeded")
        if res.outcome is Outcome.YES:
            return k
        k += 1


# -- generators -------------------------------------------------------------


class Lcg:
    """64-bit linear congruential generator (Knuth's MMIX constants).

    ``below(n)`` returns the top 31 bits of the next state modulo ``n``. The
    sequence depends only on the seed, so generated graphs are identical on
    every platform and Python version.
    """

    A = 6364136223846793005
    C = 1442695040888963407
    MASK = (1 << 64) - 1

    def __init__(self, seed: int) -> None:
        self.state = seed & self.MASK

    def next(self) -> int:
        self.state = (self.A * self.state + self.C) & self.MASK
        return self.state >> 33

    def below(self, n: int) -> int:
        return self.next() % n


def random_bipartite(nx: int, ny: int, m: int, seed: int) -> BipartiteGraph:
    """``m`` distinct edges chosen by a partial Fisher-Yates shuffle of all
    ``nx * ny`` pairs in row-major order."""
    if min(nx, ny, m, seed) < 0 or m > nx * ny:
        raise ValueError("need non-negative parameters and m <= nx * ny")
    xs = [f"x{i}" for i in range(nx)]
    ys = [f"y{j}" for j in range(ny)]
    pairs = [(x, y) for x in xs for y in ys]
    rng = Lcg(seed)
    for i in range(m):
        j = i + rng.below(len(pairs) - i)
        pairs[i], pairs[j] = pairs[j], pairs[i]
    return BipartiteGraph(xs, ys, pairs[:m])


def exhaustive_bipartite(nx: int, ny: int) -> Iterator[BipartiteGraph]:
    """Every labeled bipartite graph on sides of exactly ``nx`` and ``ny``
    vertices, by edge bitmask over the row-major pair list."""
    if nx < 0 or ny < 0:
        raise ValueError("side sizes must be non-negative")
    xs = [f"x{i}" for i in range(nx)]
    ys = [f"y{j}" for j in range(ny)]
    pairs = [(x, y) for x in xs for y in ys]
    for bits in range(1 << len(pairs)):
        yield BipartiteGraph(xs, ys, [p for i, p in enumerate(pairs) if bits >> i & 1])


def generate(kind: str, *params: int) -> Iterator[BipartiteGraph]:
    if kind == "random":
        yield random_bipartite(*params)
    elif kind == "exhaustive":
        yield from exhaustive_bipartite(*params)
    else:
        raise ValueError(f"unknown generator {kind!r}")
