"""Window dynamic program for fan-planar k-planar 2-layer drawings, and the
full recognition pipeline.

A state ``(S, D, chi, C)`` describes the right end of a drawing of
``G[L]``, ``L = N[S] ∪ ⋃C``: ``S`` is a window of ``2k+1`` X-vertices that
ends the X order, ``D`` is the drawing restricted to ``N[S]``, ``chi`` gives
the exact crossing count of every edge at ``S`` within ``G[L]``, and ``C`` is
the set of components of ``G - N[S]`` lying to the left. The predicate
``draw_fan`` is an OR over states whose window is shifted one X-vertex to the
left.

Besides the literal state-by-state evaluation (:meth:`DrawFanDP.draw_fan_eval`),
:class:`DrawFanDP` evaluates the same predicate for all ``chi`` at once: for a
triple ``(S, D, C)`` it computes the set of ``chi`` vectors for which
``draw_fan`` holds. This avoids enumerating the ``chi`` values of edges
entering the window, which is what :func:`decide_dp` uses.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from itertools import permutations, product
from typing import Iterator, Optional

from .drawing import (
    DrawingError,
    TwoLayerDrawing,
    compose,
    concatenate,
    crossing_map,
    merge_orders,
    verify_drawing,
)
from .graph import BipartiteGraph, Edge, Vertex
from .oracle import Outcome, SearchBudget, SearchResult, decide_bruteforce
from .reduction import MAX_REDUCED_DEGREE, RejectKind, apply_reductions, early_reject, lift_drawing

Components = frozenset[frozenset[Vertex]]
# (x order of the window, y order of N(S), left components)
WindowKey = tuple[tuple[Vertex, ...], tuple[Vertex, ...], Components]


class DpInvariantError(RuntimeError):
    """A reconstructed certificate broke a property the recurrence guarantees."""


class BudgetExceeded(RuntimeError):
    def __init__(self, method: "Method", stats: dict) -> None:
        super().__init__(f"budget exceeded during {method.value}")
        self.method = method
        self.stats = stats


class _OutOfBudget(Exception):
    pass


@dataclass(frozen=True)
class DpState:
    drawing: TwoLayerDrawing
    chi: tuple[tuple[Edge, int], ...]  # sorted by edge, one entry per edge at the window
    components: Components

    @property
    def window(self) -> frozenset[Vertex]:
        return frozenset(self.drawing.x_order)

    @property
    def v_star(self) -> Vertex:
        return self.drawing.x_order[-1]

    @property
    def key(self) -> WindowKey:
        return (self.drawing.x_order, self.drawing.y_order, self.components)

    def covered(self) -> frozenset[Vertex]:
        """L = N[S] ∪ ⋃C."""
        return self.drawing.vertices.union(*self.components)


class DrawFanDP:
    """The ``draw_fan`` recurrence for one connected graph and crossing bound ``k``."""

    def __init__(self, g: BipartiteGraph, k: int, budget: Optional[SearchBudget] = None) -> None:
        if k < 0:
            raise ValueError("k must be non-negative")
        self.g = g
        self.k = k
        self.width = 2 * k + 1
        self.budget = budget or SearchBudget()
        self.adj = {v: g.neighbors(v) for v in g.vertices}
        self.xset = frozenset(g.x_vertices)
        self.profiles: dict[WindowKey, dict[tuple[int, ...], Optional[tuple[WindowKey, tuple[int, ...]]]]] = {}
        self.states = 0
        self._deadline = None if self.budget.max_seconds is None else time.monotonic() + self.budget.max_seconds
        self._cross_cache: dict[tuple, dict[Edge, list[Edge]]] = {}
        self._comp_cache: dict[frozenset, list[frozenset[Vertex]]] = {}

    # -- window drawings -------------------------------------------------

    def edges_of(self, xs: tuple[Vertex, ...]) -> list[Edge]:
        """δ(S) in canonical order."""
        return [(x, y) for x in sorted(xs) for y in self.adj[x]]

    def window_crossings(self, xs: tuple[Vertex, ...], ys: tuple[Vertex, ...]) -> dict[Edge, list[Edge]]:
        """Crossings among edges from ``xs`` to the placed ``ys``."""
        key = (xs, ys)
        hit = self._cross_cache.get(key)
        if hit is not None:
            return hit
        py = {y: i for i, y in enumerate(ys)}
        edges = [(px, py[y], (x, y)) for px, x in enumerate(xs) for y in self.adj[x] if y in py]
        cross: dict[Edge, list[Edge]] = {e: [] for _, _, e in edges}
        for i, (ax, ay, e) in enumerate(edges):
            for bx, by, f in edges[i + 1 :]:
                if (ax < bx and by < ay) or (bx < ax and ay < by):
                    cross[e].append(f)
                    cross[f].append(e)
        if len(self._cross_cache) > 200_000:
            self._cross_cache.clear()
        self._cross_cache[key] = cross
        return cross

    def _acceptable(self, cross: dict[Edge, list[Edge]]) -> bool:
        k = self.k
        for fs in cross.values():
            if len(fs) > k:
                return False
            if len(fs) > 1:
                common = set(fs[0])
                for f in fs[1:]:
                    common.intersection_update(f)
                if not common:
                    return False
        return True

    def insertions(
        self, xs: tuple[Vertex, ...], base: tuple[Vertex, ...], fresh: list[Vertex]
    ) -> Iterator[tuple[Vertex, ...]]:
        """Every Y order extending ``base`` by ``fresh`` whose window drawing
        is fan-planar and k-planar. Partial orders are pruned: crossings only
        accumulate as vertices are added."""
        if not self._acceptable(self.window_crossings(xs, base)):
            return
        if not fresh:
            yield base
            return
        v, rest = fresh[0], fresh[1:]
        for i in range(len(base) + 1):
            yield from self.insertions(xs, base[:i] + (v,) + base[i:], rest)

    def _components(self, closed: frozenset[Vertex]) -> list[frozenset[Vertex]]:
        hit = self._comp_cache.get(closed)
        if hit is None:
            hit = [frozenset(c) for c in self.g.components_after_removal(closed)]
            self._comp_cache[closed] = hit
        return hit

    def final_keys(self) -> Iterator[WindowKey]:
        """Rightmost windows: every ordered S, every acceptable D, C = all
        components of G - N[S]."""
        for xs in permutations(sorted(self.xset), self.width):
            ns = sorted({y for x in xs for y in self.adj[x]})
            comps = frozenset(self._components(frozenset(xs) | frozenset(ns)))
            for ys in self.insertions(xs, (), ns):
                yield (xs, ys, comps)

    def successor_keys(self, key: WindowKey) -> Iterator[WindowKey]:
        """Window triples ``(S', D', C')`` reachable by one left shift.

        ``S'`` drops ``v*`` and gains some X-vertex ``u*`` of a left component
        as its new leftmost member; ``D'`` keeps ``D``'s order on shared
        vertices, places ``u*``'s new neighbors anywhere, and must be fan-planar
        and k-planar; ``C'`` holds the components of ``G - N[S']`` inside the
        old left part. On top of that, three filters that hold for every real
        drawing:

        * no component of ``C'`` meets ``N[S]`` (so ``v*`` stays right of
          everything in ``L'``);
        * ``L = N[S] ∪ N[S'] ∪ ⋃C'``;
        * in the composed window ``D' ∘ D`` no edge at ``u*`` crosses an edge
          at ``v*`` (the two are ``2k+1`` apart).
        """
        xs, ys, comps = key
        v_star, rest = xs[-1], xs[:-1]
        closed = frozenset(xs) | frozenset(ys)
        left = frozenset().union(*comps)
        covered = closed | left
        n_rest = {y for x in rest for y in self.adj[x]}
        for u_star in sorted(v for v in left if v in self.xset):
            xs2 = (u_star,) + rest
            n2 = n_rest | set(self.adj[u_star])
            closed2 = frozenset(xs2) | frozenset(n2)
            comps2 = frozenset(c for c in self._components(closed2) if not c.isdisjoint(left))
            left2 = frozenset().union(*comps2)
            if not left2.isdisjoint(closed):
                continue
            if closed | closed2 | left2 != covered:
                continue
            base = tuple(y for y in ys if y in n2)
            fresh = sorted(set(self.adj[u_star]) - closed)
            for ys2 in self.insertions(xs2, base, fresh):
                if self._ends_clear(u_star, v_star, ys2, ys):
                    yield (xs2, ys2, comps2)

    def _ends_clear(self, u_star: Vertex, v_star: Vertex, ys_left: tuple, ys_right: tuple) -> bool:
        try:
            merged = merge_orders(ys_left, ys_right)
        except DrawingError:
            return False
        pos = {y: i for i, y in enumerate(merged)}
        return not any(
            c != z and pos[z] < pos[c] for c in self.adj[u_star] for z in self.adj[v_star]
        )

    def _tick(self) -> None:
        self.states += 1
        if self.budget.max_nodes is not None and self.states > self.budget.max_nodes:
            raise _OutOfBudget
        if self._deadline is not None and self.states % 256 == 0 and time.monotonic() > self._deadline:
            raise _OutOfBudget

    # -- literal recurrence ------------------------------------------------

    def make_state(self, key: WindowKey, chi: dict[Edge, int]) -> DpState:
        xs, ys, comps = key
        host = self.g.induced(set(xs) | set(ys))
        return DpState(TwoLayerDrawing(xs, ys, host), tuple(sorted(chi.items())), comps)

    def base_case(self, s: DpState) -> bool:
        if s.components:
            raise ValueError("base_case needs a state without left components")
        cross = self.window_crossings(s.drawing.x_order, s.drawing.y_order)
        return all(v == len(cross[e]) for e, v in s.chi)

    def _lost(self, cross: dict[Edge, list[Edge]], e: Edge, v_star: Vertex) -> int:
        return sum(1 for f in cross[e] if f[0] == v_star)

    def successors(self, s: DpState) -> Iterator[DpState]:
        """All ``(S', D', chi', C')`` for the recurrence. ``chi'`` is pinned
        on edges shared with ``S`` and ranges over ``|χ_D'(e)|..k`` on the
        edges at ``u*``."""
        if not s.components:
            raise ValueError("successors of a base state")
        xs, ys = s.drawing.x_order, s.drawing.y_order
        chi = dict(s.chi)
        cross = self.window_crossings(xs, ys)
        v_star = s.v_star
        # every crossing of an edge at v* lies inside the window
        if any(chi[e] != len(cross[e]) for e in chi if e[0] == v_star):
            return
        for key2 in self.successor_keys(s.key):
            xs2, ys2, _ = key2
            cross2 = self.window_crossings(xs2, ys2)
            pinned: dict[Edge, int] = {}
            free: list[Edge] = []
            for e in self.edges_of(xs2):
                if e in chi:
                    val = chi[e] - self._lost(cross, e, v_star)
                    if not len(cross2[e]) <= val <= self.k:
                        break
                    pinned[e] = val
                else:
                    free.append(e)
            else:
                for combo in product(*(range(len(cross2[e]), self.k + 1) for e in free)):
                    yield self.make_state(key2, {**pinned, **dict(zip(free, combo))})

    def draw_fan_eval(self, s: DpState, memo: Optional[dict] = None) -> bool:
        """OR over successors; ``memo`` maps states to ``(value, successor
        used)``. Pass ``memo=None`` to evaluate without memoization."""
        if memo is not None and s in memo:
            return memo[s][0]
        self._tick()
        link = None
        if not s.components:
            value = self.base_case(s)
        else:
            value = False
            for t in self.successors(s):
                if self.draw_fan_eval(t, memo):
                    value, link = True, t
                    break
        if memo is not None:
            memo[s] = (value, link)
        return value

    def final_states(self) -> Iterator[DpState]:
        for key in self.final_keys():
            xs, ys, _ = key
            cross = self.window_crossings(xs, ys)
            edges = self.edges_of(xs)
            for combo in product(*(range(len(cross[e]), self.k + 1) for e in edges)):
                yield self.make_state(key, dict(zip(edges, combo)))

    def decide_literal(self) -> SearchResult:
        """Decision by the literal recurrence, state by state."""
        memo: dict = {}
        try:
            for s in self.final_states():
                if self.draw_fan_eval(s, memo):
                    chain = [s]
                    while memo[chain[-1]][1] is not None:
                        chain.append(memo[chain[-1]][1])
                    return SearchResult(Outcome.YES, self._compose_chain([c.key for c in chain]), self.states)
        except _OutOfBudget:
            return SearchResult(Outcome.BUDGET_EXCEEDED, None, self.states)
        return SearchResult(Outcome.NO, None, self.states)

    # -- chi-profile evaluation ----------------------------------------------

    def profile(self, key: WindowKey) -> dict[tuple[int, ...], Optional[tuple[WindowKey, tuple[int, ...]]]]:
        """All chi vectors (over :meth:`edges_of` order) for which
        ``draw_fan(S, D, chi, C)`` holds, each with the successor that proves
        it (None at the base)."""
        hit = self.profiles.get(key)
        if hit is not None:
            return hit
        self._tick()
        xs, ys, comps = key
        cross = self.window_crossings(xs, ys)
        edges = self.edges_of(xs)
        exact = [len(cross[e]) for e in edges]
        out: dict[tuple[int, ...], Optional[tuple[WindowKey, tuple[int, ...]]]] = {}
        if not comps:
            out[tuple(exact)] = None
        else:
            v_star = xs[-1]
            at_v = [e[0] == v_star for e in edges]
            lost = [self._lost(cross, e, v_star) for e in edges]
            for key2 in self.successor_keys(key):
                sub = self.profile(key2)
                if not sub:
                    continue
                index2 = {e: i for i, e in enumerate(self.edges_of(key2[0]))}
                where = [index2.get(e) for e in edges]
                for chi2 in sub:
                    chi = tuple(
                        exact[i] if at_v[i] else chi2[where[i]] + lost[i] for i in range(len(edges))
                    )
                    if chi not in out and max(chi, default=0) <= self.k:
                        out[chi] = (key2, chi2)
        self.profiles[key] = out
        return out

    def decide(self) -> SearchResult:
        try:
            for key in self.final_keys():
                prof = self.profile(key)
                if prof:
                    chi = min(prof)
                    chain = [key]
                    while prof[chi] is not None:
                        key, chi = prof[chi]
                        chain.append(key)
                        prof = self.profiles[key]
                    return SearchResult(Outcome.YES, self._compose_chain(chain), self.states)
        except _OutOfBudget:
            return SearchResult(Outcome.BUDGET_EXCEEDED, None, self.states)
        return SearchResult(Outcome.NO, None, self.states)

    # -- certificates ----------------------------------------------------------

    def _compose_chain(self, chain: list[WindowKey]) -> TwoLayerDrawing:
        """Fold ``D_L = D_L' ∘ D`` from the base state up to the final one."""
        window = [self.make_state(key, {}).drawing for key in chain]
        acc = window[-1]
        for key, d in zip(reversed(chain[:-1]), reversed(window[:-1])):
            acc = compose(acc, d)
            xs = key[0]
            cross = crossing_map(acc)
            for e in acc.host.incident_edges(xs[-1]):
                if any(f[0] not in xs for f in cross[e]):
                    raise DpInvariantError(f"edge {e} at v* crosses an edge outside its window")
        if acc.vertices != frozenset(self.g.vertices):
            raise DpInvariantError("reconstructed drawing does not cover the graph")
        full = TwoLayerDrawing(acc.x_order, acc.y_order, self.g)
        report = verify_drawing(full, self.k)
        if not (report.fan_planar and report.k_planar):
            raise DpInvariantError("reconstructed drawing fails verification")
        return full


def check_dp_preconditions(g: BipartiteGraph, k: int) -> None:
    if len(g) == 0 or not g.is_connected():
        raise ValueError("decide_dp needs a connected graph")
    if any(g.degree(v) == 0 for v in g.vertices):
        raise ValueError("decide_dp needs a graph without isolated vertices")
    if g.max_degree() > 2 * k + 2:
        raise ValueError(f"decide_dp needs maximum degree at most 2k+2 = {2 * k + 2}")


def decide_dp(g: BipartiteGraph, k: int, budget: Optional[SearchBudget] = None) -> SearchResult:
    """Fan-planar k-planar 2-layer drawing of a connected graph by the window
    recurrence. Graphs with at most ``2k`` X-vertices go to the brute-force
    search. ``nodes`` in the result counts evaluated window states."""
    check_dp_preconditions(g, k)
    if len(g.x_vertices) <= 2 * k:
        return decide_bruteforce(g, k, budget)
    return DrawFanDP(g, k, budget).decide()


# -- pipeline ----------------------------------------------------------------


class Method(str, Enum):
    EARLY_REJECT = "EARLY_REJECT"
    DP = "DP"
    BRUTE_FORCE = "BRUTE_FORCE"
    TRIVIAL = "TRIVIAL"


@dataclass(frozen=True)
class Decision:
    answer: Outcome
    method: Method
    reason: str
    certificate: Optional[TwoLayerDrawing] = None
    reduced_vertices: int = 0
    reduced_edges: int = 0
    k_used: Optional[int] = None
    stats: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0


def _is_star(h: BipartiteGraph) -> bool:
    return min(len(h.x_vertices), len(h.y_vertices)) <= 1


def decide(
    g: BipartiteGraph,
    *,
    method: str = "auto",
    k: Optional[int] = None,
    bf_threshold: int = 14,
    budget: Optional[SearchBudget] = None,
    dp_budget: Optional[SearchBudget] = None,
    reduce_first: bool = False,
) -> Decision:
    """Does ``g`` admit a 2-layer fan-planar drawing?

    ``method`` is ``auto``, ``dp`` or ``bf``. ``bf`` searches the input graph
    directly unless ``reduce_first`` is set; the other two always reduce.
    Components of the reduced graph are decided separately and their drawings
    placed side by side. ``k`` overrides the per-component crossing bound
    (default: the component's maximum degree); under ``auto``/``dp`` it must
    not be smaller than that degree. ``budget`` bounds brute-force search
    nodes, ``dp_budget`` bounds window states. Raises :class:`BudgetExceeded`.
    """
    if method not in ("auto", "dp", "bf"):
        raise ValueError(f"unknown method {method!r}")
    start = time.perf_counter()
    stats = {"components": 0, "nodes": 0, "states": 0}

    def done(answer, how, reason, cert=None, reduced=g, k_used=None) -> Decision:
        return Decision(
            answer, how, reason, cert, len(reduced), len(reduced.edges), k_used, dict(stats),
            (time.perf_counter() - start) * 1000,
        )

    if method == "bf" and not reduce_first:
        res = decide_bruteforce(g, k, budget)
        stats["nodes"] = res.nodes
        if res.outcome is Outcome.BUDGET_EXCEEDED:
            raise BudgetExceeded(Method.BRUTE_FORCE, stats)
        reason = "fan-planar drawing found" if res.drawing else "no pair of orders is fan-planar"
        return done(res.outcome, Method.BRUTE_FORCE, reason, res.drawing, g, k)

    reduced, trace = apply_reductions(g)
    rejected = early_reject(reduced)
    if rejected is not None:
        return done(Outcome.NO, Method.EARLY_REJECT, rejected.describe(), reduced=reduced)

    parts: list[TwoLayerDrawing] = []
    used: list[Method] = []
    k_used: Optional[int] = None
    for comp in reduced.connected_components():
        h = reduced.induced(comp)
        stats["components"] += 1
        delta = h.max_degree()
        if delta > MAX_REDUCED_DEGREE:
            return done(Outcome.NO, Method.EARLY_REJECT, f"{RejectKind.DEGREE_GATE.value}: degree {delta}", reduced=reduced)
        if _is_star(h):
            parts.append(TwoLayerDrawing(tuple(sorted(h.x_vertices)), tuple(sorted(h.y_vertices)), h))
            used.append(Method.TRIVIAL)
            continue
        kk = delta if k is None else k
        if kk < delta and method != "bf":
            raise ValueError(f"k={kk} is below the maximum degree {delta} of a reduced component")
        k_used = kk if k_used is None else max(k_used, kk)
        use_bf = method == "bf" or (
            method == "auto" and (len(h.x_vertices) <= 2 * kk or len(h) <= bf_threshold)
        )
        if use_bf:
            res = decide_bruteforce(h, kk, budget)
            stats["nodes"] += res.nodes
            how = Method.BRUTE_FORCE
        else:
            res = decide_dp(h, kk, dp_budget)
            how = Method.DP if len(h.x_vertices) > 2 * kk else Method.BRUTE_FORCE
            stats["states" if how is Method.DP else "nodes"] += res.nodes
        if res.outcome is Outcome.BUDGET_EXCEEDED:
            raise BudgetExceeded(how, stats)
        if res.outcome is Outcome.NO:
            return done(
                Outcome.NO, how, f"component containing {comp[0]} has no fan-planar drawing", reduced=reduced, k_used=k_used
            )
        parts.append(res.drawing)
        used.append(how)

    drawing = concatenate(parts, reduced)
    certificate = lift_drawing(trace, drawing)
    if not verify_drawing(certificate).fan_planar:
        raise DpInvariantError("certificate fails verification on the input graph")
    if not used or all(m is Method.TRIVIAL for m in used):
        how = Method.TRIVIAL
    elif Method.DP in used:
        how = Method.DP
    else:
        how = Method.BRUTE_FORCE
    return done(Outcome.YES, how, "fan-planar drawing found", certificate, reduced, k_used)
