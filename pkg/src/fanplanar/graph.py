"""Simple bipartite graphs with two fixed sides, plus the line-based file format."""

from __future__ import annotations

import re
from collections import deque
from typing import Iterable, Optional

Vertex = str
Edge = tuple[str, str]  # (x, y) with x on side X and y on side Y

_NAME = re.compile(r"[A-Za-z0-9_]+\Z")


class GraphParseError(ValueError):
    def __init__(self, lineno: int, message: str) -> None:
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class BipartiteGraph:
    """An immutable simple bipartite graph ``G = (X ∪ Y, E)``.

    Vertex ids are opaque strings. ``x_vertices`` and ``y_vertices`` keep the
    declaration order; every set-valued query returns ids in lexicographic
    order. Equality ignores declaration order.

    Induced subgraphs remember the graph they were cut from in ``root`` so
    drawings of different subgraphs can be checked for a common parent.
    """

    __slots__ = ("x_vertices", "y_vertices", "edges", "_adj", "_x", "root")

    def __init__(
        self,
        x_vertices: Iterable[Vertex],
        y_vertices: Iterable[Vertex],
        edges: Iterable[Edge],
        *,
        root: Optional["BipartiteGraph"] = None,
    ) -> None:
        xs = tuple(x_vertices)
        ys = tuple(y_vertices)
        xset, yset = frozenset(xs), frozenset(ys)
        if len(xset) != len(xs) or len(yset) != len(ys):
            raise ValueError("duplicate vertex id")
        if xset & yset:
            raise ValueError(f"vertex on both sides: {sorted(xset & yset)[0]}")
        adj: dict[Vertex, list[Vertex]] = {v: [] for v in xs + ys}
        seen: set[Edge] = set()
        for x, y in edges:
            if x not in xset and y in xset and x in yset:
                x, y = y, x
            if x not in xset or y not in yset:
                raise ValueError(f"edge {x}-{y} does not join X to Y")
            if (x, y) in seen:
                raise ValueError(f"parallel edge {x}-{y}")
            seen.add((x, y))
            adj[x].append(y)
            adj[y].append(x)
        self.x_vertices = xs
        self.y_vertices = ys
        self.edges = frozenset(seen)
        self._adj = {v: tuple(sorted(ns)) for v, ns in adj.items()}
        self._x = xset
        self.root = self if root is None else root.root

    # -- basic queries -----------------------------------------------------

    @property
    def vertices(self) -> tuple[Vertex, ...]:
        return self.x_vertices + self.y_vertices

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (
            self._x == other._x
            and frozenset(self.y_vertices) == frozenset(other.y_vertices)
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self._x, frozenset(self.y_vertices), self.edges))

    def __repr__(self) -> str:
        return f"BipartiteGraph(|X|={len(self.x_vertices)}, |Y|={len(self.y_vertices)}, |E|={len(self.edges)})"

    def is_x(self, v: Vertex) -> bool:
        self._check(v)
        return v in self._x

    def neighbors(self, v: Vertex) -> tuple[Vertex, ...]:
        self._check(v)
        return self._adj[v]

    def degree(self, v: Vertex) -> int:
        self._check(v)
        return len(self._adj[v])

    def max_degree(self) -> int:
        return max((len(ns) for ns in self._adj.values()), default=0)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def incident_edges(self, v: Vertex) -> list[Edge]:
        if self.is_x(v):
            return [(v, y) for y in self._adj[v]]
        return [(x, v) for x in self._adj[v]]

    def _check(self, v: Vertex) -> None:
        if v not in self._adj:
            raise KeyError(f"unknown vertex {v!r}")

    # -- set-level queries -------------------------------------------------

    def open_neighborhood(self, u: Iterable[Vertex]) -> list[Vertex]:
        """N(U): vertices adjacent to some member of U (members of U included
        only when adjacent to another member, which never happens across an
        independent side)."""
        out: set[Vertex] = set()
        for v in u:
            self._check(v)
            out.update(self._adj[v])
        return sorted(out)

    def closed_neighborhood(self, u: Iterable[Vertex]) -> list[Vertex]:
        u = list(u)
        return sorted(set(u) | set(self.open_neighborhood(u)))

    def boundary_edges(self, u: Iterable[Vertex]) -> list[Edge]:
        """δ(U): edges with exactly one endpoint in U."""
        uset = set(u)
        for v in uset:
            self._check(v)
        return sorted(e for e in self.edges if (e[0] in uset) != (e[1] in uset))

    def connected_components(self) -> list[list[Vertex]]:
        return self.components_after_removal(())

    def components_after_removal(self, removed: Iterable[Vertex]) -> list[list[Vertex]]:
        """Components of G - removed, each sorted, listed by smallest member."""
        gone = set(removed)
        for v in gone:
            self._check(v)
        seen: set[Vertex] = set()
        comps = []
        for start in sorted(self._adj):
            if start in gone or start in seen:
                continue
            seen.add(start)
            comp = [start]
            queue = deque([start])
            while queue:
                v = queue.popleft()
                for w in self._adj[v]:
                    if w not in gone and w not in seen:
                        seen.add(w)
                        comp.append(w)
                        queue.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.connected_components()) <= 1

    # -- derived graphs ----------------------------------------------------

    def induced(self, keep: Iterable[Vertex]) -> "BipartiteGraph":
        keep = set(keep)
        for v in keep:
            self._check(v)
        return BipartiteGraph(
            [x for x in self.x_vertices if x in keep],
            [y for y in self.y_vertices if y in keep],
            [e for e in self.edges if e[0] in keep and e[1] in keep],
            root=self,
        )

    def remove_vertices(self, removed: Iterable[Vertex]) -> "BipartiteGraph":
        gone = set(removed)
        return self.induced(v for v in self._adj if v not in gone)

    def serialize(self) -> str:
        return serialize_graph(self)


def parse_graph(text: str) -> BipartiteGraph:
    """Parse the ``x``/``y``/``e`` line format. Declarations must precede use."""
    xs: list[Vertex] = []
    ys: list[Vertex] = []
    side: dict[Vertex, str] = {}
    edges: list[Edge] = []
    seen_edges: set[Edge] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        tag = parts[0]
        if tag in ("x", "y"):
            if len(parts) != 2:
                raise GraphParseError(lineno, f"expected '{tag} <name>'")
            name = parts[1]
            if not _NAME.match(name):
                raise GraphParseError(lineno, f"bad vertex name {name!r}")
            if name in side:
                if side[name] != tag:
                    raise GraphParseError(lineno, f"vertex {name!r} declared on both sides")
                raise GraphParseError(lineno, f"duplicate vertex {name!r}")
            side[name] = tag
            (xs if tag == "x" else ys).append(name)
        elif tag == "e":
            if len(parts) != 3:
                raise GraphParseError(lineno, "expected 'e <xname> <yname>'")
            x, y = parts[1], parts[2]
            for name in (x, y):
                if name not in side:
                    raise GraphParseError(lineno, f"unknown vertex {name!r}")
            if side[x] != "x" or side[y] != "y":
                raise GraphParseError(lineno, f"edge {x} {y} must list an X vertex then a Y vertex")
            if (x, y) in seen_edges:
                raise GraphParseError(lineno, f"duplicate edge {x} {y}")
            seen_edges.add((x, y))
            edges.append((x, y))
        else:
            raise GraphParseError(lineno, f"unknown record type {tag!r}")
    return BipartiteGraph(xs, ys, edges)


def serialize_graph(g: BipartiteGraph) -> str:
    lines = [f"x {x}" for x in sorted(g.x_vertices)]
    lines += [f"y {y}" for y in sorted(g.y_vertices)]
    lines += [f"e {x} {y}" for x, y in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def complete_bipartite(a: int, b: int, xprefix: str = "x", yprefix: str = "y") -> BipartiteGraph:
    xs = [f"{xprefix}{i}" for i in range(a)]
    ys = [f"{yprefix}{j}" for j in range(b)]
    return BipartiteGraph(xs, ys, [(x, y) for x in xs for y in ys])


def path_graph(n: int) -> BipartiteGraph:
    """Path on n vertices v00 - v01 - ...; even positions form side X."""
    names = [f"v{i:02d}" for i in range(n)]
    return BipartiteGraph(
        names[0::2],
        names[1::2],
        [(names[i], names[i + 1]) if i % 2 == 0 else (names[i + 1], names[i]) for i in range(n - 1)],
    )


def cycle_graph(n: int) -> BipartiteGraph:
    if n < 4 or n % 2:
        raise ValueError("bipartite cycles need an even length of at least 4")
    p = path_graph(n)
    return BipartiteGraph(p.x_vertices, p.y_vertices, list(p.edges) + [(f"v{0:02d}", f"v{n - 1:02d}")])
