"""Countable digraphs presented by nested finite truncations.

A presentation never materializes the infinite graph.  ``truncate(n)``
returns the n-th finite piece; pieces are nested with identical ids on
shared vertices and edges.  A vertex is *settled* in piece n when its
out-edges there are already all of its out-edges, which for the builtin
families is detected by one step of lookahead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator

from gammoids.graph import Digraph, Edge, LinkageProblem
from gammoids.menger import sink_reduce

FAMILIES = ("ac", "grid3Z", "fan", "comb_steal", "multifan")


@dataclass(frozen=True)
class Piece:
    graph: Digraph
    sources: tuple[str, ...]
    sinks: tuple[str, ...]
    b: str | None = None


def _edge(tail: str, head: str) -> Edge:
    return Edge(f"{tail}->{head}", tail, head)


@lru_cache(maxsize=256)
def _ac(k: int) -> Piece:
    verts, edges = [], []
    for j in range(k + 1):
        verts += [f"b{j}", f"v1_{j}", f"v2_{j}"]
    for j in range(k + 1):
        edges.append(_edge(f"v1_{j}", f"b{j}"))
        if j < k:
            edges.append(_edge(f"v2_{j}", f"v1_{j}"))
            edges.append(_edge(f"v2_{j}", f"v1_{j + 1}"))
    sources = ("v1_0", *(f"v2_{j}" for j in range(k + 1)))
    return Piece(Digraph(verts, edges), sources, tuple(f"b{j}" for j in range(k + 1)))


def grid_vertex(x: int, y: int) -> str:
    return f"{x}@{y}"


@lru_cache(maxsize=256)
def _grid3Z(k: int) -> Piece:
    ys = range(-k, k + 1)
    verts = [grid_vertex(x, y) for y in ys for x in (1, 2, 3)]
    edges = []
    for y in ys:
        for x in (1, 2, 3):
            if y < k:
                edges.append(_edge(grid_vertex(x, y), grid_vertex(x, y + 1)))
            if x < 3:
                edges.append(_edge(grid_vertex(x, y), grid_vertex(x + 1, y)))
    sources = tuple(grid_vertex(1, y) for y in ys)
    return Piece(Digraph(verts, edges), sources, tuple(grid_vertex(3, y) for y in ys))


@lru_cache(maxsize=256)
def _fan(k: int) -> Piece:
    verts = ["u", "b"] + [f"m{i}" for i in range(1, k + 1)]
    edges = []
    for i in range(1, k + 1):
        edges += [_edge("u", f"m{i}"), _edge(f"m{i}", "b")]
    return Piece(Digraph(verts, edges), ("u",), ("b",), "b")


@lru_cache(maxsize=256)
def _comb_steal(k: int) -> Piece:
    verts = ["b", "r0"]
    edges = []
    for i in range(1, k + 1):
        verts += [f"r{i}", f"s{i}"]
        edges += [_edge(f"r{i - 1}", f"r{i}"), _edge(f"s{i}", f"r{i}"), _edge(f"r{i}", "b")]
    sources = ("r0", *(f"s{i}" for i in range(1, k + 1)))
    return Piece(Digraph(verts, edges), sources, ("b",), "b")


@lru_cache(maxsize=256)
def _multifan(k: int) -> Piece:
    """k disjoint fans of width k into a common sink."""
    verts = ["b"]
    edges = []
    for j in range(1, k + 1):
        verts.append(f"u{j}")
    for j in range(1, k + 1):
        for i in range(1, k + 1):
            verts.append(f"m{j}_{i}")
    for j in range(1, k + 1):
        for i in range(1, k + 1):
            edges += [_edge(f"u{j}", f"m{j}_{i}"), _edge(f"m{j}_{i}", "b")]
    return Piece(Digraph(verts, edges), tuple(f"u{j}" for j in range(1, k + 1)), ("b",), "b")


_BUILDERS: dict[str, Callable[[int], Piece]] = {
    "ac": _ac,
    "grid3Z": _grid3Z,
    "fan": _fan,
    "comb_steal": _comb_steal,
    "multifan": _multifan,
}


@dataclass(frozen=True)
class GraphPresentation:
    """A countable digraph given by its truncations.

    `depth` is the nominal size the presentation was requested with; it
    selects the finite graph used when a single graph is needed.
    """

    family: str
    depth: int
    builder: Callable[[int], Piece] = field(repr=False, compare=False)
    finite: bool = False

    def piece(self, n: int) -> Piece:
        if n < 1:
            raise ValueError("truncation index must be positive")
        return self.builder(n)

    def truncate(self, n: int) -> Digraph:
        return self.piece(n).graph

    def problem(self, n: int | None = None, mode: str = "directed-edge") -> LinkageProblem:
        pc = self.piece(self.depth if n is None else n)
        return LinkageProblem(pc.graph, pc.sources, pc.sinks, pc.b, mode)

    def graph(self) -> Digraph:
        return self.truncate(self.depth)

    def settled(self, n: int) -> frozenset[str]:
        g = self.truncate(n)
        if self.finite:
            return frozenset(g.vertices)
        nxt = self.truncate(n + 1)
        return frozenset(v for v in g.vertices if len(g.out_edges(v)) == len(nxt.out_edges(v)))

    def b(self) -> str | None:
        return self.piece(1).b

    def vertex_order(self, upto: int) -> Iterator[str]:
        """Vertices in order of first appearance, up to truncation `upto`."""
        seen: set[str] = set()
        for n in range(1, upto + 1):
            for v in self.truncate(n).vertices:
                if v not in seen:
                    seen.add(v)
                    yield v


def generate_family(name: str, depth: int) -> GraphPresentation:
    if name not in _BUILDERS:
        raise ValueError(f"unknown family {name!r}; expected one of {', '.join(FAMILIES)}")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    return GraphPresentation(name, depth, _BUILDERS[name])


def truncate(p: GraphPresentation, n: int) -> Digraph:
    return p.truncate(n)


def finite_presentation(problem: LinkageProblem, name: str = "finite") -> GraphPresentation:
    """A finite graph viewed as a presentation whose truncations never change."""
    pc = Piece(problem.graph, problem.sources, problem.sinks, problem.b)
    return GraphPresentation(name, 1, lambda n: pc, finite=True)


def with_single_sink(p: GraphPresentation, capacity: int = 1, name: str = "b") -> GraphPresentation:
    """Attach a fresh sink fed by `capacity` parallel edges from every B-vertex."""
    if p.piece(1).b is not None and p.piece(1).sinks == (p.piece(1).b,):
        return p

    @lru_cache(maxsize=256)
    def build(n: int) -> Piece:
        pc = p.piece(n)
        g, b = sink_reduce(pc.graph, pc.sinks, capacity=capacity, name=name)
        return Piece(g, pc.sources, (b,), b)

    return GraphPresentation(f"{p.family}+sink", p.depth, build, finite=p.finite)
