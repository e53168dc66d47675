"""Finite multi-digraphs, linkage problems and the line-oriented text format.

Vertices are strings.  Edges carry their own string ids so that parallel
edges stay distinguishable and ids survive subgraph extraction.  Iteration
order is the insertion order and is what every deterministic tie-break in
the package refers to.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from gammoids.errors import GraphFormatError

MODES = ("directed-edge", "directed-vertex", "undirected-edge", "undirected-vertex")


class Edge(NamedTuple):
    id: str
    tail: str
    head: str


class Digraph:
    """Immutable multi-digraph with stable vertex and edge order."""

    __slots__ = ("_vertices", "_edges", "_vindex", "_eindex", "_out", "_in")

    def __init__(self, vertices: Iterable[str], edges: Iterable[Edge | tuple] = ()):
        self._vertices = tuple(vertices)
        self._vindex = {v: i for i, v in enumerate(self._vertices)}
        if len(self._vindex) != len(self._vertices):
            raise ValueError("duplicate vertex id")
        self._edges = tuple(Edge(*e) for e in edges)
        self._eindex = {}
        self._out: dict[str, list[Edge]] = {v: [] for v in self._vertices}
        self._in: dict[str, list[Edge]] = {v: [] for v in self._vertices}
        for i, e in enumerate(self._edges):
            if e.id in self._eindex:
                raise ValueError(f"duplicate edge id {e.id}")
            if e.tail not in self._vindex or e.head not in self._vindex:
                raise ValueError(f"edge {e.id} references an unknown vertex")
            self._eindex[e.id] = i
            self._out[e.tail].append(e)
            self._in[e.head].append(e)

    @property
    def vertices(self) -> tuple[str, ...]:
        return self._vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    def __contains__(self, v) -> bool:
        return v in self._vindex

    def __len__(self) -> int:
        return len(self._vertices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self._vertices == other._vertices and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._vertices, self._edges))

    def __repr__(self) -> str:
        return f"Digraph({len(self._vertices)} vertices, {len(self._edges)} edges)"

    def edge(self, eid: str) -> Edge:
        return self._edges[self._eindex[eid]]

    def has_edge(self, eid: str) -> bool:
        return eid in self._eindex

    def vertex_index(self, v: str) -> int:
        return self._vindex[v]

    def edge_index(self, eid: str) -> int:
        return self._eindex[eid]

    def out_edges(self, v: str) -> list[Edge]:
        return self._out[v]

    def in_edges(self, v: str) -> list[Edge]:
        return self._in[v]

    def sort_vertices(self, vs: Iterable[str]) -> list[str]:
        return sorted(vs, key=self._vindex.__getitem__)

    def sort_edges(self, es: Iterable[str]) -> list[str]:
        return sorted(es, key=self._eindex.__getitem__)

    def subgraph(self, keep: Iterable[str]) -> "Digraph":
        """Induced subgraph; ids and relative order are preserved."""
        keep = set(keep)
        return Digraph(
            [v for v in self._vertices if v in keep],
            [e for e in self._edges if e.tail in keep and e.head in keep],
        )

    def without_edges(self, drop: Iterable[str]) -> "Digraph":
        drop = set(drop)
        return Digraph(self._vertices, [e for e in self._edges if e.id not in drop])

    def is_subgraph_of(self, other: "Digraph") -> bool:
        if not set(self._vertices) <= set(other._vertices):
            return False
        return all(other.has_edge(e.id) and other.edge(e.id) == e for e in self._edges)

    def reaches(self, sources: Iterable[str], undirected: bool = False) -> set[str]:
        """Vertices reachable from `sources` (forward, or ignoring direction)."""
        seen = set(sources)
        stack = list(seen)
        while stack:
            u = stack.pop()
            nbrs = [e.head for e in self._out[u]]
            if undirected:
                nbrs += [e.tail for e in self._in[u]]
            for w in nbrs:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    def co_reaches(self, targets: Iterable[str], avoid_edges=frozenset()) -> set[str]:
        """Vertices with a directed path into `targets` that uses no edge of `avoid_edges`."""
        seen = set(targets)
        stack = list(seen)
        while stack:
            u = stack.pop()
            for e in self._in[u]:
                if e.id in avoid_edges:
                    continue
                if e.tail not in seen:
                    seen.add(e.tail)
                    stack.append(e.tail)
        return seen


@dataclass(frozen=True)
class LinkageProblem:
    """A digraph with sources and targets.

    `sinks` is the target set B; every sink has unit capacity in the vertex
    modes.  `b` is an optional single sink that absorbs any number of
    vertex-disjoint paths.  The targets of the problem are B together with b.
    """

    graph: Digraph
    sources: tuple[str, ...] = ()
    sinks: tuple[str, ...] = ()
    b: str | None = None
    mode: str = "directed-edge"
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "sources", tuple(dict.fromkeys(self.sources)))
        object.__setattr__(self, "sinks", tuple(dict.fromkeys(self.sinks)))
        for v in (*self.sources, *self.sinks, *((self.b,) if self.b is not None else ())):
            if v not in self.graph:
                raise ValueError(f"unknown vertex {v}")

    @property
    def targets(self) -> tuple[str, ...]:
        if self.b is None or self.b in self.sinks:
            return self.sinks
        return (*self.sinks, self.b)

    def with_sources(self, sources: Iterable[str]) -> "LinkageProblem":
        return LinkageProblem(self.graph, tuple(sources), self.sinks, self.b, self.mode)

    def with_mode(self, mode: str) -> "LinkageProblem":
        return LinkageProblem(self.graph, self.sources, self.sinks, self.b, mode)


_ID_DIRECTIVES = {"node", "edge", "B", "I", "b", "mode"}


def parse_graph(text: str) -> LinkageProblem:
    vertices: list[str] = []
    declared: set[str] = set()
    edges: list[Edge] = []
    sinks: list[str] = []
    sources: list[str] = []
    b = None
    mode = "directed-edge"

    def need(v: str, lineno: int) -> str:
        if v not in declared:
            raise GraphFormatError(f"undeclared vertex {v}", lineno)
        return v

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        word, *args = line.split()
        if word not in _ID_DIRECTIVES:
            raise GraphFormatError(f"unknown directive {word!r}", lineno)
        if word == "node":
            if len(args) != 1:
                raise GraphFormatError("node takes exactly one id", lineno)
            if args[0] in declared:
                raise GraphFormatError(f"duplicate vertex {args[0]}", lineno)
            declared.add(args[0])
            vertices.append(args[0])
        elif word == "edge":
            if len(args) not in (2, 3):
                raise GraphFormatError("edge takes tail, head and an optional multiplicity", lineno)
            tail, head = need(args[0], lineno), need(args[1], lineno)
            mult = 1
            if len(args) == 3:
                try:
                    mult = int(args[2])
                except ValueError:
                    raise GraphFormatError(f"bad multiplicity {args[2]!r}", lineno) from None
                if mult < 1:
                    raise GraphFormatError("multiplicity must be positive", lineno)
            for _ in range(mult):
                edges.append(Edge(f"e{len(edges)}", tail, head))
        elif word == "B":
            sinks.extend(need(v, lineno) for v in args)
        elif word == "I":
            sources.extend(need(v, lineno) for v in args)
        elif word == "b":
            if len(args) != 1:
                raise GraphFormatError("b takes exactly one id", lineno)
            if b is not None:
                raise GraphFormatError("duplicate b", lineno)
            b = need(args[0], lineno)
        else:
            if len(args) != 1 or args[0] not in MODES:
                raise GraphFormatError(f"mode must be one of {', '.join(MODES)}", lineno)
            mode = args[0]
    return LinkageProblem(Digraph(vertices, edges), tuple(sources), tuple(sinks), b, mode)


def format_graph(problem: LinkageProblem) -> str:
    """Serialize a problem; parallel edges are written one per line so ids round-trip."""
    g = problem.graph
    lines = [f"mode {problem.mode}"]
    lines += [f"node {v}" for v in g.vertices]
    lines += [f"edge {e.tail} {e.head}" for e in g.edges]
    if problem.sinks:
        lines.append("B " + " ".join(problem.sinks))
    if problem.sources:
        lines.append("I " + " ".join(problem.sources))
    if problem.b is not None:
        lines.append(f"b {problem.b}")
    return "\n".join(lines) + "\n"
