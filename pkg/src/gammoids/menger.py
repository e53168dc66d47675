"""Maximum linkages and minimum separators in the four Menger versions.

All four versions are solved by one unit-capacity flow network:

* edge modes put capacity one on every edge (an undirected edge is one arc
  pair with capacity one in each direction, so it is used at most once);
* vertex modes split every vertex into an in-node and an out-node joined by
  a capacity-one arc, and edges become uncapacitated arcs.

Sources always enter through capacity-one arcs, so each source starts at
most one path.  A source that is also a target is linked by a trivial path.
The single sink ``b`` of a problem is never capacitated.

The reductions between versions are exposed separately so they can be
checked against each other.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from gammoids.flow import INF, FlowNetwork
from gammoids.graph import Digraph, Edge, LinkageProblem


@dataclass(frozen=True)
class Path:
    vertices: tuple[str, ...]
    edges: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.vertices) != len(self.edges) + 1:
            raise ValueError("a path has exactly one more vertex than edges")

    @property
    def start(self) -> str:
        return self.vertices[0]

    @property
    def end(self) -> str:
        return self.vertices[-1]

    def __len__(self) -> int:
        return len(self.edges)

    def is_prefix_of(self, other: "Path") -> bool:
        k = len(self.edges)
        return self.vertices == other.vertices[: k + 1] and self.edges == other.edges[:k]

    def prefix(self, k: int) -> "Path":
        return Path(self.vertices[: k + 1], self.edges[:k])


@dataclass(frozen=True)
class Separator:
    """Edges and vertices whose removal separates the sources from the targets.

    In edge modes the vertex part only ever holds sources that are cut off
    at their own start (one path per source is the only way they count).
    """

    mode: str
    edges: frozenset[str] = frozenset()
    vertices: frozenset[str] = frozenset()

    def __len__(self) -> int:
        return len(self.edges) + len(self.vertices)


@dataclass(frozen=True)
class Linkage:
    mode: str
    paths: dict[str, Path] = field(default_factory=dict)

    @property
    def value(self) -> int:
        return len(self.paths)

    def __len__(self) -> int:
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths.values())

    def vertex_set(self) -> set[str]:
        return {v for p in self.paths.values() for v in p.vertices}

    def edge_set(self) -> set[str]:
        return {e for p in self.paths.values() for e in p.edges}

    def path_containing(self, eid: str) -> list[Path]:
        return [p for p in self.paths.values() if eid in p.edges]


def _is_split(mode: str) -> bool:
    return mode.endswith("vertex")


def _is_undirected(mode: str) -> bool:
    return mode.startswith("undirected")


class _Network:
    """Flow network for one problem plus the maps back to graph elements."""

    def __init__(self, problem: LinkageProblem, source_cap: int = 1):
        g = problem.graph
        self.problem = problem
        split = _is_split(problem.mode)
        undirected = _is_undirected(problem.mode)
        net = FlowNetwork(2)
        self.S, self.T = 0, 1
        self.node_in: dict[str, int] = {}
        self.node_out: dict[str, int] = {}
        self.vertex_of: dict[int, str] = {}
        sinks = set(problem.sinks)
        for v in g.vertices:
            i = net.add_node()
            self.vertex_of[i] = v
            if split:
                o = net.add_node()
                self.vertex_of[o] = v
                if v == problem.b and v not in sinks:
                    net.add_arc(i, o, INF)
                else:
                    net.add_arc(i, o, 1, ("vertex", v))
            else:
                o = i
            self.node_in[v], self.node_out[v] = i, o
        for e in g.edges:
            if e.tail == e.head:
                continue
            tail_out, head_in = self.node_out[e.tail], self.node_in[e.head]
            if split:
                net.add_arc(tail_out, head_in, INF, ("edge", e.id))
                if undirected:
                    net.add_arc(self.node_out[e.head], self.node_in[e.tail], INF, ("edge", e.id))
            else:
                net.add_arc(tail_out, head_in, 1, ("edge", e.id), rev_cap=1 if undirected else 0)
        for a in problem.sources:
            net.add_arc(self.S, self.node_in[a], source_cap, ("source", a))
        for t in problem.targets:
            node = self.node_out[t] if t in sinks else self.node_in[t]
            net.add_arc(node, self.T, INF, ("target", t))
        self.net = net
        limit = len(problem.sources) if source_cap == 1 else INF
        self.value = net.max_flow(self.S, self.T, limit=limit)

    def paths(self) -> dict[str, Path]:
        net = self.net
        targets = set(self.problem.targets)
        found: dict[str, Path] = {}
        for walk in net.decompose(self.S, self.T):
            source = net.tag[walk[0]][1]
            verts = [source]
            edges: list[str] = []
            where = {source: 0}
            for a in walk[1:]:
                if source in targets or verts[-1] in targets:
                    break
                tag = net.tag[a]
                if tag is None or tag[0] != "edge":
                    continue
                w = self.vertex_of[net.head[a]]
                if w in where:
                    k = where[w]
                    for x in verts[k + 1:]:
                        del where[x]
                    del verts[k + 1:]
                    del edges[k:]
                    continue
                where[w] = len(verts)
                verts.append(w)
                edges.append(tag[1])
            found[source] = Path(tuple(verts), tuple(edges))
        order = {a: i for i, a in enumerate(self.problem.sources)}
        return dict(sorted(found.items(), key=lambda kv: order[kv[0]]))

    def source_side(self) -> set[int]:
        return self.net.residual_reach(self.S)

    def separator(self) -> Separator:
        edges, vertices = set(), set()
        for a in self.net.cut_arcs(self.source_side()):
            kind, item = self.net.tag[a]
            if kind == "edge":
                edges.add(item)
            elif kind in ("source", "vertex"):
                vertices.add(item)
            else:  # pragma: no cover - target arcs are uncapacitated
                raise RuntimeError("target arc in a finite cut")
        return Separator(self.problem.mode, frozenset(edges), frozenset(vertices))

    def source_side_vertices(self) -> set[str]:
        """Graph vertices whose out-node lies on the source side of the minimal min cut."""
        side = self.source_side()
        return {v for v, o in self.node_out.items() if o in side}


def max_linkage(problem: LinkageProblem) -> tuple[Linkage, Separator]:
    """A maximum linkage and a minimum separator of equal size.

    The separator is read off the minimal source side of the final residual
    network, which makes it canonical for a given graph order.
    """
    network = _Network(problem)
    linkage = Linkage(problem.mode, network.paths())
    separator = network.separator()
    assert len(linkage) == len(separator) == network.value
    return linkage, separator


def linkage_value(problem: LinkageProblem) -> int:
    return _Network(problem).value


def is_linkable(problem: LinkageProblem) -> bool:
    return _Network(problem).value == len(problem.sources)


def disjoint_path_count(problem: LinkageProblem) -> int:
    """Most disjoint source-target paths when one source may start several.

    In the edge modes this is the source-to-target edge connectivity and can
    exceed the number of sources; in the vertex modes a source is still used
    at most once, so it equals the linkage value.
    """
    return _Network(problem, source_cap=INF).value


def min_cut_side(problem: LinkageProblem) -> tuple[int, set[str]]:
    """Flow value and the graph vertices on the minimal source side."""
    network = _Network(problem)
    return network.value, network.source_side_vertices()


# -- verification helpers ---------------------------------------------------


def check_linkage(problem: LinkageProblem, linkage: Linkage) -> None:
    """Raise AssertionError unless `linkage` is a valid linkage for `problem`."""
    g = problem.graph
    targets = set(problem.targets)
    undirected = _is_undirected(problem.mode)
    used_edges: set[str] = set()
    used_vertices: set[str] = set()
    for source, path in linkage.paths.items():
        assert source in problem.sources, f"{source} is not a source"
        assert path.start == source
        assert path.end in targets, f"path from {source} ends outside the targets"
        assert len(set(path.vertices)) == len(path.vertices), "path repeats a vertex"
        for i, eid in enumerate(path.edges):
            e = g.edge(eid)
            step = (path.vertices[i], path.vertices[i + 1])
            assert step == (e.tail, e.head) or (undirected and step == (e.head, e.tail)), (
                f"edge {eid} does not join {step}"
            )
        assert not used_edges & set(path.edges), "paths share an edge"
        used_edges |= set(path.edges)
        if _is_split(problem.mode):
            shared = used_vertices & set(path.vertices)
            if problem.b is not None and problem.b not in problem.sinks:
                shared.discard(problem.b)
            assert not shared, f"paths share vertices {sorted(shared)}"
            used_vertices |= set(path.vertices)


def separates(problem: LinkageProblem, separator: Separator) -> bool:
    """True if no source outside the separator reaches a target after removal."""
    g = problem.graph
    split = _is_split(problem.mode)
    undirected = _is_undirected(problem.mode)
    blocked = set(separator.vertices) if split else set()
    h = g.without_edges(separator.edges)
    if blocked:
        h = h.subgraph(v for v in g.vertices if v not in blocked)
    sources = [a for a in problem.sources if a not in separator.vertices and a in h]
    reach = h.reaches(sources, undirected=undirected)
    return not (reach & set(problem.targets))


# -- reductions between the versions ----------------------------------------


@dataclass(frozen=True)
class VertexSplit:
    """Directed-vertex problems on G as directed-edge problems on H."""

    original: Digraph
    graph: Digraph

    @staticmethod
    def v_in(v: str) -> str:
        return f"{v}:in"

    @staticmethod
    def v_out(v: str) -> str:
        return f"{v}:out"

    @staticmethod
    def split_edge(v: str) -> str:
        return f"{v}:split"

    def lift(self, problem: LinkageProblem) -> LinkageProblem:
        sinks = [self.v_out(t) for t in problem.sinks]
        if problem.b is not None and problem.b not in problem.sinks:
            sinks.append(self.v_in(problem.b))
        return LinkageProblem(
            self.graph, tuple(self.v_in(a) for a in problem.sources), tuple(sinks), None, "directed-edge"
        )

    def lower_path(self, path: Path) -> Path:
        verts = [path.vertices[0].rsplit(":", 1)[0]]
        edges = []
        for eid in path.edges:
            if eid.endswith(":split") and not self.original.has_edge(eid):
                continue
            e = self.original.edge(eid)
            edges.append(eid)
            verts.append(e.head)
        return Path(tuple(verts), tuple(edges))

    def lower_linkage(self, linkage: Linkage) -> Linkage:
        return Linkage(
            "directed-vertex",
            {a.rsplit(":", 1)[0]: self.lower_path(p) for a, p in linkage.paths.items()},
        )

    def lower_separator(self, separator: Separator) -> Separator:
        verts = {v.rsplit(":", 1)[0] for v in separator.vertices}
        for eid in separator.edges:
            if self.original.has_edge(eid):
                verts.add(self.original.edge(eid).tail)
            else:
                verts.add(eid.rsplit(":", 1)[0])
        return Separator("directed-vertex", frozenset(), frozenset(verts))


def reduce_vertex_to_edge(g: Digraph) -> VertexSplit:
    verts = []
    edges = []
    for v in g.vertices:
        verts += [VertexSplit.v_in(v), VertexSplit.v_out(v)]
        edges.append(Edge(VertexSplit.split_edge(v), VertexSplit.v_in(v), VertexSplit.v_out(v)))
    for e in g.edges:
        edges.append(Edge(e.id, VertexSplit.v_out(e.tail), VertexSplit.v_in(e.head)))
    return VertexSplit(g, Digraph(verts, edges))


@dataclass(frozen=True)
class Doubling:
    """An undirected graph as a digraph with two antiparallel edges per edge."""

    original: Digraph
    graph: Digraph
    pair: dict[str, str]

    def base(self, eid: str) -> str:
        return self.pair[eid]


def reduce_undirected(g: Digraph) -> Doubling:
    edges = []
    pair = {}
    for e in g.edges:
        fwd, back = f"{e.id}+", f"{e.id}-"
        edges += [Edge(fwd, e.tail, e.head), Edge(back, e.head, e.tail)]
        pair[fwd] = pair[back] = e.id
    return Doubling(g, Digraph(g.vertices, edges), pair)


@dataclass(frozen=True)
class LineGraph:
    """Edge-version problems on G as vertex-version problems on a line graph H.

    H has one core vertex per non-loop edge of G, one terminal per source and
    a single uncapacitated sink terminal.
    """

    original: Digraph
    problem: LinkageProblem
    core: dict[str, str]
    undirected: bool
    targets: frozenset[str]

    SINK = "sink:*"

    def lower_path(self, path: Path) -> Path:
        source = path.vertices[0].split(":", 1)[1]
        used = [self.core[v] for v in path.vertices[1:-1]]
        return _path_within(self.original, used, source, self.targets, self.undirected)

    def lower_linkage(self, linkage: Linkage) -> Linkage:
        mode = "undirected-edge" if self.undirected else "directed-edge"
        return Linkage(mode, {p.start.split(":", 1)[1]: self.lower_path(p) for p in linkage})

    def lower_separator(self, separator: Separator) -> Separator:
        edges = frozenset(self.core[v] for v in separator.vertices if v in self.core)
        verts = frozenset(v.split(":", 1)[1] for v in separator.vertices if v.startswith("src:"))
        return Separator(self.problem.mode.replace("vertex", "edge"), edges, verts)


def _path_within(g: Digraph, edge_ids: list[str], source: str, targets, undirected: bool) -> Path:
    """Shortest path from `source` to a target using only `edge_ids`."""
    if source in targets:
        return Path((source,))
    adj: dict[str, list[tuple[str, str]]] = {}
    for eid in edge_ids:
        e = g.edge(eid)
        adj.setdefault(e.tail, []).append((eid, e.head))
        if undirected:
            adj.setdefault(e.head, []).append((eid, e.tail))
    prev: dict[str, tuple[str, str] | None] = {source: None}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        if u in targets:
            verts, edges = [u], []
            while prev[u] is not None:
                eid, u = prev[u]
                edges.append(eid)
                verts.append(u)
            return Path(tuple(reversed(verts)), tuple(reversed(edges)))
        for eid, w in adj.get(u, ()):
            if w not in prev:
                prev[w] = (eid, u)
                queue.append(w)
    raise ValueError(f"edges do not connect {source} to a target")


def reduce_edge_to_vertex(
    g: Digraph, sources: Iterable[str], sinks: Iterable[str], undirected: bool = False
) -> LineGraph:
    sources = list(dict.fromkeys(sources))
    targets = frozenset(sinks)
    edges = [e for e in g.edges if e.tail != e.head]
    core = {f"edge:{e.id}": e.id for e in edges}
    verts = [f"src:{a}" for a in sources] + list(core) + [LineGraph.SINK]
    h_edges: list[Edge] = []

    def add(tail: str, head: str):
        h_edges.append(Edge(f"h{len(h_edges)}", tail, head))

    def ends(e: Edge) -> tuple[str, ...]:
        return (e.tail, e.head) if undirected else (e.tail,)

    def arrivals(e: Edge) -> tuple[str, ...]:
        return (e.tail, e.head) if undirected else (e.head,)

    for a in sources:
        for e in edges:
            if a in ends(e):
                add(f"src:{a}", f"edge:{e.id}")
        if a in targets:
            add(f"src:{a}", LineGraph.SINK)
    for i, e in enumerate(edges):
        later = edges[i + 1:] if undirected else edges
        for f in later:
            if f is e:
                continue
            if set(arrivals(e)) & set(ends(f)):
                add(f"edge:{e.id}", f"edge:{f.id}")
    for e in edges:
        if set(arrivals(e)) & targets:
            add(f"edge:{e.id}", LineGraph.SINK)
    mode = "undirected-vertex" if undirected else "directed-vertex"
    problem = LinkageProblem(
        Digraph(verts, h_edges), tuple(f"src:{a}" for a in sources), (), LineGraph.SINK, mode
    )
    return LineGraph(g, problem, core, undirected, targets)


def _fresh_name(g: Digraph, name: str) -> str:
    while name in g:
        name += "'"
    return name


def sink_reduce(
    g: Digraph,
    B: Iterable[str],
    capacity: int | str = "sources-count",
    needed: int | None = None,
    mode: str = "directed-edge",
    name: str = "b",
) -> tuple[Digraph, str]:
    """Add a fresh sink fed by parallel edges from every vertex of B."""
    B = list(dict.fromkeys(B))
    if not B:
        raise ValueError("B must be nonempty")
    if _is_split(mode):
        count = 1
    elif capacity == "sources-count":
        if needed is None:
            raise ValueError("capacity 'sources-count' needs the number of sources")
        count = needed
    else:
        count = int(capacity) if needed is None else min(int(capacity), needed)
    count = max(count, 1)
    b = _fresh_name(g, name)
    edges = list(g.edges)
    for x in B:
        edges += [Edge(f"{x}->{b}#{i}", x, b) for i in range(count)]
    return Digraph((*g.vertices, b), edges), b


# -- serialization ----------------------------------------------------------


def linkage_to_json(linkage: Linkage, separator: Separator | None = None) -> dict:
    doc = {
        "mode": linkage.mode,
        "value": linkage.value,
        "paths": [
            {"source": a, "vertices": list(p.vertices), "edges": list(p.edges)}
            for a, p in linkage.paths.items()
        ],
    }
    if separator is not None:
        doc["separator"] = {
            "edges": sorted(separator.edges),
            "vertices": sorted(separator.vertices),
        }
    return doc


def linkage_from_json(doc: dict) -> tuple[Linkage, Separator | None]:
    paths = {p["source"]: Path(tuple(p["vertices"]), tuple(p["edges"])) for p in doc["paths"]}
    linkage = Linkage(doc["mode"], paths)
    if linkage.value != doc["value"]:
        raise ValueError("value does not match the number of paths")
    sep = doc.get("separator")
    separator = None
    if sep is not None:
        separator = Separator(doc["mode"], frozenset(sep["edges"]), frozenset(sep["vertices"]))
    return linkage, separator
