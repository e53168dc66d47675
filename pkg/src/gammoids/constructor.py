"""Nested exact hulls with compatible linkages over a countable presentation.

The chain D_1 ⊆ D_2 ⊆ ... is built on finite data only.  Exact covers and
hulls are computed in the *settled model* W_m of truncation m: vertices
whose out-edges are already complete are kept, every other vertex is
merged into b.  An exact set of W_m has the same crossing edges in every
larger truncation, so it stays exact there.  Linkages are computed in the
real truncation T_t with t grown until the sources of D_n can be linked.

Step n handles the n-th vertex of the presentation's vertex order:

* cover it by an exact set F_n (if one is needed),
* take a forwarder of D_{n-1} ∪ F_n with respect to the previous linkage,
* link the sources of D_n afresh and splice the old prefixes back in
  along the crossing edges of D_{n-1}.

Prefixes P_v(D_n) therefore never change once written, and the union of
them is the stabilized path P_v.  Whether an unbounded P_v dominates b is
only semi-decided from witness counts at growing depths.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from gammoids.errors import BudgetExceeded, LinkabilityError, NotExactError
from gammoids.exact import ExactSet, exact_cover, forwarder, is_exact, make_exact_set
from gammoids.families import GraphPresentation
from gammoids.graph import Digraph, Edge, LinkageProblem
from gammoids.menger import Linkage, Path, check_linkage, is_linkable, max_linkage

VERDICTS = ("ends-at-b", "dominating-ray-candidate", "undetermined")
DEFAULT_WINDOW = 3
DEFAULT_MAX_DEPTH = 64


@dataclass(frozen=True)
class ChainState:
    """Snapshot after one construction step.

    `status` says what happened to the handled vertex: ``covered`` (an
    exact cover was added), ``already`` (it was inside D_{n-1}),
    ``not-needed`` (I + v is linkable, no cover exists or is required),
    ``absorbed`` (never settled within the depth budget), ``uncovered``
    (settled but no exact set contains it) or ``exhausted``.
    """

    step: int
    vertex: str | None
    status: str
    D: ExactSet
    linkage: Linkage
    prefixes: dict[str, Path]
    outside: dict[str, Path]
    depth: int
    ambient: int
    b: str
    graph: Digraph = field(repr=False, compare=False)

    def to_json(self) -> dict:
        g = self.graph
        return {
            "step": self.step,
            "vertex": self.vertex,
            "status": self.status,
            "D": g.sort_vertices(self.D.members),
            "order": self.D.order,
            "crossing": g.sort_edges(self.D.crossing),
            "prefixes": {v: list(p.vertices) for v, p in self.prefixes.items()},
            "outside": {v: list(p.vertices) for v, p in self.outside.items()},
            "model_depth": self.depth,
            "ambient_depth": self.ambient,
        }


@dataclass(frozen=True)
class ClassifiedPath:
    source: str
    path: Path
    verdict: str
    witnesses: tuple[tuple[int, int], ...] = ()
    note: str = ""

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "vertices": list(self.path.vertices),
            "edges": list(self.path.edges),
            "verdict": self.verdict,
            "witnesses": [{"depth": d, "count": c} for d, c in self.witnesses],
            "note": self.note,
        }


def settled_model(p: GraphPresentation, m: int) -> tuple[Digraph, frozenset[str]]:
    """Truncation m with every unsettled vertex merged into b; edge ids are kept."""
    g = p.truncate(m)
    b = p.b()
    keep = p.settled(m) - {b}
    verts = [v for v in g.vertices if v in keep or v == b]
    edges = [Edge(e.id, e.tail, e.head if e.head in keep else b) for e in g.edges if e.tail in keep]
    return Digraph(verts, edges), keep


def prefix_through(path: Path, crossing: Iterable[str]) -> Path:
    """The initial segment of `path` up to and including its first edge in `crossing`."""
    crossing = set(crossing)
    for i, eid in enumerate(path.edges):
        if eid in crossing:
            return path.prefix(i + 1)
    return path


def reroute(old: Linkage, fresh: Linkage, D: ExactSet) -> Linkage:
    """Keep each old path up to its D-crossing edge and follow the fresh path after it."""
    crossing = D.crossing
    if not crossing:
        return Linkage(fresh.mode, dict(fresh.paths))

    def split(linkage: Linkage, name: str) -> dict[str, tuple[str, Path, int]]:
        at: dict[str, tuple[str, Path, int]] = {}
        for source, path in linkage.paths.items():
            hits = [i for i, e in enumerate(path.edges) if e in crossing]
            if len(hits) > 1:
                raise NotExactError(f"{name} path from {source} crosses D {len(hits)} times")
            if hits:
                at[path.edges[hits[0]]] = (source, path, hits[0])
        return at

    old_at, fresh_at = split(old, "old"), split(fresh, "fresh")
    if set(old_at) != crossing or set(fresh_at) != crossing:
        raise NotExactError("crossing edges and linkage paths are not in bijection")
    paths: dict[str, Path] = {}
    for e in sorted(crossing):
        source, before, i = old_at[e]
        _, after, j = fresh_at[e]
        paths[source] = Path(
            before.vertices[: i + 1] + after.vertices[j + 1 :],
            before.edges[: i + 1] + after.edges[j + 1 :],
        )
    rerouted = {s for s, _, _ in fresh_at.values()}
    for source, path in fresh.paths.items():
        if source not in rerouted:
            paths[source] = path
    order = {s: i for i, s in enumerate([*old.paths, *fresh.paths])}
    return Linkage(fresh.mode, dict(sorted(paths.items(), key=lambda kv: order[kv[0]])))


class _Builder:
    def __init__(self, p: GraphPresentation, I, b: str, max_depth: int, start_depth: int):
        self.p = p
        self.I = None if I is None else tuple(I)
        self.b = b
        self.max_depth = max_depth
        self.m = start_depth
        self.t = start_depth
        self._models: dict[int, tuple[Digraph, frozenset[str], tuple[str, ...]]] = {}
        self._settled: dict[int, frozenset[str]] = {}

    def sources(self, g: Digraph, n: int) -> tuple[str, ...]:
        base = self.p.piece(n).sources if self.I is None else self.I
        return tuple(a for a in base if a in g and a != self.b)

    def model(self, m: int):
        if m not in self._models:
            W, keep = settled_model(self.p, m)
            I = tuple(a for a in self.sources(W, m) if a in keep)
            if not is_linkable(LinkageProblem(W, I, (), self.b)):
                raise LinkabilityError(
                    f"sources {W.sort_vertices(I)} cannot be linked to {self.b} in the settled part of truncation {m}"
                )
            self._models[m] = (W, keep, I)
        return self._models[m]

    def settled_depth(self, vertices: Iterable[str], start: int) -> int | None:
        vertices = set(vertices)
        for m in range(start, self.max_depth + 1):
            if m not in self._settled:
                self._settled[m] = self.p.settled(m)
            if vertices <= self._settled[m]:
                return m
        return None

    def ambient(self, sources: Sequence[str], start: int) -> tuple[int, Linkage]:
        t = max(start, 1)
        while True:
            T = self.p.truncate(t)
            if all(a in T for a in sources):
                linkage, _ = max_linkage(LinkageProblem(T, tuple(sources), (), self.b))
                if len(linkage) == len(sources):
                    return t, linkage
            if t >= 2 * self.max_depth:
                raise LinkabilityError(
                    f"sources {list(sources)} cannot be linked to {self.b} within truncation {t}"
                )
            t = min(2 * t, 2 * self.max_depth)


def build_chain(
    p: GraphPresentation,
    I: Iterable[str] | None = None,
    b: str | None = None,
    steps: int = 10,
    max_depth: int = DEFAULT_MAX_DEPTH,
    start_depth: int = 1,
) -> list[ChainState]:
    """Run `steps` construction steps; I defaults to the presentation's sources."""
    b = p.b() if b is None else b
    if b is None:
        raise ValueError("the construction needs a single sink b; attach one with with_single_sink")
    bld = _Builder(p, I, b, max_depth, start_depth)
    order = (v for v in p.vertex_order(max_depth) if v != b)
    states: list[ChainState] = []
    stray: list[str] = []
    D_prev: frozenset[str] = frozenset()
    L_prev = Linkage("directed-edge", {})
    for n in range(1, steps + 1):
        v = next(order, None)
        m = bld.m
        # Every vertex still to be covered must be settled in the model.
        pending = (L_prev.vertex_set() - {b}) - D_prev
        need = bld.settled_depth(pending, m)
        if need is None:
            raise BudgetExceeded(f"linkage vertices stay unsettled up to depth {max_depth}")
        m = need
        status = "exhausted" if v is None else "already" if v in D_prev else ""
        if not status:
            at = bld.settled_depth([v], m)
            if at is None:
                status = "absorbed"
            else:
                m = at
        # When I + v cannot be linked, a cover exists in the model at this
        # depth.  Only a missing forwarder calls for a deeper truncation.
        while True:
            W, keep, I_W = bld.model(m)
            Dn = _next_hull(W, I_W, b, D_prev, L_prev, None if status else v)
            if Dn is not None:
                break
            if p.finite or 2 * m > max_depth:
                raise NotExactError(f"no forwarder of D_{n - 1} within depth {max_depth}")
            m = 2 * m
        if not status:
            status = "covered" if v in Dn.members else "uncovered" if v in I_W else "not-needed"
        if status in ("absorbed", "uncovered"):
            stray.append(v)
        bld.m = m
        # New sources go first so that they claim their shortest routes.
        linked = [a for a in I_W if a in Dn.members and a not in D_prev]
        linked += [a for a in I_W if a in D_prev]
        t, fresh = bld.ambient(linked, max(bld.t, m + 1))
        bld.t = t
        T = p.truncate(t)
        I_T = bld.sources(T, t)
        D_old = make_exact_set(T, D_prev, I_T, b)
        L = reroute(L_prev, fresh, D_old)
        D = make_exact_set(T, Dn.members, I_T, b)
        prefixes = {a: prefix_through(path, D.crossing) for a, path in L.paths.items()}
        outside = _outside_paths(T, L, [a for a in stray if a in I_T and a not in D.members], b)
        states.append(ChainState(n, v, status, D, L, prefixes, outside, m, t, b, T))
        D_prev, L_prev = Dn.members, L
    return states


def _next_hull(W, I_W, b, D_prev, L_prev, v) -> ExactSet | None:
    union = set(D_prev)
    if v is not None:
        cover = exact_cover(W, v, I_W, b)
        if cover is not None:
            union |= cover.members
    try:
        start = make_exact_set(W, union, I_W, b)
        return forwarder(W, start, L_prev, I_W, b) if start.exact else None
    except NotExactError:
        return None


def _outside_paths(T: Digraph, L: Linkage, sources: list[str], b: str) -> dict[str, Path]:
    """Link sources that never enter the chain, avoiding the chain's edges."""
    if not sources:
        return {}
    linkage, _ = max_linkage(LinkageProblem(T.without_edges(L.edge_set()), tuple(sources), (), b))
    return dict(linkage.paths)


# -- verification -----------------------------------------------------------------


def check_chain(chain: Sequence[ChainState], I: Iterable[str] | None = None) -> list[str]:
    """Every violated chain property, as readable messages (empty when all hold)."""
    problems: list[str] = []
    for k, st in enumerate(chain):
        T, b = st.graph, st.b
        I_T = tuple(a for a in (I if I is not None else _sources_in(st)) if a in T and a != b)
        n = st.step
        if not is_exact(T, st.D.members, I_T, b):
            problems.append(f"step {n}: D is not exact")
        want = tuple(a for a in I_T if a in st.D.members)
        if set(st.linkage.paths) != set(want):
            problems.append(f"step {n}: linkage sources differ from I ∩ D")
        try:
            check_linkage(LinkageProblem(T, want, (), b), st.linkage)
        except AssertionError as exc:
            problems.append(f"step {n}: invalid linkage ({exc})")
        if st.status == "covered" and st.vertex not in st.D.members:
            problems.append(f"step {n}: {st.vertex} was covered but is missing from D")
        if k == 0:
            continue
        prev = chain[k - 1]
        if not prev.D.members <= st.D.members:
            problems.append(f"step {n}: D shrank")
        missing = (prev.linkage.vertex_set() - {b}) - st.D.members
        if missing:
            problems.append(f"step {n}: D is no forwarder, misses {sorted(missing)}")
        for a, path in prev.prefixes.items():
            now = st.linkage.paths.get(a)
            if now is None or prefix_through(now, prev.D.crossing) != path:
                problems.append(f"step {n}: prefix of {a} changed")
        for j in range(k):
            early = chain[j]
            for a, path in early.prefixes.items():
                later = st.prefixes.get(a)
                if later is None or not path.is_prefix_of(later):
                    problems.append(f"step {n}: prefix of {a} from step {early.step} is not nested")
                # Restriction: cutting today's path at an old D gives the old prefix.
                elif prefix_through(st.linkage.paths[a], early.D.crossing) != path:
                    problems.append(f"step {n}: path of {a} disagrees with D_{early.step}")
    return problems


def _sources_in(st: ChainState) -> tuple[str, ...]:
    return tuple(st.linkage.paths)


# -- stabilized paths and their verdicts ------------------------------------------


def witness_linkage(prefix: Path, p: GraphPresentation, b: str, depth: int) -> Linkage:
    """Vertex-disjoint paths to b starting on the prefix, avoiding the prefix edges."""
    T = p.truncate(depth)
    starts = tuple(v for v in prefix.vertices if v in T and v != b)
    H = T.without_edges(prefix.edges)
    linkage, _ = max_linkage(LinkageProblem(H, starts, (), b, "directed-vertex"))
    return linkage


def classify_path(
    path: Path,
    p: GraphPresentation,
    b: str,
    depths: Sequence[int],
    grew: bool = True,
) -> tuple[str, tuple[tuple[int, int], ...], str]:
    """Verdict, witness counts per depth and a note for one stabilized path."""
    if path.end == b:
        return "ends-at-b", (), ""
    if p.finite:
        return "undetermined", (), "finite graph: a stabilized path that does not reach b cannot be a ray"
    counts = tuple((d, len(witness_linkage(path, p, b, d))) for d in depths)
    values = [c for _, c in counts]
    rising = all(x <= y for x, y in zip(values, values[1:])) and len(values) > 1 and values[-1] > values[0]
    if grew and rising:
        return "dominating-ray-candidate", counts, "finite evidence only"
    return "undetermined", counts, ""


def stabilized_paths(
    chain: Sequence[ChainState],
    p: GraphPresentation,
    window: int = DEFAULT_WINDOW,
) -> list[ClassifiedPath]:
    if not chain:
        raise ValueError("empty chain")
    last = chain[-1]
    b = last.b
    for k in range(1, len(chain)):
        for a, path in chain[k - 1].prefixes.items():
            if a not in chain[k].prefixes or not path.is_prefix_of(chain[k].prefixes[a]):
                raise RuntimeError(f"prefix of {a} is unstable at step {chain[k].step}")
    tail = chain[-(window + 1):]
    depths = sorted({st.ambient for st in tail})
    out: list[ClassifiedPath] = []
    for a, path in last.prefixes.items():
        lengths = [len(st.prefixes[a]) for st in tail if a in st.prefixes]
        grew = len(lengths) == window + 1 and all(x < y for x, y in zip(lengths, lengths[1:]))
        verdict, counts, note = classify_path(path, p, b, depths, grew)
        out.append(ClassifiedPath(a, path, verdict, counts, note))
    for a, path in last.outside.items():
        verdict, counts, note = classify_path(path, p, b, depths, grew=False)
        out.append(ClassifiedPath(a, path, verdict, counts, note or "linked outside the chain"))
    _assert_edge_disjoint(out)
    return out


def _assert_edge_disjoint(paths: Sequence[ClassifiedPath]) -> None:
    seen: dict[str, str] = {}
    for cp in paths:
        for e in cp.path.edges:
            if e in seen:
                raise RuntimeError(f"stabilized paths of {seen[e]} and {cp.source} share edge {e}")
            seen[e] = cp.source
