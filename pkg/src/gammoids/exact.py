"""Crossing edges, exact sets, hulls and forwarders.

Everything here is the directed-edge version with a single sink ``b``.  A
vertex set D is exact for (I, b) when b is not in D and the number of
D-crossing edges equals |D ∩ I|.  Exact sets are found through minimum
cuts: with unit capacities on the edges and on the arcs that feed the
sources in I, the minimal source side of a maximum flow is the smallest
set whose cut is tight.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from gammoids.errors import BudgetExceeded, LinkabilityError, NotExactError
from gammoids.flow import INF, FlowNetwork
from gammoids.graph import Digraph, Edge, LinkageProblem
from gammoids.menger import Linkage, is_linkable

DEFAULT_BUDGET = 2**14


@dataclass(frozen=True)
class ExactSet:
    members: frozenset[str]
    crossing: frozenset[str]
    hull: frozenset[str]
    exact: bool
    graph: Digraph = field(repr=False, compare=False)

    @property
    def order(self) -> int:
        return len(self.crossing)

    def sorted_members(self) -> list[str]:
        return self.graph.sort_vertices(self.members)

    def to_json(self) -> dict:
        g = self.graph
        return {
            "members": g.sort_vertices(self.members),
            "order": self.order,
            "crossing": g.sort_edges(self.crossing),
            "hull": g.sort_vertices(self.hull),
            "exact": self.exact,
        }


def crossing_edges(g: Digraph, D: Iterable[str]) -> frozenset[str]:
    D = set(D)
    return frozenset(e.id for v in D for e in g.out_edges(v) if e.head not in D)


def order(g: Digraph, D: Iterable[str]) -> int:
    return len(crossing_edges(g, D))


def is_exact(g: Digraph, D: Iterable[str], I: Iterable[str], b: str) -> bool:
    D = set(D)
    if b in D:
        return False
    return order(g, D) == len(D & set(I))


def hull(g: Digraph, D: Iterable[str], b: str) -> frozenset[str]:
    D = frozenset(D)
    if b in D:
        raise ValueError("the hull is only defined for sets avoiding b")
    free = g.co_reaches([b], avoid_edges=crossing_edges(g, D))
    return frozenset(v for v in g.vertices if v not in free)


def equivalent(g: Digraph, D: Iterable[str], D2: Iterable[str], b: str | None = None) -> bool:
    same = crossing_edges(g, D) == crossing_edges(g, D2)
    if __debug__ and b is not None and same:
        assert hull(g, D, b) == hull(g, D2, b)
    return same


def make_exact_set(g: Digraph, D: Iterable[str], I: Iterable[str], b: str) -> ExactSet:
    D = frozenset(D)
    return ExactSet(D, crossing_edges(g, D), hull(g, D, b), is_exact(g, D, I, b), g)


def _linkable(g: Digraph, S: Iterable[str], b: str) -> bool:
    return is_linkable(LinkageProblem(g, tuple(S), (), b, "directed-edge"))


def _cut(g: Digraph, caps: dict[str, int], b: str, limit: int = INF) -> tuple[int, set[str]]:
    """Max flow from weighted sources into b, and the minimal source side."""
    net = FlowNetwork(1)
    node = {}
    for v in g.vertices:
        node[v] = net.add_node()
    for e in g.edges:
        if e.tail != e.head:
            net.add_arc(node[e.tail], node[e.head], 1)
    for v, c in caps.items():
        net.add_arc(0, node[v], c)
    value = net.max_flow(0, node[b], limit=limit)
    side = net.residual_reach(0)
    return value, {v for v in g.vertices if node[v] in side}


def exact_cover(g: Digraph, v: str, I: Iterable[str], b: str) -> ExactSet | None:
    """The hull of the smallest exact set containing v, if any exact set contains v."""
    if v == b:
        raise ValueError("b lies in no exact set")
    I = [a for a in dict.fromkeys(I) if a != b]
    caps = {a: 1 for a in I}
    caps[v] = INF
    _, side = _cut(g, caps, b, limit=len(I) + 1)
    if b in side or order(g, side) != len(side & set(I)):
        return None
    return make_exact_set(g, hull(g, side, b), I, b)


def find_exact_set(g: Digraph, v: str, I: Iterable[str], b: str) -> ExactSet | None:
    """An exact set containing v when I + v cannot be linked to b, else None."""
    if v == b:
        raise ValueError("v must differ from b")
    I = list(dict.fromkeys(I))
    if not _linkable(g, I, b):
        raise LinkabilityError(f"I = {g.sort_vertices(I)} cannot be linked to {b}")
    if v in I or _linkable(g, I + [v], b):
        return None
    found = exact_cover(g, v, I, b)
    if found is None:  # pragma: no cover - excluded by the cut argument
        raise NotExactError(f"no exact set contains {v}")
    return found


def forwarder(g: Digraph, D: ExactSet, L: Linkage, I: Iterable[str], b: str) -> ExactSet:
    """An exact hull containing D and every vertex of L except b."""
    I = list(I)
    if not D.exact:
        raise NotExactError("forwarders are taken of exact sets")
    union = set(D.members)
    for u in g.sort_vertices(L.vertex_set() - {b}):
        if u in union:
            continue
        cover = exact_cover(g, u, I, b)
        if cover is None:
            raise NotExactError(f"vertex {u} lies in no exact set")
        union |= cover.members
    result = make_exact_set(g, hull(g, union, b), I, b)
    if not result.exact:
        raise NotExactError("union of exact sets is not exact; is I linkable?")
    return result


# -- exhaustive enumeration ---------------------------------------------------


def _masks(g: Digraph, I: Iterable[str], b: str, budget: int):
    ground = [v for v in g.vertices if v != b]
    n = len(ground)
    if 2**n > budget:
        raise BudgetExceeded(f"2^{n} subsets exceed the budget of {budget}")
    bit = {v: 1 << i for i, v in enumerate(ground)}
    masks = np.arange(2**n, dtype=np.int64)
    orders = np.zeros(2**n, dtype=np.int64)
    for e in g.edges:
        if e.tail == e.head or e.tail == b:
            continue
        inside = (masks & bit[e.tail]) != 0
        if e.head != b:
            inside &= (masks & bit[e.head]) == 0
        orders += inside
    imask = sum(bit[a] for a in set(I) if a in bit)
    return ground, masks, orders, np.bitwise_count(masks & imask).astype(np.int64)


def exact_masks(g: Digraph, I: Iterable[str], b: str, budget: int = DEFAULT_BUDGET):
    """Ground list (V - b, graph order) and the bitmasks of all exact sets."""
    ground, masks, orders, icount = _masks(g, I, b, budget)
    return ground, masks[orders == icount]


def enumerate_exact_sets(g: Digraph, I: Iterable[str], b: str, budget: int = DEFAULT_BUDGET) -> list[frozenset[str]]:
    ground, found = exact_masks(g, I, b, budget)
    return [_unmask(ground, int(m)) for m in found]


def _unmask(ground: list[str], m: int) -> frozenset[str]:
    return frozenset(v for i, v in enumerate(ground) if m >> i & 1)


def _mask(ground: list[str], D: Iterable[str]) -> int:
    index = {v: i for i, v in enumerate(ground)}
    return sum(1 << index[v] for v in D)


def closure_family(
    g: Digraph,
    S: Iterable[Iterable[str]],
    I: Iterable[str],
    b: str,
    which: str = "both-orders",
    budget: int = DEFAULT_BUDGET,
):
    """Close a family of exact sets under exact subsets, unions, or both.

    With ``which="both-orders"`` the pair (subsets then unions, unions then
    subsets) is returned so the two can be compared.
    """
    I = list(I)
    S = [frozenset(D) for D in S]
    for D in S:
        if not is_exact(g, D, I, b):
            raise NotExactError(f"member {g.sort_vertices(D)} is not exact")
    ground, exact = exact_masks(g, I, b, budget)
    exact = [int(m) for m in exact]

    def subsets(family: set[int]) -> set[int]:
        return {m for m in exact if any(m & ~big == 0 for big in family)}

    def unions(family: set[int]) -> set[int]:
        closed = set(family)
        frontier = list(closed)
        while frontier:
            new = []
            for x in frontier:
                for y in list(closed):
                    z = x | y
                    if z not in closed:
                        closed.add(z)
                        new.append(z)
            frontier = new
        return closed

    start = {_mask(ground, D) for D in S}

    def out(family: set[int]) -> frozenset[frozenset[str]]:
        return frozenset(_unmask(ground, m) for m in family)

    if which == "subsets":
        return out(subsets(start))
    if which == "unions":
        return out(unions(start))
    if which == "both-orders":
        return out(unions(subsets(start))), out(subsets(unions(start)))
    raise ValueError(f"unknown closure {which!r}")


# -- making graphs exact --------------------------------------------------------


def extend_to_maximal(g: Digraph, I: Iterable[str], X: Iterable[str], b: str) -> tuple[str, ...]:
    """Greedy maximal J with I ⊆ J ⊆ I ∪ X that can be linked to b."""
    J = list(dict.fromkeys(I))
    if not _linkable(g, J, b):
        raise LinkabilityError(f"I = {g.sort_vertices(J)} cannot be linked to {b}")
    X = set(X)
    for x in g.vertices:
        if x in X and x != b and x not in J and _linkable(g, J + [x], b):
            J.append(x)
    return tuple(g.sort_vertices(J))


def min_order_containing(g: Digraph, v: str, b: str) -> int:
    """Smallest order of a vertex set containing v but not b (the v-b edge connectivity)."""
    value, _ = _cut(g, {v: INF}, b, limit=len(g.edges) + 1)
    return value


def clone_extend(g: Digraph, b: str, style: str = "feed") -> Digraph:
    """Give every v != b as many in-degree-zero clones as its v-b edge connectivity.

    With ``style="feed"`` each clone has a single edge into v.  Then v and
    its clones can never all be linked to b, which is what makes every
    vertex coverable by an exact set once I is grown to a maximal linkable
    set.  ``style="copy"`` gives each clone a copy of v's out-edges instead;
    those extra edges can carry the clones to b on their own, and the graph
    need not come out exact.
    """
    if style not in ("feed", "copy"):
        raise ValueError(f"unknown clone style {style!r}; expected feed or copy")
    verts = list(g.vertices)
    edges = list(g.edges)
    taken = set(verts)
    taken_edges = {e.id for e in edges}

    def fresh(name: str, used: set[str]) -> str:
        while name in used:
            name += "^"
        used.add(name)
        return name

    for v in g.vertices:
        if v == b:
            continue
        for i in range(1, min_order_containing(g, v, b) + 1):
            clone = fresh(f"{v}^{i}", taken)
            verts.append(clone)
            if style == "feed":
                edges.append(Edge(fresh(f"{clone}->{v}", taken_edges), clone, v))
                continue
            for e in g.out_edges(v):
                head = clone if e.head == v else e.head
                edges.append(Edge(fresh(f"{e.id}^{i}", taken_edges), clone, head))
    return Digraph(verts, edges)
