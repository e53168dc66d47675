"""Search for finite prefixes of an alternating-comb subdivision.

The depth-k prefix of the comb has branch vertices b_j, v1_j (0 <= j <= k)
and v2_j (0 <= j < k), with pattern edges

    v1_j -> b_j,    v2_j -> v1_j,    v2_j -> v1_{j+1}.

Each pattern edge becomes a directed path; the paths are internally
disjoint and avoid all other branch vertices.  Paths leaving a v2 vertex
have at least one edge.  A path v1_j -> b_j may be trivial, in which case
v1_j itself is the B-vertex b_j.

The search fixes branch images in the order v2_0, v1_0, b_0, v1_1, b_1,
v2_1, v1_2, b_2, ... and tries candidates in vertex order, shortest paths
first, so its answer is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from gammoids.errors import BudgetExceeded
from gammoids.graph import Digraph
from gammoids.menger import Path

DEFAULT_BUDGET = 2_000_000


def pattern_edges(k: int) -> list[tuple[str, str]]:
    """Pattern edges of the depth-k prefix, in search order."""
    out = [("v2_0", "v1_0"), ("v1_0", "b0"), ("v2_0", "v1_1"), ("v1_1", "b1")]
    for j in range(1, k):
        out += [(f"v2_{j}", f"v1_{j}"), (f"v2_{j}", f"v1_{j + 1}"), (f"v1_{j + 1}", f"b{j + 1}")]
    return out


@dataclass(frozen=True)
class AcEmbedding:
    k: int
    images: dict[str, str]
    paths: dict[tuple[str, str], Path]

    @property
    def trivial(self) -> dict[tuple[str, str], bool]:
        return {e: len(p) == 0 for e, p in self.paths.items()}

    def restrict(self, k: int) -> "AcEmbedding":
        """The embedding of the depth-k prefix contained in this one."""
        if not 1 <= k <= self.k:
            raise ValueError(f"cannot restrict depth {self.k} to {k}")
        edges = pattern_edges(k)
        names = {x for e in edges for x in e}
        return AcEmbedding(
            k,
            {x: v for x, v in self.images.items() if x in names},
            {e: self.paths[e] for e in edges},
        )

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "images": dict(self.images),
            "paths": [
                {"pattern": f"{x}->{y}", "vertices": list(p.vertices), "edges": list(p.edges), "trivial": len(p) == 0}
                for (x, y), p in self.paths.items()
            ],
        }


class _Search:
    def __init__(self, g: Digraph, B: Iterable[str], k: int, budget: int):
        self.g = g
        self.B = set(B)
        self.k = k
        self.budget = budget
        self.spent = 0
        self.edges = pattern_edges(k)
        self.images: dict[str, str] = {}
        self.paths: dict[tuple[str, str], tuple[str, ...]] = {}
        self.used: set[str] = set()
        self.succ = {v: list(dict.fromkeys(e.head for e in g.out_edges(v) if e.head != v)) for v in g.vertices}
        self.pred = {v: list(dict.fromkeys(e.tail for e in g.in_edges(v) if e.tail != v)) for v in g.vertices}

    def tick(self):
        self.spent += 1
        if self.spent > self.budget:
            raise BudgetExceeded(f"AC search exceeded {self.budget} steps")

    def walks(self, start: str, forward: bool, fixed_end: str | None, min_len: int) -> Iterator[tuple[str, ...]]:
        """Simple paths from `start` (against edge direction if not `forward`), shortest first.

        Interior vertices avoid `used`.  The far end is `fixed_end` if given,
        otherwise any unused vertex.
        """
        step = self.succ if forward else self.pred
        for length in range(min_len, len(self.g)):
            alive = False
            stack = [(start,)]
            while stack:
                walk = stack.pop()
                self.tick()
                if len(walk) - 1 == length:
                    yield walk
                    continue
                last = len(walk) == length
                for w in reversed(step[walk[-1]]):
                    if w in walk:
                        continue
                    if last:
                        if w == fixed_end or (fixed_end is None and w not in self.used):
                            stack.append(walk + (w,))
                        alive = alive or w not in self.used
                    elif w not in self.used:
                        stack.append(walk + (w,))
            # No unused continuation at this length means none at any longer one.
            if not alive:
                return

    def place(self, name: str, v: str):
        self.images[name] = v
        self.used.add(v)

    def unplace(self, name: str):
        v = self.images.pop(name)
        if v not in self.images.values():
            self.used.discard(v)

    def run(self) -> bool:
        for root in self.g.vertices:
            self.tick()
            self.place("v2_0", root)
            if self.extend(0):
                return True
            self.unplace("v2_0")
        return False

    def extend(self, i: int) -> bool:
        if i == len(self.edges):
            return True
        x, y = self.edges[i]
        if x.startswith("v1"):
            yield_from = self._to_b(x, y)
        elif x in self.images and y in self.images:
            yield_from = self._walks_fixed(x, y)
        elif x in self.images:
            yield_from = self._walks_new_end(x, y)
        else:
            yield_from = self._walks_new_start(x, y)
        for walk, new in yield_from:
            interior = walk[1:-1]
            self.used.update(interior)
            for name, v in new:
                self.place(name, v)
            self.paths[(x, y)] = walk
            if self.extend(i + 1):
                return True
            del self.paths[(x, y)]
            self.used.difference_update(interior)
            for name, _ in new:
                self.unplace(name)
        return False

    def _to_b(self, x: str, y: str):
        v = self.images[x]
        if v in self.B:
            yield (v,), [(y, v)]
        for walk in self.walks(v, True, None, 1):
            if walk[-1] in self.B:
                yield walk, [(y, walk[-1])]

    def _walks_fixed(self, x: str, y: str):
        for walk in self.walks(self.images[x], True, self.images[y], 1):
            yield walk, []

    def _walks_new_end(self, x: str, y: str):
        for walk in self.walks(self.images[x], True, None, 1):
            yield walk, [(y, walk[-1])]

    def _walks_new_start(self, x: str, y: str):
        for back in self.walks(self.images[y], False, None, 1):
            walk = tuple(reversed(back))
            yield walk, [(x, walk[0])]


def _as_path(g: Digraph, walk: tuple[str, ...]) -> Path:
    edges = []
    for u, w in zip(walk, walk[1:]):
        edges.append(next(e.id for e in g.out_edges(u) if e.head == w))
    return Path(walk, tuple(edges))


def find_ac_prefix(g: Digraph, B: Iterable[str], k: int, budget: int = DEFAULT_BUDGET) -> AcEmbedding | None:
    """An embedding of the depth-k comb prefix, None if there is none.

    Raises BudgetExceeded when the search gives up, which is not the same
    as finding nothing.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    search = _Search(g, B, k, budget)
    if not search.run():
        return None
    paths = {e: _as_path(g, search.paths[e]) for e in search.edges}
    return AcEmbedding(k, dict(search.images), paths)


def largest_ac_prefix(g: Digraph, B: Iterable[str], k_max: int, budget: int = DEFAULT_BUDGET) -> AcEmbedding | None:
    """The deepest prefix found for k = 1..k_max, stopping at the first failure."""
    best = None
    for k in range(1, k_max + 1):
        found = find_ac_prefix(g, B, k, budget)
        if found is None:
            break
        best = found
    return best


def verify_embedding(g: Digraph, B: Iterable[str], emb: AcEmbedding) -> list[str]:
    """Everything wrong with `emb` as a subdivision prefix in (g, B); empty if valid."""
    B = set(B)
    problems = []
    edges = pattern_edges(emb.k)
    if set(emb.paths) != set(edges):
        problems.append("pattern edges do not match depth")
        return problems
    images = emb.images
    for j in range(emb.k + 1):
        if images.get(f"b{j}") not in B:
            problems.append(f"b{j} is not mapped into B")
    branch = set(images.values())
    holders: dict[str, list[str]] = {}
    for name, v in images.items():
        holders.setdefault(v, []).append(name)
    for v, names in holders.items():
        if len(names) == 1:
            continue
        pair = sorted(names)
        j = pair[0][1:]
        if not (len(pair) == 2 and pair == [f"b{j}", f"v1_{j}"] and len(emb.paths[(f"v1_{j}", f"b{j}")]) == 0):
            problems.append(f"branch vertices {pair} share the image {v}")
    seen_inner: dict[str, tuple[str, str]] = {}
    for (x, y), path in emb.paths.items():
        if path.start != images[x] or path.end != images[y]:
            problems.append(f"path for {x}->{y} has wrong ends")
        if x.startswith("v2") and len(path) == 0:
            problems.append(f"path for {x}->{y} is trivial")
        if len(set(path.vertices)) != len(path.vertices):
            problems.append(f"path for {x}->{y} repeats a vertex")
        for i, eid in enumerate(path.edges):
            e = g.edge(eid)
            if (e.tail, e.head) != (path.vertices[i], path.vertices[i + 1]):
                problems.append(f"edge {eid} does not fit the path for {x}->{y}")
        for v in path.vertices[1:-1]:
            if v in branch:
                problems.append(f"path for {x}->{y} runs through branch vertex {v}")
            if v in seen_inner:
                problems.append(f"paths for {seen_inner[v]} and {(x, y)} meet at {v}")
            seen_inner[v] = (x, y)
    return problems
