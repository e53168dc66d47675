"""Exhaustive reference answers for small instances.

Nothing here touches the flow engine: paths are enumerated explicitly and
the largest disjoint family is found by branch and bound.  Used as the
independent side of every duality and oracle check.
"""

from __future__ import annotations

from gammoids.graph import LinkageProblem


def simple_paths(problem: LinkageProblem, source: str, limit: int = 200_000) -> list[tuple[frozenset, frozenset]]:
    """All source-target paths that meet the targets only at their end.

    Each path is returned as (edge ids, vertices it occupies).  A single
    uncapacitated sink `b` is left out of the occupied vertices.
    """
    g = problem.graph
    targets = set(problem.targets)
    undirected = problem.mode.startswith("undirected")
    free_b = problem.b if problem.b is not None and problem.b not in problem.sinks else None

    def occupied(verts):
        return frozenset(v for v in verts if v != free_b)

    if source in targets:
        return [(frozenset(), occupied([source]))]
    out: list[tuple[frozenset, frozenset]] = []
    verts = [source]
    on_path = {source}
    edges: list[str] = []

    def steps(u):
        for e in g.out_edges(u):
            yield e.id, e.head
        if undirected:
            for e in g.in_edges(u):
                yield e.id, e.tail

    def walk(u):
        if len(out) > limit:
            raise RuntimeError("too many paths for brute force")
        for eid, w in steps(u):
            if w in on_path:
                continue
            edges.append(eid)
            if w in targets:
                out.append((frozenset(edges), occupied(verts + [w])))
            else:
                verts.append(w)
                on_path.add(w)
                walk(w)
                on_path.discard(w)
                verts.pop()
            edges.pop()

    walk(source)
    return out


def brute_force_value(problem: LinkageProblem) -> int:
    """Largest number of sources that can be linked simultaneously."""
    vertex_mode = problem.mode.endswith("vertex")
    options = []
    for a in problem.sources:
        paths = simple_paths(problem, a)
        # Dominated options only slow the search down.
        keyed = {(p[1] if vertex_mode else p[0]) for p in paths}
        minimal = [k for k in keyed if not any(o < k for o in keyed)]
        options.append(sorted(minimal, key=len))
    n = len(options)
    best = 0

    def search(i: int, used: frozenset, count: int):
        nonlocal best
        if count > best:
            best = count
        if i == n or count + (n - i) <= best:
            return
        for key in options[i]:
            if not key & used:
                search(i + 1, used | key, count + 1)
                if best == n:
                    return
        search(i + 1, used, count)

    search(0, frozenset(), 0)
    return best


def brute_force_linkable(problem: LinkageProblem) -> bool:
    return brute_force_value(problem) == len(problem.sources)


def brute_force_min_separator(problem: LinkageProblem, max_size: int | None = None) -> int:
    """Size of a smallest separator, by trying all candidate sets in size order.

    Candidates are edges and sources (edge modes) or vertices (vertex modes),
    matching the separator notion of `gammoids.menger.Separator`.
    """
    from itertools import combinations

    g = problem.graph
    vertex_mode = problem.mode.endswith("vertex")
    free_b = problem.b if problem.b is not None and problem.b not in problem.sinks else None
    if vertex_mode:
        items = [("v", v) for v in g.vertices if v != free_b]
    else:
        items = [("e", e.id) for e in g.edges if e.tail != e.head] + [("v", a) for a in problem.sources]
    paths = [p for a in problem.sources for p in _tagged_paths(problem, a)]
    top = len(problem.sources) if max_size is None else max_size
    for k in range(top + 1):
        for combo in combinations(items, k):
            chosen = set(combo)
            if all(key & chosen for key in paths):
                return k
    return top


def _tagged_paths(problem: LinkageProblem, source: str) -> list[frozenset]:
    free_b = problem.b if problem.b is not None and problem.b not in problem.sinks else None
    out = []
    for edges, verts in simple_paths(problem, source):
        if problem.mode.endswith("vertex"):
            out.append(frozenset(("v", v) for v in verts if v != free_b))
        else:
            out.append(frozenset(("e", e) for e in edges) | {("v", source)})
    return out


def _ac_pattern(k: int) -> list[tuple[str, str]]:
    edges = []
    for j in range(k + 1):
        edges.append((f"v1_{j}", f"b{j}"))
    for j in range(k):
        edges += [(f"v2_{j}", f"v1_{j}"), (f"v2_{j}", f"v1_{j + 1}")]
    return edges


def brute_force_ac(g, B, k: int) -> bool:
    """Does (g, B) contain the depth-k comb prefix?  Tries every branch assignment.

    Only v1_j and b_j may share an image, and then their path is trivial.
    Every other pattern edge needs a path of length at least one.
    """
    from itertools import permutations

    B = [v for v in g.vertices if v in set(B)]
    succ = {v: sorted({e.head for e in g.out_edges(v)} - {v}, key=g.vertex_index) for v in g.vertices}
    pattern = _ac_pattern(k)
    v2 = [f"v2_{j}" for j in range(k)]

    def paths_between(s, t, blocked):
        out = []

        def walk(u, seen):
            for w in succ[u]:
                if w == t:
                    out.append(seen)
                elif w not in blocked and w not in seen:
                    walk(w, seen | {w})

        walk(s, frozenset())
        return out

    def routable(img):
        branch = set(img.values())
        options = []
        for x, y in pattern:
            if img[x] == img[y]:
                options.append([frozenset()])
                continue
            found = paths_between(img[x], img[y], branch)
            if not found:
                return False
            options.append(found)
        options.sort(key=len)

        def pick(i, used):
            if i == len(options):
                return True
            return any(not inner & used and pick(i + 1, used | inner) for inner in options[i])

        return pick(0, frozenset())

    for bs in permutations(B, k + 1):
        rest = [v for v in g.vertices if v not in bs]
        # Each v1_j is either its b_j or a fresh vertex.
        for mask in range(1 << (k + 1)):
            fresh_v1 = [j for j in range(k + 1) if not mask >> j & 1]
            need = len(fresh_v1) + len(v2)
            for chosen in permutations(rest, need):
                img = {f"b{j}": bs[j] for j in range(k + 1)}
                for j in range(k + 1):
                    img[f"v1_{j}"] = bs[j] if mask >> j & 1 else None
                for j, v in zip(fresh_v1, chosen):
                    img[f"v1_{j}"] = v
                for name, v in zip(v2, chosen[len(fresh_v1):]):
                    img[name] = v
                if routable(img):
                    return True
    return False
