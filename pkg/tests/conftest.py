import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from gammoids.graph import Digraph, Edge, LinkageProblem, parse_graph

DATA = Path(__file__).parent / "data"


def load(name: str) -> LinkageProblem:
    return parse_graph((DATA / name).read_text())


def random_digraph(rng: random.Random, n: int, p: float = 0.35, loops: bool = False, parallel: bool = False) -> Digraph:
    verts = [f"v{i}" for i in range(n)]
    edges = []
    for t in verts:
        for h in verts:
            if t == h and not loops:
                continue
            copies = 1 + (parallel and rng.random() < 0.15)
            for c in range(copies):
                if rng.random() < p:
                    edges.append(Edge(f"{t}->{h}" + ("" if c == 0 else "#2"), t, h))
    return Digraph(verts, edges)


def random_single_sink(rng: random.Random, n: int, p: float = 0.35, parallel: bool = True):
    """A graph with sink 'b' and a random source set I that is linkable to b."""
    from gammoids.menger import max_linkage

    g = random_digraph(rng, n - 1, p, parallel=parallel)
    verts = list(g.vertices) + ["b"]
    edges = list(g.edges)
    for v in g.vertices:
        for c in range(rng.choice([0, 0, 1, 1, 2])):
            edges.append(Edge(f"{v}->b" + ("" if c == 0 else f"#{c}"), v, "b"))
    g = Digraph(verts, edges)
    candidates = [v for v in g.vertices if v != "b" and rng.random() < 0.5]
    linkage, _ = max_linkage(LinkageProblem(g, tuple(candidates), (), "b"))
    return g, tuple(g.sort_vertices(linkage.paths)), "b"


@st.composite
def small_digraphs(draw, max_n: int = 6, min_n: int = 1):
    n = draw(st.integers(min_n, max_n))
    verts = [f"v{i}" for i in range(n)]
    pairs = [(t, h) for t in verts for h in verts if t != h]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return Digraph(verts, [Edge(f"{t}->{h}", t, h) for t, h in chosen])


@st.composite
def problems(draw, modes=("directed-edge", "directed-vertex", "undirected-edge", "undirected-vertex"), max_n: int = 6):
    g = draw(small_digraphs(max_n=max_n))
    verts = list(g.vertices)
    sources = draw(st.lists(st.sampled_from(verts), unique=True, max_size=len(verts)))
    sinks = draw(st.lists(st.sampled_from(verts), unique=True, max_size=len(verts)))
    return LinkageProblem(g, tuple(sources), tuple(sinks), None, draw(st.sampled_from(modes)))


@pytest.fixture
def two_strand():
    return load("two_strand.g")


def shuffled(g: Digraph, rng: random.Random) -> Digraph:
    """Same graph and ids, different edge order, so flow picks other paths."""
    edges = list(g.edges)
    rng.shuffle(edges)
    return Digraph(g.vertices, edges)


def reroute_instance(rng: random.Random, n_max: int = 8):
    """(g, I, D, D_next, old, fresh) with D ⊆ D_next exact and linkages of their sources.

    Returns None when the drawn graph has no exact pair worth rerouting.
    """
    from gammoids.exact import enumerate_exact_sets, make_exact_set
    from gammoids.menger import max_linkage

    g, I, b = random_single_sink(rng, rng.randint(3, n_max), p=0.4)
    sets = [D for D in enumerate_exact_sets(g, I, b) if D & set(I)]
    if not sets:
        return None
    D = rng.choice(sets)
    above = [E for E in sets if D <= E]
    D_next = rng.choice(above)

    def link(S):
        linkage, _ = max_linkage(LinkageProblem(shuffled(g, rng), tuple(rng.sample(S, len(S))), (), b))
        assert len(linkage) == len(S)
        return linkage

    old = link([a for a in I if a in D])
    fresh = link([a for a in I if a in D_next])
    return g, I, make_exact_set(g, D, I, b), make_exact_set(g, D_next, I, b), old, fresh


_VERDICT_LINES: list[str] = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for an acceptance criterion."""

    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        _VERDICT_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICT_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_VERDICT_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
