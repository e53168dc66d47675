import pytest
from hypothesis import given, settings

from conftest import load, problems
from gammoids.errors import GraphFormatError
from gammoids.families import FAMILIES, finite_presentation, generate_family, with_single_sink
from gammoids.graph import Digraph, Edge, LinkageProblem, format_graph, parse_graph


def test_parse_two_strand(two_strand):
    g = two_strand.graph
    assert g.vertices == ("a1", "x1", "a2", "x2", "b")
    assert [(e.tail, e.head) for e in g.edges] == [("a1", "x1"), ("x1", "b"), ("a2", "x2"), ("x2", "b")]
    assert two_strand.sources == ("a1", "a2")
    assert two_strand.b == "b"
    assert two_strand.targets == ("b",)


def test_multiplicity_gives_distinct_ids():
    p = parse_graph("node a\nnode b\nedge a b 3\n")
    assert [e.id for e in p.graph.edges] == ["e0", "e1", "e2"]


@pytest.mark.parametrize(
    "text, line",
    [
        ("node a\nedge a z\n", 2),
        ("node a\nnode a\n", 2),
        ("frob a\n", 1),
        ("node a\nmode sideways\n", 2),
        ("node a\nnode b\nedge a b 0\n", 3),
        ("node a\nb a\nb a\n", 3),
    ],
)
def test_format_errors_carry_line(text, line):
    with pytest.raises(GraphFormatError) as info:
        parse_graph(text)
    assert info.value.line == line


def test_duplicate_ids_rejected():
    with pytest.raises(ValueError):
        Digraph(["a", "a"])
    with pytest.raises(ValueError):
        Digraph(["a", "b"], [Edge("e", "a", "b"), Edge("e", "b", "a")])
    with pytest.raises(ValueError):
        LinkageProblem(Digraph(["a"]), ("z",))


@settings(max_examples=60, deadline=None)
@given(problems())
def test_format_roundtrip(problem):
    again = parse_graph(format_graph(problem))
    assert again.graph.vertices == problem.graph.vertices
    assert [(e.tail, e.head) for e in again.graph.edges] == [(e.tail, e.head) for e in problem.graph.edges]
    assert (again.sources, again.sinks, again.b, again.mode) == (problem.sources, problem.sinks, problem.b, problem.mode)


def test_co_reaches_respects_avoided_edges(two_strand):
    g = two_strand.graph
    assert g.co_reaches(["b"]) == {"a1", "x1", "a2", "x2", "b"}
    assert g.co_reaches(["b"], avoid_edges={"e1"}) == {"a2", "x2", "b"}


@pytest.mark.parametrize("name", FAMILIES)
def test_truncations_are_nested(name):
    p = generate_family(name, 6)
    for n in range(1, 6):
        assert p.truncate(n).is_subgraph_of(p.truncate(n + 1))


def test_truncations_are_deterministic():
    a, b = generate_family("grid3Z", 5), generate_family("grid3Z", 5)
    assert a.truncate(5) == b.truncate(5)


def test_ac_pattern_shape():
    g = generate_family("ac", 2).graph()
    assert {(e.tail, e.head) for e in g.edges} == {
        ("v1_0", "b0"), ("v2_0", "v1_0"), ("v2_0", "v1_1"),
        ("v1_1", "b1"), ("v2_1", "v1_1"), ("v2_1", "v1_2"), ("v1_2", "b2"),
    }


def test_settled_vertices_keep_their_out_edges():
    p = generate_family("comb_steal", 4)
    settled = p.settled(4)
    g4, g5 = p.truncate(4), p.truncate(5)
    assert settled
    for v in settled:
        assert len(g4.out_edges(v)) == len(g5.out_edges(v))


def test_finite_presentation_is_constant(two_strand):
    p = finite_presentation(two_strand)
    assert p.finite and p.truncate(1) == p.truncate(7) == two_strand.graph
    assert p.settled(3) == frozenset(two_strand.graph.vertices)


def test_single_sink_attachment():
    p = with_single_sink(generate_family("grid3Z", 3))
    pc = p.piece(2)
    assert pc.sinks == (pc.b,)
    assert all(e.head == pc.b for e in pc.graph.in_edges(pc.b))
    assert with_single_sink(p) is p


def test_fixtures_parse():
    for name in ("two_strand.g", "single_sink.g", "k4.g"):
        assert len(load(name).graph) > 0
