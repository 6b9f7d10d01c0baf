import json

import numpy as np
import pytest

from ellint.data import banana, connected_multigraphs, cycle, load_example, path, triangle
from ellint.exceptions import (
    DuplicateVertexError,
    InvalidEdgeIndexError,
    NegativeDecorationError,
    ParseError,
    SelfLoopContractionError,
    UnknownVertexError,
)
from ellint.graphs import (
    DecoratedGraph,
    Edge,
    build_graph,
    classify,
    contract_edge,
    cycle_matrix,
    delete_edge,
    dumps_graph,
    first_betti,
    graph_from_dict,
    parse_graph_file,
    spanning_forest,
    write_graph_file,
)
from ellint.polynomials import incidence


def test_build_infers_vertices_in_order():
    g = build_graph([("x", "y", 1), ("y", "z"), ("z", "x", 2)])
    assert g.vertices == ("x", "y", "z")
    assert g.decorations == (1, 0, 2)
    assert g.weight == 9


@pytest.mark.parametrize(
    "edges,vertices,error",
    [
        ([("a", "b", -1)], None, NegativeDecorationError),
        ([("a", "c", 0)], ["a", "b"], UnknownVertexError),
        ([("a", "b", 0)], ["a", "b", "a"], DuplicateVertexError),
        ([("a", "b", 1.5)], None, NegativeDecorationError),
    ],
)
def test_build_rejects(edges, vertices, error):
    with pytest.raises(error):
        build_graph(edges, vertices)


def test_contract_merges_into_first_vertex():
    g = build_graph([("a", "b", 1), ("b", "c", 2), ("a", "b", 3)])
    h = contract_edge(g, 0)
    assert h.vertices == ("a", "c")
    assert [(e.head, e.tail, e.n) for e in h.edges] == [("a", "c", 2), ("a", "a", 3)]


def test_contraction_preserves_loop_number():
    for g in connected_multigraphs(4, 5):
        for e in range(g.n_edges):
            if not g.edges[e].is_self_loop:
                assert first_betti(contract_edge(g, e)) == first_betti(g)


def test_deletion_drops_a_loop_or_splits_a_component():
    for g in connected_multigraphs(4, 5):
        for e in range(g.n_edges):
            h = delete_edge(g, e)
            lost_loop = first_betti(h) == first_betti(g) - 1
            split = len(h.components()) == len(g.components()) + 1
            assert lost_loop != split


def test_delete_and_contract_commute():
    for g in connected_multigraphs(4, 5):
        for e in range(g.n_edges):
            for f in range(g.n_edges):
                if e == f or g.edges[f].is_self_loop:
                    continue
                # indices above a removed edge shift down by one
                first = contract_edge(delete_edge(g, e), f - (f > e))
                second = delete_edge(contract_edge(g, f), e - (e > f))
                assert first == second


def test_contract_self_loop_raises():
    g = build_graph([("a", "a", 0), ("a", "b", 0)])
    with pytest.raises(SelfLoopContractionError):
        contract_edge(g, 0)


def test_delete_keeps_vertices():
    g = triangle()
    h = delete_edge(g, 1)
    assert h.vertices == g.vertices
    assert h.n_edges == 2
    assert h.edges == (g.edges[0], g.edges[2])
    with pytest.raises(InvalidEdgeIndexError):
        delete_edge(g, 3)


def test_classify():
    g = build_graph([("a", "b", 0), ("b", "a", 0), ("c", "c", 0)])
    summary = classify(g)
    assert not summary.connected
    assert summary.self_loop_edges == (2,)
    assert summary.multi_edge_pairs == (("a", "b"),)
    assert not summary.simple
    assert classify(triangle()).simple


@pytest.mark.parametrize(
    "g,expected",
    [
        (path(4), 0),
        (triangle(), 1),
        (banana(3), 2),
        (cycle(5), 1),
        (build_graph([("a", "a", 0), ("b", "b", 0)]), 2),
    ],
)
def test_first_betti(g, expected):
    assert first_betti(g) == expected


def test_spanning_forest_chords():
    tree, chords = spanning_forest(banana(3))
    assert tree == (0,)
    assert chords == (1, 2)


def test_cycle_matrix_is_conserved():
    for g in connected_multigraphs(4, 5):
        if any(e.is_self_loop for e in g.edges):
            continue
        B = cycle_matrix(g)
        assert B.shape == (g.n_edges, first_betti(g))
        np.testing.assert_array_equal(incidence(g) @ B, 0)
        if B.size:
            assert np.linalg.matrix_rank(B) == B.shape[1]


def test_cycle_matrix_self_loop():
    g = build_graph([("a", "b", 0), ("b", "b", 0)])
    np.testing.assert_array_equal(cycle_matrix(g), [[0], [1]])


def test_relabel_and_reverse():
    g = triangle()
    h = g.relabel({"v0": "p", "v1": "q", "v2": "r"})
    assert h.vertices == ("p", "q", "r")
    r = g.reverse_edge(0)
    assert r.edges[0] == Edge(g.edges[0].tail, g.edges[0].head, g.edges[0].n)


def test_json_round_trip(tmp_path):
    g = build_graph([("a", "b", 2), ("b", "c", 0), ("c", "a", 1)])
    target = tmp_path / "g.json"
    write_graph_file(g, target)
    assert parse_graph_file(target) == g
    assert json.loads(dumps_graph(g))["edges"][0] == {"head": "a", "tail": "b", "n": 2}


def test_bundled_examples_parse():
    g = load_example("triangle")
    assert isinstance(g, DecoratedGraph)
    assert g.vertices == ("a", "b", "c")
    assert classify(g).simple


@pytest.mark.parametrize(
    "payload,fragment",
    [
        ([], "top level"),
        ({"vertices": ["a"]}, "'edges'"),
        ({"vertices": ["a", "a"], "edges": []}, "duplicates"),
        ({"vertices": ["a"], "edges": [{"head": "a", "tail": "b"}]}, "edges[0].tail"),
        ({"vertices": ["a", "b"], "edges": [{"head": "a", "tail": "b", "n": -2}]}, "edges[0].n"),
        ({"vertices": ["a", "b"], "edges": [{"tail": "b"}]}, "'head'"),
    ],
)
def test_schema_errors_name_the_field(payload, fragment):
    with pytest.raises(ParseError, match=fragment.replace("[", r"\[").replace("]", r"\]")):
        graph_from_dict(payload)


def test_malformed_json_reports_position(tmp_path):
    target = tmp_path / "broken.json"
    target.write_text('{"vertices": ["a"],\n "edges": [}\n')
    with pytest.raises(ParseError, match="line 2"):
        parse_graph_file(target)


def test_missing_file(tmp_path):
    with pytest.raises(ParseError, match="cannot read"):
        parse_graph_file(tmp_path / "absent.json")


def test_with_decorations():
    g = triangle().with_decorations([2, 0, 1])
    assert g.decorations == (2, 0, 1)
    assert g.vertices == triangle().vertices
    with pytest.raises(ValueError):
        triangle().with_decorations([1, 2])
