import itertools

import pytest
from hypothesis import given, settings, strategies as st

from aspomit.coloring import (FIG1A, FIG1B, GraphInstance, InvalidInstance, color_names,
                              graph_text, ground_coloring, is_colorable, node_groups,
                              parse_graph, random_graph, random_uncolorable)
from aspomit.fixtures import load_graph
from aspomit.solver import answer_sets, is_satisfiable


def test_color_names():
    assert color_names(2) == ["red", "green"]
    assert color_names(5) == ["red", "green", "blue", "c4", "c5"]


def test_fig1a_program_shape():
    program, groups = ground_coloring(FIG1A)
    assert len(program) == 78 and len(program.atoms) == 27
    assert set(groups) == {str(n) for n in range(1, 10)}
    assert groups["1"] == ("chosenColor(1,red)", "chosenColor(1,green)", "colored(1)")
    assert not is_satisfiable(program)


def test_fig1b_program_shape():
    program, _ = ground_coloring(FIG1B)
    assert len(program) == 24 + 24 + 8 + 24 + 42
    assert len(program.atoms) == 32
    assert not is_satisfiable(program)


def test_bundled_graph_files_match_constants():
    assert load_graph("fig1a").edges == FIG1A.edges and load_graph("fig1a").colors == 2
    assert load_graph("fig1b").edges == FIG1B.edges and load_graph("fig1b").colors == 3


def test_triangle_three_colors():
    g = GraphInstance(3, ((1, 2), (2, 3), (1, 3)), 3)
    assert len(answer_sets(ground_coloring(g)[0])) == 6


def test_single_node():
    assert len(answer_sets(ground_coloring(GraphInstance(1, (), 2))[0])) == 2


@pytest.mark.parametrize("nodes, edges, colors", [
    (0, (), 2), (2, ((1, 1),), 2), (2, ((1, 3),), 2), (2, ((1, 2), (2, 1)), 2), (2, (), 1)])
def test_invalid_instances(nodes, edges, colors):
    with pytest.raises(InvalidInstance):
        GraphInstance(nodes, edges, colors)


def test_graph_text_round_trip():
    assert parse_graph(graph_text(FIG1B)).edges == FIG1B.edges


@pytest.mark.parametrize("text", ["", "3", "3 x\n1 2", "3 2\n1"])
def test_parse_graph_errors(text):
    with pytest.raises(InvalidInstance):
        parse_graph(text)


def test_random_uncolorable_is_seeded():
    a = random_uncolorable(8, 3, seed=5)
    assert a == random_uncolorable(8, 3, seed=5)
    assert not is_colorable(a)


def test_node_groups_restricts_to_program_atoms():
    program, groups = ground_coloring(FIG1A)
    small = program.__class__(program.rules[:1])
    assert node_groups(small, groups)["1"] == ("chosenColor(1,red)",)


def _brute_colorable(g):
    for assign in itertools.product(range(g.colors), repeat=g.nodes):
        if all(assign[u - 1] != assign[v - 1] for u, v in g.edges):
            return True
    return False


@settings(max_examples=40)
@given(st.integers(1, 6), st.floats(0.2, 0.9), st.integers(2, 3), st.integers(0, 10 ** 6))
def test_program_satisfiable_iff_colorable(nodes, density, colors, seed):
    g = random_graph(nodes, density, colors, seed)
    expected = _brute_colorable(g)
    assert is_colorable(g) == expected
    assert is_satisfiable(ground_coloring(g)[0]) == expected


def test_odd_cycle_not_two_colorable():
    for n in (3, 5, 7):
        g = GraphInstance(n, tuple((i, i % n + 1) for i in range(1, n + 1)), 2)
        assert not is_satisfiable(ground_coloring(g)[0])
