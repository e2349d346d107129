import itertools

import pytest
from hypothesis import given, strategies as st

from aspomit.core import (HeadKind, Literal, OmissionSet, Program, Rule, Sign, choice,
                          constraint, def_of, dependency_graphs, fact, neg, negneg, pos,
                          project, rule)
from aspomit.coloring import FIG1A, ground_coloring
from aspomit.abstraction import omit
from aspomit.fixtures import load_program

from programs import programs


@pytest.fixture
def pi_ex():
    return load_program("pi_ex")


def test_def_of_picks_rules_by_head(pi_ex):
    assert [r.name for r in def_of("b", pi_ex)] == ["r4"]


def test_def_of_unknown_atom_is_empty(pi_ex):
    assert def_of("z", pi_ex) == ()


def test_def_of_colored_in_blocker_rules():
    program, groups = ground_coloring(FIG1A)
    blocker_rules = omit(program, set(program.atoms) - {a for n in "123" for a in groups[n]})
    bodies = {str(r) for r in def_of("colored(1)", blocker_rules)}
    assert bodies == {"colored(1) :- chosenColor(1,red).", "colored(1) :- chosenColor(1,green)."}


def test_project():
    assert project({"d", "b"}, {"a", "c"}) == frozenset()
    assert project({"c", "a"}, {"a", "c"}) == {"c", "a"}


def test_project_onto_universe_is_identity(pi_ex):
    assert project({"c", "a"}, pi_ex.atoms) == {"c", "a"}


def test_dependency_graphs_of_running_example(pi_ex):
    g = dependency_graphs(pi_ex)
    assert g.positive == {("a", "c"), ("b", "d")}
    assert g.negative == {("c", "d"), ("d", "c"), ("a", "b")}
    assert g.tight


def test_dependency_graphs_empty_program():
    g = dependency_graphs(Program())
    assert g.positive == frozenset() and g.negative == frozenset() and g.tight


def test_positive_cycle_is_not_tight():
    g = dependency_graphs(load_program("loop_pos"))
    assert ("a", "b") in g.positive and ("b", "a") in g.positive
    assert not g.tight


def test_constraints_add_no_edges():
    g = dependency_graphs(Program([constraint("a", neg("b"))]))
    assert not g.positive and not g.negative


def test_program_numbers_and_names_rules():
    p = Program([fact("a"), rule("b", "a")])
    assert [r.id for r in p] == [0, 1]
    assert [r.name for r in p] == ["r1", "r2"]


def test_program_rejects_duplicate_names():
    with pytest.raises(ValueError):
        Program([fact("a").with_(name="x"), fact("b").with_(name="x")])


def test_universe_keeps_first_occurrence_order_and_extras():
    p = Program([rule("b", "a"), fact("c")], atoms=["z"])
    assert p.atoms == ("b", "a", "c", "z")


def test_union_avoids_name_clashes():
    p = Program([fact("a").with_(name="r2")])
    q = p.union([fact("b"), fact("c")])
    assert len({r.name for r in q}) == 3


def test_rule_dedupes_body_and_keeps_order():
    r = rule("a", "b", neg("c"), "b")
    assert r.body == (pos("b"), neg("c"))


def test_rule_validation():
    with pytest.raises(ValueError):
        Rule(HeadKind.BOTTOM, ("a",))
    with pytest.raises(ValueError):
        Rule(HeadKind.DISJUNCTION, ("a",))


def test_same_rules_ignores_names_and_literal_order():
    p = Program([rule("a", "b", neg("c"))])
    q = Program([rule("a", neg("c"), "b").with_(name="x")])
    assert p.same_rules(q)


def test_omission_set_ops():
    A = OmissionSet(frozenset({"a", "b"}))
    assert "a" in A and len(A) == 2
    assert A.without(["a"]).omitted == {"b"}
    assert A.with_(["c"]).omitted == {"a", "b", "c"}


@given(st.lists(st.tuples(st.sampled_from("abcd"), st.sampled_from(list(Sign))), max_size=4),
       st.sets(st.sampled_from("abcd")))
def test_body_truth_matches_truth_table(lits, interp):
    r = Rule(HeadKind.BOTTOM, (), tuple(Literal(a, s) for a, s in lits)) if lits else fact("x")
    expected = (r.pos_body <= interp and not (r.neg_body & interp)
                and r.negneg_body <= interp)
    assert r.body_holds(interp) == expected


@given(programs())
def test_positive_graph_is_subset_of_full(program):
    g = dependency_graphs(program)
    assert {(u, v) for u, v, s in g.full if s is Sign.POS} == g.positive
