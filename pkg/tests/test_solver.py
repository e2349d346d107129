import pytest
from hypothesis import given, settings

from aspomit.core import Program, choice, constraint, fact, neg, negneg, rule
from aspomit.fixtures import load_program
from aspomit.parser import parse, serialize
from aspomit.solver import (MINIMIZE, BRUTEFORCE_MAX_ATOMS, SolveRequest, UniverseTooLarge,
                            answer_sets, bound, complement, expand_choices, first_answer_set,
                            gl_reduct, is_answer_set, is_satisfiable, least_model, solve)

from programs import programs


def sets(*xs):
    return {frozenset(x) for x in xs}


def test_running_example_answer_sets():
    assert set(answer_sets(load_program("pi_ex"))) == sets("ca", "db")


def test_gl_reduct_running_example():
    p = load_program("pi_ex")
    assert serialize(gl_reduct(p, {"c", "a"})) == "c.\na :- c.\nb :- d."


def test_least_model():
    assert least_model(parse("a.\nb :- a.\nc :- d.")) == {"a", "b"}
    assert least_model(Program()) == frozenset()


def test_least_model_reads_positive_part_only():
    assert least_model(parse("a :- not b.\nc :- a.\n:- c.")) == {"a", "c"}


def test_is_answer_set():
    p = load_program("pi_ex")
    assert is_answer_set(p, {"c", "a"})
    assert not is_answer_set(p, {"c"})
    assert not is_answer_set(p, {"c", "a", "b"})


def test_is_answer_set_with_choices():
    p = parse("{a}.\nb :- a.")
    assert is_answer_set(p, set()) and is_answer_set(p, {"a", "b"})
    assert not is_answer_set(p, {"b"})


def test_expand_choices():
    text = serialize(expand_choices(parse("{a} :- b.")))
    assert text == f"a :- b, not {complement('a')}.\n{complement('a')} :- b, not a."


def test_choice_fact_has_two_answer_sets():
    assert set(answer_sets(parse("{a}."))) == sets("", "a")


def test_unsat_programs():
    assert answer_sets(load_program("pi_ex_unsat")) == []
    assert not is_satisfiable(parse("a :- not a."))
    assert first_answer_set(parse("a.\n:- a.")) is None


def test_positive_loop_is_unfounded():
    assert set(answer_sets(parse("a :- b.\nb :- a.\n{c}."))) == sets("", "c")


def test_unfounded_loops_need_no_branching():
    # 20 disjoint two-atom positive loops: without unfounded-set pruning the
    # search would try every combination of them
    text = "".join(f"a{i} :- b{i}.\nb{i} :- a{i}.\n" for i in range(20)) + "c."
    res = solve(SolveRequest(parse(text)))
    assert res.answer_sets == [frozenset({"c"})]
    assert res.stats.decisions == 0


def test_empty_program_has_empty_answer_set():
    assert answer_sets(Program()) == [frozenset()]


def test_double_negation():
    assert set(answer_sets(parse("{a}.\nb :- not not a.", allow_generated=True))) == sets("", "ab")
    # a :- not not a acts like a choice
    assert set(answer_sets(Program([rule("a", negneg("a"))]))) == sets("", "a")


def test_limit_and_determinism():
    p = parse("{a}.\n{b}.\n{c}.")
    all_ = answer_sets(p)
    assert len(all_) == 8
    assert answer_sets(p, limit=3) == all_[:3]
    assert first_answer_set(p) == frozenset()


def test_result_reports_exhaustion():
    p = parse("{a}.\n{b}.")
    assert solve(SolveRequest(p)).exhausted
    assert not solve(SolveRequest(p, limit=1)).exhausted


def test_bound_objective():
    p = parse("{a}.\n{b}.\n{c}.\n:- not a, not b, not c.")
    res = solve(SolveRequest(p, marked={"a", "b", "c"}, objective=bound(1)))
    assert res.answer_sets and all(len(s) == 1 for s in res.answer_sets)
    assert not solve(SolveRequest(p, marked={"a", "b"}, objective=bound(0), limit=1)).answer_sets == []


def test_minimize_objective():
    p = parse("{a}.\n{b}.\nc :- a, b.\n:- not a, not c.\n:- not b, not c.\n{d}.")
    res = solve(SolveRequest(p, marked={"a", "b", "d"}, objective=MINIMIZE, limit=1))
    assert res.answer_sets == [frozenset({"a", "b", "c"})]
    assert res.cost({"a", "b", "d"}) == 2


def test_request_validation():
    p = parse("a.")
    with pytest.raises(ValueError):
        SolveRequest(p, limit=-1)
    with pytest.raises(ValueError):
        SolveRequest(p, marked={"zz"})
    with pytest.raises(ValueError):
        SolveRequest(p, engine="nope")


def test_bruteforce_refuses_large_universe():
    p = Program([choice(f"x{i}") for i in range(BRUTEFORCE_MAX_ATOMS + 1)])
    with pytest.raises(UniverseTooLarge):
        answer_sets(p, engine="bruteforce")


def test_external_engine_without_command(monkeypatch):
    from aspomit.solver import SolverError
    monkeypatch.delenv("ASPOMIT_SOLVER", raising=False)
    with pytest.raises(SolverError):
        answer_sets(parse("a."), engine="external")


@given(programs())
def test_builtin_agrees_with_bruteforce(program):
    assert set(answer_sets(program)) == set(answer_sets(program, engine="bruteforce"))


@given(programs())
def test_every_answer_set_is_stable(program):
    for s in answer_sets(program):
        assert is_answer_set(program, s)


@settings(max_examples=60)
@given(programs())
def test_minimize_finds_optimum(program):
    marked = frozenset(program.atoms[::2])
    all_ = answer_sets(program)
    res = solve(SolveRequest(program, marked=marked, objective=MINIMIZE, limit=1))
    if not all_:
        assert res.answer_sets == []
    else:
        assert len(res.answer_sets[0] & marked) == min(len(s & marked) for s in all_)
        assert res.answer_sets[0] in all_
