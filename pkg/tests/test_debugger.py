import pytest

from aspomit.core import Program, fact
from aspomit.debugger import (BadOmission, MalformedTagAtom, ab_c, ap, bl, build_aux_meta,
                              build_debug_program, build_meta, debug, decode_tag,
                              extract_bad_omissions, loop_check_program, loop_info,
                              refinement_bound, split_args, tag)
from aspomit.abstraction import NotAnAbstractAnswerSet
from aspomit.fixtures import load_program
from aspomit.parser import parse
from aspomit.solver import MINIMIZE, answer_sets, first_answer_set


def texts(rules):
    return {str(r) for r in rules}


def test_tags_round_trip():
    t = tag("omittedAtomFrom", "p(1,x)", "r3")
    assert t == "__omittedAtomFrom(p(1,x),r3)"
    assert decode_tag(t) == ("omittedAtomFrom", ("p(1,x)", "r3"))
    assert split_args('f(a,"b,c"),d') == ['f(a,"b,c")', "d"]


def test_decode_rejects_user_atoms():
    with pytest.raises(MalformedTagAtom):
        decode_tag("a(1)")


def test_meta_for_negative_body():
    p = load_program("unsupported")
    r1 = p.rules[0]
    assert texts(build_meta(Program([r1]))) == {
        "c :- __ap(r1), not __ko(r1).", "__ap(r1) :- not d.", "__bl(r1) :- not not d."}


def test_meta_for_fact_has_no_blocking_rules():
    assert texts(build_meta(Program([fact("c")]))) == {"c :- __ap(r1), not __ko(r1).", "__ap(r1)."}


def test_meta_of_empty_program():
    assert build_meta(Program()) == []


def test_meta_constraint_form():
    assert "  :- __ap(r1), not __ko(r1).".strip() in texts(build_meta(parse(":- a.")))


def test_aux_meta_example():
    p = load_program("unsupported")
    out = texts(build_aux_meta(p, {"a", "d"}))
    assert {"__ko(r1).", "{c} :- __ap(r1).", "__ab_p(r1) :- __ap(r1), not c.",
            "__ko(r4).", "{b} :- __ap(r4).", "__ab_p(r4) :- __ap(r4), not b."} <= out
    assert "{b} :- __bl(r4)." in out
    assert "__ab_c(b) :- b, __bl(r4)." in out
    assert "__ko(r2)." not in out and "__ko(r3)." not in out


def test_aux_meta_full_omission():
    p = load_program("pi_ex")
    out = build_aux_meta(p, set(p.atoms))
    assert all("__ab_l(" in str(r) for r in out)
    assert len(out) == 2 * len(p.atoms)


def test_loop_facts():
    odd = loop_info(load_program("loop_odd"))
    assert {("a", "b"), ("b", "a")} <= odd.odd and not odd.positive
    pos = loop_info(load_program("loop_pos"))
    assert {("a", "b"), ("b", "a")} <= pos.positive and not pos.odd
    acyclic = loop_info(load_program("chain"))
    assert acyclic.facts() == []


@pytest.mark.parametrize("name", ["pi_ex", "pi_ex_unsat", "loop_pos", "loop_odd", "chain"])
def test_loop_facts_match_encoding(name):
    p = load_program(name)
    (model,) = answer_sets(loop_check_program(p))
    found = {a for a in model if a.startswith(("__inOddLoop(", "__inPosLoop("))}
    assert found == {r.head for r in loop_info(p).facts()}


def test_example_unsupported_support():
    p = load_program("unsupported")
    (rep,) = debug(p, {"a", "d"}, {"b"})
    assert rep.bad_omissions == {BadOmission("a", "type2")}
    tags = {a for a in rep.answer_set if a.startswith("__")}
    assert {ap(p.rules[1]), bl(p.rules[0]), bl(p.rules[2]), bl(p.rules[3]), ab_c("b")} <= tags
    assert rep.abnormalities["ab_c"] == {"b"}


def test_example_unsupported_literal():
    (rep,) = debug(load_program("unsupported"), {"a", "d"}, {"b"}, variant="literal")
    assert rep.bad_omissions == {BadOmission("a", "type2")}


@pytest.mark.parametrize("variant", ["repaired", "literal"])
def test_positive_loop_example(variant):
    reps = debug(load_program("loop_pos"), {"a"}, {"b"}, variant=variant, limit=0)
    assert any(r.bad_omissions == {BadOmission("a", "type3")} for r in reps)


@pytest.mark.parametrize("variant", ["repaired", "literal"])
def test_odd_loop_example(variant):
    reps = debug(load_program("loop_odd"), {"a", "b"}, {"c"}, variant=variant, limit=0)
    both = {BadOmission("a", "type3"), BadOmission("b", "type3")}
    assert any(r.bad_omissions == both for r in reps)


def test_repaired_odd_loop_always_names_both():
    reps = debug(load_program("loop_odd"), {"a", "b"}, {"c"}, limit=0)
    assert reps and all(r.atoms == {"a", "b"} for r in reps)


def test_literal_positive_loop_misses_a_verdict():
    # documented gap of the literal schemas: an answer set without any verdict
    reps = debug(load_program("loop_pos"), {"a"}, {"b"}, variant="literal", limit=0)
    assert any(not r.bad_omissions for r in reps)


def test_concrete_interpretation_has_clean_answer_set():
    reps = debug(load_program("pi_ex"), {"b", "d"}, {"c", "a"}, limit=0)
    assert any(not r.bad_omissions for r in reps)


def test_unsat_program_total_omission():
    p = load_program("pi_ex_unsat")
    reps = debug(p, set(p.atoms), set(), limit=0)
    assert reps and all(r.bad_omissions for r in reps)


def test_debug_program_agrees_with_interpretation():
    p = load_program("unsupported")
    prog = build_debug_program(p, {"a", "d"}, {"b"})
    for s in answer_sets(prog):
        assert s & {"b", "c"} == {"b"}


def test_debug_requires_abstract_answer_set():
    with pytest.raises(NotAnAbstractAnswerSet):
        debug(load_program("pi_ex"), {"b", "d"}, {"a"})


def test_minimize_objective_picks_fewest_badomits():
    (rep,) = debug(load_program("unsupported"), {"a", "d"}, {"b"}, objective=MINIMIZE)
    assert len(rep.bad_omissions) == 1


def test_type4_instances():
    p = load_program("chain")
    assert not any("type4" in str(r) for r in build_debug_program(p, {"a", "d"}, {"c"}))
    prog = build_debug_program(p, {"a", "d"}, {"c"}, type4=True)
    assert any("type4" in str(r) for r in prog)
    reps = debug(p, {"a", "d"}, {"c"}, type4=True, limit=0)
    assert any(BadOmission("a", "type4") in r.bad_omissions for r in reps)


def test_extract_bad_omissions():
    assert extract_bad_omissions({"x", "__badomit(p(1),type3)"}) == {BadOmission("p(1)", "type3")}
    assert extract_bad_omissions({"x"}) == frozenset()
    with pytest.raises(MalformedTagAtom):
        extract_bad_omissions({"__badomit(a,type9)"})


def test_refinement_bound():
    assert refinement_bound(load_program("pi_ex"), set()) == 0
    assert refinement_bound(load_program("chain"), {"a", "d"}) == 2
    assert refinement_bound(load_program("pi_ex"), {"b", "d"}) == 2
