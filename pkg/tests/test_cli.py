import io
import json

import pytest

from aspomit.cli import main
from aspomit.fixtures import golden


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_canonical(capsys, monkeypatch):
    code, out, _ = run(capsys, "parse", "-", stdin="a:-b,not c.", monkeypatch=monkeypatch)
    assert code == 0 and out == "a :- b, not c.\n"


def test_parse_error_exit_code(capsys, monkeypatch):
    code, _, err = run(capsys, "parse", "-", stdin="a :- b", monkeypatch=monkeypatch)
    assert code == 2 and "parse error: 1:" in err


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "solve", "fixture:nope")[0] == 1
    assert run(capsys, "solve", "fixture:pi_ex", "--bogus")[0] == 1


def test_solve(capsys):
    code, out, _ = run(capsys, "solve", "fixture:pi_ex")
    assert code == 0
    assert out.splitlines() == ["Answer 1: {d, b}", "Answer 2: {c, a}", "SATISFIABLE"]


def test_solve_json(capsys):
    code, out, _ = run(capsys, "--json", "solve", "fixture:pi_ex_unsat")
    assert json.loads(out) == {"answerSets": [], "satisfiable": False, "exhausted": True}


def test_omit_matches_golden(capsys, tmp_path):
    target = tmp_path / "abs.lp"
    code, out, _ = run(capsys, "omit", "fixture:pi_ex", "--omit", "b d", "--emit-program",
                       str(target))
    assert code == 0 and out.rstrip("\n") == golden("pi_ex.omit_b_d")
    assert target.read_text().rstrip("\n") == golden("pi_ex.omit_b_d")


def test_omit_file(capsys, tmp_path):
    f = tmp_path / "A.txt"
    f.write_text("a\nc\n")
    code, out, _ = run(capsys, "omit", "fixture:pi_ex", "--omit-file", str(f))
    assert out.rstrip("\n") == golden("pi_ex.omit_a_c")


def test_check_spurious_and_concrete(capsys):
    code, out, _ = run(capsys, "check", "fixture:unsupported", "--omit", "a d", "--interp", "b")
    assert code == 0 and out.splitlines() == ["spurious", "badomits: badomit(a,type2)"]
    code, out, _ = run(capsys, "check", "fixture:pi_ex", "--omit", "b d", "--interp", "c a")
    assert out.splitlines() == ["concrete", "witness: {c, a}"]


def test_check_json(capsys):
    code, out, _ = run(capsys, "check", "--json", "fixture:pi_ex", "--omit", "b d",
                       "--interp", "")
    assert json.loads(out) == {"verdict": "concrete", "witness": ["b", "d"]}


def test_check_rejects_non_answer_set(capsys):
    code, _, err = run(capsys, "check", "fixture:pi_ex", "--omit", "b d", "--interp", "a")
    assert code == 4


def test_debugprog_reparses(capsys):
    from aspomit.parser import parse
    code, out, _ = run(capsys, "debugprog", "fixture:unsupported", "--omit", "a d",
                       "--interp", "b")
    assert code == 0
    assert len(parse(out, allow_generated=True)) > 0


def test_absref_trace(capsys, tmp_path):
    trace = tmp_path / "trace.json"
    code, out, _ = run(capsys, "absref", "fixture:pi_ex_unsat", "--omit", "a b c d",
                       "--trace", str(trace))
    assert code == 0 and out.splitlines()[0] == "outcome: unsat"
    assert json.loads(trace.read_text())["iterations"][0]["putBack"] == ["b"]


def test_absref_json_is_deterministic(capsys):
    argv = ("absref", "--json", "fixture:fig1a", "--omit",
            " ".join(f"colored({n})" for n in range(1, 10)))
    first = run(capsys, *argv)[1]
    assert first == run(capsys, *argv)[1]
    assert json.loads(first)["iterations"][-1]["verdict"] == "unsat"


def test_putback(capsys):
    code, out, _ = run(capsys, "putback", "fixture:pi_ex", "--omit", "b d", "--interp", "c")
    assert code == 0 and out.strip() == "{d, b}"
    assert run(capsys, "putback", "fixture:pi_ex", "--omit", "b d", "--interp", "c a")[0] == 4


def test_blocker_top_down(capsys):
    code, out, _ = run(capsys, "blocker", "fixture:pi_ex_unsat", "--rules")
    assert code == 0
    assert out.splitlines() == ["blocker: {b}", "size: 1/4", "minimal: yes", "",
                                "b :- not b."]


def test_blocker_on_satisfiable_program(capsys):
    assert run(capsys, "blocker", "fixture:pi_ex")[0] == 4


def test_blocker_fig1a_rules(capsys):
    from aspomit.parser import parse
    code, out, _ = run(capsys, "blocker", "--json", "fixture:fig1a")
    data = json.loads(out)
    assert data["size"] == 9 and data["minimal"]
    assert parse(data["blockerRules"]).same_rules(parse(golden("fig1a.blocker")), ordered=False)


def test_blocker_bottom_up(capsys):
    code, out, _ = run(capsys, "blocker", "--json", "fixture:fig1a", "--bottom-up", "50",
                       "--seed", "2")
    data = json.loads(out)
    assert code == 0 and data["size"] == 9 and "refinements" in data


def test_gen_gc(capsys, tmp_path):
    groups = tmp_path / "g.json"
    code, out, _ = run(capsys, "gen-gc", "--fixture", "fig1a", "--groups", str(groups))
    assert code == 0 and len(out.splitlines()) == 78
    assert json.loads(groups.read_text())["3"][-1] == "colored(3)"
    assert run(capsys, "gen-gc")[0] == 1


def test_gen_gc_random_deterministic(capsys):
    a = run(capsys, "gen-gc", "--random", "8", "--colors", "3", "--seed", "4")[1]
    assert a == run(capsys, "gen-gc", "--random", "8", "--colors", "3", "--seed", "4")[1]


def test_bench_cli(capsys, tmp_path):
    dest = tmp_path / "bench.csv"
    code, _, _ = run(capsys, "bench", "--fixture", "fig1a", "--modes", "topdown,bottomup:50",
                     "--out", str(dest))
    lines = dest.read_text().splitlines()
    assert code == 0
    assert lines[0] == "instance,mode,atoms,init_ratio,final_ratio,refs,t_absref,blocker_ratio,t_blocker,error"
    assert len(lines) == 3
    assert lines[1].startswith("fig1a,topdown,27,")


def test_bench_empty(capsys):
    code, out, _ = run(capsys, "bench", "--modes", "topdown")
    assert code == 0 and out.splitlines() == [
        "instance,mode,atoms,init_ratio,final_ratio,refs,t_absref,blocker_ratio,t_blocker,error"]


def test_disjunctive_input_is_split(capsys, monkeypatch):
    code, out, _ = run(capsys, "parse", "-", stdin="a | b.", monkeypatch=monkeypatch)
    assert out.splitlines() == ["{a}.", "{b}."]
