"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 parse error, 3 solver error,
4 precondition violation.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import fixtures
from .abstraction import (NotAnAbstractAnswerSet, classify, omit_program,
                          split_disjunctive)
from .bench import BenchInstance, Mode, run_bench, to_csv
from .coloring import (InvalidInstance, ground_coloring, parse_graph,
                       random_uncolorable)
from .core import HeadKind, OmissionSet, Program
from .debugger import build_debug_program, debug
from .driver import (OBJECTIVES, IterationLimitExceeded, PreconditionViolation,
                     abs_ref, bottom_up_blocker, compute_min_blocker, minimal_put_back,
                     verify_blocker)
from .parser import ParseError, parse, parse_atom, parse_omission, serialize, serialize_omission
from .solver import (MINIMIZE, NO_OBJECTIVE, SolveRequest, SolverError, bound, solve)

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_SOLVER, EXIT_PRECONDITION = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- input helpers ------------------------------------------------------------------

def read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text("utf-8")


def load_program(path: str) -> Program:
    """A file path, ``-`` for stdin, or ``fixture:<name>`` for a bundled program."""
    if path.startswith("fixture:"):
        name = path.split(":", 1)[1]
        if name in fixtures.GRAPHS:
            return ground_coloring(fixtures.load_graph(name))[0]
        try:
            return fixtures.load_program(name)
        except KeyError as e:
            raise UsageError(str(e.args[0])) from None
    program = parse(read_text(path))
    if any(r.kind is HeadKind.DISJUNCTION for r in program.rules):
        program = split_disjunctive(program)
    return program


def atoms_arg(text: Optional[str]) -> list[str]:
    return [parse_atom(t) for t in (text or "").split()]


def load_omission(args) -> OmissionSet:
    atoms = set(atoms_arg(args.omit))
    if args.omit_file:
        atoms |= parse_omission(read_text(args.omit_file)).omitted
    return OmissionSet(frozenset(atoms))


def load_interp(args) -> frozenset[str]:
    atoms = set(atoms_arg(args.interp))
    if getattr(args, "interp_file", None):
        atoms |= parse_omission(read_text(args.interp_file)).omitted
    return frozenset(atoms)


def fmt_set(atoms, program: Optional[Program] = None) -> str:
    if program is not None:
        index = {a: i for i, a in enumerate(program.atoms)}
        ordered = sorted(atoms, key=lambda a: (index.get(a, len(index)), a))
    else:
        ordered = sorted(atoms)
    return "{" + ", ".join(ordered) + "}"


def emit(args, program: Program):
    if getattr(args, "emit_program", None):
        Path(args.emit_program).write_text(serialize(program) + "\n", "utf-8")


def out(args, text: str = "", data=None):
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


# -- verbs --------------------------------------------------------------------------

def cmd_parse(args) -> int:
    program = load_program(args.program)
    text = serialize(program, args.style)
    out(args, text, {"rules": len(program.rules), "atoms": list(program.atoms),
                     "program": serialize(program)})
    return EXIT_OK


def cmd_solve(args) -> int:
    program = load_program(args.program)
    marked = frozenset(atoms_arg(args.marked))
    if args.bound is not None:
        objective = bound(args.bound)
    elif args.minimize:
        objective = MINIMIZE
    else:
        objective = NO_OBJECTIVE
    result = solve(SolveRequest(program, limit=args.limit, marked=marked, objective=objective,
                                engine=args.engine))
    lines = [f"Answer {i}: {fmt_set(s, program)}" for i, s in enumerate(result.answer_sets, 1)]
    lines.append("SATISFIABLE" if result.answer_sets else "UNSATISFIABLE")
    out(args, "\n".join(lines), {
        "answerSets": [sorted(s) for s in result.answer_sets],
        "satisfiable": bool(result.answer_sets), "exhausted": result.exhausted})
    return EXIT_OK


def cmd_omit(args) -> int:
    program = load_program(args.program)
    outcome = omit_program(program, load_omission(args))
    emit(args, outcome.abstract)
    text = serialize(outcome.abstract, args.style)
    out(args, text, {"program": serialize(outcome.abstract),
                     "kept": list(outcome.abstract.atoms),
                     "changed": sorted(program.rules[i].name for i in outcome.changed_rules),
                     "omitted": sorted(program.rules[i].name for i in outcome.omitted_rules)})
    return EXIT_OK


def cmd_check(args) -> int:
    program = load_program(args.program)
    A = load_omission(args)
    I = load_interp(args)
    verdict = classify(program, A, I)
    data = {"verdict": verdict.verdict}
    lines = [verdict.verdict]
    if verdict.spurious:
        reports = debug(program, A, I, objective=MINIMIZE, type4=args.type4,
                        variant=args.variant)
        bad = sorted(reports[0].bad_omissions) if reports else []
        data["badomits"] = [{"atom": b.atom, "type": b.type} for b in bad]
        lines.append("badomits: " + " ".join(str(b) for b in bad))
    else:
        data["witness"] = sorted(verdict.witness)
        lines.append("witness: " + fmt_set(verdict.witness, program))
    out(args, "\n".join(lines), data)
    return EXIT_OK


def cmd_debugprog(args) -> int:
    program = load_program(args.program)
    dbg = build_debug_program(program, load_omission(args), load_interp(args),
                              type4=args.type4, variant=args.variant)
    emit(args, dbg)
    out(args, serialize(dbg), {"program": serialize(dbg), "atoms": len(dbg.atoms)})
    return EXIT_OK


def cmd_absref(args) -> int:
    program = load_program(args.program)
    result = abs_ref(program, load_omission(args), objective=args.objective, type4=args.type4,
                     variant=args.variant, max_iterations=args.max_iterations)
    emit(args, result.final_program)
    if args.trace:
        Path(args.trace).write_text(result.trace_json() + "\n", "utf-8")
    if args.json:
        print(result.trace_json())
        return EXIT_OK
    lines = [f"outcome: {result.outcome}",
             f"refinements: {result.refinement_steps}",
             f"omitted: {fmt_set(result.final_omission, program)}"]
    if result.outcome == "concrete":
        lines.append(f"abstract answer set: {fmt_set(result.abstract_witness, program)}")
        lines.append(f"answer set: {fmt_set(result.concrete_witness, program)}")
    print("\n".join(lines))
    return EXIT_OK


def cmd_putback(args) -> int:
    program = load_program(args.program)
    pb = minimal_put_back(program, load_omission(args), load_interp(args))
    out(args, fmt_set(pb, program), {"putBack": sorted(pb)})
    return EXIT_OK


def cmd_blocker(args) -> int:
    program = load_program(args.program)
    if args.bottom_up is not None:
        groups = None
        if args.program.startswith("fixture:") and args.program[8:] in fixtures.GRAPHS:
            groups = ground_coloring(fixtures.load_graph(args.program[8:]))[1]
        res = bottom_up_blocker(program, args.bottom_up, args.strategy, args.seed, groups,
                                objective=args.objective, type4=args.type4,
                                variant=args.variant, order=args.order)
    else:
        res = compute_min_blocker(program, load_omission(args), order=args.order)
    emit(args, res.blocker_rules)
    check = verify_blocker(program, res.blocker, check_minimal=True)
    data = {"blocker": sorted(res.blocker), "size": len(res.blocker),
            "atoms": len(program.atoms), "minimal": check.is_minimal,
            "blockerRules": serialize(res.blocker_rules)}
    if res.absref is not None:
        data["refinements"] = res.absref.refinement_steps
    lines = [f"blocker: {fmt_set(res.blocker, program)}",
             f"size: {len(res.blocker)}/{len(program.atoms)}",
             f"minimal: {'yes' if check.is_minimal else 'no'}"]
    if args.rules:
        lines += ["", serialize(res.blocker_rules)]
    out(args, "\n".join(lines), data)
    return EXIT_OK


def _graph(args):
    if args.fixture:
        g = fixtures.load_graph(args.fixture)
    elif args.graph:
        g = parse_graph(read_text(args.graph), name=Path(args.graph).stem)
    elif args.random is not None:
        g = random_uncolorable(args.random, args.colors or 3, args.seed)
    else:
        raise UsageError("give one of --fixture, --graph or --random")
    if args.colors:
        g = g.with_colors(args.colors)
    return g


def cmd_gen_gc(args) -> int:
    g = _graph(args)
    program, groups = ground_coloring(g)
    emit(args, program)
    if args.groups:
        Path(args.groups).write_text(json.dumps(groups, indent=2) + "\n", "utf-8")
    out(args, serialize(program), {"program": serialize(program), "groups": groups,
                                   "nodes": g.nodes, "edges": [list(e) for e in g.edges],
                                   "colors": g.colors})
    return EXIT_OK


def bench_instances(args) -> list[BenchInstance]:
    insts = []
    for name in args.fixture or []:
        g = fixtures.load_graph(name)
        program, groups = ground_coloring(g)
        insts.append(BenchInstance(name, program, groups))
    for path in args.graph or []:
        g = parse_graph(read_text(path), name=Path(path).stem)
        program, groups = ground_coloring(g)
        insts.append(BenchInstance(g.name, program, groups))
    for path in args.program or []:
        insts.append(BenchInstance(Path(path).stem, load_program(path)))
    for i in range(args.generated):
        nodes = 8 + i % 3
        g = random_uncolorable(nodes, args.colors, args.seed + i)
        program, groups = ground_coloring(g)
        insts.append(BenchInstance(g.name, program, groups))
    return insts


def cmd_bench(args) -> int:
    modes = [Mode.parse(m) for m in args.modes.split(",") if m]
    seeds = list(range(args.seed, args.seed + args.runs))
    rows = run_bench(bench_instances(args), modes, seeds, args.objective, jobs=args.jobs)
    text = to_csv(rows)
    if args.out:
        Path(args.out).write_text(text, "utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK if not any(r.error for r in rows) else EXIT_SOLVER


# -- argument parsing ------------------------------------------------------------------

def _omission_flags(p):
    p.add_argument("--omit", metavar="ATOMS", help="whitespace-separated atoms to omit")
    p.add_argument("--omit-file", metavar="FILE", help="omission file, one atom per line")


def _interp_flags(p):
    p.add_argument("--interp", metavar="ATOMS", default="",
                   help="whitespace-separated atoms of the abstract answer set")
    p.add_argument("--interp-file", metavar="FILE")


def _debug_flags(p):
    p.add_argument("--type4", action="store_true", help="enable the type4 propagation rule")
    p.add_argument("--variant", choices=("repaired", "literal"), default="repaired")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="aspomit", description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def verb(name, func, help_, program=True):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        if program:
            p.add_argument("program", help="program file, '-' for stdin, or fixture:<name>")
        p.set_defaults(func=func)
        return p

    p = verb("parse", cmd_parse, "parse and print a program in canonical form")
    p.add_argument("--style", choices=("canonical", "annotated"), default="canonical")

    p = verb("solve", cmd_solve, "enumerate answer sets")
    p.add_argument("--limit", type=int, default=0, help="maximum answer sets (0 = all)")
    p.add_argument("--engine", choices=("builtin", "bruteforce", "external"), default="builtin")
    p.add_argument("--marked", metavar="ATOMS", help="atoms counted by --bound/--minimize")
    p.add_argument("--bound", type=int, help="at most K marked atoms true")
    p.add_argument("--minimize", action="store_true")

    p = verb("omit", cmd_omit, "print the abstraction omitting the given atoms")
    _omission_flags(p)
    p.add_argument("--style", choices=("canonical", "annotated"), default="canonical")
    p.add_argument("--emit-program", metavar="FILE")

    p = verb("check", cmd_check, "classify an abstract answer set as concrete or spurious")
    _omission_flags(p)
    _interp_flags(p)
    _debug_flags(p)

    p = verb("debugprog", cmd_debugprog, "dump the debug program for an abstract answer set")
    _omission_flags(p)
    _interp_flags(p)
    _debug_flags(p)
    p.add_argument("--emit-program", metavar="FILE")

    p = verb("absref", cmd_absref, "abstraction refinement until unsat or concrete")
    _omission_flags(p)
    _debug_flags(p)
    p.add_argument("--objective", choices=OBJECTIVES, default="half")
    p.add_argument("--max-iterations", type=int)
    p.add_argument("--trace", metavar="FILE", help="write the JSON trace here")
    p.add_argument("--emit-program", metavar="FILE")

    p = verb("putback", cmd_putback, "minimal put-back set for a spurious answer set")
    _omission_flags(p)
    _interp_flags(p)

    p = verb("blocker", cmd_blocker, "minimal blocker set of an unsatisfiable program")
    _omission_flags(p)
    _debug_flags(p)
    p.add_argument("--order", default="input", help="input | least-occurring | seed:N")
    p.add_argument("--bottom-up", type=float, metavar="PERCENT",
                   help="start from a random omission of PERCENT%% of the objects")
    p.add_argument("--strategy", choices=("random", "least-occurring"), default="random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--objective", choices=OBJECTIVES, default="half")
    p.add_argument("--rules", action="store_true", help="also print the blocker rule set")
    p.add_argument("--emit-program", metavar="FILE")

    p = verb("gen-gc", cmd_gen_gc, "ground graph-coloring program", program=False)
    p.add_argument("--fixture", choices=fixtures.GRAPHS)
    p.add_argument("--graph", metavar="FILE", help="'<nodes> <colors>' then 'u v' lines")
    p.add_argument("--random", type=int, metavar="NODES",
                   help="random graph that is not colorable with --colors colors")
    p.add_argument("--colors", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--groups", metavar="FILE", help="write the node -> atoms map as JSON")
    p.add_argument("--emit-program", metavar="FILE")

    p = verb("bench", cmd_bench, "blocker benchmark, CSV output", program=False)
    p.add_argument("--fixture", action="append", choices=fixtures.GRAPHS)
    p.add_argument("--graph", action="append", metavar="FILE")
    p.add_argument("--program", action="append", metavar="FILE")
    p.add_argument("--generated", type=int, default=0, help="add N random 8-10 node graphs")
    p.add_argument("--colors", type=int, default=3, help="colors for generated graphs")
    p.add_argument("--modes", default="topdown,bottomup:50,bottomup:100")
    p.add_argument("--runs", type=int, default=1, help="seeds per bottom-up mode")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--objective", choices=OBJECTIVES, default="half")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", metavar="FILE")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:  # argparse reports usage errors (and --help) this way
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        print(f"aspomit: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, InvalidInstance) as e:
        print(f"aspomit: parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (PreconditionViolation, NotAnAbstractAnswerSet) as e:
        print(f"aspomit: precondition violated: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (SolverError, IterationLimitExceeded) as e:
        print(f"aspomit: solver error: {e}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as e:
        print(f"aspomit: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
