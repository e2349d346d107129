"""Tagged meta-program for explaining why an abstract answer set is spurious.

For a program Π, omitted atoms A and an abstract answer set Î the debug
program is::

    meta(Π) ∪ aux(Π, A) ∪ badomit(Π, A, Î) ∪ query(Î)

Its answer sets agree with Î on the kept atoms.  Abnormality atoms
(``ab_p``, ``ab_c``, ``ab_l``) absorb conflicts and ``badomit(α, type)``
atoms name the omitted atoms responsible for them.

Two variants of the bad-omission layer exist:

* ``"literal"`` follows the published rule schemas exactly.
* ``"repaired"`` (default) closes two gaps of the literal schemas: a
  loop abnormality on an atom whose own rules lose no body atom produces
  no verdict, and the ``someFaulty`` guard can make the debug program
  unsatisfiable when an unfounded loop of kept atoms was externally
  supported only through a weakened rule.  It derives ``badomit(X, type3)``
  for every abnormal omitted atom X, derives type3 verdicts from any
  ``ab_l`` atom (not only ``faulty`` ones) and guards ``ab_l`` with
  ``someBadomit`` instead of ``someFaulty``.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .abstraction import (AbstractionOutcome, build_query, check_abstract_answer_set,
                          omit_program)
from .core import (GENERATED_PREFIX, HeadKind, Literal, OmissionSet, Program, Rule, Sign,
                   as_omission, dependency_graphs, fact, neg, negneg, pos)
from .solver import NO_OBJECTIVE, Objective, SolveRequest, SolveResult, solve

BADOMIT_TYPES = ("type1", "type2", "type3", "type4")
VARIANTS = ("repaired", "literal")


class MalformedTagAtom(ValueError):
    pass


# -- tag atoms ---------------------------------------------------------------

def tag(kind: str, *args: str) -> str:
    if not args:
        return f"{GENERATED_PREFIX}{kind}"
    return f"{GENERATED_PREFIX}{kind}({','.join(args)})"


def split_args(text: str) -> list[str]:
    """Split on commas at parenthesis depth zero."""
    out, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise MalformedTagAtom(f"unbalanced parentheses in {text!r}")
        elif ch == "," and depth == 0:
            out.append(text[start:i])
            start = i + 1
    if depth:
        raise MalformedTagAtom(f"unbalanced parentheses in {text!r}")
    out.append(text[start:])
    return out


def decode_tag(atom: str) -> tuple[str, tuple[str, ...]]:
    if not atom.startswith(GENERATED_PREFIX):
        raise MalformedTagAtom(f"{atom!r} is not a tag atom")
    body = atom[len(GENERATED_PREFIX):]
    if "(" not in body:
        return body, ()
    if not body.endswith(")"):
        raise MalformedTagAtom(f"malformed tag atom {atom!r}")
    kind, rest = body.split("(", 1)
    return kind, tuple(split_args(rest[:-1]))


def ap(r: Rule) -> str:
    return tag("ap", r.name)


def bl(r: Rule) -> str:
    return tag("bl", r.name)


def ko(r: Rule) -> str:
    return tag("ko", r.name)


def ab_p(r: Rule) -> str:
    return tag("ab_p", r.name)


def ab_c(atom: str) -> str:
    return tag("ab_c", atom)


def ab_l(atom: str) -> str:
    return tag("ab_l", atom)


def badomit(atom: str, kind: str) -> str:
    return tag("badomit", atom, kind)


# -- meta layers ---------------------------------------------------------------

def _head_rule(kind: HeadKind, head: Optional[str], *body) -> Rule:
    lits = tuple(l if isinstance(l, Literal) else pos(l) for l in body)
    return Rule(kind, (head,) if head is not None else (), lits)


def build_meta(program: Program) -> list[Rule]:
    """Applicability/blocking tags for every rule.

    Choice rules keep their choice head; constraints become
    ``:- ap(r), not ko(r)`` so that only rules relaxed by the auxiliary
    layer may be violated.
    """
    out: list[Rule] = []
    for r in program.rules:
        if r.kind is HeadKind.DISJUNCTION:
            raise ValueError("split disjunctive rules first")
        out.append(_head_rule(r.kind, r.head, ap(r), neg(ko(r))))
        out.append(Rule(HeadKind.PLAIN, (ap(r),), r.body))
        for l in r.body:
            if l.sign is Sign.POS:
                out.append(Rule(HeadKind.PLAIN, (bl(r),), (neg(l.atom),)))
            elif l.sign is Sign.NEG:
                out.append(Rule(HeadKind.PLAIN, (bl(r),), (negneg(l.atom),)))
            else:
                out.append(Rule(HeadKind.PLAIN, (bl(r),), (neg(l.atom),)))
    return out


def build_aux_meta(program: Program, omission) -> list[Rule]:
    """Rule relaxation, unsupportedness and loop abnormality layers."""
    A = as_omission(omission)
    out: list[Rule] = []
    for r in program.rules:
        if not (r.body_atoms & A.omitted) or r.head in A:
            continue
        out.append(fact(ko(r)))
        if r.kind is HeadKind.BOTTOM:
            out.append(Rule(HeadKind.PLAIN, (ab_p(r),), (pos(ap(r)),)))
            continue
        out.append(Rule(HeadKind.CHOICE, (r.head,), (pos(ap(r)),)))
        if r.kind is HeadKind.PLAIN:
            out.append(Rule(HeadKind.PLAIN, (ab_p(r),), (pos(ap(r)), neg(r.head))))
    defs = program.defs()
    for a in program.atoms:
        if a in A:
            continue
        blocked = tuple(pos(bl(r)) for r in defs.get(a, ()))
        out.append(Rule(HeadKind.CHOICE, (a,), blocked))
        out.append(Rule(HeadKind.PLAIN, (ab_c(a),), (pos(a),) + blocked))
    for a in program.atoms:
        out.append(Rule(HeadKind.CHOICE, (ab_l(a),), (neg(ab_c(a)),)))
        out.append(Rule(HeadKind.PLAIN, (a,), (pos(ab_l(a)),)))
    return out


# -- loops ----------------------------------------------------------------------

def _closure(succ: dict[str, set[tuple[str, int]]], start: str) -> set[tuple[str, int]]:
    """Nodes reachable from ``start`` by paths of length >= 1, with parity."""
    seen: set[tuple[str, int]] = set()
    stack = [(v, p) for v, p in succ.get(start, ())]
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        v, p = node
        for w, q in succ.get(v, ()):
            nxt = (w, p ^ q)
            if nxt not in seen:
                stack.append(nxt)
    return seen


@dataclass(frozen=True)
class LoopInfo:
    odd: frozenset[tuple[str, str]]  # inOddLoop pairs
    positive: frozenset[tuple[str, str]]  # inPosLoop pairs

    def facts(self) -> list[Rule]:
        return ([fact(tag("inOddLoop", x, y)) for x, y in sorted(self.odd)]
                + [fact(tag("inPosLoop", x, y)) for x, y in sorted(self.positive)])


def loop_info(program: Program) -> LoopInfo:
    g = dependency_graphs(program)
    signed: dict[str, set[tuple[str, int]]] = defaultdict(set)
    positive: dict[str, set[tuple[str, int]]] = defaultdict(set)
    for u, v in g.positive:
        signed[u].add((v, 0))
        positive[u].add((v, 0))
    for u, v in g.negative:
        signed[u].add((v, 1))
    reach = {x: _closure(signed, x) for x in signed}
    odd = set()
    for x, rx in reach.items():
        for y, parity in rx:
            if parity == 1 and (x, 0) in reach.get(y, ()):
                odd.add((x, y))
    dep = {x: {y for y, _ in _closure(positive, x)} for x in positive}
    pos_loop = {(x, y) for x, ys in dep.items() for y in ys if x in dep.get(y, ())}
    return LoopInfo(frozenset(odd), frozenset(pos_loop))


def loop_facts(program: Program) -> list[Rule]:
    return loop_info(program).facts()


def loop_check_program(program: Program) -> Program:
    """Ground instance of the parity/positive-dependency loop encoding.

    Used to cross-check :func:`loop_facts` with the solver.  Instances are
    generated only for edges that exist, with Z ranging over all atoms.
    """
    rules: list[Rule] = []
    atoms = program.atoms
    pedges, nedges = set(), set()
    for r in program.rules:
        if r.head is None:
            continue
        rules.append(fact(tag("head", r.name, r.head)))
        for l in r.body:
            kind = "posBody" if l.sign is Sign.POS else "negBody"
            rules.append(fact(tag(kind, r.name, l.atom)))
            edge = "posEdge" if l.sign is Sign.POS else "negEdge"
            rules.append(Rule(HeadKind.PLAIN, (tag(edge, r.head, l.atom),),
                              (pos(tag("head", r.name, r.head)), pos(tag(kind, r.name, l.atom)))))
            (pedges if l.sign is Sign.POS else nedges).add((r.head, l.atom))
    rules += [fact(tag("atom", z)) for z in atoms]

    def R(head, *body):
        rules.append(Rule(HeadKind.PLAIN, (head,), tuple(pos(b) for b in body)))

    for x, y in sorted(pedges):
        R(tag("even", x, y), tag("posEdge", x, y))
        R(tag("posDep", x, y), tag("posEdge", x, y))
        for z in atoms:
            R(tag("even", x, z), tag("posEdge", x, y), tag("even", y, z), tag("atom", z))
            R(tag("odd", x, z), tag("posEdge", x, y), tag("odd", y, z), tag("atom", z))
            R(tag("posDep", x, z), tag("posEdge", x, y), tag("posDep", y, z), tag("atom", z))
    for x, y in sorted(nedges):
        R(tag("odd", x, y), tag("negEdge", x, y))
        for z in atoms:
            R(tag("odd", x, z), tag("negEdge", x, y), tag("even", y, z), tag("atom", z))
            R(tag("even", x, z), tag("negEdge", x, y), tag("odd", y, z), tag("atom", z))
    for x in atoms:
        for y in atoms:
            R(tag("inOddLoop", x, y), tag("odd", x, y), tag("even", y, x))
            R(tag("inPosLoop", x, y), tag("posDep", x, y), tag("posDep", y, x))
    return Program(rules)


# -- bad omissions ---------------------------------------------------------------

@dataclass(frozen=True, order=True)
class BadOmission:
    atom: str
    type: str

    def __str__(self) -> str:
        return f"badomit({self.atom},{self.type})"


def _applicable_abstractly(r: Rule, A: OmissionSet, interp: frozenset[str]) -> bool:
    return all(l.holds(interp) for l in r.body if l.atom not in A)


def build_badomit(program: Program, omission, interp: Iterable[str], *,
                  type4: bool = False, variant: str = "repaired",
                  outcome: Optional[AbstractionOutcome] = None) -> list[Rule]:
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    A = as_omission(omission)
    I = frozenset(interp)
    if outcome is None:
        check_abstract_answer_set(program, A, I)
        outcome = omit_program(program, A)
    out: list[Rule] = []
    head = {r.name: r.head for r in program.rules if r.head is not None}
    changed = {program.rules[i].name for i in outcome.changed_rules}
    omitted = {program.rules[i].name for i in outcome.omitted_rules}
    modified = changed | omitted
    removed_from = {r.name: [l.atom for l in r.body if l.atom in A] for r in program.rules}
    removed_from = {n: list(dict.fromkeys(v)) for n, v in removed_from.items()}
    omitted_atoms = list(dict.fromkeys(a for v in removed_from.values() for a in v))
    abs_ap = {r.name for r in program.rules if _applicable_abstractly(r, A, I)}

    # facts
    out += [fact(tag("head", n, h)) for n, h in head.items()]
    out += [fact(tag("omitted", n)) for n in sorted(omitted, key=_rule_order(program))]
    out += [fact(tag("changed", n)) for n in sorted(changed, key=_rule_order(program))]
    out += [fact(tag("modified", n)) for n in sorted(modified, key=_rule_order(program))]
    out += [fact(tag("omittedAtom", a)) for a in omitted_atoms]
    out += [fact(tag("omittedAtomFrom", a, n)) for n, v in removed_from.items() for a in v]
    out += [fact(tag("absAp", r.name)) for r in program.rules if r.name in abs_ap]
    loops = loop_info(program)
    out += loops.facts()

    def R(h, *body):
        out.append(Rule(HeadKind.PLAIN, (h,), tuple(pos(b) for b in body)))

    possible: set[str] = set()
    by_head: dict[str, list[str]] = defaultdict(list)
    for r in program.rules:
        if r.head is not None and r.name in modified and r.name in abs_ap:
            by_head[r.head].append(r.name)

    # type1: a relaxed rule is violated although abstractly applicable
    for r in program.rules:
        n = r.name
        if n in modified and n in abs_ap and r.kind is not HeadKind.CHOICE and r.head not in A:
            for x in removed_from[n]:
                R(badomit(x, "type1"), ab_p(r), tag("absAp", n), tag("modified", n),
                  tag("omittedAtomFrom", x, n))
                possible.add(badomit(x, "type1"))
    # type2: a kept atom is unsupported although a weakened rule applies abstractly
    for r in program.rules:
        n = r.name
        if n in changed and n in abs_ap:
            for x in removed_from[n]:
                R(badomit(x, "type2"), tag("head", n, r.head), ab_c(r.head), tag("absAp", n),
                  tag("changed", n), tag("omittedAtomFrom", x, n))
                possible.add(badomit(x, "type2"))
    # type3: loop behaviour hidden by the omission
    omitted_set = set(omitted_atoms)
    can_fault = []
    for x in program.atoms:
        partners = [y for kind, pairs in (("inOddLoop", loops.odd), ("inPosLoop", loops.positive))
                    for y in [b for a, b in sorted(pairs) if a == x] if y in omitted_set]
        if not partners:
            continue
        can_fault.append(x)
        for kind, pairs in (("inOddLoop", loops.odd), ("inPosLoop", loops.positive)):
            for a, y in sorted(pairs):
                if a == x and y in omitted_set:
                    R(tag("faulty", x), ab_l(x), tag(kind, x, y), tag("omittedAtom", y))
    trigger = (lambda x: tag("faulty", x)) if variant == "literal" else ab_l
    sources = can_fault if variant == "literal" else list(program.atoms)
    for x in sources:
        for n in by_head.get(x, ()):
            for x1 in removed_from[n]:
                R(badomit(x1, "type3"), trigger(x), tag("head", n, x), tag("modified", n),
                  tag("absAp", n), tag("omittedAtomFrom", x1, n))
                possible.add(badomit(x1, "type3"))
    if variant == "repaired":
        for x in program.atoms:
            if x in A:
                R(badomit(x, "type3"), ab_l(x))
                possible.add(badomit(x, "type3"))
    for x in can_fault:
        R(tag("someFaulty"), tag("faulty", x))
    # type4: propagate through omitted rules whose head is already a bad omission
    if type4:
        changed_flag = True
        while changed_flag:
            changed_flag = False
            for r in program.rules:
                n = r.name
                if n not in omitted or n not in abs_ap or r.head is None:
                    continue
                for t in BADOMIT_TYPES:
                    if badomit(r.head, t) not in possible:
                        continue
                    for x2 in removed_from[n]:
                        rule_ = Rule(HeadKind.PLAIN, (badomit(x2, "type4"),),
                                     tuple(pos(b) for b in (tag("omitted", n),
                                                            tag("head", n, r.head),
                                                            tag("absAp", n), badomit(r.head, t),
                                                            tag("omittedAtomFrom", x2, n))))
                        if rule_ not in out:
                            out.append(rule_)
                            changed_flag = True
                        possible.add(badomit(x2, "type4"))
    # guard on loop abnormalities
    if variant == "literal":
        for x in program.atoms:
            out.append(Rule(HeadKind.BOTTOM, (), (pos(ab_l(x)), neg(tag("someFaulty")))))
    else:
        for b in sorted(possible):
            R(tag("someBadomit"), b)
        for x in program.atoms:
            out.append(Rule(HeadKind.BOTTOM, (), (pos(ab_l(x)), neg(tag("someBadomit")))))
    return out


def _rule_order(program: Program):
    index = {r.name: r.id for r in program.rules}
    return index.__getitem__


def build_debug_program(program: Program, omission, interp: Iterable[str], *,
                        type4: bool = False, variant: str = "repaired") -> Program:
    A = as_omission(omission)
    if A.includes_bottom:
        raise ValueError("debugging is defined for atom omissions only")
    I = frozenset(interp)
    check_abstract_answer_set(program, A, I)
    outcome = omit_program(program, A)
    rules = (build_meta(program) + build_aux_meta(program, A)
             + build_badomit(program, A, I, type4=type4, variant=variant, outcome=outcome)
             + build_query(I, outcome.abstract.atoms))
    return Program(rules, program.atoms)


def badomit_atoms(debug_program: Program) -> frozenset[str]:
    return frozenset(a for a in debug_program.atoms if a.startswith(GENERATED_PREFIX + "badomit("))


def extract_bad_omissions(interp: Iterable[str]) -> frozenset[BadOmission]:
    found = set()
    for a in interp:
        if not a.startswith(GENERATED_PREFIX + "badomit("):
            continue
        kind, args = decode_tag(a)
        if len(args) != 2 or args[1] not in BADOMIT_TYPES:
            raise MalformedTagAtom(f"malformed badomit atom {a!r}")
        found.add(BadOmission(args[0], args[1]))
    return frozenset(found)


@dataclass(frozen=True)
class DebugReport:
    answer_set: frozenset[str]
    bad_omissions: frozenset[BadOmission]
    abnormalities: dict[str, frozenset[str]] = field(default_factory=dict)

    @property
    def atoms(self) -> frozenset[str]:
        return frozenset(b.atom for b in self.bad_omissions)


def report_from(interp: Iterable[str]) -> DebugReport:
    I = frozenset(interp)
    ab: dict[str, set[str]] = {"ab_p": set(), "ab_c": set(), "ab_l": set()}
    for a in I:
        if a.startswith(GENERATED_PREFIX + "ab_"):
            kind, args = decode_tag(a)
            ab[kind].add(args[0])
    return DebugReport(I, extract_bad_omissions(I), {k: frozenset(v) for k, v in ab.items()})


def debug(program: Program, omission, interp: Iterable[str], *,
          objective: Objective = NO_OBJECTIVE, type4: bool = False,
          variant: str = "repaired", limit: int = 1) -> list[DebugReport]:
    """Solve the debug program; an empty list means it has no answer set."""
    prog = build_debug_program(program, omission, interp, type4=type4, variant=variant)
    result = solve(SolveRequest(prog, limit=limit, marked=badomit_atoms(prog),
                                objective=objective))
    return [report_from(s) for s in result.answer_sets]


# -- refinement bound ---------------------------------------------------------------

def refinement_bound(program: Program, omission) -> int:
    """Longest simple path from a rule touching A through rules with heads in A.

    Edges go from r to r' when the head of r' occurs in the body of r.
    """
    A = as_omission(omission)
    if not A.omitted:
        return 0
    by_head: dict[str, list[Rule]] = defaultdict(list)
    for r in program.rules:
        if r.head is not None and r.head in A:
            by_head[r.head].append(r)

    def succ(r: Rule) -> list[Rule]:
        return [s for a in r.body_atoms for s in by_head.get(a, ())]

    best = 0
    for start in program.rules:
        if not start.body_atoms & A.omitted:
            continue
        # depth-first over simple paths
        stack = [(start, 0, frozenset([start.id]))]
        while stack:
            r, length, seen = stack.pop()
            best = max(best, length)
            for s in succ(r):
                if s.id not in seen:
                    stack.append((s, length + 1, seen | {s.id}))
    return best
