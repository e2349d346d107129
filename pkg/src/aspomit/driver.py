"""Abstraction-refinement loop, put-back search and blocker computation."""
from __future__ import annotations

import json
import math
import random
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .abstraction import classify, omit, with_query
from .core import OmissionSet, Program, as_omission
from .debugger import (badomit_atoms, build_debug_program, report_from)
from .solver import (MINIMIZE, Objective, SolveRequest, answer_sets, bound,
                     first_answer_set, is_satisfiable, solve)

OBJECTIVES = ("half", "fifth", "tenth", "minimize")
_DIVISORS = {"half": 2, "fifth": 5, "tenth": 10}


class IterationLimitExceeded(RuntimeError):
    pass


class PreconditionViolation(ValueError):
    pass


class NotUnsatisfiable(PreconditionViolation):
    pass


class ProgramSatisfiable(PreconditionViolation):
    pass


class NotSpurious(PreconditionViolation):
    pass


class EmptyGroups(PreconditionViolation):
    pass


def badomit_objective(kind: str, omitted: int) -> Objective:
    """Cardinality cap ⌈|A|/d⌉ on bad omissions, or full minimization."""
    if kind == "minimize":
        return MINIMIZE
    if kind not in _DIVISORS:
        raise ValueError(f"unknown objective {kind!r}; choose from {OBJECTIVES}")
    return bound(max(1, math.ceil(omitted / _DIVISORS[kind])))


# -- Abs&Ref -------------------------------------------------------------------------

@dataclass
class AbsRefResult:
    final_program: Program
    final_omission: OmissionSet
    outcome: str  # "unsat" | "concrete"
    refinement_steps: int
    trace: list[dict]
    abstract_witness: Optional[frozenset[str]] = None
    concrete_witness: Optional[frozenset[str]] = None
    wall_time: float = 0.0

    @property
    def unsat(self) -> bool:
        return self.outcome == "unsat"

    def trace_json(self) -> str:
        return json.dumps({"iterations": self.trace}, indent=2, sort_keys=True)


def _ordered(atoms: Iterable[str], program: Program) -> list[str]:
    index = {a: i for i, a in enumerate(program.atoms)}
    return sorted(atoms, key=lambda a: (index.get(a, len(index)), a))


def abs_ref(program: Program, initial: OmissionSet | Iterable[str], *,
            objective: str = "half", type4: bool = False, variant: str = "repaired",
            max_iterations: Optional[int] = None) -> AbsRefResult:
    """Refine an omission until the abstraction is unsatisfiable or a concrete
    abstract answer set is found.

    Each round takes the first abstract answer set, solves its debug program
    under the bad-omission objective (falling back to full minimization if the
    cap is too tight) and puts the reported atoms back.  If the debug program
    gives no usable verdict (only possible with the literal variant) the
    round falls back to :func:`minimal_put_back`.
    """
    start = time.perf_counter()
    A = as_omission(initial)
    trace: list[dict] = []
    steps = 0
    while True:
        abstract = omit(program, A)
        I = first_answer_set(abstract)
        entry = {"omittedCount": len(A), "badomits": []}
        if I is None:
            entry["verdict"] = "unsat"
            trace.append(entry)
            return AbsRefResult(abstract, A, "unsat", steps, trace,
                                wall_time=time.perf_counter() - start)
        entry["abstractAnswerSet"] = _ordered(I, program)
        if max_iterations is not None and steps >= max_iterations:
            raise IterationLimitExceeded(f"no verdict after {steps} refinements")
        dbg = build_debug_program(program, A, I, type4=type4, variant=variant)
        marked = badomit_atoms(dbg)
        req_obj = badomit_objective(objective, len(A))
        result = solve(SolveRequest(dbg, limit=1, marked=marked, objective=req_obj))
        if not result.answer_sets and req_obj.kind == "bound":
            entry["fallback"] = "minimize"
            result = solve(SolveRequest(dbg, limit=1, marked=marked, objective=MINIMIZE))
        bad: frozenset[str] = frozenset()
        if result.answer_sets:
            report = report_from(result.answer_sets[0])
            entry["badomits"] = [f"{b.atom}:{b.type}" for b in sorted(report.bad_omissions)]
            bad = report.atoms
        if not bad:
            verdict = classify(program, A, I)
            if not verdict.spurious:
                entry["verdict"] = "concrete"
                trace.append(entry)
                return AbsRefResult(abstract, A, "concrete", steps, trace, I, verdict.witness,
                                    wall_time=time.perf_counter() - start)
            entry["fallback"] = "putback"
            bad = minimal_put_back(program, A, I, checked=True)
        entry["verdict"] = "spurious"
        entry["putBack"] = _ordered(bad, program)
        trace.append(entry)
        A = A.without(bad)
        steps += 1


# -- put-back sets ---------------------------------------------------------------------

def _matches(program: Program, omission: OmissionSet, interp: frozenset[str],
             kept: Sequence[str]) -> bool:
    """Does omit(program, omission) have an answer set agreeing with interp on kept?"""
    return is_satisfiable(with_query(omit(program, omission), interp, kept))


def minimal_put_back(program: Program, omission, interp: Iterable[str], *,
                     checked: bool = False) -> frozenset[str]:
    """Greedy elimination: keep omitting an atom as long as no abstract answer
    set re-matches ``interp``; the atoms that had to return form the result."""
    A = as_omission(omission)
    I = frozenset(interp)
    if not checked and not classify(program, A, I).spurious:
        raise NotSpurious(f"{sorted(I)} is concrete")
    kept = A.kept(program)
    stay = OmissionSet(frozenset(), A.includes_bottom)
    for a in _ordered(A.omitted, program):
        trial = stay.with_([a])
        if not _matches(program, trial, I, kept):
            stay = trial
    return A.omitted - stay.omitted


def is_put_back(program: Program, omission, interp: Iterable[str],
                atoms: Iterable[str]) -> bool:
    A = as_omission(omission)
    I = frozenset(interp)
    return not _matches(program, A.without(atoms), I, A.kept(program))


# -- blockers ------------------------------------------------------------------------

@dataclass
class BlockerResult:
    blocker: frozenset[str]
    blocker_rules: Program
    minimal: bool
    probes: int = 0
    wall_time: float = 0.0
    omission: OmissionSet = field(default_factory=OmissionSet)
    absref: Optional[AbsRefResult] = None

    def ratio(self, program: Program) -> float:
        return len(self.blocker) / len(program.atoms) if program.atoms else 0.0


def body_occurrences(program: Program) -> Counter:
    counts: Counter = Counter()
    for r in program.rules:
        for a in r.body_atoms:
            counts[a] += 1
    return counts


def probe_order(program: Program, atoms: Iterable[str], order: str = "input") -> list[str]:
    """``input`` | ``least-occurring`` | ``seed:N``."""
    atoms = _ordered(atoms, program)
    if order == "input":
        return atoms
    if order == "least-occurring":
        counts = body_occurrences(program)
        return sorted(atoms, key=lambda a: counts[a])  # stable: ties keep input order
    if order.startswith("seed:"):
        rng = random.Random(int(order[5:]))
        rng.shuffle(atoms)
        return atoms
    raise ValueError(f"unknown order {order!r}")


def compute_min_blocker(program: Program, start: OmissionSet | Iterable[str] = (), *,
                        order: str = "input") -> BlockerResult:
    t0 = time.perf_counter()
    A = as_omission(start)
    current = omit(program, A)
    probes = 1
    if is_satisfiable(current):
        raise NotUnsatisfiable("the starting abstraction has an answer set")
    for a in probe_order(program, set(program.atoms) - A.omitted, order):
        probes += 1
        trial = omit(current, [a])
        if not is_satisfiable(trial):
            A = A.with_([a])
            current = trial
    # every kept atom was probed satisfiable against a subset of the final
    # omission; unsatisfiable abstractions stay unsatisfiable under
    # refinement, so each of those probes still holds
    blocker = frozenset(program.atoms) - A.omitted
    return BlockerResult(blocker, current, True, probes, time.perf_counter() - t0, A)


@dataclass(frozen=True)
class BlockerCheck:
    is_blocker: bool
    is_minimal: Optional[bool]


def verify_blocker(program: Program, blocker: Iterable[str], check_minimal: bool = True) -> BlockerCheck:
    C = frozenset(blocker)
    everything = frozenset(program.atoms)
    if not C <= everything:
        raise PreconditionViolation(f"atoms outside the universe: {sorted(C - everything)}")
    is_blocker = not is_satisfiable(omit(program, everything - C))
    if not check_minimal:
        return BlockerCheck(is_blocker, None)
    minimal = is_blocker and all(is_satisfiable(omit(program, (everything - C) | {c}))
                                 for c in _ordered(C, program))
    return BlockerCheck(is_blocker, minimal)


def initial_omission(program: Program, groups: Optional[dict[str, Iterable[str]]] = None,
                     percent: float = 50, strategy: str = "random",
                     seed: int = 0) -> OmissionSet:
    """Union of ⌈percent·|groups|/100⌉ object groups.

    Without a group map every atom is its own group.
    """
    if groups is None:
        groups = {a: (a,) for a in program.atoms}
    groups = {k: tuple(v) for k, v in groups.items()}
    if not groups:
        raise EmptyGroups("no object groups to choose from")
    if not 0 <= percent <= 100:
        raise ValueError("percent must lie in [0, 100]")
    k = math.ceil(percent * len(groups) / 100)
    names = list(groups)
    if strategy == "random":
        chosen = random.Random(seed).sample(names, k)
    elif strategy in ("least-occurring", "leastOccurring"):
        counts = body_occurrences(program)
        chosen = sorted(names, key=lambda g: sum(counts[a] for a in groups[g]))[:k]
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return OmissionSet(frozenset(a for g in chosen for a in groups[g]
                                 if a in program.atom_set))


def bottom_up_blocker(program: Program, percent: float = 50, strategy: str = "random",
                      seed: int = 0, groups: Optional[dict[str, Iterable[str]]] = None, *,
                      objective: str = "half", type4: bool = False, variant: str = "repaired",
                      order: str = "input") -> BlockerResult:
    t0 = time.perf_counter()
    A = initial_omission(program, groups, percent, strategy, seed)
    ref = abs_ref(program, A, objective=objective, type4=type4, variant=variant)
    if not ref.unsat:
        raise ProgramSatisfiable("refinement reached a concrete answer set")
    res = compute_min_blocker(program, ref.final_omission, order=order)
    res.absref = ref
    res.wall_time = time.perf_counter() - t0
    return res
