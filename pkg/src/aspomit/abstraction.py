"""Omission abstraction: omit(Π, A), spuriousness checks and faithfulness."""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .core import (HeadKind, Literal, OmissionSet, Program, Rule, Sign, as_omission,
                   constraint, neg, pos)
from .solver import UniverseTooLarge, answer_sets, first_answer_set, is_answer_set

FAITHFUL_MAX_ATOMS = 64
REFINEMENT_SAFE_MAX_OMITTED = 12


class OmittedAtomNotInUniverse(UserWarning):
    pass


class NotAnAbstractAnswerSet(ValueError):
    pass


@dataclass(frozen=True)
class AbstractionOutcome:
    """Result of omitting ``omission`` from ``source``.

    ``provenance`` maps each abstract rule id to ``(how, source rule id)``
    where ``how`` is ``"kept"`` or ``"weakened"``.
    """

    source: Program
    omission: OmissionSet
    abstract: Program
    provenance: dict[int, tuple[str, int]]
    omitted_rules: frozenset[int]
    changed_rules: frozenset[int]

    @property
    def kept_atoms(self) -> tuple[str, ...]:
        return self.abstract.atoms

    @property
    def modified_rules(self) -> frozenset[int]:
        return self.omitted_rules | self.changed_rules


def omit_rule(r: Rule, omission: OmissionSet | Iterable[str]) -> Optional[Rule]:
    """Abstract one rule; None means the rule is dropped."""
    A = as_omission(omission)
    if r.kind is HeadKind.DISJUNCTION:
        raise ValueError("split disjunctive rules before omitting atoms")
    touched = any(l.atom in A for l in r.body)
    if r.kind is HeadKind.BOTTOM:
        if touched or A.includes_bottom:
            return None
        return r
    if r.head in A:
        return None
    if not touched:
        return r
    body = tuple(l for l in r.body if l.atom not in A)
    return r.with_(kind=HeadKind.CHOICE, body=body)


def omit_program(program: Program, omission: OmissionSet | Iterable[str]) -> AbstractionOutcome:
    A = as_omission(omission)
    stray = A.omitted - program.atom_set
    if stray:
        warnings.warn(f"omitted atoms not in the universe are ignored: {sorted(stray)}",
                      OmittedAtomNotInUniverse, stacklevel=2)
        A = OmissionSet(A.omitted & program.atom_set, A.includes_bottom)
    rules = []
    sources = []
    omitted, changed = set(), set()
    for r in program.rules:
        out = omit_rule(r, A)
        if out is None:
            omitted.add(r.id)
            continue
        if out is r:
            sources.append(("kept", r.id))
        else:
            changed.add(r.id)
            sources.append(("weakened", r.id))
        rules.append(out)
    abstract = Program(rules, A.kept(program))
    return AbstractionOutcome(program, A, abstract, dict(enumerate(sources)),
                              frozenset(omitted), frozenset(changed))


def omit(program: Program, omission: OmissionSet | Iterable[str]) -> Program:
    """Shorthand for ``omit_program(...).abstract``."""
    return omit_program(program, omission).abstract


def build_query(interp: Iterable[str], kept: Iterable[str]) -> list[Rule]:
    """Constraints that pin every kept atom to its value in ``interp``."""
    I = frozenset(interp)
    kept = tuple(kept)
    stray = I - frozenset(kept)
    if stray:
        raise ValueError(f"interpretation mentions atoms outside the kept set: {sorted(stray)}")
    true = [constraint(neg(a)) for a in kept if a in I]
    false = [constraint(pos(a)) for a in kept if a not in I]
    return true + false


def with_query(program: Program, interp: Iterable[str], kept: Iterable[str]) -> Program:
    return program.union(build_query(interp, kept))


def abstract_answer_sets(program: Program, omission, limit: int = 0) -> list[frozenset[str]]:
    return answer_sets(omit(program, omission), limit=limit)


@dataclass(frozen=True)
class Classification:
    spurious: bool
    witness: Optional[frozenset[str]] = None

    @property
    def verdict(self) -> str:
        return "spurious" if self.spurious else "concrete"


def check_abstract_answer_set(program: Program, omission, interp: Iterable[str]) -> Program:
    """Raise NotAnAbstractAnswerSet unless ``interp`` is an answer set of the abstraction."""
    abstract = omit(program, omission)
    I = frozenset(interp)
    if not I <= abstract.atom_set or not is_answer_set(abstract, I):
        raise NotAnAbstractAnswerSet(f"{sorted(I)} is not an answer set of the abstraction")
    return abstract


def classify(program: Program, omission, interp: Iterable[str]) -> Classification:
    I = frozenset(interp)
    abstract = check_abstract_answer_set(program, omission, I)
    witness = first_answer_set(with_query(program, I, abstract.atoms))
    if witness is None:
        return Classification(True)
    return Classification(False, witness)


def is_spurious(program: Program, omission, interp: Iterable[str]) -> bool:
    return classify(program, omission, interp).spurious


def is_faithful(program: Program, omission, max_atoms: int = FAITHFUL_MAX_ATOMS) -> bool:
    if len(program.atoms) > max_atoms:
        raise UniverseTooLarge(f"{len(program.atoms)} atoms > {max_atoms}")
    abstract = omit(program, omission)
    kept = abstract.atom_set
    concrete = {I & kept for I in answer_sets(program)}
    return set(answer_sets(abstract)) == concrete


def is_refinement_safe_faithful(program: Program, omission,
                                max_omitted: int = REFINEMENT_SAFE_MAX_OMITTED,
                                max_atoms: int = FAITHFUL_MAX_ATOMS) -> bool:
    A = as_omission(omission)
    if not answer_sets(omit(program, A), limit=1):
        return True
    if len(A) > max_omitted:
        raise UniverseTooLarge(f"{len(A)} omitted atoms > {max_omitted}")
    atoms = sorted(A.omitted)
    for k in range(len(atoms) + 1):
        for sub in itertools.combinations(atoms, k):
            if not is_faithful(program, OmissionSet(frozenset(sub), A.includes_bottom), max_atoms):
                return False
    return True


def split_disjunctive(program: Program) -> Program:
    """``a | b :- B`` becomes ``{a} :- B`` and ``{b} :- B``."""
    out = []
    for r in program.rules:
        if r.kind is not HeadKind.DISJUNCTION:
            out.append(r)
            continue
        for i, a in enumerate(r.head_atoms):
            out.append(Rule(HeadKind.CHOICE, (a,), r.body, name=f"{r.name}_{i + 1}"))
    return Program(out, program.atoms)
