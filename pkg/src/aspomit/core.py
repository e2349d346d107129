"""Ground program data model.

Atoms are plain strings holding the exact ground-atom text; argument
structure is never interpreted.  Atoms introduced by the tool carry the
reserved ``__`` prefix.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, NamedTuple, Optional

GENERATED_PREFIX = "__"


def is_generated(atom: str) -> bool:
    return atom.startswith(GENERATED_PREFIX)


class Sign(int, Enum):
    POS = 0
    NEG = 1
    NEGNEG = 2


class Literal(NamedTuple):
    atom: str
    sign: Sign = Sign.POS

    def holds(self, interp) -> bool:
        if self.sign is Sign.NEG:
            return self.atom not in interp
        return self.atom in interp

    def __str__(self) -> str:
        return ("", "not ", "not not ")[self.sign] + self.atom


def pos(atom: str) -> Literal:
    return Literal(atom, Sign.POS)


def neg(atom: str) -> Literal:
    return Literal(atom, Sign.NEG)


def negneg(atom: str) -> Literal:
    return Literal(atom, Sign.NEGNEG)


class HeadKind(str, Enum):
    BOTTOM = "bottom"
    PLAIN = "plain"
    CHOICE = "choice"
    DISJUNCTION = "disjunction"


@dataclass(frozen=True)
class Rule:
    """A ground rule ``head :- body``.

    ``body`` keeps literal order for printing; duplicates are removed on
    construction.  ``id`` and ``name`` do not take part in equality.
    """

    kind: HeadKind
    head_atoms: tuple[str, ...] = ()
    body: tuple[Literal, ...] = ()
    id: int = field(default=-1, compare=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.kind is HeadKind.BOTTOM and self.head_atoms:
            raise ValueError("constraint with head atoms")
        if self.kind in (HeadKind.PLAIN, HeadKind.CHOICE) and len(self.head_atoms) != 1:
            raise ValueError(f"{self.kind.value} rule needs exactly one head atom")
        if self.kind is HeadKind.DISJUNCTION and len(self.head_atoms) < 2:
            raise ValueError("disjunction needs at least two head atoms")
        seen = dict.fromkeys(Literal(l.atom, Sign(l.sign)) for l in self.body)
        object.__setattr__(self, "body", tuple(seen))

    @property
    def head(self) -> Optional[str]:
        """The single head atom, or None for constraints (and disjunctions)."""
        if self.kind in (HeadKind.PLAIN, HeadKind.CHOICE):
            return self.head_atoms[0]
        return None

    @property
    def is_constraint(self) -> bool:
        return self.kind is HeadKind.BOTTOM

    @property
    def is_choice(self) -> bool:
        return self.kind is HeadKind.CHOICE

    def _part(self, sign: Sign) -> frozenset[str]:
        return frozenset(l.atom for l in self.body if l.sign is sign)

    @property
    def pos_body(self) -> frozenset[str]:
        return self._part(Sign.POS)

    @property
    def neg_body(self) -> frozenset[str]:
        return self._part(Sign.NEG)

    @property
    def negneg_body(self) -> frozenset[str]:
        return self._part(Sign.NEGNEG)

    @property
    def body_atoms(self) -> frozenset[str]:
        # B+ and B- together (plus double-negated atoms, which only occur
        # in generated programs)
        return frozenset(l.atom for l in self.body)

    def atoms(self) -> Iterator[str]:
        yield from self.head_atoms
        for l in self.body:
            yield l.atom

    def body_holds(self, interp) -> bool:
        return all(l.holds(interp) for l in self.body)

    def shape(self):
        """Order-insensitive structural key (ignores id, name, literal order)."""
        return (self.kind, frozenset(self.head_atoms), frozenset(self.body))

    def with_(self, **changes) -> "Rule":
        fields = dict(kind=self.kind, head_atoms=self.head_atoms, body=self.body,
                      id=self.id, name=self.name)
        fields.update(changes)
        return Rule(**fields)

    def __str__(self) -> str:
        from .parser import format_rule
        return format_rule(self)


def fact(atom: str) -> Rule:
    return Rule(HeadKind.PLAIN, (atom,))


def rule(head: str, *body: Literal | str) -> Rule:
    return Rule(HeadKind.PLAIN, (head,), _lits(body))


def choice(head: str, *body: Literal | str) -> Rule:
    return Rule(HeadKind.CHOICE, (head,), _lits(body))


def constraint(*body: Literal | str) -> Rule:
    return Rule(HeadKind.BOTTOM, (), _lits(body))


def _lits(body) -> tuple[Literal, ...]:
    return tuple(l if isinstance(l, Literal) else pos(l) for l in body)


class Program:
    """An ordered, immutable list of ground rules plus its atom universe.

    Rule ids are renumbered densely; rules without a name get ``r<id+1>``.
    The universe lists atoms in first-occurrence order, followed by any
    extra declared atoms.
    """

    __slots__ = ("rules", "atoms", "_atom_set", "_defs")

    def __init__(self, rules: Iterable[Rule] = (), atoms: Iterable[str] = ()):
        numbered = []
        names: set[str] = set()
        for i, r in enumerate(rules):
            name = r.name or f"r{i + 1}"
            if name in names:
                raise ValueError(f"duplicate rule name {name!r}")
            names.add(name)
            numbered.append(r.with_(id=i, name=name))
        universe = dict.fromkeys(a for r in numbered for a in r.atoms())
        universe.update(dict.fromkeys(atoms))
        self.rules: tuple[Rule, ...] = tuple(numbered)
        self.atoms: tuple[str, ...] = tuple(universe)
        self._atom_set = frozenset(universe)
        self._defs: Optional[dict[str, tuple[Rule, ...]]] = None

    @classmethod
    def renamed(cls, rules: Iterable[Rule], atoms: Iterable[str] = ()) -> "Program":
        """Build a program, discarding existing rule names."""
        return cls((r.with_(name="") for r in rules), atoms)

    @property
    def atom_set(self) -> frozenset[str]:
        return self._atom_set

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Program):
            return NotImplemented
        return self.rules == other.rules and self._atom_set == other._atom_set

    def __hash__(self):
        return hash((self.rules, self._atom_set))

    def __repr__(self) -> str:
        return f"Program({len(self.rules)} rules, {len(self.atoms)} atoms)"

    def __str__(self) -> str:
        from .parser import serialize
        return serialize(self)

    def same_rules(self, other: "Program", ordered: bool = True) -> bool:
        """Rule-shape equality ignoring ids, names and literal order."""
        mine = [r.shape() for r in self.rules]
        theirs = [r.shape() for r in other.rules]
        if ordered:
            return mine == theirs
        from collections import Counter
        return Counter(mine) == Counter(theirs)

    def by_name(self, name: str) -> Rule:
        for r in self.rules:
            if r.name == name:
                return r
        raise KeyError(name)

    def defs(self) -> dict[str, tuple[Rule, ...]]:
        if self._defs is None:
            d: dict[str, list[Rule]] = {}
            for r in self.rules:
                if r.head is not None:
                    d.setdefault(r.head, []).append(r)
            self._defs = {a: tuple(rs) for a, rs in d.items()}
        return self._defs

    def union(self, extra: Iterable[Rule], atoms: Iterable[str] = ()) -> "Program":
        """Append rules; appended rules are renamed after the existing ones."""
        base = list(self.rules)
        taken = {r.name for r in base}
        counter = len(base)
        tail = []
        for r in extra:
            name = r.name
            if not name or name in taken:
                counter += 1
                while f"r{counter}" in taken:
                    counter += 1
                name = f"r{counter}"
            taken.add(name)
            tail.append(r.with_(name=name))
        return Program(base + tail, tuple(self.atoms) + tuple(atoms))


def def_of(atom: str, program: Program) -> tuple[Rule, ...]:
    """Rules whose (plain or choice) head is ``atom``."""
    return program.defs().get(atom, ())


def project(interp: Iterable[str], keep: Iterable[str]) -> frozenset[str]:
    return frozenset(interp) & frozenset(keep)


@dataclass(frozen=True)
class OmissionSet:
    """Atoms to omit.  ``includes_bottom`` also drops every constraint."""

    omitted: frozenset[str] = frozenset()
    includes_bottom: bool = False

    def __post_init__(self):
        object.__setattr__(self, "omitted", frozenset(self.omitted))

    def __contains__(self, atom: str) -> bool:
        return atom in self.omitted

    def __len__(self) -> int:
        return len(self.omitted)

    def __iter__(self):
        return iter(self.omitted)

    def kept(self, program: Program) -> tuple[str, ...]:
        return tuple(a for a in program.atoms if a not in self.omitted)

    def without(self, atoms: Iterable[str]) -> "OmissionSet":
        return OmissionSet(self.omitted - frozenset(atoms), self.includes_bottom)

    def with_(self, atoms: Iterable[str]) -> "OmissionSet":
        return OmissionSet(self.omitted | frozenset(atoms), self.includes_bottom)


def as_omission(a) -> OmissionSet:
    if isinstance(a, OmissionSet):
        return a
    return OmissionSet(frozenset(a))


@dataclass(frozen=True)
class DependencyGraphs:
    positive: frozenset[tuple[str, str]]
    negative: frozenset[tuple[str, str]]
    tight: bool

    @property
    def full(self) -> frozenset[tuple[str, str, Sign]]:
        return frozenset({(u, v, Sign.POS) for u, v in self.positive}
                         | {(u, v, Sign.NEG) for u, v in self.negative})


def dependency_graphs(program: Program) -> DependencyGraphs:
    """Atom-level dependency graph; constraints contribute no edges."""
    posedges, negedges = set(), set()
    for r in program.rules:
        if r.kind is HeadKind.DISJUNCTION:
            raise ValueError("split disjunctive rules first")
        h = r.head
        if h is None:
            continue
        posedges.update((h, a) for a in r.pos_body)
        negedges.update((h, a) for a in r.neg_body)
    return DependencyGraphs(frozenset(posedges), frozenset(negedges),
                            not _has_cycle(posedges))


def _has_cycle(edges) -> bool:
    succ: dict[str, list[str]] = {}
    for u, v in edges:
        succ.setdefault(u, []).append(v)
    state: dict[str, int] = {}
    for root in succ:
        if root in state:
            continue
        stack = [(root, iter(succ.get(root, ())))]
        state[root] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[node] = 2
                stack.pop()
            elif state.get(nxt) == 1:
                return True
            elif nxt not in state:
                state[nxt] = 1
                stack.append((nxt, iter(succ.get(nxt, ()))))
    return False
