"""Answer-set engine for ground normal programs with choice rules.

Two engines share one request/result format:

* ``builtin`` -- chronological backtracking over atoms (ascending atom
  order, false branch first) with completion-style unit propagation;
  every total assignment is checked against the Gelfond-Lifschitz reduct.
* ``bruteforce`` -- tries every subset of the universe with
  :func:`is_answer_set`; capped at 24 atoms and used as a test oracle.

An ``external`` engine pipes the expanded program to a child process.
"""
from __future__ import annotations

import itertools
import os
import shlex
import subprocess
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .core import HeadKind, Literal, Program, Rule, Sign, is_generated

COMPLEMENT_PREFIX = "__c("
BRUTEFORCE_MAX_ATOMS = 24
DEFAULT_TIMEOUT = 60.0
SOLVER_ENV = "ASPOMIT_SOLVER"


class SolverError(RuntimeError):
    pass


class UniverseTooLarge(SolverError):
    pass


class ExternalSolverFailure(SolverError):
    pass


@dataclass(frozen=True)
class Objective:
    kind: str = "none"  # none | bound | minimize
    k: int = 0

    def __post_init__(self):
        if self.kind not in ("none", "bound", "minimize"):
            raise ValueError(f"unknown objective {self.kind!r}")
        if self.kind == "bound" and self.k < 0:
            raise ValueError("bound must be non-negative")

    def __str__(self) -> str:
        return f"bound({self.k})" if self.kind == "bound" else self.kind


NO_OBJECTIVE = Objective()
MINIMIZE = Objective("minimize")


def bound(k: int) -> Objective:
    return Objective("bound", k)


@dataclass(frozen=True)
class SolveRequest:
    program: Program
    limit: int = 0  # 0 = all
    marked: frozenset[str] = frozenset()
    objective: Objective = NO_OBJECTIVE
    engine: str = "builtin"  # builtin | bruteforce | external
    command: Optional[str] = None  # external engine; defaults to $ASPOMIT_SOLVER
    timeout: float = DEFAULT_TIMEOUT

    def __post_init__(self):
        object.__setattr__(self, "marked", frozenset(self.marked))
        if self.limit < 0:
            raise ValueError("limit must be >= 0")
        if self.engine not in ("builtin", "bruteforce", "external"):
            raise ValueError(f"unknown engine {self.engine!r}")
        stray = self.marked - self.program.atom_set
        if stray:
            raise ValueError(f"marked atoms outside the universe: {sorted(stray)[:3]}")


@dataclass
class SolveStats:
    decisions: int = 0
    reduct_checks: int = 0
    wall_time: float = 0.0


@dataclass
class SolveResult:
    answer_sets: list[frozenset[str]]
    exhausted: bool
    stats: SolveStats = field(default_factory=SolveStats)

    @property
    def satisfiable(self) -> bool:
        return bool(self.answer_sets)

    def cost(self, marked: Iterable[str]) -> Optional[int]:
        if not self.answer_sets:
            return None
        m = frozenset(marked)
        return min(len(s & m) for s in self.answer_sets)


# -- reference semantics ---------------------------------------------------

def complement(atom: str) -> str:
    return f"{COMPLEMENT_PREFIX}{atom})"


def is_complement(atom: str) -> bool:
    return atom.startswith(COMPLEMENT_PREFIX)


def expand_choices(program: Program) -> Program:
    """Replace ``{a} :- B`` by ``a :- B, not __c(a)`` and ``__c(a) :- B, not a``."""
    out: list[Rule] = []
    changed = False
    for r in program.rules:
        if r.kind is HeadKind.DISJUNCTION:
            raise ValueError("split disjunctive rules before solving")
        if r.kind is not HeadKind.CHOICE:
            out.append(r)
            continue
        changed = True
        a = r.head
        bar = complement(a)
        out.append(Rule(HeadKind.PLAIN, (a,), r.body + (Literal(bar, Sign.NEG),), name=r.name))
        out.append(Rule(HeadKind.PLAIN, (bar,), r.body + (Literal(a, Sign.NEG),),
                        name=f"{r.name}_bar"))
    if not changed:
        return program
    return Program(out, program.atoms)


def gl_reduct(program: Program, interp: Iterable[str]) -> Program:
    """Gelfond-Lifschitz reduct; double negation holds iff the atom is in ``interp``."""
    I = frozenset(interp)
    out = []
    for r in program.rules:
        if r.kind not in (HeadKind.PLAIN, HeadKind.BOTTOM):
            raise ValueError("reduct needs a program without choice or disjunctive heads")
        if r.neg_body & I or not r.negneg_body <= I:
            continue
        out.append(r.with_(body=tuple(l for l in r.body if l.sign is Sign.POS)))
    return Program(out, program.atoms)


def least_model(program: Program) -> frozenset[str]:
    """Least model of the positive part; constraints are ignored."""
    waiting: dict[str, list[int]] = {}
    missing = []
    queue = []
    rules = [r for r in program.rules if r.kind is HeadKind.PLAIN]
    for i, r in enumerate(rules):
        body = r.pos_body
        missing.append(len(body))
        for a in body:
            waiting.setdefault(a, []).append(i)
        if not body:
            queue.append(r.head)
    model: set[str] = set()
    while queue:
        a = queue.pop()
        if a in model:
            continue
        model.add(a)
        for i in waiting.get(a, ()):
            missing[i] -= 1
            if missing[i] == 0:
                queue.append(rules[i].head)
    return frozenset(model)


def _complete(program: Program, interp: frozenset[str]) -> frozenset[str]:
    # the complement of a choice atom is forced: true iff the atom is false
    # and some choice rule for it has a true body
    extra = {complement(r.head) for r in program.rules
             if r.kind is HeadKind.CHOICE and r.head not in interp and r.body_holds(interp)}
    return interp | extra


def is_answer_set(program: Program, interp: Iterable[str]) -> bool:
    """Reduct + least-model check.

    ``interp`` ranges over the program's own atoms; complement atoms of
    choice rules are filled in (their value is determined by the rest).
    """
    I = frozenset(a for a in interp if not is_complement(a))
    full = _complete(program, I)
    reduct = gl_reduct(expand_choices(program), full)
    if any(r.kind is HeadKind.BOTTOM and r.pos_body <= full for r in reduct.rules):
        return False
    return least_model(reduct) == full


# -- builtin engine ----------------------------------------------------------

class _Conflict(Exception):
    pass


def _on_positive_cycles(heads, lits, n: int) -> list[int]:
    """Atoms lying on a cycle of the positive dependency graph (Tarjan SCCs)."""
    succ: list[list[int]] = [[] for _ in range(n)]
    for h, body in zip(heads, lits):
        if h >= 0:
            succ[h].extend(a for a, s in body if s == 0)
    index, low, on_stack, stack, out = {}, {}, set(), [], []
    counter = 0
    for root in range(n):
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            if i < len(succ[v]):
                work.append((v, i + 1))
                w = succ[v][i]
                if w not in index:
                    work.append((w, 0))
                elif w in on_stack:
                    low[v] = min(low[v], index[w])
                continue
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                if len(comp) > 1 or v in succ[v]:
                    out.extend(comp)
    return sorted(out)


class _Search:
    """Completion propagation + chronological backtracking over atoms."""

    def __init__(self, program: Program, marked: frozenset[str], stats: SolveStats):
        expanded = expand_choices(program)
        self.atoms = list(expanded.atoms)
        index = {a: i for i, a in enumerate(self.atoms)}
        n = len(self.atoms)
        self.heads: list[int] = []
        self.lits: list[tuple[tuple[int, int], ...]] = []
        self.occ: list[list[int]] = [[] for _ in range(n)]
        self.defs: list[list[int]] = [[] for _ in range(n)]
        for ri, r in enumerate(expanded.rules):
            h = index[r.head] if r.head is not None else -1
            lits = tuple((index[l.atom], int(l.sign)) for l in r.body)
            self.heads.append(h)
            self.lits.append(lits)
            for a in {a for a, _ in lits}:
                self.occ[a].append(ri)
            if h >= 0:
                self.defs[h].append(ri)
        self.val = [0] * n
        self.trail: list[int] = []
        self.queue: list[int] = []
        self.is_marked = [a in marked for a in self.atoms]
        self.marked_true = 0
        self.limit_marked: Optional[int] = None
        self.stats = stats
        self.cyclic = _on_positive_cycles(self.heads, self.lits, n)
        # positive reduct bookkeeping for the stability check
        self.user = [not is_complement(a) for a in self.atoms]

    # literal value: 1 true, -1 false, 0 open
    def _lit(self, a: int, s: int) -> int:
        v = self.val[a]
        return -v if s == 1 else v

    def _assign(self, a: int, v: int):
        cur = self.val[a]
        if cur == v:
            return
        if cur != 0:
            raise _Conflict
        self.val[a] = v
        self.trail.append(a)
        self.queue.append(a)
        if v == 1 and self.is_marked[a]:
            self.marked_true += 1
            if self.limit_marked is not None and self.marked_true > self.limit_marked:
                raise _Conflict

    def _make_true(self, a: int, s: int):
        self._assign(a, -1 if s == 1 else 1)

    def _make_false(self, a: int, s: int):
        self._assign(a, 1 if s == 1 else -1)

    def _body(self, ri: int):
        """(-1, None) false, (1, None) true, or (0, open literals)."""
        open_ = []
        for a, s in self.lits[ri]:
            v = self._lit(a, s)
            if v < 0:
                return -1, None
            if v == 0:
                open_.append((a, s))
        return (0, open_) if open_ else (1, None)

    def _rule(self, ri: int):
        status, open_ = self._body(ri)
        h = self.heads[ri]
        if status < 0:
            if h >= 0:
                self._support(h)
        elif status > 0:
            if h < 0:
                raise _Conflict
            self._assign(h, 1)
        else:
            if (h < 0 or self.val[h] < 0) and len(open_) == 1:
                self._make_false(*open_[0])
            elif h >= 0 and self.val[h] > 0:
                self._support(h)

    def _support(self, h: int):
        v = self.val[h]
        if v < 0:
            return
        cand = None
        count = 0
        for ri in self.defs[h]:
            status, open_ = self._body(ri)
            if status >= 0:
                count += 1
                if count > 1:
                    return
                cand = (status, open_)
        if count == 0:
            self._assign(h, -1)
        elif v > 0 and cand[0] == 0:
            for a, s in cand[1]:
                self._make_true(a, s)

    def propagate(self):
        q = self.queue
        while q:
            a = q.pop()
            for ri in self.occ[a]:
                self._rule(ri)
            for ri in self.defs[a]:
                self._rule(ri)
            self._support(a)

    def initial(self):
        for ri in range(len(self.heads)):
            self._rule(ri)
        for a in range(len(self.atoms)):
            self._support(a)
        self._settle()

    def undo(self, size: int):
        val, trail, marked = self.val, self.trail, self.is_marked
        while len(trail) > size:
            a = trail.pop()
            if val[a] == 1 and marked[a]:
                self.marked_true -= 1
            val[a] = 0
        self.queue.clear()

    def stable(self) -> bool:
        self.stats.reduct_checks += 1
        val = self.val
        missing = []
        waiting: dict[int, list[int]] = {}
        model = [False] * len(val)
        queue = []
        active = []
        for ri, lits in enumerate(self.lits):
            h = self.heads[ri]
            if h < 0:
                continue
            ok = True
            need = 0
            for a, s in lits:
                if s == 1:
                    if val[a] > 0:
                        ok = False
                        break
                elif s == 2:
                    if val[a] < 0:
                        ok = False
                        break
                else:
                    need += 1
            if not ok:
                continue
            idx = len(active)
            active.append(ri)
            missing.append(need)
            for a, s in lits:
                if s == 0:
                    waiting.setdefault(a, []).append(idx)
            if need == 0:
                queue.append(h)
        while queue:
            a = queue.pop()
            if model[a]:
                continue
            model[a] = True
            for idx in waiting.get(a, ()):
                missing[idx] -= 1
                if missing[idx] == 0:
                    queue.append(self.heads[active[idx]])
        return all(model[a] == (val[a] > 0) for a in range(len(val)))

    def model(self) -> frozenset[str]:
        return frozenset(a for a, v, u in zip(self.atoms, self.val, self.user) if v > 0 and u)

    def run(self, on_model, deadline: Optional[float] = None) -> bool:
        """Depth-first search; ``on_model`` returns False to stop.

        Returns True iff the search space was exhausted.
        """
        try:
            self.initial()
        except _Conflict:
            return True
        n = len(self.atoms)
        decisions: list[tuple[int, int, bool]] = []  # (trail size, atom, true branch tried)
        nxt = 0
        while True:
            while nxt < n and self.val[nxt] != 0:
                nxt += 1
            if nxt == n:
                if self.stable():
                    if not on_model(self):
                        return False
                conflict = True
            else:
                self.stats.decisions += 1
                decisions.append((len(self.trail), nxt, False))
                conflict = not self._try(nxt, -1)
            while conflict:
                if not decisions:
                    return True
                size, atom, flipped = decisions.pop()
                self.undo(size)
                if self.limit_marked is not None and self.marked_true > self.limit_marked:
                    continue  # the cost cap was tightened below this prefix
                if deadline is not None and time.monotonic() > deadline:
                    raise SolverError("search timed out")
                if not flipped:
                    decisions.append((size, atom, True))
                    conflict = not self._try(atom, 1)
                nxt = 0 if conflict else nxt
            nxt = 0

    def unfounded(self):
        """Falsify atoms outside the least model of the possibly applicable rules.

        Any answer set extending the current assignment lies inside that
        model.  Only needed for non-tight programs: elsewhere support
        propagation already catches every unsupported atom.
        """
        val, heads = self.val, self.heads
        derived = [False] * len(val)
        missing = []
        waiting: dict[int, list[int]] = {}
        queue = []
        for ri, lits in enumerate(self.lits):
            h = heads[ri]
            need = -1
            if h >= 0 and val[h] >= 0:
                need = 0
                for a, s in lits:
                    v = val[a]
                    if (s == 1 and v > 0) or (s != 1 and v < 0):
                        need = -1
                        break
                    if s == 0:
                        need += 1
                        waiting.setdefault(a, []).append(ri)
                if need == 0:
                    queue.append(h)
            missing.append(need)
        while queue:
            a = queue.pop()
            if derived[a]:
                continue
            derived[a] = True
            for ri in waiting.get(a, ()):
                if missing[ri] > 0:
                    missing[ri] -= 1
                    if missing[ri] == 0:
                        queue.append(heads[ri])
        for a in self.cyclic:
            if not derived[a] and val[a] >= 0:
                self._assign(a, -1)

    def _settle(self):
        self.propagate()
        while self.cyclic:
            size = len(self.trail)
            self.unfounded()
            if len(self.trail) == size:
                return
            self.propagate()

    def _try(self, atom: int, v: int) -> bool:
        try:
            self._assign(atom, v)
            self._settle()
            return True
        except _Conflict:
            return False


def _builtin(req: SolveRequest, stats: SolveStats) -> SolveResult:
    found: list[frozenset[str]] = []
    seen: set[frozenset[str]] = set()
    marked = req.marked
    obj = req.objective

    def collect(limit):
        def on_model(search: _Search) -> bool:
            m = search.model()
            if m not in seen:
                seen.add(m)
                found.append(m)
            return not (limit and len(found) >= limit)
        return on_model

    if obj.kind == "minimize":
        best: list = [None]
        search = _Search(req.program, marked, stats)

        def improve(s: _Search) -> bool:
            best[0] = s.model()
            s.limit_marked = s.marked_true - 1
            return s.limit_marked >= 0
        search.run(improve)
        if best[0] is None:
            return SolveResult([], True, stats)
        opt = len(best[0] & marked)
        if req.limit == 1:
            return SolveResult([best[0]], False, stats)
        search = _Search(req.program, marked, stats)
        search.limit_marked = opt
        exhausted = search.run(collect(req.limit))
        return SolveResult(found, exhausted, stats)

    search = _Search(req.program, marked, stats)
    if obj.kind == "bound":
        search.limit_marked = obj.k
    exhausted = search.run(collect(req.limit))
    return SolveResult(found, exhausted, stats)


# -- brute force -------------------------------------------------------------

def _apply_objective(sets: list[frozenset[str]], req: SolveRequest) -> list[frozenset[str]]:
    m = req.marked
    if req.objective.kind == "bound":
        sets = [s for s in sets if len(s & m) <= req.objective.k]
    elif req.objective.kind == "minimize" and sets:
        best = min(len(s & m) for s in sets)
        sets = [s for s in sets if len(s & m) == best]
    return sets


def _bruteforce(req: SolveRequest, stats: SolveStats) -> SolveResult:
    universe = req.program.atoms
    if len(universe) > BRUTEFORCE_MAX_ATOMS:
        raise UniverseTooLarge(f"{len(universe)} atoms > {BRUTEFORCE_MAX_ATOMS}")
    found = []
    for mask in range(1 << len(universe)):
        interp = frozenset(a for i, a in enumerate(universe) if mask >> i & 1)
        stats.reduct_checks += 1
        if is_answer_set(req.program, interp):
            found.append(interp)
    found = _apply_objective(found, req)
    if req.limit and len(found) > req.limit:
        return SolveResult(found[:req.limit], False, stats)
    return SolveResult(found, True, stats)


# -- external adapter --------------------------------------------------------

def _external(req: SolveRequest, stats: SolveStats) -> SolveResult:
    from .parser import serialize

    command = req.command or os.environ.get(SOLVER_ENV)
    if not command:
        raise ExternalSolverFailure(f"no external solver configured (set {SOLVER_ENV})")
    expanded = expand_choices(req.program)
    text = serialize(expanded) + "\n"
    try:
        proc = subprocess.run(shlex.split(command), input=text, capture_output=True,
                              text=True, timeout=req.timeout)
    except (OSError, subprocess.TimeoutExpired) as e:
        raise ExternalSolverFailure(f"external solver failed: {e}") from e
    if proc.returncode != 0:
        raise ExternalSolverFailure(
            f"external solver exited with {proc.returncode}: {proc.stderr.strip()[:200]}")
    universe = expanded.atom_set
    out = proc.stdout
    lines = out.split("\n")
    if out.endswith("\n"):
        lines.pop()
    found: list[frozenset[str]] = []
    for lineno, line in enumerate(lines, 1):
        atoms = line.split()
        unknown = [a for a in atoms if a not in universe]
        if unknown:
            raise ExternalSolverFailure(f"line {lineno}: unknown atom {unknown[0]!r}")
        interp = frozenset(a for a in atoms if not is_complement(a))
        stats.reduct_checks += 1
        if not is_answer_set(req.program, interp):
            raise ExternalSolverFailure(f"line {lineno}: not an answer set")
        if interp not in found:
            found.append(interp)
    found = _apply_objective(found, req)
    if req.limit and len(found) > req.limit:
        return SolveResult(found[:req.limit], False, stats)
    return SolveResult(found, True, stats)


_ENGINES = {"builtin": _builtin, "bruteforce": _bruteforce, "external": _external}


def solve(req: SolveRequest) -> SolveResult:
    stats = SolveStats()
    start = time.perf_counter()
    result = _ENGINES[req.engine](req, stats)
    stats.wall_time = time.perf_counter() - start
    return result


def answer_sets(program: Program, limit: int = 0, engine: str = "builtin",
                **kwargs) -> list[frozenset[str]]:
    return solve(SolveRequest(program, limit=limit, engine=engine, **kwargs)).answer_sets


def first_answer_set(program: Program, **kwargs) -> Optional[frozenset[str]]:
    found = answer_sets(program, limit=1, **kwargs)
    return found[0] if found else None


def is_satisfiable(program: Program, engine: str = "builtin") -> bool:
    return bool(answer_sets(program, limit=1, engine=engine))
