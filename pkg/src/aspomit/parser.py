"""Reader and printer for the ground rule dialect.

Grammar::

    program  := rule*
    rule     := head? (":-" body)? "."
    head     := atom | "{" atom "}" | atom ("|" atom)+
    body     := literal ("," literal)*
    literal  := ["not" ["not"]] atom
    atom     := lowercase-ident ["(" const ("," const)* ")"]
    const    := lowercase-ident | integer | quoted-string

``%`` starts a comment running to the end of the line.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional

from .core import GENERATED_PREFIX, HeadKind, Literal, OmissionSet, Program, Rule, Sign

KINDS = ("syntax", "reserved-prefix", "non-ground", "duplicate-literal")


class ParseError(ValueError):
    def __init__(self, line: int, column: int, message: str, kind: str = "syntax"):
        assert kind in KINDS
        self.line = line
        self.column = column
        self.message = message
        self.kind = kind
        super().__init__(f"{line}:{column}: {message}")


@dataclass
class _Tok:
    type: str  # ident, int, string, punct, eof
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>%[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<int>[0-9]+)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<punct>:-|[.,(){}|])
""", re.VERBOSE)


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, line_start, i = 1, 0, 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        col = i - line_start + 1
        if m is None:
            raise ParseError(line, col, f"unexpected character {text[i]!r}")
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, col))
        i = m.end()
    toks.append(_Tok("eof", "", line, i - line_start + 1))
    return toks


class _Reader:
    def __init__(self, text: str, allow_generated: bool):
        self.toks = _tokenize(text)
        self.i = 0
        self.allow_generated = allow_generated

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        t = self.tok
        return t.type == "punct" and t.text == text

    def expect(self, text: str) -> _Tok:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.next()

    def fail(self, message: str, tok: Optional[_Tok] = None, kind: str = "syntax"):
        t = tok or self.tok
        found = "end of input" if t.type == "eof" else repr(t.text)
        if kind == "syntax":
            message = f"{message}, found {found}"
        raise ParseError(t.line, t.col, message, kind)

    def _check_name(self, t: _Tok, role: str):
        name = t.text
        if name.startswith(GENERATED_PREFIX):
            if not self.allow_generated:
                self.fail(f"reserved prefix '{GENERATED_PREFIX}' in {name!r}", t, "reserved-prefix")
            return
        if name[0].isupper() or name[0] == "_":
            self.fail(f"variable-like token {name!r} in {role}; input must be ground", t, "non-ground")

    def atom(self) -> str:
        t = self.tok
        if t.type != "ident":
            self.fail("expected atom")
        if t.text == "not":
            self.fail("'not' is a keyword and cannot name an atom")
        self.next()
        self._check_name(t, "atom name")
        if not self.at("("):
            return t.text
        self.next()
        args = [self.term()]
        while self.at(","):
            self.next()
            args.append(self.term())
        self.expect(")")
        return f"{t.text}({','.join(args)})"

    def term(self) -> str:
        t = self.tok
        if t.type == "int":
            self.next()
            return str(int(t.text))
        if t.type == "string":
            if any(c.isspace() for c in t.text):
                self.fail("quoted constants may not contain whitespace", t)
            self.next()
            return t.text
        if t.type == "ident":
            self._check_name(t, "argument")
            if self.allow_generated and self.toks[self.i + 1].text == "(":
                return self.atom()  # nested terms only appear in generated tags
            self.next()
            return t.text
        self.fail("expected constant")

    def literal(self) -> Literal:
        sign = Sign.POS
        if self.tok.type == "ident" and self.tok.text == "not":
            self.next()
            sign = Sign.NEG
            if self.tok.type == "ident" and self.tok.text == "not":
                self.next()
                sign = Sign.NEGNEG
        return Literal(self.atom(), sign)

    def rule(self) -> Rule:
        start = self.tok
        kind: HeadKind
        heads: tuple[str, ...] = ()
        if self.at(":-"):
            kind = HeadKind.BOTTOM
        elif self.at("{"):
            self.next()
            heads = (self.atom(),)
            self.expect("}")
            kind = HeadKind.CHOICE
        else:
            first = self.atom()
            heads = (first,)
            kind = HeadKind.PLAIN
            while self.at("|"):
                self.next()
                t = self.tok
                a = self.atom()
                if a in heads:
                    self.fail(f"atom {a!r} repeated in disjunctive head", t, "duplicate-literal")
                heads += (a,)
                kind = HeadKind.DISJUNCTION
        body: list[Literal] = []
        if self.at(":-"):
            self.next()
            body.append(self.literal())
            while self.at(","):
                self.next()
                body.append(self.literal())
        elif kind is HeadKind.BOTTOM:
            self.fail("expected rule", start)
        self.expect(".")
        return Rule(kind, heads, tuple(body))


def parse(text: str, *, allow_generated: bool = False) -> Program:
    """Parse a ground program.

    ``allow_generated`` admits ``__``-prefixed atoms and nested argument
    terms, which only the tool itself produces (e.g. dumped meta-programs).
    """
    reader = _Reader(text, allow_generated)
    rules = []
    while reader.tok.type != "eof":
        rules.append(reader.rule())
    return Program(rules)


def parse_atom(text: str, *, allow_generated: bool = False) -> str:
    reader = _Reader(text, allow_generated)
    a = reader.atom()
    if reader.tok.type != "eof":
        reader.fail("trailing input after atom")
    return a


def parse_omission(text: str, *, allow_generated: bool = False) -> OmissionSet:
    """One atom per line; ``%`` comments and blank lines are ignored."""
    atoms = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("%", 1)[0]
        if not line.strip():
            continue
        try:
            atoms.append(parse_atom(line, allow_generated=allow_generated))
        except ParseError as e:
            raise ParseError(lineno, e.column, e.message, e.kind) from None
    return OmissionSet(frozenset(atoms))


def format_rule(r: Rule) -> str:
    body = ", ".join(str(l) for l in r.body)
    if r.kind is HeadKind.BOTTOM:
        return f":- {body}."
    if r.kind is HeadKind.CHOICE:
        head = "{" + r.head_atoms[0] + "}"
    else:
        head = " | ".join(r.head_atoms)
    return f"{head} :- {body}." if body else f"{head}."


def serialize(program: Program | Iterable[Rule], style: str = "canonical") -> str:
    """One rule per line, no trailing newline.

    ``annotated`` puts a ``% <name>:`` comment line above each rule so the
    output still parses to the same program.
    """
    rules = program.rules if isinstance(program, Program) else tuple(program)
    if style == "canonical":
        return "\n".join(format_rule(r) for r in rules)
    if style == "annotated":
        return "\n".join(f"% {r.name}:\n{format_rule(r)}" for r in rules)
    raise ValueError(f"unknown style {style!r}")


def serialize_omission(omission: Iterable[str], order: Iterable[str] = ()) -> str:
    atoms = set(omission)
    ordered = [a for a in order if a in atoms]
    ordered += sorted(atoms - set(ordered))
    return "\n".join(ordered)
