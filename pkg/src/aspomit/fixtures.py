"""Bundled example programs and graphs."""
from __future__ import annotations

from importlib import resources

from .coloring import GraphInstance, parse_graph
from .core import Program
from .parser import parse

PROGRAMS = ("pi_ex", "pi_ex_unsat", "loop_pos", "loop_odd", "unsupported", "chain")
GRAPHS = ("fig1a", "fig1b")


def fixture_text(filename: str) -> str:
    return resources.files(__package__).joinpath("data", filename).read_text("utf-8")


def load_program(name: str) -> Program:
    if name not in PROGRAMS:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(PROGRAMS)}")
    return parse(fixture_text(f"{name}.lp"))


def load_graph(name: str) -> GraphInstance:
    if name not in GRAPHS:
        raise KeyError(f"unknown graph {name!r}; available: {', '.join(GRAPHS)}")
    return parse_graph(fixture_text(f"{name}.graph"), name=name)


def golden(name: str) -> str:
    return fixture_text(f"{name}.golden.lp").rstrip("\n")
