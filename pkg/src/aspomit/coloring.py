"""Ground graph-coloring programs and random unsatisfiable instances."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Optional

from .core import Program, Rule, choice, constraint, neg, rule

COLOR_NAMES = ("red", "green", "blue")


class InvalidInstance(ValueError):
    pass


def color_names(k: int) -> list[str]:
    return list(COLOR_NAMES[:k]) + [f"c{i}" for i in range(len(COLOR_NAMES) + 1, k + 1)]


@dataclass(frozen=True)
class GraphInstance:
    nodes: int
    edges: tuple[tuple[int, int], ...]
    colors: int = 2
    seed: Optional[int] = None
    name: str = ""

    def __post_init__(self):
        if self.nodes < 1:
            raise InvalidInstance("a graph needs at least one node")
        if self.colors < 2:
            raise InvalidInstance("need at least two colors")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise InvalidInstance(f"self-loop on node {u}")
            if not (1 <= u <= self.nodes and 1 <= v <= self.nodes):
                raise InvalidInstance(f"edge ({u},{v}) outside 1..{self.nodes}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise InvalidInstance(f"duplicate edge ({u},{v})")
            seen.add(key)

    def with_colors(self, k: int) -> "GraphInstance":
        return GraphInstance(self.nodes, self.edges, k, self.seed, self.name)


# node placement of the two small bundled graphs
FIG1A = GraphInstance(9, ((1, 3), (3, 2), (2, 1), (1, 6), (6, 7), (7, 2), (2, 8), (8, 9),
                          (9, 3), (3, 4), (4, 5), (5, 1)), 2, name="fig1a")
FIG1B = GraphInstance(8, ((1, 4), (4, 3), (3, 2), (2, 1), (1, 6), (6, 2), (2, 7), (7, 3),
                          (3, 8), (8, 4), (4, 5), (5, 1), (1, 3), (4, 2)), 3, name="fig1b")


def chosen(n: int, c: str) -> str:
    return f"chosenColor({n},{c})"


def colored(n: int) -> str:
    return f"colored({n})"


def ground_coloring(g: GraphInstance) -> tuple[Program, dict[str, tuple[str, ...]]]:
    """Ground coloring program plus the node -> atoms group map."""
    colors = color_names(g.colors)
    nodes = range(1, g.nodes + 1)
    rules: list[Rule] = []
    rules += [choice(chosen(n, c)) for c in colors for n in nodes]
    rules += [rule(colored(n), chosen(n, c)) for c in colors for n in nodes]
    rules += [constraint(neg(colored(n))) for n in nodes]
    rules += [constraint(chosen(n, c1), chosen(n, c2))
              for n in nodes for c1, c2 in itertools.combinations(colors, 2)]
    rules += [constraint(chosen(v, c), chosen(u, c)) for c in colors for u, v in g.edges]
    groups = {str(n): tuple(chosen(n, c) for c in colors) + (colored(n),) for n in nodes}
    return Program(rules), groups


def is_colorable(g: GraphInstance) -> bool:
    """Brute-force oracle (meant for graphs of at most ~10 nodes)."""
    adj = {n: set() for n in range(1, g.nodes + 1)}
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    coloring: dict[int, int] = {}

    def place(n: int) -> bool:
        if n > g.nodes:
            return True
        for c in range(g.colors):
            if all(coloring.get(m) != c for m in adj[n]):
                coloring[n] = c
                if place(n + 1):
                    return True
                del coloring[n]
        return False

    return place(1)


def random_graph(nodes: int, density: float, colors: int, seed: int) -> GraphInstance:
    rng = random.Random(seed)
    edges = tuple((u, v) for u, v in itertools.combinations(range(1, nodes + 1), 2)
                  if rng.random() < density)
    return GraphInstance(nodes, edges, colors, seed, name=f"gc_n{nodes}_k{colors}_s{seed}")


def random_uncolorable(nodes: int, colors: int, seed: int, density: float = 0.5,
                       max_tries: int = 1000) -> GraphInstance:
    """First non-``colors``-colorable graph drawn from a seeded stream."""
    rng = random.Random(seed)
    for _ in range(max_tries):
        g = random_graph(nodes, density, colors, rng.randrange(2 ** 31))
        if not is_colorable(g):
            return GraphInstance(g.nodes, g.edges, colors, seed,
                                 name=f"gc_n{nodes}_k{colors}_s{seed}")
    raise InvalidInstance(f"no uncolorable graph found in {max_tries} draws")


def graph_text(g: GraphInstance) -> str:
    """``nodes colors`` on the first line, then one ``u v`` edge per line."""
    lines = [f"{g.nodes} {g.colors}"] + [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def parse_graph(text: str, name: str = "") -> GraphInstance:
    rows = [line.split("%", 1)[0].split() for line in text.splitlines()]
    rows = [r for r in rows if r]
    if not rows or len(rows[0]) != 2:
        raise InvalidInstance("first line must be '<nodes> <colors>'")
    try:
        nodes, colors = int(rows[0][0]), int(rows[0][1])
        edges = tuple((int(u), int(v)) for u, v in rows[1:])
    except ValueError as e:
        raise InvalidInstance(f"malformed graph file: {e}") from None
    return GraphInstance(nodes, edges, colors, name=name)


def node_groups(program: Program, groups: dict[str, Iterable[str]]) -> dict[str, tuple[str, ...]]:
    """Restrict a group map to atoms that occur in ``program``."""
    return {k: tuple(a for a in v if a in program.atom_set) for k, v in groups.items()}
