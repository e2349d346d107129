"""Count debug-program property violations for both bad-omission variants.

For every abstract answer set of random programs under random omissions,
checks that the debug program is satisfiable, agrees with the abstract
answer set, and has a badomit-free answer set iff the set is concrete.
"""
from __future__ import annotations

import argparse
import random
import sys
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from checks import debug_properties  # noqa: E402
from programs import corpus, random_omission  # noqa: E402

from aspomit.abstraction import abstract_answer_sets  # noqa: E402


@dataclass
class Config:
    seed: int = 0
    programs: int = 500
    max_atoms: int = 10
    max_rules: int = 15
    omit_probability: float = 0.4
    show: int = 3


def _kind(violation: str) -> str:
    if "unsatisfiable" in violation:
        return "unsatisfiable"
    if violation.startswith("spurious"):
        return "missing badomit"
    if violation.startswith("concrete"):
        return "spurious badomit"
    return "disagrees"


def main(cfg: Config) -> None:
    rng = random.Random(cfg.seed)
    cases = [(p, random_omission(rng, p, cfg.omit_probability))
             for p in corpus(cfg.seed, cfg.programs, max_atoms=cfg.max_atoms,
                             max_rules=cfg.max_rules)]
    total = sum(len(abstract_answer_sets(p, A)) for p, A in cases)
    print(f"{len(cases)} programs, {total} abstract answer sets")
    for variant in ("repaired", "literal"):
        found = []
        for i, (p, A) in enumerate(cases):
            found += [(i, v) for v in debug_properties(p, A, variant)]
        kinds = Counter(_kind(v) for _, v in found)
        print(f"{variant}: {len(found)} violations {dict(kinds)}")
        for i, v in found[:cfg.show]:
            p, A = cases[i]
            print(f"  program #{i}, A={sorted(A)}: {v}")
            print("    " + str(p).replace("\n", "\n    "))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--programs", type=int, default=500)
    ap.add_argument("--show", type=int, default=3)
    a = ap.parse_args()
    main(Config(seed=a.seed, programs=a.programs, show=a.show))
