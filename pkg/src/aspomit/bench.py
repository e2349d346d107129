"""Blocker benchmark: top-down and bottom-up pipelines averaged over seeds."""
from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from statistics import mean
from typing import Optional, Sequence

from .core import Program
from .driver import bottom_up_blocker, compute_min_blocker, verify_blocker

HEADER = ("instance", "mode", "atoms", "init_ratio", "final_ratio", "refs", "t_absref",
          "blocker_ratio", "t_blocker", "error")


@dataclass(frozen=True)
class BenchInstance:
    name: str
    program: Program
    groups: Optional[dict[str, tuple[str, ...]]] = None


@dataclass(frozen=True)
class Mode:
    kind: str  # topdown | bottomup
    percent: float = 0
    strategy: str = "random"

    @classmethod
    def parse(cls, text: str) -> "Mode":
        """``topdown`` or ``bottomup:<percent>[:<strategy>]``."""
        parts = text.split(":")
        if parts[0] == "topdown" and len(parts) == 1:
            return cls("topdown")
        if parts[0] == "bottomup" and len(parts) in (2, 3):
            return cls("bottomup", float(parts[1]), parts[2] if len(parts) == 3 else "random")
        raise ValueError(f"bad mode {text!r}")

    def __str__(self) -> str:
        if self.kind == "topdown":
            return "topdown"
        return f"bottomup:{self.percent:g}:{self.strategy}"


@dataclass
class BenchRow:
    instance: str
    mode: str
    atoms: int
    init_ratio: float = 0.0
    final_ratio: float = 0.0
    refs: float = 0.0
    t_absref: float = 0.0
    blocker_ratio: float = 0.0
    t_blocker: float = 0.0
    error: str = ""
    blockers: list[frozenset[str]] = field(default_factory=list)

    def cells(self) -> list[str]:
        return [self.instance, self.mode, str(self.atoms), f"{self.init_ratio:.4f}",
                f"{self.final_ratio:.4f}", f"{self.refs:.2f}", f"{self.t_absref:.3f}",
                f"{self.blocker_ratio:.4f}", f"{self.t_blocker:.3f}", self.error]


def run_one(inst: BenchInstance, mode: Mode, seeds: Sequence[int], objective: str = "half",
            verify: bool = True) -> BenchRow:
    n = len(inst.program.atoms)
    row = BenchRow(inst.name, str(mode), n)
    runs = []
    try:
        if mode.kind == "topdown":
            t0 = time.perf_counter()
            res = compute_min_blocker(inst.program)
            runs.append((0.0, 0.0, 0, 0.0, res.blocker, time.perf_counter() - t0))
        else:
            for seed in seeds:
                res = bottom_up_blocker(inst.program, mode.percent, mode.strategy, seed,
                                        inst.groups, objective=objective)
                ref = res.absref
                init = ref.trace[0]["omittedCount"]
                runs.append((init / n, len(ref.final_omission) / n, ref.refinement_steps,
                             ref.wall_time, res.blocker, res.wall_time - ref.wall_time))
        for *_, blocker, _t in runs:
            row.blockers.append(blocker)
            if verify:
                check = verify_blocker(inst.program, blocker, check_minimal=True)
                if not (check.is_blocker and check.is_minimal):
                    row.error = "blocker failed verification"
    except Exception as e:  # recorded per row; the harness keeps going
        row.error = f"{type(e).__name__}: {e}"
        return row
    row.init_ratio = mean(r[0] for r in runs)
    row.final_ratio = mean(r[1] for r in runs)
    row.refs = mean(r[2] for r in runs)
    row.t_absref = mean(r[3] for r in runs)
    row.blocker_ratio = mean(len(r[4]) / n for r in runs)
    row.t_blocker = mean(r[5] for r in runs)
    return row


def _task(args):
    return run_one(*args)


def run_bench(instances: Sequence[BenchInstance], modes: Sequence[Mode],
              seeds: Sequence[int] = (0,), objective: str = "half", jobs: int = 1,
              verify: bool = True) -> list[BenchRow]:
    tasks = [(inst, mode, tuple(seeds), objective, verify) for inst in instances for mode in modes]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_task, tasks))
    return [_task(t) for t in tasks]


def to_csv(rows: Sequence[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for row in rows:
        w.writerow(row.cells())
    return buf.getvalue()
