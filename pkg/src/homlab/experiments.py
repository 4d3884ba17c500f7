"""Monte Carlo drivers over the pairing model, with exhaustive mode for tiny n."""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from homlab.graph import (
    MultiGraph,
    CycleTarget,
    is_simple,
    max_independent_set_size,
    union_of_matchings,
)
from homlab.hom import find_homomorphism
from homlab.sampler import all_triples, random_triple, stream

KINDS = ("hom-fraction", "simplicity", "mis-trend")
CSV_COLUMNS = ["kind", "n", "k", "samples", "successes", "fraction", "stderr", "seed"]
MIS_RATIO = 0.4554
EXHAUSTIVE_LIMIT = 10**5


@dataclass(frozen=True)
class ExperimentSpec:
    kind: str
    ns: tuple[int, ...]
    samples: int
    seed: int = 0
    k: int = 7

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment {self.kind!r}; choose from {KINDS}")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if not self.ns or any(n < 2 or n % 2 for n in self.ns):
            raise ValueError("every n must be even and at least 2")
        if self.kind == "hom-fraction" and self.k < 3:
            raise ValueError("target cycle needs k >= 3")


@dataclass(frozen=True)
class ExperimentRow:
    kind: str
    n: int
    k: int | None
    samples: int
    successes: int
    fraction: float
    stderr: float
    seed: int
    exact: Fraction | None = None
    mean_ratio: float | None = None

    def csv_fields(self) -> list:
        return [self.kind, self.n, "" if self.k is None else self.k, self.samples,
                self.successes, repr(self.fraction), repr(self.stderr), self.seed]


def double_factorial_odd(n: int) -> int:
    return math.prod(range(n - 1, 0, -2))


def exhaustive(n: int) -> bool:
    return double_factorial_odd(n) ** 3 <= EXHAUSTIVE_LIMIT


def is_bipartite(g: MultiGraph) -> bool:
    colour = [-1] * g.vertex_count
    nbrs = g.neighbors()
    for s in range(g.vertex_count):
        if colour[s] >= 0:
            continue
        colour[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for w in nbrs[u]:
                if colour[w] < 0:
                    colour[w] = 1 - colour[u]
                    stack.append(w)
                elif colour[w] == colour[u]:
                    return False
    return True


def maps_to_cycle(g: MultiGraph, k: int) -> bool:
    # even cycles are bipartite, so a map exists exactly when g is bipartite
    if k % 2 == 0:
        return is_bipartite(g)
    return find_homomorphism(g, CycleTarget(k)) is not None


def _score(kind: str, g: MultiGraph, k: int) -> tuple[int, int]:
    """(success, MIS size) for one union graph; MIS is 0 unless kind is mis-trend."""
    if kind == "hom-fraction":
        return int(maps_to_cycle(g, k)), 0
    if kind == "simplicity":
        return int(is_simple(g)), 0
    alpha = max_independent_set_size(g)
    return int(alpha < MIS_RATIO * g.vertex_count), alpha


def _chunk(args) -> tuple[int, int]:
    kind, n, k, seed, lo, hi = args
    wins = mis = 0
    for i in range(lo, hi):
        w, a = _score(kind, union_of_matchings(random_triple(n, stream(seed, n, i))), k)
        wins += w
        mis += a
    return wins, mis


def _row(spec: ExperimentSpec, n: int, samples: int, wins: int, mis: int,
         exact: bool) -> ExperimentRow:
    frac = Fraction(wins, samples)
    p = float(frac)
    err = 0.0 if exact else math.sqrt(p * (1 - p) / samples)
    return ExperimentRow(
        kind=spec.kind, n=n, k=spec.k if spec.kind == "hom-fraction" else None,
        samples=samples, successes=wins, fraction=p, stderr=err, seed=spec.seed,
        exact=frac if exact else None,
        mean_ratio=mis / (samples * n) if spec.kind == "mis-trend" else None)


def run(spec: ExperimentSpec, workers: int | None = None) -> list[ExperimentRow]:
    """One row per n. Rows depend only on ``spec``, never on ``workers``."""
    workers = workers or default_workers()
    rows = []
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        for n in spec.ns:
            if exhaustive(n):
                wins = mis = total = 0
                for t in all_triples(n):
                    w, a = _score(spec.kind, union_of_matchings(t), spec.k)
                    wins, mis, total = wins + w, mis + a, total + 1
                rows.append(_row(spec, n, total, wins, mis, exact=True))
                continue
            step = max(1, -(-spec.samples // (4 * workers)))
            jobs = [(spec.kind, n, spec.k, spec.seed, lo, min(lo + step, spec.samples))
                    for lo in range(0, spec.samples, step)]
            parts = pool.map(_chunk, jobs) if pool else map(_chunk, jobs)
            wins = mis = 0
            for w, a in parts:
                wins, mis = wins + w, mis + a
            rows.append(_row(spec, n, spec.samples, wins, mis, exact=False))
    finally:
        if pool is not None:
            pool.shutdown()
    return rows


def run_hom_fraction(spec: ExperimentSpec, workers: int | None = None) -> list[ExperimentRow]:
    if spec.kind != "hom-fraction":
        raise ValueError("spec is not a hom-fraction experiment")
    return run(spec, workers)


def run_simplicity(spec: ExperimentSpec, workers: int | None = None) -> list[ExperimentRow]:
    if spec.kind != "simplicity":
        raise ValueError("spec is not a simplicity experiment")
    return run(spec, workers)


def run_mis_trend(spec: ExperimentSpec, workers: int | None = None) -> list[ExperimentRow]:
    if spec.kind != "mis-trend":
        raise ValueError("spec is not a mis-trend experiment")
    return run(spec, workers)


def mis_diagnostic(g: MultiGraph) -> ExperimentRow:
    """Single fixed graph scored like one mis-trend sample."""
    w, a = _score("mis-trend", g, 0)
    return ExperimentRow("mis-trend", g.vertex_count, None, 1, w, float(w), 0.0, 0,
                         exact=Fraction(w), mean_ratio=a / g.vertex_count)


def to_csv(rows: list[ExperimentRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow(r.csv_fields())
    return buf.getvalue()


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("HOMLAB_WORKERS", "1")))
    except ValueError:
        return 1
