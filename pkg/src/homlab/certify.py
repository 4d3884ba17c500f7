"""Grid branch-and-bound certification of the rate bound.

Boxes live on an integer lattice whose unit is the finest width ``eps_min``:
box coordinates are ``a_i = J_i * unit`` and ``b_i = (J_i + W) * unit``.
Admissibility tests run on the integers with exact rational thresholds;
only the box bound itself is evaluated in floating point.
"""

from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import ceil, floor

import numpy as np

from homlab import kernels, rate

log = logging.getLogger(__name__)

MAX_A = Fraction("0.24")  # every admissible y_i is at most 0.5 - 6 * 0.0446 = 0.2324
DEFAULT_SLACK = 1e-6
DEFAULT_MAX_OFFENDERS = 100
DEFAULT_CHUNK = 1 << 18


class ScheduleError(ValueError):
    pass


def as_fraction(x) -> Fraction:
    """Exact decimal value of a user-supplied step such as ``0.01``."""
    if isinstance(x, Fraction):
        return x
    return Fraction(str(x))


@dataclass
class Lattice:
    unit: Fraction
    levels: int
    half_floor: int
    half_ceil: int
    min_upper: int
    max_lower: int

    @classmethod
    def build(cls, eps0, eps_min) -> "Lattice":
        e0, emin = as_fraction(eps0), as_fraction(eps_min)
        if not (0 < emin <= e0 <= Fraction(1, 10)):
            raise ScheduleError("need 0 < eps_min <= eps0 <= 0.1")
        ratio = e0 / emin
        if ratio.denominator != 1 or ratio.numerator & (ratio.numerator - 1):
            raise ScheduleError("eps0 / eps_min must be a power of two")
        half = Fraction(1, 2) / emin
        return cls(
            unit=emin,
            levels=ratio.numerator.bit_length() - 1,
            half_floor=floor(half),
            half_ceil=ceil(half),
            min_upper=ceil(as_fraction(rate.MIN_CUT) / emin),
            max_lower=floor(MAX_A / emin),
        )

    def width(self, level: int) -> int:
        return 1 << (self.levels - level)

    def eps(self, level: int) -> float:
        return float(self.unit * self.width(level))

    def corners(self, J: np.ndarray, W: int) -> tuple[np.ndarray, np.ndarray]:
        u = float(self.unit)
        return J * u, (J + W) * u

    def admissible(self, J: np.ndarray, W: int) -> np.ndarray:
        """Exact integer form of the box constraints (without the 1/e test)."""
        s = J.sum(axis=1)
        ok = (s <= self.half_floor) & (s + 7 * W >= self.half_ceil)
        ok &= ((J + W) >= self.min_upper).all(axis=1)
        nxt = np.roll(J, -1, axis=1) + W
        ok &= (J[:, 1:] <= 2 * nxt[:, 1:]).all(axis=1)
        return ok

    def root_boxes(self) -> np.ndarray:
        """All level-0 lattice boxes passing the sum and size constraints, lexicographic."""
        W = self.width(0)
        kmin = max(0, -(-self.min_upper // W) - 1)
        kmax = self.max_lower // W
        vals = np.arange(kmin, kmax + 1, dtype=np.int64)
        prefix = np.zeros((1, 0), dtype=np.int64)
        for c in range(7):
            rest = 6 - c
            grown = np.repeat(prefix, len(vals), axis=0)
            col = np.tile(vals, len(prefix))[:, None]
            prefix = np.hstack([grown, col])
            s = prefix.sum(axis=1)
            keep = (s + rest * kmin) * W <= self.half_floor
            keep &= (s + rest * kmax + 7) * W >= self.half_ceil
            prefix = prefix[keep]
        return prefix * W


def children(J: np.ndarray, W: int) -> np.ndarray:
    """The 128 half-width sub-boxes of each row, tiling the parent."""
    half = W // 2
    bits = ((np.arange(128)[:, None] >> np.arange(7)[None, :]) & 1) * half
    return (J[:, None, :] + bits[None, :, :]).reshape(-1, 7)


def canonical(J: np.ndarray) -> np.ndarray:
    if len(J) == 0:
        return J
    order = np.lexsort(J.T[::-1])
    return J[order]


def _evaluate_chunk(args):
    a, b = args
    out, flags = kernels.box_bounds(a, b)
    for r in np.flatnonzero(flags):
        out[r] = rate.box_bound(rate.BoxSpec(tuple(a[r]), tuple(b[r])))
    return out, flags


def evaluate(a: np.ndarray, b: np.ndarray, workers: int = 1, pool=None):
    """Box bounds for many boxes; output is independent of ``workers``."""
    if len(a) == 0:
        return np.empty(0), np.empty(0, dtype=np.int32)
    if pool is None or workers <= 1:
        return _evaluate_chunk((a, b))
    pieces = max(1, min(len(a), workers * 4))
    bounds = np.linspace(0, len(a), pieces + 1).astype(int)
    jobs = [(a[lo:hi], b[lo:hi]) for lo, hi in zip(bounds[:-1], bounds[1:])]
    results = list(pool.map(_evaluate_chunk, jobs))
    return (np.concatenate([r[0] for r in results]),
            np.concatenate([r[1] for r in results]))


@dataclass
class LevelStats:
    eps: float
    boxes_enumerated: int
    boxes_feasible: int
    boxes_unsound: int
    offenders: int
    max_log_bound: float


@dataclass
class CertificationReport:
    threshold: float
    log_threshold: float
    slack: float
    epsilon_schedule: list
    boxes_enumerated: int
    boxes_feasible: int
    boxes_refined: int
    unsound_boxes: int
    fallback_boxes: int
    max_log_bound: float
    max_bound: float
    worst_box: dict
    certified: bool
    offender_count: int
    offender_list: list = field(default_factory=list)
    refinement_histogram: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"


def _box_record(lat: Lattice, J: np.ndarray, W: int, value: float) -> dict:
    a, b = lat.corners(J[None, :], W)
    return {"a": [float(x) for x in a[0]], "b": [float(x) for x in b[0]],
            "log_bound": float(value)}


def certify(threshold: float = 0.99, eps0=0.01, eps_min=0.00125,
            slack: float = DEFAULT_SLACK, workers: int = 1,
            max_offenders: int = DEFAULT_MAX_OFFENDERS,
            chunk: int = DEFAULT_CHUNK) -> CertificationReport:
    """Show the box bound stays below ``ln(threshold)`` on every admissible box.

    Level-0 boxes have width ``eps0``; any box whose bound plus ``slack``
    reaches ``ln(threshold)`` is re-gridded at half width, down to ``eps_min``.
    Refinement runs depth-first over fixed-size chunks of parents, so memory
    stays bounded and the report does not depend on ``workers``.
    """
    if not threshold > 0:
        raise ScheduleError("threshold must be positive")
    if slack < 0:
        raise ScheduleError("slack must be non-negative")
    if workers < 1:
        raise ScheduleError("workers must be at least 1")
    lat = Lattice.build(eps0, eps_min)
    sweep = _Sweep(lat, math.log(threshold), slack, workers, chunk, max_offenders)
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        sweep.pool = pool
        sweep.run()
    finally:
        if pool is not None:
            pool.shutdown()
    return sweep.report(threshold)


class _Sweep:
    def __init__(self, lat, log_thr, slack, workers, chunk, max_offenders):
        self.lat = lat
        self.log_thr = log_thr
        self.slack = slack
        self.workers = workers
        self.chunk = chunk
        self.max_offenders = max_offenders
        self.pool = None
        self.stats = [LevelStats(lat.eps(d), 0, 0, 0, 0, -math.inf)
                      for d in range(lat.levels + 1)]
        self.fallback = 0
        self.refined = 0
        self.worst_val = -math.inf
        self.worst_rec = None
        self.offender_count = 0
        self.offenders: list[dict] = []

    def run(self):
        self.visit(self.lat.root_boxes(), 0)

    def visit(self, J, level):
        lat, st = self.lat, self.stats[level]
        W = lat.width(level)
        st.boxes_enumerated += len(J)
        J = canonical(J[lat.admissible(J, W)])
        st.boxes_feasible += len(J)
        for lo in range(0, len(J), self.chunk):
            self.visit_chunk(J[lo:lo + self.chunk], level)

    def visit_chunk(self, J, level):
        lat, st = self.lat, self.stats[level]
        W = lat.width(level)
        a, b = lat.corners(J, W)
        b_next = np.roll(b, -1, axis=1)
        margin = b_next - a + np.minimum(b, b_next)
        unsound = (margin[:, 1:] >= rate.INV_E).any(axis=1)
        values, flags = evaluate(a, b, self.workers, self.pool)
        values = np.where(unsound, np.inf, values)
        self.fallback += int(np.count_nonzero(flags))
        st.boxes_unsound += int(unsound.sum())
        if len(values):
            st.max_log_bound = max(st.max_log_bound, float(values.max()))
        bad = values + self.slack >= self.log_thr
        st.offenders += int(bad.sum())

        final = level == lat.levels
        leaf = ~bad | final
        if leaf.any():
            k = int(np.argmax(np.where(leaf, values, -np.inf)))
            if values[k] > self.worst_val:
                self.worst_val = float(values[k])
                self.worst_rec = _box_record(lat, J[k], W, values[k])
        if not bad.any():
            return
        if final:
            self.offender_count += int(bad.sum())
            room = self.max_offenders - len(self.offenders)
            for r in np.flatnonzero(bad)[:max(room, 0)]:
                self.offenders.append(_box_record(lat, J[r], W, values[r]))
            return
        parents = J[bad]
        self.refined += len(parents)
        step = max(1, self.chunk // 128)
        for lo in range(0, len(parents), step):
            self.visit(children(parents[lo:lo + step], W), level + 1)

    def report(self, threshold) -> CertificationReport:
        used = [s for s in self.stats if s.boxes_enumerated]
        worst = self.worst_val
        return CertificationReport(
            threshold=threshold,
            log_threshold=self.log_thr,
            slack=self.slack,
            epsilon_schedule=[s.eps for s in used],
            boxes_enumerated=sum(s.boxes_enumerated for s in used),
            boxes_feasible=sum(s.boxes_feasible for s in used),
            boxes_refined=self.refined,
            unsound_boxes=sum(s.boxes_unsound for s in used),
            fallback_boxes=self.fallback,
            max_log_bound=worst,
            max_bound=math.exp(worst) if worst < 700 else math.inf,
            worst_box=self.worst_rec or {},
            certified=self.offender_count == 0,
            offender_count=self.offender_count,
            offender_list=self.offenders,
            refinement_histogram=[asdict(s) for s in used],
        )
