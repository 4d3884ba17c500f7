"""Exponential rate of the expected number of tight homomorphisms into C7.

Everything here works on the log scale: ``log_g(x) = x ln x`` stands in for
``g(x) = x**x``. The scalar functions in this module are the reference
implementation; :mod:`homlab.kernels` evaluates the same box bound over many
boxes at once and is what the certification sweep uses.

Variables ``y[i]`` are cut counts per vertex (``m_i / n``), indices mod 7.
A box is given by lower corners ``a`` and upper corners ``b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

INV_E = math.exp(-1.0)
MIN_CUT = 0.0446          # lower bound on y_i implied by the 0.4554n independence bound
SUM_Y = 0.5
MAX_WIDTH = 0.1
SCAN_POINTS = 10_000


class UnsoundBox(ValueError):
    """The g-monotonicity hypothesis fails, so the box bound is not valid."""


class Infeasible(ValueError):
    """Point or box violates the admissible-region constraints."""


@dataclass(frozen=True)
class BoxSpec:
    a: tuple[float, ...]
    b: tuple[float, ...]

    def __post_init__(self):
        if len(self.a) != 7 or len(self.b) != 7:
            raise ValueError("a box needs 7 lower and 7 upper coordinates")
        for lo, hi in zip(self.a, self.b):
            if not 0 <= lo <= hi:
                raise ValueError(f"need 0 <= a_i <= b_i, got [{lo}, {hi}]")
            if hi - lo > MAX_WIDTH + 1e-15:
                raise ValueError(f"box side {hi - lo} exceeds {MAX_WIDTH}")

    @classmethod
    def uniform(cls, lo: float, hi: float) -> "BoxSpec":
        return cls((lo,) * 7, (hi,) * 7)

    def contains(self, y: Sequence[float]) -> bool:
        return all(lo <= v <= hi for lo, v, hi in zip(self.a, y, self.b))


@dataclass(frozen=True)
class FactorBound:
    index: int
    z_star: float
    log_factor: float
    feasible: bool
    fallback: bool = False


def log_g(x: float) -> float:
    """``ln(x**x)`` with the convention ``g(0) = 1``."""
    if x < 0:
        raise ValueError(f"log_g undefined for negative argument {x}")
    if x == 0:
        return 0.0
    return x * math.log(x)


def _quadratic_coeffs(a_i, b_i, b_next):
    A = b_next + b_i - a_i
    B = b_next * a_i + b_i * a_i - 3 * b_next * b_i - b_i * b_i - b_next * b_next
    C = b_i * b_i * b_next
    return A, B, C


def critical_z(a_i: float, b_i: float, b_next: float) -> float:
    """Smaller root of ``A z^2 + B z + C``, the stationary point of the factor.

    Raises ``ValueError`` when the discriminant is negative; callers that
    need robustness go through :func:`box_factor`, which falls back to a scan.
    """
    if b_i <= 0 or b_next <= 0:
        raise ValueError("critical_z needs positive b_i and b_next")
    if a_i > b_i:
        raise ValueError("critical_z needs a_i <= b_i")
    A, B, C = _quadratic_coeffs(a_i, b_i, b_next)
    disc = B * B - 4 * A * C
    if disc < 0:
        raise ValueError(f"negative discriminant {disc}")
    # B < 0 here, so -B + sqrt(disc) has no cancellation; 2C/(...) is the smaller root
    return 2 * C / (-B + math.sqrt(disc))


def stationarity_residual(z: float, a_i: float, b_i: float, b_next: float) -> float:
    """z-derivative of the log factor; zero at the critical point."""
    num = (b_next - z) * (b_i - z) ** 2
    den = z * (b_i + b_next - z) * (b_next - a_i + z)
    return math.log(num / den)


def factor_log(z: float, a_i: float, b_i: float, b_next: float) -> float:
    """Log of the per-index bound expression at ``z``."""
    return (
        log_g(b_i) + log_g(b_next) + log_g(b_i + b_next - z)
        - log_g(z) - 2 * log_g(b_i - z) - log_g(b_next - a_i + z) - log_g(b_next - z)
    )


def f0_log(x: float, y1: float) -> float:
    """Log of ``g(x + y1)^2 / (g(x) g(y1)^2)``."""
    return 2 * log_g(x + y1) - log_g(x) - 2 * log_g(y1)


def f0_stationary_points(b1: float) -> list[float]:
    # d/dx f0_log = ln((x+b1)^2 / x) + 1 = 0  <=>  x^2 + (2 b1 - 1/e) x + b1^2 = 0
    p = 2 * b1 - INV_E
    disc = p * p - 4 * b1 * b1
    if disc < 0:
        return []
    r = math.sqrt(disc)
    return [(-p - r) / 2, (-p + r) / 2]


def f0_bound(a0: float, b0: float, b1: float) -> float:
    """Bound on the index-0 factor over ``y0 in [a0, b0]``, ``y1 <= b1``.

    Takes the max over both endpoints and any stationary point inside the
    interval, so it holds even where the ratio is not monotone in ``y0``.
    """
    if not 0 <= a0 <= b0:
        raise ValueError("f0_bound needs 0 <= a0 <= b0")
    if b1 <= 0:
        raise ValueError("f0_bound needs b1 > 0")
    candidates = [a0, b0] + [x for x in f0_stationary_points(b1) if a0 < x < b0]
    return max(f0_log(x, b1) for x in candidates)


def feasible_z_interval(a_i: float, b_i: float, b_next: float) -> tuple[float, float]:
    return max(0.0, a_i - b_next), min(b_i, b_next)


def _golden_max(f, lo, hi, iters=80):
    inv_phi = (math.sqrt(5) - 1) / 2
    x1 = hi - inv_phi * (hi - lo)
    x2 = lo + inv_phi * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + inv_phi * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - inv_phi * (hi - lo)
            f1 = f(x1)
    x = (lo + hi) / 2
    return x, f(x)


def _xlogx(x):
    x = np.asarray(x, dtype=float)
    return np.where(x > 0, x * np.log(np.where(x > 0, x, 1.0)), 0.0)


def factor_log_array(z, a_i: float, b_i: float, b_next: float) -> np.ndarray:
    """Vectorised :func:`factor_log` over an array of ``z``."""
    z = np.asarray(z, dtype=float)
    return (
        log_g(b_i) + log_g(b_next) + _xlogx(b_i + b_next - z)
        - _xlogx(z) - 2 * _xlogx(b_i - z) - _xlogx(b_next - a_i + z) - _xlogx(b_next - z)
    )


def scan_max(f, lo: float, hi: float, points: int = SCAN_POINTS, vf=None) -> tuple[float, float]:
    """Dense scan of ``[lo, hi]`` followed by golden-section polish of the best cell.

    ``vf``, if given, evaluates ``f`` on a whole array at once.
    """
    if hi <= lo:
        return lo, f(lo)
    zs = np.linspace(lo, hi, points)
    vals = vf(zs) if vf is not None else [f(float(z)) for z in zs]
    k = int(np.argmax(vals))
    left = float(zs[max(k - 1, 0)])
    right = float(zs[min(k + 1, points - 1)])
    z, v = _golden_max(f, left, right)
    if vals[k] > v:
        return float(zs[k]), vals[k]
    return z, v


def hypothesis_margin(i: int, a: Sequence[float], b: Sequence[float]) -> float:
    """Largest argument of the ``g(b_{i+1} - a_i + z)`` term over ``B'_i``."""
    b_next = b[(i + 1) % 7]
    return b_next - a[i] + min(b[i], b_next)


def box_factor(i: int, box: BoxSpec) -> FactorBound:
    """Upper bound (log scale) on the i-th inner max over every y in the box."""
    if not 1 <= i <= 6:
        raise ValueError("box_factor index must be in 1..6")
    a_i, b_i, b_next = box.a[i], box.b[i], box.b[(i + 1) % 7]
    lo, hi = feasible_z_interval(a_i, b_i, b_next)
    if lo > hi:
        return FactorBound(i, math.nan, -math.inf, False)
    if hypothesis_margin(i, box.a, box.b) >= INV_E:
        raise UnsoundBox(f"b_(i+1) - a_i + z can reach 1/e at index {i}")

    def f(z):
        return factor_log(z, a_i, b_i, b_next)

    fallback = False
    try:
        z = min(max(critical_z(a_i, b_i, b_next), lo), hi)
        best_z, best = z, f(z)
    except ValueError:
        fallback = True
        best_z, best = scan_max(f, lo, hi, vf=lambda zs: factor_log_array(zs, a_i, b_i, b_next))
    for z in (lo, hi):
        v = f(z)
        if v > best:
            best_z, best = z, v
    return FactorBound(i, best_z, best, True, fallback)


def box_feasible(box: BoxSpec) -> bool:
    a, b = box.a, box.b
    if sum(a) > SUM_Y or sum(b) < SUM_Y:
        return False
    if any(bi < MIN_CUT for bi in b):
        return False
    if any(a[i] > 2 * b[(i + 1) % 7] for i in range(1, 7)):
        return False
    return all(hypothesis_margin(i, a, b) < INV_E for i in range(1, 7))


def box_bound(box: BoxSpec) -> float:
    """Log of the box bound h(a, b); dominates :func:`point_rate` on the box."""
    if not box_feasible(box):
        raise Infeasible("box violates the admissible-region constraints")
    total = f0_bound(box.a[0], box.b[0], box.b[1])
    for i in range(1, 7):
        total += box_factor(i, box).log_factor
    return total


def check_point(y: Sequence[float], tol: float = 1e-12) -> None:
    if len(y) != 7:
        raise ValueError("rate point needs 7 coordinates")
    if abs(sum(y) - SUM_Y) > tol:
        raise Infeasible(f"coordinates sum to {sum(y)}, not 1/2")
    for i in range(7):
        if y[i] < MIN_CUT:
            raise Infeasible(f"y[{i}] = {y[i]} below {MIN_CUT}")
    for i in range(1, 7):
        if y[i] > 2 * y[(i + 1) % 7]:
            raise Infeasible(f"y[{i}] > 2 y[{(i + 1) % 7}]")


def point_factor(i: int, y: Sequence[float]) -> float:
    """Inner max over z in B_i at a point, by scan and golden section."""
    y_i, y_next = y[i], y[(i + 1) % 7]

    def f(z):
        return factor_log(z, y_i, y_i, y_next)

    lo, hi = feasible_z_interval(y_i, y_i, y_next)
    def vf(zs):
        return factor_log_array(zs, y_i, y_i, y_next)

    return scan_max(f, lo, hi, points=2000, vf=vf)[1]


def point_rate(y: Sequence[float]) -> float:
    """Log of the rate expression at an admissible point ``y``."""
    check_point(y)
    total = f0_log(y[0], y[1])
    for i in range(1, 7):
        total += point_factor(i, y)
    return total
