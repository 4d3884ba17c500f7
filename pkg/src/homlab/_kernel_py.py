"""Vectorised numpy box-bound kernel; used when the compiled kernel is absent."""

import math

import numpy as np

INV_E = math.exp(-1.0)


def _lg(x):
    # x ln x with 0 ln 0 = 0; tiny negative rounding noise is clipped to 0
    x = np.maximum(x, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(x > 0, x * np.log(np.where(x > 0, x, 1.0)), 0.0)


def _f0(a0, b0, b1):
    def ratio(x):
        return 2 * _lg(x + b1) - _lg(x) - 2 * _lg(b1)

    best = np.maximum(ratio(a0), ratio(b0))
    p = 2 * b1 - INV_E
    disc = p * p - 4 * b1 * b1
    r = np.sqrt(np.maximum(disc, 0.0))
    for x in ((-p - r) / 2, (-p + r) / 2):
        inside = (disc >= 0) & (x > a0) & (x < b0)
        if inside.any():
            best = np.where(inside, np.maximum(best, ratio(np.where(inside, x, a0))), best)
    return best


def _factor(a_i, b_i, b_n):
    lo = np.maximum(0.0, a_i - b_n)
    hi = np.minimum(b_i, b_n)
    empty = lo > hi

    def expr(z):
        return (_lg(b_i) + _lg(b_n) + _lg(b_i + b_n - z)
                - _lg(z) - 2 * _lg(b_i - z) - _lg(b_n - a_i + z) - _lg(b_n - z))

    A = b_n + b_i - a_i
    B = b_n * a_i + b_i * a_i - 3 * b_n * b_i - b_i * b_i - b_n * b_n
    C = b_i * b_i * b_n
    disc = B * B - 4 * A * C
    bad = (disc < 0) & ~empty
    with np.errstate(divide="ignore", invalid="ignore"):
        z = 2 * C / (-B + np.sqrt(np.maximum(disc, 0.0)))
    z = np.minimum(np.maximum(z, lo), hi)
    best = np.maximum(np.maximum(expr(z), expr(lo)), expr(hi))
    best = np.where(empty, -np.inf, best)
    return best, bad


def box_bounds(a, b):
    """Log box bound for each row of ``a`` and ``b`` (shape ``(N, 7)``).

    Returns ``(bounds, flags)``; a nonzero flag marks a row whose quadratic
    had a negative discriminant and must be re-evaluated by the scalar path.
    """
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    total = _f0(a[:, 0], b[:, 0], b[:, 1])
    flags = np.zeros(len(a), dtype=np.int32)
    for i in range(1, 7):
        j = (i + 1) % 7
        f, bad = _factor(a[:, i], b[:, i], b[:, j])
        total = total + f
        flags |= bad.astype(np.int32)
    return total, flags
