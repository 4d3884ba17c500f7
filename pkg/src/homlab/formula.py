"""Exact counts of (tight homomorphism into C7, matching triple) pairs.

``tight_pair_count`` is the closed form per class-size composition;
``brute_force_tight_sum`` recounts the same total by enumerating every map
and every triple, and is only feasible for n <= 6.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial, prod

from homlab.graph import BudgetExceeded
from homlab.sampler import all_matchings

K = 7
EXPECTED_MAX_N = 60
BRUTE_MAX_N = 6


@lru_cache(maxsize=None)
def fact(n: int) -> int:
    return factorial(n)


@lru_cache(maxsize=None)
def binom(a: int, b: int) -> int:
    """``C(a, b)``, zero outside ``0 <= b <= a``."""
    if b < 0 or a < 0 or b > a:
        return 0
    return fact(a) // (fact(b) * fact(a - b))


def multinomial(n: int, parts) -> int:
    if sum(parts) != n or any(p < 0 for p in parts):
        return 0
    out = fact(n)
    for p in parts:
        out //= fact(p)
    return out


def _check_even(n: int) -> None:
    if n < 0 or n % 2:
        raise ValueError(f"vertex count must be even and non-negative, got {n}")


@dataclass(frozen=True)
class Composition:
    sizes: tuple[int, ...]

    def __post_init__(self):
        if len(self.sizes) != K or any(s < 0 for s in self.sizes):
            raise ValueError("composition needs 7 non-negative class sizes")
        _check_even(self.n)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def cuts(self) -> tuple[int, ...]:
        s, half = self.sizes, self.n // 2
        return tuple(half - (s[(i + 1) % K] + s[(i + 3) % K] + s[(i + 5) % K]) for i in range(K))

    @classmethod
    def from_cuts(cls, cuts) -> "Composition":
        return cls(tuple(cuts[i] + cuts[(i + 1) % K] for i in range(K)))


def cut_counts_from_composition(c: Composition) -> tuple[int, ...] | None:
    """Cut counts ``m_i``, or ``None`` when some ``m_i`` is negative."""
    m = c.cuts
    return None if min(m) < 0 else m


def avoid_count(size: int, down: int) -> int:
    """Ordered triples of ``down``-subsets of a ``size``-set with empty common intersection."""
    return sum(
        binom(size, down) * binom(down, j) * binom(size - down, down - j) * binom(size - j, down)
        for j in range(down + 1)
    )


def tight_pair_count(c: Composition) -> int:
    """Pairs (h, T) with h of class sizes ``c`` a tight homomorphism of T's union."""
    m = cut_counts_from_composition(c)
    if m is None:
        return 0
    n = c.sizes
    total = multinomial(c.n, n) * prod(fact(x) ** 3 for x in m) * binom(n[0], m[0]) ** 3
    for i in range(1, K):
        if total == 0:
            break
        total *= avoid_count(n[i], m[i])
    return total


def triple_count(n: int) -> int:
    """|T|: ordered triples of perfect matchings on n vertices."""
    _check_even(n)
    return (fact(n) // (2 ** (n // 2) * fact(n // 2))) ** 3


def compositions(n: int):
    """Compositions with every cut count non-negative, in lexicographic order of cuts.

    Cut counts sum to n/2 and determine the composition, so enumerating them
    visits each feasible composition exactly once.
    """
    _check_even(n)
    half = n // 2

    def rec(prefix, left):
        if len(prefix) == K - 1:
            yield prefix + (left,)
            return
        for x in range(left + 1):
            yield from rec(prefix + (x,), left - x)

    for cuts in rec((), half):
        yield Composition.from_cuts(cuts)


@dataclass
class CountReport:
    n: int
    per_composition: dict = field(default_factory=dict)
    total: int = 0
    triples: int = 1
    expected: Fraction = Fraction(0)


def count_report(n: int, keep_terms: bool = True) -> CountReport:
    _check_even(n)
    if n > EXPECTED_MAX_N:
        raise BudgetExceeded(f"composition enumeration limited to n <= {EXPECTED_MAX_N}")
    rep = CountReport(n=n, triples=triple_count(n))
    for c in compositions(n):
        m = c.cuts
        # a tight map needs m_i <= 2 m_{i+1} for i >= 1, else the avoid count is 0
        if any(m[i] > 2 * m[(i + 1) % K] for i in range(1, K)):
            continue
        term = tight_pair_count(c)
        if term:
            rep.total += term
            if keep_terms:
                rep.per_composition[c.sizes] = term
    rep.expected = Fraction(rep.total, rep.triples)
    return rep


def expected_tight_upper(n: int) -> Fraction:
    """Exact expected number of tight homomorphisms into C7 of the union of a random triple."""
    return count_report(n, keep_terms=False).expected


def brute_force_tight_sum(n: int) -> int:
    """Sum over all maps h of the triples whose union has h as a tight homomorphism.

    For each map the compatible matchings are grouped by the set of vertices
    they give an upward neighbour; a triple counts when those sets cover every
    vertex with a nonzero label.
    """
    _check_even(n)
    if n > BRUTE_MAX_N:
        raise BudgetExceeded(f"brute force limited to n <= {BRUTE_MAX_N}")
    matchings = [m.pairs for m in all_matchings(n)]
    total = 0
    for h in product(range(K), repeat=n):
        need = sum(1 << v for v in range(n) if h[v])
        groups: dict[int, int] = {}
        for pairs in matchings:
            up = 0
            for u, v in pairs:
                d = (h[v] - h[u]) % K
                if d == 1:
                    up |= 1 << u
                elif d == K - 1:
                    up |= 1 << v
                else:
                    break
            else:
                groups[up] = groups.get(up, 0) + 1
        items = list(groups.items())
        for u1, c1 in items:
            for u2, c2 in items:
                for u3, c3 in items:
                    if (u1 | u2 | u3) & need == need:
                        total += c1 * c2 * c3
    return total
