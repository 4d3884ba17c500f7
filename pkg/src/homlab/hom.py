"""Homomorphisms into cycles and circular cliques.

Search is plain backtracking over bitmask domains with arc consistency
maintained after every assignment. Parallel edges are collapsed before
search: they constrain nothing a single edge does not.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Union

from homlab.graph import (
    BudgetExceeded,
    CircularClique,
    CycleTarget,
    MatchingTriple,
    MultiGraph,
    union_of_matchings,
)

Target = Union[CycleTarget, CircularClique]

COUNT_BUDGET = 10**8
SEARCH_NODE_BUDGET = 10**7


class InvalidHomomorphism(ValueError):
    pass


@dataclass(frozen=True)
class HomMap:
    labels: tuple[int, ...]
    target: Target

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(int(x) for x in self.labels))
        if any(not 0 <= x < self.target.size for x in self.labels):
            raise ValueError(f"labels must lie in 0..{self.target.size - 1}")

    def __len__(self):
        return len(self.labels)


def format_hom_map(m: HomMap) -> str:
    return "".join(f"{v} {x}\n" for v, x in enumerate(m.labels))


def parse_hom_map(text: str, target: Target) -> HomMap:
    """Read ``v label`` lines; every vertex 0..n-1 must appear exactly once."""
    found: dict[int, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'v label', got {line!r}")
        v, x = int(parts[0]), int(parts[1])
        if v in found:
            raise ValueError(f"line {lineno}: vertex {v} listed twice")
        found[v] = x
    if sorted(found) != list(range(len(found))):
        raise ValueError("map must list vertices 0..n-1")
    return HomMap(tuple(found[v] for v in range(len(found))), target)


def _target_masks(target: Target) -> list[int]:
    k = target.size
    return [sum(1 << y for y in range(k) if target.adjacent(x, y)) for x in range(k)]


def search_order(g: MultiGraph) -> list[int]:
    """Descending degree, then breadth-first within each component."""
    deg = g.degrees()
    nbrs = g.neighbors()
    rank = sorted(range(g.vertex_count), key=lambda v: (-deg[v], v))
    seen = [False] * g.vertex_count
    order = []
    for root in rank:
        if seen[root]:
            continue
        seen[root] = True
        queue = deque([root])
        while queue:
            u = queue.popleft()
            order.append(u)
            for w in sorted(nbrs[u], key=lambda v: (-deg[v], v)):
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
    return order


def components(g: MultiGraph) -> list[list[int]]:
    return [sorted(c) for c in _components(g.neighbors())]


class _Solver:
    def __init__(self, g: MultiGraph, target: Target, node_budget: int | None):
        self.n = g.vertex_count
        self.nbrs = [[w for w in ws if w != v] for v, ws in enumerate(g.neighbors())]
        self.masks = _target_masks(target)
        self.full = (1 << target.size) - 1
        self.order = search_order(g)
        self.budget = node_budget
        self.nodes = 0
        self._support: dict[int, int] = {}

    def support(self, dom: int) -> int:
        s = self._support.get(dom)
        if s is None:
            s, rest = 0, dom
            while rest:
                low = rest & -rest
                s |= self.masks[low.bit_length() - 1]
                rest ^= low
            self._support[dom] = s
        return s

    def propagate(self, doms: list[int], queue: list[int]) -> bool:
        while queue:
            v = queue.pop()
            sup = self.support(doms[v])
            for u in self.nbrs[v]:
                nd = doms[u] & sup
                if nd != doms[u]:
                    if not nd:
                        return False
                    doms[u] = nd
                    queue.append(u)
        return True

    def initial(self, fix_roots: bool) -> list[int] | None:
        doms = [self.full] * self.n
        if fix_roots:
            # cycles and circular cliques are vertex-transitive: pin one vertex per component
            pos = {v: i for i, v in enumerate(self.order)}
            for comp in _components(self.nbrs):
                doms[min(comp, key=pos.__getitem__)] = 1
        if not self.propagate(doms, list(range(self.n))):
            return None
        return doms

    def solutions(self, doms: list[int], depth: int = 0):
        if self.budget is not None:
            self.nodes += 1
            if self.nodes > self.budget:
                raise BudgetExceeded(f"search exceeded {self.budget} nodes")
        if depth == self.n:
            yield [d.bit_length() - 1 for d in doms]
            return
        v = self.order[depth]
        rest = doms[v]
        while rest:
            low = rest & -rest
            rest ^= low
            child = doms.copy()
            child[v] = low
            if self.propagate(child, [v]):
                yield from self.solutions(child, depth + 1)


def _components(nbrs: list[list[int]]) -> list[list[int]]:
    n = len(nbrs)
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        comp, stack = [], [s]
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in nbrs[u]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        out.append(comp)
    return out


def find_homomorphism(g: MultiGraph, target: Target,
                      node_budget: int | None = SEARCH_NODE_BUDGET) -> HomMap | None:
    """A homomorphism ``g -> target`` or ``None``; deterministic for a given input."""
    if g.has_loop():
        return None
    solver = _Solver(g, target, node_budget)
    doms = solver.initial(fix_roots=True)
    if doms is None:
        return None
    for labels in solver.solutions(doms):
        return HomMap(tuple(labels), target)
    return None


def verify_homomorphism(g: MultiGraph, m: HomMap) -> bool:
    if len(m.labels) != g.vertex_count:
        raise ValueError(f"map has {len(m.labels)} labels for {g.vertex_count} vertices")
    return all(m.target.adjacent(m.labels[u], m.labels[v]) for u, v in g.edges)


def _require_cycle_hom(g: MultiGraph, m: HomMap) -> int:
    if not isinstance(m.target, CycleTarget):
        raise ValueError("tightness is defined for cycle targets only")
    if not verify_homomorphism(g, m):
        raise InvalidHomomorphism("map is not a homomorphism")
    return m.target.k


def _violators(nbrs, labels, k):
    for v, x in enumerate(labels):
        if x != 0 and not any(labels[u] == (x + 1) % k for u in nbrs[v]):
            yield v


def is_tight(g: MultiGraph, m: HomMap) -> bool:
    """Every vertex with a nonzero label has a neighbour one step up the cycle."""
    k = _require_cycle_hom(g, m)
    return next(_violators(g.neighbors(), m.labels, k), None) is None


def tighten_trace(g: MultiGraph, m: HomMap) -> tuple[HomMap, list[tuple[int, int, int]]]:
    """Tighten ``m`` and return the ``(vertex, old, new)`` steps taken.

    Isolated vertices are first moved to 0. Each step lowers the lowest-index
    violating vertex by 2; a vertex that reaches 0 is never touched again, so
    fewer than ``(k - 1) * n`` steps are needed.
    """
    k = _require_cycle_hom(g, m)
    if k % 2 == 0:
        raise ValueError("tighten needs an odd cycle target")
    nbrs = g.neighbors()
    labels = [0 if not nbrs[v] else x for v, x in enumerate(m.labels)]
    steps = []
    limit = (k - 1) * g.vertex_count
    while True:
        v = next(_violators(nbrs, labels, k), None)
        if v is None:
            return HomMap(tuple(labels), m.target), steps
        new = (labels[v] - 2) % k
        steps.append((v, labels[v], new))
        labels[v] = new
        if len(steps) >= max(limit, 1):
            raise RuntimeError(f"tighten did not converge within {limit} steps")


def tighten(g: MultiGraph, m: HomMap) -> HomMap:
    return tighten_trace(g, m)[0]


def count_homomorphisms(g: MultiGraph, target: CycleTarget, tight_only: bool = False) -> int:
    """Exact number of (tight) homomorphisms, enumerated component by component."""
    k = target.size
    if k ** g.vertex_count > COUNT_BUDGET:
        raise BudgetExceeded(f"{k}^{g.vertex_count} maps exceed the budget of {COUNT_BUDGET}")
    if g.has_loop():
        return 0
    nbrs = g.neighbors()
    total = 1
    for comp in components(g):
        index = {v: i for i, v in enumerate(comp)}
        edges = [(index[u], index[v]) for u, v in g.edges if u in index]
        sub = MultiGraph.from_edges(len(comp), edges)
        sub_nbrs = [[index[w] for w in nbrs[v]] for v in comp]
        solver = _Solver(sub, target, None)
        doms = solver.initial(fix_roots=False)
        count = 0
        if doms is not None:
            for labels in solver.solutions(doms):
                if not tight_only or next(_violators(sub_nbrs, labels, k), None) is None:
                    count += 1
        total *= count
        if total == 0:
            break
    return total


def matching_cut_counts(t: MatchingTriple, m: HomMap) -> list[tuple[int, ...]]:
    """Per matching, ``counts[i]`` = edges between classes ``i - 1`` and ``i`` (mod 7)."""
    g = union_of_matchings(t)
    if not isinstance(m.target, CycleTarget) or m.target.k != 7:
        raise ValueError("cut counts are defined for maps into C7")
    if not verify_homomorphism(g, m):
        raise InvalidHomomorphism("map is not a homomorphism of the union graph")
    out = []
    for matching in t:
        counts = [0] * 7
        for u, v in matching.pairs:
            x, y = m.labels[u], m.labels[v]
            counts[x if (x - y) % 7 == 1 else y] += 1
        out.append(tuple(counts))
    sizes = [m.labels.count(i) for i in range(7)]
    expected = tuple(t.n // 2 - (sizes[(i + 1) % 7] + sizes[(i + 3) % 7] + sizes[(i + 5) % 7])
                     for i in range(7))
    if not out[0] == out[1] == out[2] == expected:
        raise AssertionError(f"cut counts {out} disagree with class-size formula {expected}")
    return out


def greedy_color_count(g: MultiGraph) -> int:
    nbrs = g.neighbors()
    colors: dict[int, int] = {}
    for v in search_order(g):
        used = {colors[u] for u in nbrs[v] if u in colors}
        colors[v] = next(c for c in range(len(used) + 1) if c not in used)
    return max(colors.values(), default=0) + 1


def circular_chromatic_upper(g: MultiGraph, q_max: int,
                             node_budget: int | None = SEARCH_NODE_BUDGET) -> Fraction:
    """Smallest ``p/q`` with ``q <= q_max`` such that ``g`` maps into ``K_{p/q}``.

    Equals the circular chromatic number whenever that value has denominator
    at most ``q_max``; otherwise it is an upper bound.
    """
    if g.has_loop():
        raise ValueError("a graph with a loop has no circular colouring")
    if q_max < 1:
        raise ValueError("q_max must be at least 1")
    cap = max(2, greedy_color_count(g))
    candidates = sorted({Fraction(p, q) for q in range(1, q_max + 1)
                         for p in range(2 * q, cap * q + 1) if gcd(p, q) == 1})
    for r in candidates:
        if find_homomorphism(g, CircularClique(r.numerator, r.denominator), node_budget):
            return r
    raise AssertionError("greedy colour count should always be attainable")
