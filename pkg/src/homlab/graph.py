"""Multigraphs, perfect matchings and the edge-list file format."""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterable, Sequence

MIS_MAX_VERTICES = 40


class GraphFormatError(ValueError):
    pass


class BudgetExceeded(ValueError):
    """Instance is larger than an exact search is allowed to handle."""


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class MultiGraph:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be non-negative")
        norm = []
        for u, v in self.edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge ({u}, {v}) out of range for {self.vertex_count} vertices")
            norm.append(_pair(int(u), int(v)))
        object.__setattr__(self, "edges", tuple(norm))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "MultiGraph":
        return cls(n, tuple((u, v) for u, v in edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.vertex_count
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def multiplicities(self) -> Counter:
        return Counter(self.edges)

    def has_loop(self) -> bool:
        return any(u == v for u, v in self.edges)

    def neighbors(self) -> list[list[int]]:
        """Distinct neighbours of each vertex (parallel edges collapsed, loops kept)."""
        nbrs: list[set[int]] = [set() for _ in range(self.vertex_count)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return [sorted(s) for s in nbrs]

    def edge_multiset(self) -> Counter:
        return Counter(self.edges)


@dataclass(frozen=True)
class PerfectMatching:
    n: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n % 2 or self.n < 0:
            raise ValueError(f"perfect matching needs an even vertex count, got {self.n}")
        norm = tuple(sorted(_pair(u, v) for u, v in self.pairs))
        seen = [x for p in norm for x in p]
        if sorted(seen) != list(range(self.n)) or any(u == v for u, v in norm):
            raise ValueError("pairs must cover every vertex exactly once")
        object.__setattr__(self, "pairs", norm)

    def partner(self) -> list[int]:
        out = [0] * self.n
        for u, v in self.pairs:
            out[u], out[v] = v, u
        return out


@dataclass(frozen=True)
class MatchingTriple:
    m1: PerfectMatching
    m2: PerfectMatching
    m3: PerfectMatching

    def __post_init__(self):
        if not self.m1.n == self.m2.n == self.m3.n:
            raise ValueError("matchings in a triple must share the vertex count")

    @property
    def n(self) -> int:
        return self.m1.n

    def __iter__(self):
        return iter((self.m1, self.m2, self.m3))


@dataclass(frozen=True)
class CycleTarget:
    k: int

    def __post_init__(self):
        if self.k < 3:
            raise ValueError("cycle target needs k >= 3")

    @property
    def size(self) -> int:
        return self.k

    def adjacent(self, x: int, y: int) -> bool:
        return (x - y) % self.k in (1, self.k - 1)

    def __str__(self):
        return f"cycle:{self.k}"


@dataclass(frozen=True)
class CircularClique:
    p: int
    q: int

    def __post_init__(self):
        if self.q < 1 or self.p < 2 * self.q:
            raise ValueError("circular clique needs q >= 1 and p >= 2q")

    @property
    def size(self) -> int:
        return self.p

    def adjacent(self, x: int, y: int) -> bool:
        return self.q <= abs(x - y) <= self.p - self.q

    def __str__(self):
        return f"clique:{self.p}/{self.q}"


def parse_target(text: str) -> CycleTarget | CircularClique:
    """Parse ``cycle:K`` or ``clique:P/Q``."""
    kind, _, arg = text.partition(":")
    try:
        if kind == "cycle":
            return CycleTarget(int(arg))
        if kind == "clique":
            p, q = arg.split("/")
            return CircularClique(int(p), int(q))
    except ValueError as exc:
        raise GraphFormatError(f"bad target {text!r}: {exc}") from None
    raise GraphFormatError(f"unknown target {text!r}; use cycle:K or clique:P/Q")


def parse_edge_list(text: str) -> MultiGraph:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphFormatError("empty edge list")

    def ints(ln, lineno):
        parts = ln.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected two integers, got {ln!r}")
        try:
            return int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: not integers: {ln!r}") from None

    n, m = ints(lines[0], 1)
    if n < 0 or m < 0:
        raise GraphFormatError("vertex and edge counts must be non-negative")
    if len(lines) - 1 != m:
        raise GraphFormatError(f"header declares {m} edges, found {len(lines) - 1}")
    edges = []
    for lineno, ln in enumerate(lines[1:], start=2):
        u, v = ints(ln, lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"line {lineno}: vertex index out of range 0..{n - 1}")
        edges.append((u, v))
    return MultiGraph.from_edges(n, edges)


def emit_edge_list(g: MultiGraph) -> str:
    out = [f"{g.vertex_count} {g.edge_count}"]
    out += [f"{u} {v}" for u, v in sorted(g.edges)]
    return "\n".join(out) + "\n"


def union_of_matchings(t: MatchingTriple) -> MultiGraph:
    return MultiGraph(t.n, t.m1.pairs + t.m2.pairs + t.m3.pairs)


def girth(g: MultiGraph) -> float:
    """Shortest cycle length; parallel edges count as 2-cycles, loops as 1."""
    if g.has_loop():
        return 1
    if any(c > 1 for c in g.multiplicities().values()):
        return 2
    nbrs = g.neighbors()
    best = math.inf
    for s in range(g.vertex_count):
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] >= best:
                break
            for w in nbrs[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def is_simple(g: MultiGraph) -> bool:
    return not g.has_loop() and all(c == 1 for c in g.multiplicities().values())


def max_independent_set_size(g: MultiGraph) -> int:
    """Exact independence number by branch and bound on vertex bitmasks.

    Loops exclude their vertex. Degree-0 and degree-1 vertices are taken
    greedily; otherwise the search branches on a maximum-degree vertex.
    """
    n = g.vertex_count
    if n > MIS_MAX_VERTICES:
        raise BudgetExceeded(f"exact MIS limited to {MIS_MAX_VERTICES} vertices, got {n}")
    adj = [0] * n
    looped = 0
    for u, v in g.edges:
        if u == v:
            looped |= 1 << u
        else:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
    best = 0

    def search(alive: int, size: int):
        nonlocal best
        # forced moves: a vertex with at most one live neighbour is always safe to take
        while True:
            if size + alive.bit_count() <= best:
                return
            picked = False
            rest = alive
            while rest:
                low = rest & -rest
                v = low.bit_length() - 1
                rest ^= low
                if (adj[v] & alive).bit_count() <= 1:
                    alive &= ~(adj[v] | low)
                    size += 1
                    picked = True
                    break
            if not picked:
                break
        if not alive:
            best = max(best, size)
            return
        v, deg = -1, -1
        rest = alive
        while rest:
            low = rest & -rest
            u = low.bit_length() - 1
            rest ^= low
            d = (adj[u] & alive).bit_count()
            if d > deg:
                v, deg = u, d
        search(alive & ~(adj[v] | (1 << v)), size + 1)
        search(alive & ~(1 << v), size)

    search(((1 << n) - 1) & ~looped, 0)
    return best


# small named graphs used by tests, examples and the CLI
def cycle_graph(k: int) -> MultiGraph:
    return MultiGraph.from_edges(k, [(i, (i + 1) % k) for i in range(k)])


def complete_graph(k: int) -> MultiGraph:
    return MultiGraph.from_edges(k, [(i, j) for i in range(k) for j in range(i + 1, k)])


def path_graph(k: int) -> MultiGraph:
    return MultiGraph.from_edges(k, [(i, i + 1) for i in range(k - 1)])


def petersen_graph() -> MultiGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return MultiGraph.from_edges(10, outer + spokes + inner)


NAMED_GRAPHS = {
    "petersen": petersen_graph,
    "k4": lambda: complete_graph(4),
    "k3": lambda: complete_graph(3),
}


def named_graph(name: str) -> MultiGraph:
    """``petersen``, ``k3``, ``k4``, ``cycle:K``, ``complete:K`` or ``path:K``."""
    if name in NAMED_GRAPHS:
        return NAMED_GRAPHS[name]()
    kind, _, arg = name.partition(":")
    builders = {"cycle": cycle_graph, "complete": complete_graph, "path": path_graph}
    if kind in builders and arg.isdigit():
        return builders[kind](int(arg))
    raise GraphFormatError(f"unknown named graph {name!r}")
