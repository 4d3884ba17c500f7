"""Uniform perfect matchings and matching triples (the pairing model)."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator

import numpy as np

from homlab.graph import MatchingTriple, PerfectMatching, girth, union_of_matchings

DEFAULT_ATTEMPT_CAP = 10**6


class RejectionCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class SamplerConfig:
    n: int
    seed: int
    min_girth: int | None = None

    def __post_init__(self):
        _check_n(self.n)
        if self.min_girth is not None and self.min_girth < 2:
            raise ValueError("min_girth must be at least 2")


def _check_n(n: int) -> None:
    if n < 2 or n % 2:
        raise ValueError(f"need an even vertex count n >= 2, got {n}")


def stream(seed: int, *task: int) -> np.random.Generator:
    """Random stream for one task, derived only from ``(seed, *task)``."""
    return np.random.default_rng(np.random.SeedSequence([seed, *task]))


def random_matching(n: int, rng: np.random.Generator) -> PerfectMatching:
    """Uniform perfect matching: shuffle the vertices and pair neighbours."""
    _check_n(n)
    perm = rng.permutation(n).tolist()
    return PerfectMatching(n, tuple(zip(perm[0::2], perm[1::2])))


def random_triple(n: int, rng: np.random.Generator) -> MatchingTriple:
    return MatchingTriple(*(random_matching(n, rng) for _ in range(3)))


def sample_min_girth(cfg: SamplerConfig, rng: np.random.Generator,
                     attempt_cap: int = DEFAULT_ATTEMPT_CAP) -> MatchingTriple:
    """Rejection-sample a triple whose union has girth at least ``cfg.min_girth``."""
    if cfg.min_girth is None:
        return random_triple(cfg.n, rng)
    for _ in range(attempt_cap):
        t = random_triple(cfg.n, rng)
        if girth(union_of_matchings(t)) >= cfg.min_girth:
            return t
    raise RejectionCapExceeded(
        f"no triple with girth >= {cfg.min_girth} on n={cfg.n} after {attempt_cap} "
        f"attempts (acceptance rate below {1 / attempt_cap:.1e})")


def all_matchings(n: int) -> list[PerfectMatching]:
    """Every perfect matching of ``0..n-1``, in a fixed order; (n-1)!! of them."""
    def rec(rest):
        if not rest:
            yield ()
            return
        first = rest[0]
        for k in range(1, len(rest)):
            others = rest[1:k] + rest[k + 1:]
            for tail in rec(others):
                yield ((first, rest[k]),) + tail

    return [PerfectMatching(n, pairs) for pairs in rec(tuple(range(n)))]


def all_triples(n: int) -> Iterator[MatchingTriple]:
    ms = all_matchings(n)
    for a, b, c in product(ms, repeat=3):
        yield MatchingTriple(a, b, c)


def format_triple(t: MatchingTriple) -> str:
    """Three lines, one per matching, of space-separated ``u-v`` pairs."""
    return "".join(" ".join(f"{u}-{v}" for u, v in m.pairs) + "\n" for m in t)


def parse_triple(text: str) -> MatchingTriple:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if len(lines) != 3:
        raise ValueError(f"expected three matching lines, got {len(lines)}")
    matchings = []
    for tokens in lines:
        pairs = []
        for tok in tokens:
            u, _, v = tok.partition("-")
            pairs.append((int(u), int(v)))
        matchings.append(PerfectMatching(2 * len(pairs), tuple(pairs)))
    return MatchingTriple(*matchings)
