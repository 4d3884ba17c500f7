from collections import Counter
from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from homlab.formula import (
    Composition,
    avoid_count,
    binom,
    brute_force_tight_sum,
    compositions,
    count_report,
    cut_counts_from_composition,
    expected_tight_upper,
    multinomial,
    tight_pair_count,
    triple_count,
)
from homlab.graph import BudgetExceeded, CycleTarget, union_of_matchings
from homlab.hom import HomMap, count_homomorphisms, is_tight, verify_homomorphism
from homlab.sampler import all_triples

C7 = CycleTarget(7)


def all_compositions(n, parts=7):
    if parts == 1:
        yield (n,)
        return
    for x in range(n + 1):
        for rest in all_compositions(n - x, parts - 1):
            yield (x,) + rest


def per_composition_by_enumeration(n):
    """Tight (map, triple) pairs bucketed by class sizes, via the hom engine."""
    out = Counter()
    triples = [union_of_matchings(t) for t in all_triples(n)]
    for labels in product(range(7), repeat=n):
        m = HomMap(labels, C7)
        sizes = tuple(labels.count(i) for i in range(7))
        for g in triples:
            if verify_homomorphism(g, m) and is_tight(g, m):
                out[sizes] += 1
    return out


@pytest.fixture(scope="module")
def n4_buckets():
    return per_composition_by_enumeration(4)


class TestCuts:
    def test_uniform(self):
        assert cut_counts_from_composition(Composition((2,) * 7)) == (1,) * 7

    def test_two_vertices(self):
        assert cut_counts_from_composition(Composition((1, 0, 0, 0, 0, 0, 1))) == (1, 0, 0, 0, 0, 0, 0)

    def test_infeasible(self):
        c = Composition((2, 0, 0, 0, 0, 0, 0))
        assert c.cuts[2] == -1
        assert cut_counts_from_composition(c) is None

    def test_odd(self):
        with pytest.raises(ValueError):
            Composition((1, 0, 0, 0, 0, 0, 0))

    @given(st.lists(st.integers(0, 30), min_size=7, max_size=7).filter(lambda s: sum(s) % 2 == 0))
    def test_class_size_identity(self, sizes):
        c = Composition(tuple(sizes))
        m = c.cuts
        assert all(sizes[i] == m[i] + m[(i + 1) % 7] for i in range(7))
        assert Composition.from_cuts(m) == c


class TestTerm:
    def test_two_vertices(self):
        assert tight_pair_count(Composition((1, 0, 0, 0, 0, 0, 1))) == 2

    def test_n4_two_classes(self, n4_buckets):
        c = (2, 0, 0, 0, 0, 0, 2)
        assert tight_pair_count(Composition(c)) == n4_buckets[c] == 48

    def test_n4_no_tight_map(self, n4_buckets):
        c = (2, 1, 0, 0, 0, 0, 1)
        assert tight_pair_count(Composition(c)) == n4_buckets[c] == 0

    def test_every_n4_composition(self, n4_buckets):
        for sizes in all_compositions(4):
            assert tight_pair_count(Composition(sizes)) == n4_buckets.get(sizes, 0)

    @given(st.lists(st.integers(0, 12), min_size=7, max_size=7).filter(lambda s: sum(s) % 2 == 0))
    def test_non_negative_and_zero_when_infeasible(self, sizes):
        c = Composition(tuple(sizes))
        v = tight_pair_count(c)
        assert v >= 0
        if min(c.cuts) < 0:
            assert v == 0

    def test_avoid_count_by_enumeration(self):
        for size in range(0, 6):
            for down in range(0, size + 1):
                subsets = [frozenset(s) for s in combinations(range(size), down)]
                brute = sum(1 for a, b, c in product(subsets, repeat=3) if not (a & b & c))
                assert avoid_count(size, down) == brute

    def test_binom_out_of_range(self):
        assert binom(3, 4) == 0 and binom(3, -1) == 0 and binom(5, 2) == 10


class TestExpected:
    def test_n0(self):
        assert expected_tight_upper(0) == 1

    def test_n2(self):
        assert expected_tight_upper(2) == 2

    def test_n4(self):
        assert expected_tight_upper(4) == Fraction(brute_force_tight_sum(4), 27)

    def test_odd(self):
        with pytest.raises(ValueError):
            expected_tight_upper(3)

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            expected_tight_upper(62)

    def test_triple_count(self):
        assert [triple_count(n) for n in (2, 4, 6)] == [1, 27, 3375]

    def test_report_totals(self):
        rep = count_report(6)
        assert sum(rep.per_composition.values()) == rep.total
        assert rep.expected == Fraction(rep.total, rep.triples)


class TestOracle:
    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_formula_matches_brute_force(self, n):
        assert count_report(n).total == brute_force_tight_sum(n)

    def test_brute_force_n2(self):
        assert brute_force_tight_sum(2) == 2

    def test_third_route_n4(self):
        # sum over triples of the tight-hom count from the search engine
        total = sum(count_homomorphisms(union_of_matchings(t), C7, True) for t in all_triples(4))
        assert total == brute_force_tight_sum(4)

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            brute_force_tight_sum(8)


@pytest.mark.parametrize("n", [0, 2, 4, 6, 8])
def test_multinomials_sum_to_all_maps(n):
    assert sum(multinomial(n, c) for c in all_compositions(n)) == 7 ** n


@pytest.mark.parametrize("n", [2, 4, 8, 10])
def test_enumeration_visits_each_feasible_composition_once(n):
    seen = [c.sizes for c in compositions(n)]
    feasible = [c for c in all_compositions(n) if min(Composition(c).cuts) >= 0]
    assert len(seen) == len(set(seen))
    assert set(seen) == set(feasible)
