import math
from collections import Counter

import pytest

from homlab.graph import girth, is_simple, union_of_matchings
from homlab.sampler import (
    RejectionCapExceeded,
    SamplerConfig,
    all_matchings,
    all_triples,
    format_triple,
    parse_triple,
    random_matching,
    random_triple,
    sample_min_girth,
    stream,
)

# chi-square critical values at significance 0.001
CHI2_001 = {2: 13.816, 14: 36.123, 26: 54.052}


def chi_square(counts, cells, draws):
    expected = draws / cells
    return sum((counts.get(c, 0) - expected) ** 2 / expected for c in range(cells))


def test_two_vertices():
    assert random_matching(2, stream(1)).pairs == ((0, 1),)


@pytest.mark.parametrize("n", [0, 5, -2])
def test_bad_n(n):
    with pytest.raises(ValueError):
        random_matching(n, stream(1))
    with pytest.raises(ValueError):
        random_triple(n, stream(1))


def test_matching_counts():
    assert [len(all_matchings(n)) for n in (2, 4, 6, 8)] == [1, 3, 15, 105]


@pytest.mark.parametrize("n, draws", [(4, 30000), (6, 100000)])
def test_matching_uniform(n, draws):
    index = {m.pairs: i for i, m in enumerate(all_matchings(n))}
    rng = stream(2024, n)
    counts = Counter(index[random_matching(n, rng).pairs] for _ in range(draws))
    cells = len(index)
    assert chi_square(counts, cells, draws) < CHI2_001[cells - 1]


def test_matching_frequencies_n4():
    index = {m.pairs: i for i, m in enumerate(all_matchings(4))}
    rng = stream(7, 4)
    draws = 30000
    counts = Counter(index[random_matching(4, rng).pairs] for _ in range(draws))
    sigma = math.sqrt((1 / 3) * (2 / 3) / draws)
    for c in range(3):
        assert abs(counts[c] / draws - 1 / 3) < 3 * sigma


def test_triple_uniform_n4():
    index = {m.pairs: i for i, m in enumerate(all_matchings(4))}
    rng = stream(99)
    draws = 100000
    counts = Counter()
    for _ in range(draws):
        t = random_triple(4, rng)
        counts[9 * index[t.m1.pairs] + 3 * index[t.m2.pairs] + index[t.m3.pairs]] += 1
    assert chi_square(counts, 27, draws) < CHI2_001[26]


def test_simple_fraction_n4_exact():
    triples = list(all_triples(4))
    simple = [t for t in triples if is_simple(union_of_matchings(t))]
    assert len(triples) == 27
    assert len(simple) == 6
    for t in triples:
        distinct = len({t.m1.pairs, t.m2.pairs, t.m3.pairs}) == 3
        assert is_simple(union_of_matchings(t)) == distinct


def test_reproducible():
    a = random_triple(50, stream(5, 50, 3))
    b = random_triple(50, stream(5, 50, 3))
    c = random_triple(50, stream(5, 50, 4))
    assert a == b
    assert a != c


def test_min_girth_two_is_first_draw():
    cfg = SamplerConfig(20, 11, 2)
    assert sample_min_girth(cfg, stream(11)) == random_triple(20, stream(11))


def test_min_girth_four():
    rng = stream(3)
    for _ in range(5):
        g = union_of_matchings(sample_min_girth(SamplerConfig(20, 3, 4), rng))
        assert is_simple(g)
        assert girth(g) >= 4


def test_min_girth_cap():
    with pytest.raises(RejectionCapExceeded, match="1000 attempts"):
        sample_min_girth(SamplerConfig(10, 1, 50), stream(1), attempt_cap=1000)


def test_config_validation():
    with pytest.raises(ValueError):
        SamplerConfig(7, 1)
    with pytest.raises(ValueError):
        SamplerConfig(8, 1, 1)


def test_triple_format_round_trip():
    t = random_triple(8, stream(0))
    text = format_triple(t)
    assert len(text.splitlines()) == 3
    assert all(len(line.split()) == 4 for line in text.splitlines())
    assert parse_triple(text) == t


def test_simplicity_rate_large_n():
    draws = 20000
    rng = stream(123)
    simple = sum(is_simple(union_of_matchings(random_triple(200, rng))) for _ in range(draws))
    assert abs(simple / draws - math.exp(-1.5)) < 0.02


def test_streams_independent_of_order():
    first = [random_triple(10, stream(8, 10, i)) for i in range(5)]
    again = [random_triple(10, stream(8, 10, i)) for i in reversed(range(5))][::-1]
    assert first == again
