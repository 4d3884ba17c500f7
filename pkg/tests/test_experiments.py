import csv
import io
from fractions import Fraction

import pytest

from homlab.experiments import (
    CSV_COLUMNS,
    ExperimentSpec,
    double_factorial_odd,
    exhaustive,
    is_bipartite,
    maps_to_cycle,
    mis_diagnostic,
    run,
    run_hom_fraction,
    run_mis_trend,
    run_simplicity,
    to_csv,
)
from homlab.graph import (
    CycleTarget,
    complete_graph,
    cycle_graph,
    max_independent_set_size,
    union_of_matchings,
)
from homlab.hom import find_homomorphism
from homlab.sampler import all_triples, random_triple, stream


class TestSpec:
    @pytest.mark.parametrize("kwargs", [
        dict(kind="nope", ns=(4,), samples=1),
        dict(kind="simplicity", ns=(4,), samples=0),
        dict(kind="simplicity", ns=(5,), samples=1),
        dict(kind="simplicity", ns=(), samples=1),
        dict(kind="hom-fraction", ns=(4,), samples=1, k=2),
    ])
    def test_rejected(self, kwargs):
        with pytest.raises(ValueError):
            ExperimentSpec(**kwargs)

    def test_wrong_driver(self):
        with pytest.raises(ValueError):
            run_simplicity(ExperimentSpec("hom-fraction", (4,), 1))


class TestExhaustive:
    def test_limit(self):
        assert [double_factorial_odd(n) for n in (2, 4, 6, 8)] == [1, 3, 15, 105]
        assert exhaustive(6) and not exhaustive(8)

    def test_hom_fraction_n4(self):
        (row,) = run_hom_fraction(ExperimentSpec("hom-fraction", (4,), 1))
        assert row.exact == Fraction(7, 9)
        assert (row.samples, row.successes, row.stderr) == (27, 21, 0.0)

    def test_hom_fraction_n4_triangle(self):
        # oracle: direct search over every triple
        want = sum(find_homomorphism(union_of_matchings(t), CycleTarget(3)) is not None
                   for t in all_triples(4))
        (row,) = run_hom_fraction(ExperimentSpec("hom-fraction", (4,), 1, k=3))
        assert row.successes == want

    def test_simplicity_n4(self):
        (row,) = run_simplicity(ExperimentSpec("simplicity", (4,), 1))
        assert row.exact == Fraction(2, 9)

    def test_mis_n4(self):
        alphas = {max_independent_set_size(union_of_matchings(t)) for t in all_triples(4)}
        assert alphas <= {1, 2}
        want = sum(max_independent_set_size(union_of_matchings(t)) < 0.4554 * 4
                   for t in all_triples(4))
        (row,) = run_mis_trend(ExperimentSpec("mis-trend", (4,), 1))
        assert row.successes == want == 6
        assert row.mean_ratio is not None

    def test_samples_ignored_for_exhaustive(self):
        a = run(ExperimentSpec("simplicity", (6,), 1))
        b = run(ExperimentSpec("simplicity", (6,), 99))
        assert a == b and a[0].samples == 3375


class TestMonteCarlo:
    def test_reproducible(self):
        spec = ExperimentSpec("hom-fraction", (10, 12), 60, seed=3)
        assert to_csv(run(spec, 1)) == to_csv(run(spec, 1))

    def test_seed_recorded(self):
        rows = [run(ExperimentSpec("simplicity", (20,), 300, seed=s), 1)[0] for s in (1, 2)]
        assert [r.seed for r in rows] == [1, 2]

    def test_workers_independent(self):
        spec = ExperimentSpec("mis-trend", (12, 16), 50, seed=9)
        assert to_csv(run(spec, 1)) == to_csv(run(spec, 3))

    def test_row_invariants(self):
        for row in run(ExperimentSpec("simplicity", (30,), 200, seed=4), 1):
            assert 0 <= row.fraction <= 1
            assert row.successes <= row.samples == 200
            assert row.stderr == pytest.approx((row.fraction * (1 - row.fraction) / 200) ** 0.5)

    def test_even_cycle_uses_bipartiteness(self):
        spec = ExperimentSpec("hom-fraction", (10,), 40, seed=1, k=4)
        (row,) = run(spec, 1)
        want = sum(is_bipartite(union_of_matchings(random_triple(10, stream(1, 10, i))))
                   for i in range(40))
        assert row.successes == want


class TestCsv:
    def test_schema(self):
        rows = run(ExperimentSpec("hom-fraction", (4, 10), 20, seed=5), 1)
        text = to_csv(rows)
        table = list(csv.reader(io.StringIO(text)))
        assert table[0] == CSV_COLUMNS
        assert len(table) == 3
        assert table[1][:6] == ["hom-fraction", "4", "7", "27", "21", repr(21 / 27)]
        assert all(r[-1] == "5" for r in table[1:])

    def test_k_blank_for_other_kinds(self):
        text = to_csv(run(ExperimentSpec("simplicity", (4,), 1), 1))
        assert text.splitlines()[1].split(",")[2] == ""


def test_bipartite_and_cycles():
    assert is_bipartite(cycle_graph(6)) and not is_bipartite(cycle_graph(7))
    assert maps_to_cycle(cycle_graph(6), 4)
    assert not maps_to_cycle(complete_graph(3), 7)
    assert maps_to_cycle(cycle_graph(7), 7)


def test_mis_diagnostic_c7():
    row = mis_diagnostic(cycle_graph(7))
    assert row.successes == 1
    assert row.mean_ratio == pytest.approx(3 / 7)
