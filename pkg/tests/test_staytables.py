import json
from fractions import Fraction

import pytest

from oracle_utils import mimic_continuation_oracle
from treasurehunt.combinatorics import binomial, enumerate_partitions
from treasurehunt.errors import DoorBudgetError, ExceedsUnitError, TableEntryError
from treasurehunt.staytables import (
    StayTable,
    decision_diagrams,
    min_scalable_doors,
    q_one_find,
    scaled_stay_table,
    stay_probability,
)


def test_stay_probability_values():
    assert stay_probability(2, 2, (1,)) == Fraction(2, 3)
    assert stay_probability(6, 3, (1,)) == Fraction(36, 56)
    # Read off the sampled-plan expansion, the independent oracle.
    oracle = mimic_continuation_oracle(5, 3)
    reach, stay = oracle[(2,)]
    assert stay / reach == Fraction(1, 5)
    assert stay_probability(5, 3, (2,)) == Fraction(1, 5)
    for n in (3, 5, 8):
        assert stay_probability(n, 3, (1, 1)) == 0


def test_stay_probability_domain():
    with pytest.raises(ValueError):
        stay_probability(4, 3, (3,))  # size d is past the last decision
    with pytest.raises(ValueError):
        stay_probability(4, 3, ())
    with pytest.raises(ValueError):
        stay_probability(2, 4, (1, 1, 1))  # more parts than doors
    with pytest.raises(ValueError):
        stay_probability(4, 3, (1, 2))  # not a partition


def test_q_one_find_closed_form():
    for n in range(1, 11):
        for d in range(1, 6):
            if d < 2:
                continue
            assert 1 - stay_probability(n, d, (1,)) == q_one_find(n, d)


def test_scaled_table_success_cases():
    table = scaled_stay_table(9, 3, 2)
    assert table.entries == {
        (1,): Fraction(54, 55),
        (2,): Fraction(2, 9),
        (1, 1): Fraction(0),
    }
    assert scaled_stay_table(4, 2, 2).entries == {(1,): Fraction(4, 5)}
    assert scaled_stay_table(5, 2, 2).entries == {(1,): Fraction(2, 3)}


def test_scaled_table_failures():
    with pytest.raises(ExceedsUnitError) as err:
        scaled_stay_table(6, 3, 2)
    assert err.value.diagram == (1,)
    assert err.value.value == Fraction(36, 28)
    with pytest.raises(DoorBudgetError):
        scaled_stay_table(3, 2, 2)  # below the d*k door floor


def test_min_scalable_doors():
    assert min_scalable_doors(2, 2) == 4
    assert min_scalable_doors(3, 2) == 9
    assert min_scalable_doors(1, 7) == 7
    # Independent upward scan straight from the base probabilities.
    d, k = 3, 2
    n = d * k
    while any(
        k * stay_probability(n, d, lam) > 1
        for lam in decision_diagrams(n, d)
    ):
        n += 1
    assert n == min_scalable_doors(d, k) == 9


def test_stay_probability_range_and_support():
    # Always a probability; zero on flat diagrams, positive exactly when a
    # reachable diagram's last part can still grow.
    for n in range(1, 7):
        for d in range(2, 6):
            reachable = set(mimic_continuation_oracle(n, d))
            for lam in decision_diagrams(n, d):
                p = stay_probability(n, d, lam)
                assert 0 <= p <= 1
                if len(lam) >= 2 and lam[-1] == lam[-2]:
                    assert p == 0
                elif lam in reachable:
                    assert p > 0
                else:
                    assert p == 0  # no completion exists at this door count


def test_zero_rule_on_flat_diagrams():
    # Scaled tables put 0 wherever the last part ties its predecessor.
    for n, d, k in [(9, 3, 2), (6, 4, 1), (min_scalable_doors(4, 2), 4, 2)]:
        table = scaled_stay_table(n, d, k)
        for diagram, p in table.entries.items():
            if len(diagram) >= 2 and diagram[-1] == diagram[-2]:
                assert p == 0


def test_choice_diagram_count_is_partition_function_minus_one():
    # Diagrams of size <= d-1 whose last part differs from the one before
    # (single-part ones included) are exactly the decision points with a
    # real choice; there are p(d) - 1 of them.
    for d in range(2, 9):
        choices = [
            lam
            for size in range(1, d)
            for lam in enumerate_partitions(size, size)
            if len(lam) == 1 or lam[-1] != lam[-2]
        ]
        p_d = len(enumerate_partitions(d, d))
        assert len(choices) == p_d - 1


def test_equalizing_failure_reports_counterexample():
    from treasurehunt.game import GameConfig
    from treasurehunt.staytables import verify_equalizing

    cfg = GameConfig(6, 3, 2)
    lazy = StayTable(
        6, 3, 2, {(1,): Fraction(1, 2), (2,): Fraction(1, 2), (1, 1): Fraction(1, 2)}
    )
    report = verify_equalizing(cfg, lazy)
    assert report.equal is False
    assert report.counterexample is not None
    values = {v for _, v in report.per_allocation}
    assert len(values) > 1


def test_equalizing_family_found_by_exact_search():
    # d=3, n=3k-1: fix the first two stays at 1 and n k^2 / C(n+2, 3); the
    # win probability against any one allocation is affine in the (1,1)
    # entry, so two probes solve the equal-value condition exactly.
    from treasurehunt.game import GameConfig
    from treasurehunt.solver import evaluate_exact
    from treasurehunt.staytables import verify_equalizing
    from treasurehunt.strategies import stay_table_searcher

    for k in (1, 2, 3, 4):
        n = 3 * k - 1
        cfg = GameConfig(n, 3, k)
        p_two = Fraction(n * k * k, binomial(n + 2, 3))

        def value_at(p_flat, allocation, n=n, k=k, cfg=cfg, p_two=p_two):
            table = StayTable(
                n, 3, k, {(1,): Fraction(1), (2,): p_two, (1, 1): p_flat}
            )
            return evaluate_exact(cfg, stay_table_searcher(cfg, table), allocation)

        one_door = (3,) + (0,) * (n - 1)
        two_doors = (2, 1) + (0,) * (n - 2)
        v0a, v1a = value_at(Fraction(0), one_door), value_at(Fraction(1), one_door)
        v0b, v1b = value_at(Fraction(0), two_doors), value_at(Fraction(1), two_doors)
        slope = (v1a - v0a) - (v1b - v0b)
        if slope == 0:
            assert v0a == v0b  # the entry is unreachable, any value works
            p_flat = Fraction(n + 1, n + 2)
        else:
            p_flat = (v0b - v0a) / slope
            assert p_flat == Fraction(n + 1, n + 2)
        table = StayTable(n, 3, k, {(1,): Fraction(1), (2,): p_two, (1, 1): p_flat})
        report = verify_equalizing(cfg, table)
        assert report.equal is True
        assert report.value == Fraction(k**3, binomial(n + 2, 3))


def test_table_validation():
    with pytest.raises(TableEntryError):
        StayTable(4, 2, 2, {(1,): Fraction(3, 2)})
    with pytest.raises(TableEntryError):
        StayTable(4, 2, 2, {(2,): Fraction(1, 2)})  # size d, not a decision
    with pytest.raises(TableEntryError):
        StayTable(4, 3, 2, {(1, 2): Fraction(1, 2)})  # not a partition


def test_table_json_round_trip(tmp_path):
    table = StayTable(
        5, 3, 2, {(1,): Fraction(1), (2,): Fraction(4, 7), (1, 1): Fraction(6, 7)}
    )
    path = tmp_path / "table.json"
    path.write_text(json.dumps(table.to_json()))
    loaded = StayTable.load(path)
    assert loaded == table


def test_table_json_rejects_decimals(tmp_path):
    doc = {"n": 4, "d": 2, "k": 2, "entries": [{"diagram": [1], "p": 0.8}]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(TableEntryError):
        StayTable.load(path)
