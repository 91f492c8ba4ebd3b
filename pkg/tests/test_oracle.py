from fractions import Fraction as Fr

import pytest

from selection_games import full_recall as FR
from selection_games import oracle as O
from selection_games.distributions import discrete
from selection_games.errors import ResourceBudgetError, SpecValidationError
from selection_games.testkit import (
    two_point_best_value,
    two_point_no_recall_set,
)

TWO_POINT = [("1/3", "1/2"), ("2/3", "1/2")]
LOW_HIGH = [("1/10", "1/2"), ("1/2", "1/2")]


def test_two_point_two_arrival_set_exact():
    s = O.oracle_spep(TWO_POINT, 2, "no_recall")
    assert set(s.payoffs) == {
        (Fr(11, 24), Fr(13, 24)),
        (Fr(13, 24), Fr(11, 24)),
        (Fr(23, 48), Fr(23, 48)),
    }
    assert not s.endpoints_only


@pytest.mark.parametrize("n", range(2, 7))
def test_two_point_closed_forms_all_horizons(n):
    nr = O.oracle_spep(TWO_POINT, n, "no_recall")
    assert set(nr.payoffs) == two_point_no_recall_set(n)
    fr = O.oracle_spep(TWO_POINT, n, "full_recall")
    h = two_point_best_value(n)
    assert set(fr.payoffs) == {(h, h)}


def test_two_point_sum_identity():
    # the asymmetric no-recall sum equals the recall sum and beats the
    # symmetric no-recall sum
    for n in range(2, 7):
        pts = sorted(two_point_no_recall_set(n))
        h = two_point_best_value(n)
        p, q = pts[-1][0], pts[-1][1]
        r = [x for x, y in pts if x == y][0]
        assert p + q == 2 * h
        assert 2 * h > 2 * r


def test_summaries():
    s = O.oracle_spep(TWO_POINT, 2, "no_recall")
    best_sum, worst_sum, worst_single, best_single = O.oracle_summaries(s)
    assert best_sum == Fr(1)
    assert worst_sum == Fr(23, 24)
    assert worst_single == Fr(11, 24)
    assert best_single == Fr(13, 24)


def test_singleton_summaries():
    s = O.oracle_spep([("7/10", 1)], 3, "full_recall")
    assert O.oracle_summaries(s) == (Fr(7, 5), Fr(7, 5), Fr(7, 10), Fr(7, 10))


def test_low_high_example_exact():
    fr = O.oracle_spep(LOW_HIGH, 2, "full_recall")
    assert set(fr.payoffs) == {(Fr(3, 10), Fr(3, 10))}
    nr = O.oracle_spep(LOW_HIGH, 2, "no_recall")
    assert O.oracle_summaries(nr)[3] == Fr(11, 40)


def test_oracle_matches_full_recall_module():
    for atoms_exact, atoms_float in (
        (TWO_POINT, [(1 / 3, 0.5), (2 / 3, 0.5)]),
        (LOW_HIGH, [(0.1, 0.5), (0.5, 0.5)]),
        (
            [("1/5", "1/3"), ("1/2", "1/3"), ("9/10", "1/3")],
            [(0.2, 1 / 3), (0.5, 1 / 3), (0.9, 1 / 3)],
        ),
    ):
        law = discrete(atoms_float)
        for n in range(1, 6):
            spep = O.oracle_spep(atoms_exact, n, "full_recall")
            lo = min(float(x) for x, _ in spep.payoffs)
            hi = max(float(x) for x, _ in spep.payoffs)
            b = FR.band(law, n)
            assert abs(b.low - lo) < 1e-9
            assert abs(b.high - hi) < 1e-9


def test_three_atom_law_runs_and_is_symmetric():
    atoms = [("1/4", "1/3"), ("1/2", "1/3"), ("3/4", "1/3")]
    s = O.oracle_spep(atoms, 3, "no_recall")
    pset = set(s.payoffs)
    assert all((y, x) in pset for x, y in pset)


def test_guards():
    with pytest.raises(ResourceBudgetError):
        O.oracle_spep([(Fr(i, 10), Fr(1, 5)) for i in range(1, 6)], 2, "no_recall")
    with pytest.raises(SpecValidationError):
        O.oracle_spep(TWO_POINT, 9, "no_recall")
    with pytest.raises(ResourceBudgetError):
        O.oracle_spep(
            [("1/8", "1/4"), ("3/8", "1/4"), ("5/8", "1/4"), ("7/8", "1/4")],
            4,
            "no_recall",
            budget=50,
        )


def test_atom_validation():
    with pytest.raises(SpecValidationError):
        O.oracle_spep([("1/3", "1/3")], 2, "no_recall")
    with pytest.raises(SpecValidationError):
        O.oracle_spep([("1/3", "1/2"), ("1/3", "1/2")], 2, "no_recall")


def test_atoms_from_distribution_snaps_floats():
    law = discrete([(1 / 3, 0.5), (2 / 3, 0.5)])
    atoms = O.atoms_from_distribution(law)
    assert atoms == ((Fr(1, 3), Fr(1, 2)), (Fr(2, 3), Fr(1, 2)))


def test_provenance_tags_present():
    s = O.oracle_spep(TWO_POINT, 2, "no_recall")
    tags = set().union(*s.provenance)
    assert any(t.startswith("nr:") for t in tags)
