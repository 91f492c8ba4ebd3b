from fractions import Fraction as Fr

import pytest
from hypothesis import given
from hypothesis import strategies as st

from selection_games.errors import InconsistencyError
from selection_games.stage_games import (
    StageGameFR,
    StageGameNR,
    best_response_slack,
    payoff_matrix_fr,
    payoff_matrix_nr,
    psi_extremes,
    selector_H,
    selector_L,
    solve_fr_stage,
    solve_nr_stage,
    verify_outcome,
)

unit = st.floats(0.0, 1.0, allow_nan=False)


# -- selectors -------------------------------------------------------------------


def test_selector_examples():
    assert selector_L(0.5, 0.6, 0.3) == 0.3
    assert selector_H(0.7, 0.6, 0.65) == pytest.approx(0.65)
    assert selector_L(0.7, 0.6, 0.65) == pytest.approx(0.65)


@given(unit, unit, unit)
def test_selectors_agree_when_x_below_y(x, y, z):
    if x <= y:
        assert selector_L(x, y, z) == z
        assert selector_H(x, y, z) == z


def test_psi_extremes_branches():
    assert psi_extremes(0.3, 0.5, 0.6) == (0.6, 0.6)
    assert psi_extremes(0.5, 0.3, 0.7) == (0.4, 0.7)
    assert psi_extremes(0.9, 0.3, 0.5) == (0.6, 0.6)
    with pytest.raises(InconsistencyError):
        psi_extremes(0.5, 0.7, 0.2)


@given(unit, unit, unit, unit)
def test_psi_monotone_in_continuation(a, c, d1, d2):
    lo, hi = min(d1, d2), max(d1, d2)
    if c >= a - 1e-9 and lo <= a + 1e-9:
        return  # outside (or too close to) the consistency domain
    p_lo = psi_extremes(a, c, lo)
    p_hi = psi_extremes(a, c, hi)
    assert p_lo[0] <= p_hi[0] + 1e-12
    assert p_lo[1] <= p_hi[1] + 1e-12


# -- full recall -------------------------------------------------------------------


def test_fr_unique_bid_case():
    out = solve_fr_stage(StageGameFR(a=0.9, c=0.3, d=0.5))
    assert out.case_tag == "fr:a"
    assert out.payoffs == ((0.6, 0.6),)


def test_fr_two_point_state_example():
    # one high sample seen, one arrival to come
    out = solve_fr_stage(StageGameFR(a=2 / 3, c=7 / 12, d=5 / 8))
    assert out.case_tag == "fr:a"
    assert out.payoffs[0][0] == pytest.approx(5 / 8, abs=1e-12)


def test_fr_pass_case():
    out = solve_fr_stage(StageGameFR(a=0.2, c=0.5, d=0.6))
    assert out.case_tag == "fr:c"
    assert out.payoffs == ((0.6, 0.6),)


def test_fr_mixed_case_values():
    a, c, d = 0.5, 0.2, 0.8
    out = solve_fr_stage(StageGameFR(a, c, d))
    assert out.case_tag == "fr:b"
    mixed = [e for e in out.equilibria if 0 < e.bid_probs[0] < 1][0]
    want = (d * c - 2 * a * c + a * d) / (2 * d - a - c)
    assert mixed.payoff[0] == pytest.approx(want, abs=1e-12)
    assert mixed.bid_probs[0] == pytest.approx(2 * (d - a) / (2 * d - a - c), abs=1e-12)


def test_fr_inconsistency_raises():
    with pytest.raises(InconsistencyError):
        solve_fr_stage(StageGameFR(a=0.5, c=0.7, d=0.3))


@given(unit, unit, unit)
def test_fr_outcomes_verify_and_order(a, c, d):
    if c >= a and d < a:
        return
    g = StageGameFR(a, c, d)
    out = solve_fr_stage(g)
    verify_outcome(payoff_matrix_fr(g), out, slack=1e-9)
    if out.case_tag == "fr:b":
        lo, mid, hi = sorted(p[0] for p in out.payoffs)
        assert lo <= mid <= hi
        assert hi == pytest.approx(d)
        assert lo == pytest.approx((a + c) / 2)


def test_fr_exact_fractions():
    g = StageGameFR(Fr(1, 2), Fr(1, 5), Fr(4, 5))
    out = solve_fr_stage(g, tol=0)
    verify_outcome(payoff_matrix_fr(g), out, slack=0)
    mixed = [e for e in out.equilibria if isinstance(e.bid_probs[0], Fr)][0]
    assert mixed.payoff == (Fr(2, 5), Fr(2, 5))


# -- no recall -----------------------------------------------------------------------


def test_nr_interior_example():
    # pending value 1/3, lone value 1/2, symmetric continuation 1/4
    out = solve_nr_stage(StageGameNR(a=Fr(1, 3), c=Fr(1, 2), d=Fr(1, 4), e=Fr(1, 4)), tol=0)
    assert out.case_tag == "nr:c"
    assert set(out.payoffs) == {
        (Fr(1, 3), Fr(1, 2)),
        (Fr(1, 2), Fr(1, 3)),
        (Fr(3, 8), Fr(3, 8)),
    }


def test_nr_forced_bid_example():
    out = solve_nr_stage(StageGameNR(a=Fr(2, 3), c=Fr(1, 2), d=Fr(1, 4), e=Fr(1, 4)), tol=0)
    assert out.case_tag == "nr:a"
    assert out.payoffs == ((Fr(7, 12), Fr(7, 12)),)


def test_nr_forced_pass_case():
    out = solve_nr_stage(StageGameNR(a=0.1, c=0.5, d=0.3, e=0.4))
    assert out.case_tag == "nr:g"
    assert out.payoffs == ((0.3, 0.4),)


def test_nr_one_sided_cases():
    out = solve_nr_stage(StageGameNR(a=0.3, c=0.5, d=0.4, e=0.2))
    assert out.case_tag == "nr:h"
    assert out.payoffs == ((0.5, 0.3),)
    out = solve_nr_stage(StageGameNR(a=0.3, c=0.5, d=0.2, e=0.4))
    assert out.case_tag == "nr:i"
    assert out.payoffs == ((0.3, 0.5),)


def test_nr_boundary_cases_report_endpoints():
    out = solve_nr_stage(StageGameNR(a=0.3, c=0.5, d=0.3, e=0.1))
    assert out.case_tag == "nr:d" and out.has_continuum
    out = solve_nr_stage(StageGameNR(a=0.3, c=0.5, d=0.3, e=0.3))
    assert out.case_tag == "nr:f" and out.has_continuum
    assert (0.3, 0.3) in out.payoffs
    out = solve_nr_stage(StageGameNR(a=0.3, c=0.5, d=0.4, e=0.3))
    assert out.case_tag == "nr:j"
    assert set(out.payoffs) == {(0.4, 0.3), (0.5, 0.3)}


def test_nr_invariant_violation_raises():
    with pytest.raises(InconsistencyError):
        solve_nr_stage(StageGameNR(a=0.3, c=0.5, d=0.6, e=0.2))


@given(unit, unit, unit, unit)
def test_nr_outcomes_verify(a, c, d, e):
    if d > c or e > c:
        return
    g = StageGameNR(a, c, d, e)
    out = solve_nr_stage(g)
    verify_outcome(payoff_matrix_nr(g), out, slack=1e-9)
    if out.case_tag == "nr:c":
        mixed = out.payoffs[-1]
        assert mixed[0] + mixed[1] <= a + c + 1e-9


def test_best_response_slack_flags_non_equilibrium():
    g = StageGameNR(a=0.3, c=0.5, d=0.1, e=0.1)
    gains = best_response_slack(payoff_matrix_nr(g), 0.0, 0.0)
    assert max(gains[0], gains[1]) > 0.1


def test_payoff_extremes_feed_the_recursions():
    # interior case: min sum from the mixed point, max sum from the
    # asymmetric pure points, min single coordinate = the pending value
    a, c, d, e = Fr(1, 3), Fr(1, 2), Fr(1, 4), Fr(1, 4)
    out = solve_nr_stage(StageGameNR(a, c, d, e), tol=0)
    min_sum, max_sum, min_single = out.payoff_extremes
    assert max_sum == a + c
    assert min_single == a
    assert min_sum == Fr(3, 4)  # both coordinates 3/8 at the mixed point
    assert out.max_single == c
