import pytest

from selection_games.testkit import (
    UNIFORM_BAND_ROWS,
    UNIFORM_NO_RECALL_ROWS,
    UNIFORM_RATIO_ROWS,
    fixtures,
)


def test_fixture_catalog_complete():
    names = {f.name for f in fixtures()}
    assert names == {
        "uniform-no-recall-scalars",
        "uniform-band-and-no-recall",
        "uniform-efficiency-ratios",
        "two-point-closed-forms",
        "recall-beats-no-recall-example",
        "uniform-two-arrival-equality",
    }


def test_every_expected_value_is_annotated():
    for fixture in fixtures():
        assert fixture.expected
        for ev in fixture.expected:
            assert ev.note
            assert ev.tol >= 0.0


def test_ratio_rows_consistent_with_scalar_rows():
    # the ratio table must equal ratios of independently encoded entries:
    # with two arrivals the feasible sum is 2 E(X) = 1 for the uniform law
    ap2, al2, be2 = UNIFORM_NO_RECALL_ROWS[2]
    row2 = dict(zip(("poa_fr", "poa_nr", "pos_fr", "pos_nr", "pr_fr", "pr_nr"), UNIFORM_RATIO_ROWS[2]))
    assert row2["poa_nr"] == pytest.approx(1.0 / (2 * al2), abs=1e-3)
    assert row2["pos_nr"] == pytest.approx(1.0 / (2 * be2), abs=1e-3)
    # prophet ratio rows divide the top-two expectation (2n-1)/(n+1)
    for n in (3, 4, 5):
        be = UNIFORM_BAND_ROWS[n][3]
        pr_nr = UNIFORM_RATIO_ROWS[n][5]
        top2 = (2 * n - 1) / (n + 1)
        assert pr_nr == pytest.approx(top2 / (2 * be), abs=1e-3)


def test_band_rows_agree_across_tables():
    for n in (1, 2, 3, 4):
        assert UNIFORM_NO_RECALL_ROWS[n][1] == UNIFORM_BAND_ROWS[n][2]
        assert UNIFORM_NO_RECALL_ROWS[n][2] == UNIFORM_BAND_ROWS[n][3]
