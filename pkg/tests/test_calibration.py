import numpy as np
import pytest
import scipy.stats as sps

from matchpulse.calibration import (
    CalibrationResult,
    ImpliedProbs,
    OddsRecord,
    calibrate_rates,
    calibrate_record,
    deoverround,
    model_probs,
    synthetic_odds,
    _initial_guess,
    _pmf,
)
from matchpulse.core import MatchState, ProbTriple, ScoringRates, uniform_weights
from matchpulse.engine import build_schedule, outcome_probs

ALL_LINES = (0.5, 1.5, 2.5, 3.5, 4.5, 5.5)


def test_deoverround_one_x_two():
    rec = OddsRecord("m", 2.0, 3.5, 4.0)
    p = deoverround(rec).outcome
    np.testing.assert_allclose(
        [p.home, p.draw, p.away], [0.4828, 0.2759, 0.2414], atol=5e-5
    )


def test_deoverround_normalises_each_market_separately():
    rec = OddsRecord("m", 2.0, 3.5, 4.0, ou_lines=((2.5, 1.9, 1.9),))
    implied = deoverround(rec)
    assert implied.totals == ((2.5, 0.5),)
    np.testing.assert_allclose(
        implied.outcome.home + implied.outcome.draw + implied.outcome.away, 1.0
    )


def test_odds_record_validation():
    with pytest.raises(ValueError):
        OddsRecord("m", 1.0, 3.0, 3.0)
    with pytest.raises(ValueError):
        OddsRecord("m", 2.0, 3.0, 3.0, ou_lines=((1.0, 1.9, 1.9),))
    with pytest.raises(ValueError):
        OddsRecord("m", 2.0, 3.0, 3.0, ou_lines=((2.5, 1.9, 1.9), (2.5, 2.0, 1.8)))
    with pytest.raises(ValueError):
        ImpliedProbs(ProbTriple(0.4, 0.3, 0.3), totals=((2.5, 1.0),))


def test_pmf_matches_scipy():
    for rate in (0.3, 1.7, 4.2, 7.9):
        np.testing.assert_allclose(
            _pmf(rate), sps.poisson.pmf(np.arange(64), rate), atol=1e-14
        )


def test_model_probs_symmetric_and_total_line():
    m = model_probs(ScoringRates(1.25, 1.25))
    np.testing.assert_allclose(m.outcome.home, m.outcome.away, atol=1e-12)
    # P(total > 0.5) = 1 - P(no goals) with independent Poisson scorers
    over_half = dict(m.totals)[0.5]
    np.testing.assert_allclose(over_half, 1 - np.exp(-2.5), atol=1e-12)
    np.testing.assert_allclose(over_half, 0.9179, atol=5e-5)


def test_model_probs_totals_decreasing_in_threshold():
    m = model_probs(ScoringRates(2.0, 1.3))
    overs = [p for _, p in sorted(m.totals)]
    assert all(a > b for a, b in zip(overs, overs[1:]))


def test_model_probs_matches_engine_at_kickoff():
    # the calibration model and the path engine's closed-form method are
    # the same independent-Poisson match, so kickoff beliefs must agree
    rates = ScoringRates(1.6, 1.1)
    m = model_probs(rates).outcome
    schedule = build_schedule(rates, uniform_weights())
    e = outcome_probs(MatchState(0), schedule, method="poisson")
    np.testing.assert_allclose(
        [m.home, m.draw, m.away], [e.home, e.draw, e.away], atol=1e-10
    )


def test_components_sorted_by_threshold():
    implied = ImpliedProbs(
        ProbTriple(0.5, 0.3, 0.2), totals=((3.5, 0.2), (0.5, 0.9), (1.5, 0.6))
    )
    ts, targets = implied.components()
    np.testing.assert_allclose(ts, [0.5, 1.5, 3.5])
    np.testing.assert_allclose(targets, [0.5, 0.3, 0.2, 0.9, 0.6, 0.2])


def test_round_trip_no_overround():
    rates = ScoringRates(1.8, 1.1)
    res = calibrate_record(synthetic_odds(rates, ALL_LINES))
    assert res.converged
    np.testing.assert_allclose(res.rates.lambda_home, 1.8, atol=1e-4)
    np.testing.assert_allclose(res.rates.lambda_away, 1.1, atol=1e-4)


@pytest.mark.parametrize("overround", [1.0, 1.05, 1.08])
@pytest.mark.parametrize("pair", [(0.2, 0.2), (0.2, 4.0), (4.0, 4.0), (2.3, 1.4)])
def test_round_trip_with_margin(pair, overround):
    rates = ScoringRates(*pair)
    res = calibrate_record(synthetic_odds(rates, ALL_LINES, overround=overround))
    assert abs(res.rates.lambda_home - pair[0]) <= 0.05
    assert abs(res.rates.lambda_away - pair[1]) <= 0.05


def test_swap_equivariance():
    a = calibrate_record(synthetic_odds(ScoringRates(2.2, 0.9), ALL_LINES))
    b = calibrate_record(synthetic_odds(ScoringRates(0.9, 2.2), ALL_LINES))
    np.testing.assert_allclose(a.rates.lambda_home, b.rates.lambda_away, atol=1e-6)
    np.testing.assert_allclose(a.rates.lambda_away, b.rates.lambda_home, atol=1e-6)


def test_one_x_two_only_record():
    rec = synthetic_odds(ScoringRates(1.5, 1.0), thresholds=())
    assert rec.ou_lines == ()
    res = calibrate_record(rec)
    assert isinstance(res, CalibrationResult)
    assert res.converged
    # without totals the outcome triple still pins the rates closely
    assert abs(res.rates.lambda_home - 1.5) < 0.25
    assert abs(res.rates.lambda_away - 1.0) < 0.25


def test_calibration_descends_from_initial_guess():
    implied = deoverround(OddsRecord("m", 2.4, 3.3, 3.1, ou_lines=((2.5, 1.8, 2.0),)))
    res = calibrate_rates(implied)
    ts, targets = implied.components()
    from matchpulse.calibration import _model_components

    x0 = _initial_guess(implied)
    f0 = float(((_model_components(x0[0], x0[1], ts) - targets) ** 2).sum())
    assert res.objective <= f0 + 1e-15
    assert res.iterations > 0


def test_synthetic_odds_floors_certain_quotes():
    rec = synthetic_odds(ScoringRates(4.0, 4.0), ALL_LINES, overround=1.08)
    # over 0.5 goals at a combined rate of 8 is near-certain; with the
    # margin its fair quote would dip below 1 and must be floored
    assert all(over > 1.0 and under > 1.0 for _, over, under in rec.ou_lines)
    with pytest.raises(ValueError):
        synthetic_odds(ScoringRates(1, 1), overround=0.97)
