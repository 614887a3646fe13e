import numpy as np
import pytest

from matchpulse.core import (
    MINUTES,
    EventKind,
    MatchEvent,
    MatchTimeline,
    RngSeedPolicy,
    ScoringRates,
    Team,
    english_league_weights,
    uniform_weights,
)
from matchpulse.excitement import excitement, surprise, suspense
from matchpulse.montecarlo import McConfig


def flat_path(triple):
    return np.tile(np.asarray(triple, dtype=float), (MINUTES + 1, 1))


def test_surprise_single_jump():
    path = flat_path([0.5, 0.5, 0.0])
    path[41:] = [1.0, 0.0, 0.0]
    total, per_minute = surprise(path)
    np.testing.assert_allclose(total, np.sqrt(0.5), atol=1e-15)
    np.testing.assert_allclose(per_minute[40], np.sqrt(0.5), atol=1e-15)
    assert np.count_nonzero(per_minute) == 1


def test_surprise_ignores_final_settling():
    # beliefs never move in play; the settling jump onto the outcome
    # vertex at minute 90 does not count
    path = flat_path([0.4, 0.3, 0.3])
    path[MINUTES] = [1.0, 0.0, 0.0]
    total, per_minute = surprise(path)
    assert total == 0.0
    assert per_minute[MINUTES - 1] == 0.0


def test_surprise_rejects_bad_shape():
    with pytest.raises(ValueError):
        surprise(np.zeros((90, 3)))


def test_goalless_drift_identity():
    # symmetric goalless match: every step moves (d, -2d, d), so the
    # total is sqrt(6) times the home-probability drift over minutes 1..89
    rates = ScoringRates(0.5, 0.5)
    exc = excitement(MatchTimeline(()), rates, english_league_weights())
    drift = exc.prob_path[0, 0] - exc.prob_path[MINUTES - 1, 0]
    np.testing.assert_allclose(exc.surprise, np.sqrt(6) * drift, atol=1e-9)
    assert exc.surprise > 0.5


def test_suspense_closed_form():
    path = flat_path([1 / 3, 1 / 3, 1 / 3])
    cond_home = flat_path([1 / 3 + 0.1, 1 / 3 - 0.05, 1 / 3 - 0.05])[:MINUTES]
    cond_away = flat_path([1 / 3, 1 / 3, 1 / 3])[:MINUTES]
    scoring = np.tile([0.04, 0.0], (MINUTES, 1))
    total, per_minute = suspense(path, scoring, cond_home, cond_away)
    dev = 0.1**2 + 2 * 0.05**2
    np.testing.assert_allclose(per_minute[:MINUTES - 1], np.sqrt(0.04 * dev))
    assert per_minute[MINUTES - 1] == 0.0
    np.testing.assert_allclose(total, (MINUTES - 1) * np.sqrt(0.04 * dev))


def test_suspense_rejects_bad_shapes():
    path = flat_path([1 / 3, 1 / 3, 1 / 3])
    good = np.zeros((MINUTES, 3))
    with pytest.raises(ValueError):
        suspense(path, np.zeros((89, 2)), good, good)
    with pytest.raises(ValueError):
        suspense(path, np.zeros((MINUTES, 2)), good[:89], good)


def test_zero_rates_exactly_zero():
    exc = excitement(MatchTimeline(()), ScoringRates(0, 0), uniform_weights())
    assert exc.suspense == 0.0
    assert exc.surprise == 0.0
    np.testing.assert_array_equal(exc.prob_path[:MINUTES], flat_path([0, 1, 0])[:MINUTES])


def test_totals_are_sums_of_per_minute():
    tl = MatchTimeline(
        (
            MatchEvent(10, Team.HOME, EventKind.GOAL),
            MatchEvent(52, Team.AWAY, EventKind.GOAL),
            MatchEvent(78, Team.AWAY, EventKind.GOAL),
        )
    )
    exc = excitement(tl, ScoringRates(1.3, 1.2), english_league_weights())
    np.testing.assert_allclose(exc.suspense, exc.per_minute_suspense.sum(), atol=1e-12)
    np.testing.assert_allclose(exc.surprise, exc.per_minute_surprise.sum(), atol=1e-12)
    assert np.all(exc.per_minute_suspense >= 0)
    assert np.all(exc.per_minute_surprise >= 0)
    assert exc.pre_match.as_array() == pytest.approx(exc.prob_path[0])


def mirror(tl: MatchTimeline) -> MatchTimeline:
    return MatchTimeline(
        tuple(MatchEvent(e.minute, e.team.other, e.kind) for e in tl.events)
    )


def test_mirror_invariance():
    tl = MatchTimeline(
        (
            MatchEvent(15, Team.HOME, EventKind.GOAL),
            MatchEvent(44, Team.AWAY, EventKind.RED_CARD),
            MatchEvent(80, Team.AWAY, EventKind.GOAL),
        )
    )
    rates = ScoringRates(1.7, 1.0)
    w = english_league_weights()
    a = excitement(tl, rates, w)
    b = excitement(mirror(tl), ScoringRates(1.0, 1.7), w)
    np.testing.assert_allclose(a.suspense, b.suspense, atol=1e-12)
    np.testing.assert_allclose(a.surprise, b.surprise, atol=1e-12)
    np.testing.assert_allclose(a.prob_path, b.prob_path[:, ::-1], atol=1e-12)


def test_goal_raises_surprise():
    quiet = excitement(MatchTimeline(()), ScoringRates(1.4, 1.4), uniform_weights())
    late = MatchTimeline((MatchEvent(85, Team.HOME, EventKind.GOAL),))
    loud = excitement(late, ScoringRates(1.4, 1.4), uniform_weights())
    assert loud.surprise > quiet.surprise + 0.2


def test_mc_engine_tracks_analytic():
    tl = MatchTimeline(
        (
            MatchEvent(25, Team.HOME, EventKind.GOAL),
            MatchEvent(70, Team.AWAY, EventKind.GOAL),
        )
    )
    rates = ScoringRates(1.6, 1.1)
    w = english_league_weights()
    pol = RngSeedPolicy(99)
    ana = excitement(tl, rates, w)
    mc = excitement(
        tl,
        rates,
        w,
        engine="mc",
        config=McConfig(replications=20_000, seed_policy=pol),
        stream=pol.stream(0),
    )
    assert abs(mc.suspense - ana.suspense) < 0.05
    assert abs(mc.surprise - ana.surprise) < 0.05
    # rollout estimation adds noise, which can only inflate path length
    assert mc.surprise >= ana.surprise - 0.01


def test_unknown_engine_rejected():
    with pytest.raises(ValueError):
        excitement(MatchTimeline(()), ScoringRates(1, 1), uniform_weights(), engine="x")


def test_poisson_method_close_to_exact():
    tl = MatchTimeline((MatchEvent(40, Team.HOME, EventKind.GOAL),))
    rates = ScoringRates(1.2, 0.9)
    w = english_league_weights()
    a = excitement(tl, rates, w, method="exact")
    b = excitement(tl, rates, w, method="poisson")
    assert abs(a.suspense - b.suspense) < 0.05
    assert abs(a.surprise - b.surprise) < 0.05
