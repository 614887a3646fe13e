"""Shared synthetic dataset: a small two-league panel with planted rates.

The fixture writes schema-conformant matches/odds/weights CSVs built from
the model itself (timelines simulated at the planted rates, odds quoted
from them with a 5% margin), so calibration and scoring have a known
ground truth to recover.
"""

import numpy as np
import pytest

from matchpulse.calibration import synthetic_odds
from matchpulse.core import (
    EventKind,
    MatchEvent,
    MatchTimeline,
    RngSeedPolicy,
    ScoringRates,
    Team,
    english_league_weights,
)
from matchpulse.dataio import MatchMeta, write_matches, write_odds, write_weights
from matchpulse.montecarlo import simulate_match

LEAGUES = {
    "alpha": ["Reds", "Blues", "Greens", "Whites"],
    "beta": ["Lions", "Bears", "Wolves"],
}
ALL_LINES = (0.5, 1.5, 2.5, 3.5, 4.5, 5.5)


def build_dataset(dirpath, n_per_league_season=4, seasons=(2014, 2015, 2016)):
    """Write matches.csv / odds.csv / weights.csv; return paths and truth."""
    rng = np.random.default_rng(20)
    pol = RngSeedPolicy(777)
    weights = english_league_weights()
    items = []
    odds = []
    planted = {}
    i = 0
    for league, teams in LEAGUES.items():
        for season in seasons:
            for j in range(n_per_league_season):
                home, away = (str(t) for t in rng.choice(teams, 2, replace=False))
                rates = ScoringRates(
                    float(rng.uniform(0.7, 2.2)), float(rng.uniform(0.5, 1.8))
                )
                tl = simulate_match(rates, weights, pol.stream(i))
                events = list(tl.events)
                if i == 1:  # one red card in the panel
                    events.append(MatchEvent(55, Team.AWAY, EventKind.RED_CARD))
                mid = f"{league}-{season}-{j}"
                meta = MatchMeta(mid, league, season, f"{season}-09-{10 + j:02d}", home, away)
                items.append((meta, MatchTimeline(tuple(events))))
                odds.append(
                    synthetic_odds(rates, ALL_LINES, overround=1.05, match_id=mid)
                )
                planted[mid] = rates
                i += 1
    matches_path = str(dirpath / "matches.csv")
    odds_path = str(dirpath / "odds.csv")
    weights_path = str(dirpath / "weights.csv")
    write_matches(matches_path, items)
    write_odds(odds_path, odds)
    write_weights(weights_path, {league: weights for league in LEAGUES})
    return {
        "matches": matches_path,
        "odds": odds_path,
        "weights": weights_path,
        "items": items,
        "odds_records": odds,
        "planted": planted,
    }


@pytest.fixture(scope="session")
def dataset(tmp_path_factory):
    return build_dataset(tmp_path_factory.mktemp("dataset"))
