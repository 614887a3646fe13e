"""Write a small schema-conformant dataset for trying the CLI.

Creates demos/data/{matches,odds,weights}.csv: two leagues, three
seasons, timelines simulated from planted rates and odds quoted from the
same rates with a 5% margin. Afterwards try:

    matchpulse calibrate --odds demos/data/odds.csv --out rates.csv
    matchpulse score --matches demos/data/matches.csv \
        --odds demos/data/odds.csv --weights demos/data/weights.csv \
        --out excitement.csv
    matchpulse trends --excitement excitement.csv \
        --top-teams Citizens --out trends.csv
"""

import os

import numpy as np

from matchpulse.calibration import synthetic_odds
from matchpulse.core import (
    MatchTimeline,
    RngSeedPolicy,
    ScoringRates,
    english_league_weights,
)
from matchpulse.dataio import MatchMeta, write_matches, write_odds, write_weights
from matchpulse.montecarlo import simulate_match

OUT = os.path.join(os.path.dirname(__file__), "data")
LEAGUES = {
    "first division": ["Citizens", "Foxes", "Saints", "Hornets"],
    "second division": ["Swans", "Terriers", "Rovers"],
}
LINES = (0.5, 1.5, 2.5, 3.5, 4.5, 5.5)

os.makedirs(OUT, exist_ok=True)
rng = np.random.default_rng(2024)
policy = RngSeedPolicy(2024)
weights = english_league_weights()

items, odds = [], []
i = 0
for league, teams in LEAGUES.items():
    for season in (2014, 2015, 2016):
        for j in range(6):
            home, away = (str(t) for t in rng.choice(teams, 2, replace=False))
            rates = ScoringRates(
                float(rng.uniform(0.7, 2.3)), float(rng.uniform(0.5, 1.9))
            )
            mid = f"{league.split()[0]}-{season}-{j}"
            meta = MatchMeta(mid, league, season, f"{season}-09-{10 + j:02d}", home, away)
            items.append((meta, simulate_match(rates, weights, policy.stream(i))))
            odds.append(synthetic_odds(rates, LINES, overround=1.05, match_id=mid))
            i += 1

write_matches(os.path.join(OUT, "matches.csv"), items)
write_odds(os.path.join(OUT, "odds.csv"), odds)
write_weights(os.path.join(OUT, "weights.csv"), {lg: weights for lg in LEAGUES})
print(f"wrote {len(items)} matches to {OUT}/")
