"""Walk through one match: belief path, suspense, and surprise.

A 2-1 home win with a late equaliser chance killed off by a red card.
Run with: python3 demos/single_match_story.py
"""

from matchpulse.core import (
    EventKind,
    MatchEvent,
    MatchTimeline,
    ScoringRates,
    Team,
    english_league_weights,
)
from matchpulse.excitement import excitement

# pre-match expectation: home side slightly stronger
rates = ScoringRates(lambda_home=1.6, lambda_away=1.1)
weights = english_league_weights()

timeline = MatchTimeline(
    (
        MatchEvent(23, Team.AWAY, EventKind.GOAL),
        MatchEvent(45, Team.HOME, EventKind.GOAL),  # struck in first-half stoppage
        MatchEvent(71, Team.HOME, EventKind.GOAL),
        MatchEvent(84, Team.AWAY, EventKind.RED_CARD),
    )
)

exc = excitement(timeline, rates, weights)

print("pre-match outlook (home/draw/away):")
print("  %.3f / %.3f / %.3f" % tuple(exc.prob_path[0]))
print()

print("minute  p_home  p_draw  p_away   note")
notes = {23: "away goal", 45: "home equaliser", 71: "home 2-1", 84: "away red card"}
for minute in (0, 10, 23, 24, 45, 46, 60, 71, 72, 84, 85, 89, 90):
    h, d, a = exc.prob_path[minute]
    note = notes.get(minute, "")
    print(f"{minute:6d}  {h:6.3f}  {d:6.3f}  {a:6.3f}   {note}")

print()
print(f"total suspense: {exc.suspense:.3f}")
print(f"total surprise: {exc.surprise:.3f}")

# which minutes carried the drama?
top = exc.per_minute_surprise.argsort()[::-1][:3]
print("biggest belief swings at minutes:", sorted(int(m) + 1 for m in top))
