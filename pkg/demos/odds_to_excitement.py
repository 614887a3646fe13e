"""From bookmaker odds to excitement scores, step by step.

1. strip the overround from quoted 1X2 + totals odds
2. fit the two Poisson scoring rates to the implied probabilities
3. score the realised match under those rates
Run with: python3 demos/odds_to_excitement.py
"""

from matchpulse.calibration import (
    OddsRecord,
    calibrate_rates,
    deoverround,
    model_probs,
)
from matchpulse.core import (
    EventKind,
    MatchEvent,
    MatchTimeline,
    Team,
    english_league_weights,
)
from matchpulse.excitement import excitement

# quoted decimal odds; each market carries its own margin
record = OddsRecord(
    match_id="demo",
    home_odds=2.05,
    draw_odds=3.40,
    away_odds=3.90,
    ou_lines=(
        (0.5, 1.06, 9.50),
        (1.5, 1.36, 3.20),
        (2.5, 2.10, 1.78),
        (3.5, 3.80, 1.28),
    ),
)

implied = deoverround(record)
booksum = 1 / record.home_odds + 1 / record.draw_odds + 1 / record.away_odds
print(f"1X2 booksum {booksum:.4f} -> margin {100 * (booksum - 1):.1f}%")
print("implied outcome probabilities: %.4f / %.4f / %.4f"
      % (implied.outcome.home, implied.outcome.draw, implied.outcome.away))
for t, p_over in implied.totals:
    print(f"  P(total goals > {t}): {p_over:.4f}")
print()

result = calibrate_rates(implied)
lh, la = result.rates.lambda_home, result.rates.lambda_away
print(f"fitted rates: home {lh:.3f}, away {la:.3f}"
      f"  (objective {result.objective:.2e},"
      f" {result.iterations} iterations, converged={result.converged})")

# how well do the fitted rates price the quoted markets back?
back = model_probs(result.rates)
print("model outcome probabilities: %.4f / %.4f / %.4f"
      % (back.outcome.home, back.outcome.draw, back.outcome.away))
print()

# the match itself: a tight 1-1 draw
timeline = MatchTimeline(
    (
        MatchEvent(31, Team.HOME, EventKind.GOAL),
        MatchEvent(78, Team.AWAY, EventKind.GOAL),
    )
)
exc = excitement(timeline, result.rates, english_league_weights())
print(f"suspense {exc.suspense:.3f}, surprise {exc.surprise:.3f}")
print("late equalisers buy a lot of surprise: the away goal alone moved")
print(f"beliefs by {exc.per_minute_surprise[77]:.3f}")
