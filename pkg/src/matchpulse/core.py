"""Core domain types for match timelines, scoring rates, and minute weights.

A match is modelled as 90 effective minutes. Goals in first-half stoppage
time count as minute 45, second-half stoppage as minute 90. Scoring rates
are full-match Poisson means spread over minutes by a weight distribution.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

MINUTES = 90

# Rate multipliers applied from the minute after a red card to the end:
# the offending team scores at 2/3 of its rate, the opponent at 1.2x.
RED_CARD_OWN_FACTOR = 2.0 / 3.0
RED_CARD_OPP_FACTOR = 1.2


class Team(enum.Enum):
    HOME = "H"
    AWAY = "A"

    @property
    def other(self) -> "Team":
        return Team.AWAY if self is Team.HOME else Team.HOME


class EventKind(enum.Enum):
    GOAL = "goal"
    RED_CARD = "red"


def fold_injury_time(minute: int, added: int = 0) -> int:
    """Map a raw (minute, added time) pair onto the 1..90 scale.

    Added time is only defined at the end of a half: 45+x folds to 45 and
    90+x folds to 90. Anything else with added > 0 is malformed.
    """
    if minute < 1 or minute > MINUTES:
        raise ValueError(f"minute {minute} outside 1..{MINUTES}")
    if added < 0:
        raise ValueError(f"negative added time {added}")
    if added > 0 and minute not in (45, MINUTES):
        raise ValueError(f"added time on minute {minute}; only 45 and 90 take stoppage")
    return minute


@dataclass(frozen=True)
class MatchEvent:
    """A goal or red card at a folded minute (1..90)."""

    minute: int
    team: Team
    kind: EventKind

    def __post_init__(self):
        if not 1 <= self.minute <= MINUTES:
            raise ValueError(f"event minute {self.minute} outside 1..{MINUTES}")


@dataclass(frozen=True)
class MatchTimeline:
    """Complete event list of one match, sorted by minute."""

    events: tuple[MatchEvent, ...] = ()

    def __post_init__(self):
        ordered = tuple(sorted(self.events, key=lambda e: e.minute))
        object.__setattr__(self, "events", ordered)

    def goals(self, team: Team) -> int:
        return sum(1 for e in self.events if e.kind is EventKind.GOAL and e.team is team)

    @property
    def final_score(self) -> tuple[int, int]:
        return self.goals(Team.HOME), self.goals(Team.AWAY)


@dataclass(frozen=True)
class MatchState:
    """Score and red-card counts known after `minute` has been played.

    minute = 0 is the pre-match state.
    """

    minute: int
    goals_home: int = 0
    goals_away: int = 0
    reds_home: int = 0
    reds_away: int = 0

    def __post_init__(self):
        if not 0 <= self.minute <= MINUTES:
            raise ValueError(f"state minute {self.minute} outside 0..{MINUTES}")
        for name in ("goals_home", "goals_away", "reds_home", "reds_away"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} negative")

    @property
    def diff(self) -> int:
        return self.goals_home - self.goals_away


def replay_state(timeline: MatchTimeline, minute: int) -> MatchState:
    """State after all events up to and including `minute`."""
    if not 0 <= minute <= MINUTES:
        raise ValueError(f"minute {minute} outside 0..{MINUTES}")
    gh = ga = rh = ra = 0
    for e in timeline.events:
        if e.minute > minute:
            break
        if e.kind is EventKind.GOAL:
            if e.team is Team.HOME:
                gh += 1
            else:
                ga += 1
        else:
            if e.team is Team.HOME:
                rh += 1
            else:
                ra += 1
    return MatchState(minute, gh, ga, rh, ra)


@dataclass(frozen=True)
class ScoringRates:
    """Full-match expected goals for each side."""

    lambda_home: float
    lambda_away: float

    def __post_init__(self):
        for name in ("lambda_home", "lambda_away"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{name}={v!r} must be finite and >= 0")


@dataclass(frozen=True)
class ProbTriple:
    """Outcome probabilities (home win, draw, away win)."""

    home: float
    draw: float
    away: float

    _TOL = 1e-9

    def __post_init__(self):
        values = (self.home, self.draw, self.away)
        if any(v < -self._TOL or v > 1 + self._TOL for v in values):
            raise ValueError(f"probabilities outside [0, 1]: {values}")
        if abs(sum(values) - 1.0) > self._TOL:
            raise ValueError(f"probabilities sum to {sum(values)!r}, not 1")

    def as_array(self) -> np.ndarray:
        return np.array([self.home, self.draw, self.away])


@dataclass(frozen=True)
class ScoreProbPair:
    """Probability that each side scores in a given minute."""

    home: float
    away: float

    def __post_init__(self):
        for name in ("home", "away"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v!r} outside [0, 1]")


@dataclass(frozen=True)
class MinuteWeights:
    """Share of a team's full-match scoring rate assigned to each minute.

    values[i] is the weight of minute i+1; the 90 weights are non-negative
    and sum to 1. Minute 45 and 90 carry their stoppage-time mass.
    """

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        if arr.shape != (MINUTES,):
            raise ValueError(f"weights shape {arr.shape}, expected ({MINUTES},)")
        if np.any(arr < 0):
            raise ValueError("weights must be non-negative")
        if abs(arr.sum() - 1.0) > 1e-9:
            raise ValueError(f"weights sum to {arr.sum()!r}, not 1")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)


def uniform_weights() -> MinuteWeights:
    """Flat distribution: every minute carries 1/90 of the rate."""
    return MinuteWeights(np.full(MINUTES, 1.0 / MINUTES))


def english_league_weights() -> MinuteWeights:
    """Stylised English top-flight goal-timing distribution.

    Built from public aggregate patterns: scoring rises roughly linearly
    within each half, the second half runs hotter than the first, and the
    45th and 90th minutes absorb stoppage-time goals (the 90th around 6%
    of all goals). Use this as the default when no per-league empirical
    weights are supplied.
    """
    w = np.zeros(MINUTES)
    m = np.arange(1, 45)
    w[m - 1] = 6.80e-3 + 1.244e-4 * (m - 1)  # minutes 1..44
    w[45 - 1] = 2.62e-2  # minute 45 + first-half stoppage
    m = np.arange(46, 90)
    w[m - 1] = 8.74e-3 + 1.100e-4 * (m - 46)  # minutes 46..89
    w[MINUTES - 1] = 6.10e-2  # minute 90 + second-half stoppage
    return MinuteWeights(w / w.sum())


@dataclass(frozen=True)
class MatchExcitement:
    """Belief path and the excitement metrics computed from it.

    prob_path has 91 rows: row m is the (home, draw, away) belief after
    minute m, with row 0 the pre-match belief and row 90 the realised
    outcome. The per-minute arrays have 90 entries for minutes 1..90.
    """

    prob_path: np.ndarray
    per_minute_suspense: np.ndarray
    per_minute_surprise: np.ndarray
    suspense: float
    surprise: float

    def __post_init__(self):
        if self.prob_path.shape != (MINUTES + 1, 3):
            raise ValueError(f"prob_path shape {self.prob_path.shape}")
        for name in ("per_minute_suspense", "per_minute_surprise"):
            if getattr(self, name).shape != (MINUTES,):
                raise ValueError(f"{name} must have {MINUTES} entries")

    @property
    def pre_match(self) -> ProbTriple:
        h, d, a = self.prob_path[0]
        return ProbTriple(float(h), float(d), float(a))


@dataclass(frozen=True)
class RngSeedPolicy:
    """Deterministic stream derivation from a global seed.

    stream(*path) returns a Philox generator with key = global_seed and
    counter limbs 1..3 set from the path indices (e.g. (match,), or
    (pair, match)). Distinct paths get disjoint counter blocks, so results
    never depend on scheduling order or thread count.
    """

    global_seed: int = 0

    def __post_init__(self):
        if not 0 <= self.global_seed < 2**64:
            raise ValueError("global_seed must fit in uint64")

    def stream(self, *path: int) -> np.random.Generator:
        if len(path) > 3:
            raise ValueError("stream path deeper than 3 levels")
        if any(not 0 <= p < 2**64 for p in path):
            raise ValueError(f"path indices must fit in uint64: {path}")
        counter = [0, 0, 0, 0]
        for i, p in enumerate(path):
            counter[i + 1] = p
        bg = np.random.Philox(key=self.global_seed, counter=counter)
        return np.random.Generator(bg)
