"""Analytic in-play outcome probabilities.

The model: each side's full-match Poisson mean is spread over minutes
1..90 by a weight distribution, giving per-minute scoring probabilities
(a Bernoulli chain). Beliefs at minute t condition on the score and the
red cards known so far; outcome probabilities depend on the remaining
schedule and the current goal difference only.

Two evaluation methods are exposed:

* "exact"   - dynamic program over the remaining Bernoulli minutes.
              This is the literal match model; belief updates satisfy
              the one-minute martingale identity to machine precision.
* "poisson" - remaining goals summarised as independent Poissons with
              the same means (a Skellam-type convolution, truncated at
              1e-12 tail mass). Cheap closed forms, accurate to O(p^2)
              in the per-minute probabilities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    MINUTES,
    RED_CARD_OPP_FACTOR,
    RED_CARD_OWN_FACTOR,
    EventKind,
    MatchState,
    MatchTimeline,
    MinuteWeights,
    ProbTriple,
    ScoreProbPair,
    ScoringRates,
    Team,
    replay_state,
)

# Goal-difference axis of belief tables: index k holds difference k - OFFSET.
# Realised differences fit in +-90; +-1 hypothetical queries need +-91.
DIFF_OFFSET = 92
DIFF_WIDTH = 2 * DIFF_OFFSET + 1

POISSON_TAIL = 1e-12


@dataclass(frozen=True)
class RateSchedule:
    """Per-minute scoring probabilities; index i is minute i+1."""

    home: np.ndarray
    away: np.ndarray

    def __post_init__(self):
        for name in ("home", "away"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (MINUTES,):
                raise ValueError(f"{name} schedule shape {arr.shape}")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def build_schedule(
    rates: ScoringRates,
    weights: MinuteWeights,
    timeline: MatchTimeline | None = None,
) -> RateSchedule:
    """Spread match rates over minutes, applying red-card multipliers.

    A card at minute m rescales both sides from minute m+1 through 90:
    the carded team by 2/3, the opponent by 1.2, compounding per card.
    """
    home = rates.lambda_home * weights.values.copy()
    away = rates.lambda_away * weights.values.copy()
    if timeline is not None:
        for e in timeline.events:
            if e.kind is not EventKind.RED_CARD:
                continue
            start = e.minute  # affects indices e.minute..89 = minutes m+1..90
            if e.team is Team.HOME:
                home[start:] *= RED_CARD_OWN_FACTOR
                away[start:] *= RED_CARD_OPP_FACTOR
            else:
                away[start:] *= RED_CARD_OWN_FACTOR
                home[start:] *= RED_CARD_OPP_FACTOR
    for name, arr in (("home", home), ("away", away)):
        bad = np.nonzero(arr > 1.0)[0]
        if bad.size:
            raise ValueError(
                f"{name} scoring probability exceeds 1 at minute {bad[0] + 1}"
            )
    return RateSchedule(home, away)


def remaining_means(schedule: RateSchedule, minute: int) -> tuple[float, float]:
    """Expected remaining goals for each side after `minute`."""
    if not 0 <= minute <= MINUTES:
        raise ValueError(f"minute {minute} outside 0..{MINUTES}")
    return float(schedule.home[minute:].sum()), float(schedule.away[minute:].sum())


def next_minute_scoring(state: MatchState, schedule: RateSchedule) -> ScoreProbPair:
    """Probability that each side scores in minute state.minute + 1."""
    if state.minute >= MINUTES:
        raise ValueError("match is over; no next minute")
    return ScoreProbPair(
        float(schedule.home[state.minute]), float(schedule.away[state.minute])
    )


def _chain_diff_pmfs(schedule: RateSchedule) -> np.ndarray:
    """pmf of the remaining goal-difference change for every minute.

    Row t (t = 0..90) is the exact distribution of sum_{s>t} (G_s^H - G_s^A)
    under per-minute Bernoulli draws, on the DIFF_OFFSET-centred axis.
    """
    T = np.zeros((MINUTES + 1, DIFF_WIDTH))
    T[MINUTES, DIFF_OFFSET] = 1.0
    for t in range(MINUTES - 1, -1, -1):
        ph, pa = schedule.home[t], schedule.away[t]  # minute t+1
        up = ph * (1.0 - pa)
        down = pa * (1.0 - ph)
        stay = (1.0 - ph) * (1.0 - pa) + ph * pa
        row = T[t + 1]
        nxt = stay * row
        nxt[1:] += up * row[:-1]
        nxt[:-1] += down * row[1:]
        T[t] = nxt
    return T


def _poisson_pmf_vector(mu: float, tail: float = POISSON_TAIL) -> np.ndarray:
    """Poisson pmf 0..K with K chosen so the dropped tail mass < `tail`."""
    if mu == 0.0:
        return np.ones(1)
    k = int(np.ceil(mu + 12.0 * np.sqrt(mu) + 25.0))
    pmf = np.empty(k + 1)
    pmf[0] = np.exp(-mu)
    for i in range(1, k + 1):
        pmf[i] = pmf[i - 1] * mu / i
    # trim where the remaining tail is already below the target
    sfx = np.cumsum(pmf[::-1])[::-1]
    keep = np.nonzero(sfx >= tail)[0]
    end = keep[-1] + 1 if keep.size else 1
    return pmf[:end]


def _poisson_diff_pmfs(schedule: RateSchedule) -> np.ndarray:
    """Like _chain_diff_pmfs but with Poisson-summarised remaining goals."""
    mu_h = np.concatenate([np.cumsum(schedule.home[::-1])[::-1], [0.0]])
    mu_a = np.concatenate([np.cumsum(schedule.away[::-1])[::-1], [0.0]])
    T = np.zeros((MINUTES + 1, DIFF_WIDTH))
    for t in range(MINUTES + 1):
        ph = _poisson_pmf_vector(float(mu_h[t]))
        pa = _poisson_pmf_vector(float(mu_a[t]))
        conv = np.convolve(ph, pa[::-1])  # diff = i - j, lowest entry -(len(pa)-1)
        idx = np.arange(conv.size) - (len(pa) - 1) + DIFF_OFFSET
        np.add.at(T[t], np.clip(idx, 0, DIFF_WIDTH - 1), conv)  # fold far tails in
    return T


class BeliefTable:
    """Outcome probabilities indexed by (minute, current goal difference).

    triples[t, d + DIFF_OFFSET] = (p_home, p_draw, p_away) given the match
    stands at difference d after minute t, under a fixed remaining schedule.
    """

    def __init__(self, diff_pmfs: np.ndarray):
        # P(final diff > d) needs suffix sums of the remaining-change pmf
        # at -d; build all three surfaces by reversing cumulative sums.
        pmf_rev = diff_pmfs[:, ::-1]
        sfx = np.cumsum(diff_pmfs[:, ::-1], axis=1)[:, ::-1]
        home = np.concatenate([sfx[:, 1:], np.zeros((MINUTES + 1, 1))], axis=1)[:, ::-1]
        pre = np.concatenate([np.zeros((MINUTES + 1, 1)), np.cumsum(diff_pmfs, axis=1)], axis=1)
        away = pre[:, :DIFF_WIDTH][:, ::-1]
        self.triples = np.stack([home, pmf_rev, away], axis=-1)
        self.triples.flags.writeable = False

    @classmethod
    def from_schedule(cls, schedule: RateSchedule, method: str = "exact") -> "BeliefTable":
        if method == "exact":
            return cls(_chain_diff_pmfs(schedule))
        if method == "poisson":
            return cls(_poisson_diff_pmfs(schedule))
        raise ValueError(f"unknown method {method!r}")

    def triple(self, minute: int, diff: int) -> np.ndarray:
        return self.triples[minute, diff + DIFF_OFFSET]

    def lookup(self, minutes: np.ndarray, diffs: np.ndarray) -> np.ndarray:
        """Vectorised triple lookup; broadcasts minutes against diffs."""
        return self.triples[minutes, diffs + DIFF_OFFSET]


def outcome_probs(
    state: MatchState, schedule: RateSchedule, method: str = "exact"
) -> ProbTriple:
    """Win/draw/win probabilities given the state and remaining schedule.

    The schedule should reflect what is known at state.minute; pass the
    output of build_schedule with the events observed so far.
    """
    table = BeliefTable.from_schedule(schedule, method)
    h, d, a = table.triple(state.minute, state.diff)
    return ProbTriple(float(h), float(d), float(a))


def _regime_segments(timeline: MatchTimeline):
    """Split state minutes 0..90 by red-card knowledge.

    Yields (start_minute, end_minute, reds_home, reds_away): beliefs at
    state minutes in [start, end] use multipliers for the cards seen so
    far and assume no further cards.
    """
    cards = [e for e in timeline.events if e.kind is EventKind.RED_CARD]
    boundaries = sorted({e.minute for e in cards})
    starts = [0] + boundaries
    rh = ra = 0
    segments = []
    for i, start in enumerate(starts):
        rh += sum(1 for e in cards if e.minute == start and e.team is Team.HOME)
        ra += sum(1 for e in cards if e.minute == start and e.team is Team.AWAY)
        end = starts[i + 1] - 1 if i + 1 < len(starts) else MINUTES
        segments.append((start, end, rh, ra))
    return segments


def _regime_schedule(
    rates: ScoringRates, weights: MinuteWeights, reds_home: int, reds_away: int
) -> RateSchedule:
    """Counterfactual whole-match schedule under fixed card counts."""
    mult_h = RED_CARD_OWN_FACTOR**reds_home * RED_CARD_OPP_FACTOR**reds_away
    mult_a = RED_CARD_OWN_FACTOR**reds_away * RED_CARD_OPP_FACTOR**reds_home
    scaled = ScoringRates(rates.lambda_home * mult_h, rates.lambda_away * mult_a)
    return build_schedule(scaled, weights)


@dataclass(frozen=True)
class PathBundle:
    """Everything the excitement metrics need for one match.

    path:       (91, 3) belief after each minute, row 0 pre-match.
    scoring:    (90, 2) P(home/away scores in minute i+1), cards applied.
    cond_home:  (90, 3) belief at minute i+1 if the home side scored in it.
    cond_away:  (90, 3) same for an away goal.
    """

    path: np.ndarray
    scoring: np.ndarray
    cond_home: np.ndarray
    cond_away: np.ndarray


def path_bundle(
    timeline: MatchTimeline,
    rates: ScoringRates,
    weights: MinuteWeights,
    method: str = "exact",
) -> PathBundle:
    """Belief path plus one-goal-ahead triples, minute by minute.

    Beliefs at minute t use the red cards seen by t and assume none
    follow; the realised scoring schedule applies cards as they happen.
    """
    realized = build_schedule(rates, timeline=timeline, weights=weights)
    scoring = np.stack([realized.home, realized.away], axis=1)

    diffs = np.empty(MINUTES + 1, dtype=np.int64)
    for t in range(MINUTES + 1):
        diffs[t] = replay_state(timeline, t).diff

    path = np.empty((MINUTES + 1, 3))
    cond_home = np.empty((MINUTES, 3))
    cond_away = np.empty((MINUTES, 3))
    for start, end, rh, ra in _regime_segments(timeline):
        table = BeliefTable.from_schedule(_regime_schedule(rates, weights, rh, ra), method)
        ts = np.arange(start, end + 1)
        path[ts] = table.lookup(ts, diffs[ts])
        hyp = ts[ts < MINUTES]  # anticipation of minute t+1, formed at t
        cond_home[hyp] = table.lookup(hyp + 1, diffs[hyp] + 1)
        cond_away[hyp] = table.lookup(hyp + 1, diffs[hyp] - 1)
    return PathBundle(path, scoring, cond_home, cond_away)


def prob_path(
    timeline: MatchTimeline,
    rates: ScoringRates,
    weights: MinuteWeights,
    method: str = "exact",
) -> np.ndarray:
    """(91, 3) outcome-probability path over the match."""
    return path_bundle(timeline, rates, weights, method).path
