"""Monte Carlo engine: simulated matches and rollout-estimated beliefs.

Simulation draws one Bernoulli per side per minute from the schedule.
Belief estimation replays the observed match up to a minute and rolls
the remainder forward; all 91 minute-estimates of one match share a
common panel of uniforms, so consecutive estimates are tightly coupled
and the estimated path moves smoothly (the noise largely cancels in
minute-over-minute differences).

Streams are Philox generators derived via core.RngSeedPolicy; results
are bit-identical for a given (global_seed, stream path) regardless of
scheduling or thread count.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    MINUTES,
    EventKind,
    MatchEvent,
    MatchState,
    MatchTimeline,
    MinuteWeights,
    ProbTriple,
    RngSeedPolicy,
    ScoringRates,
    Team,
    replay_state,
)
from .engine import RateSchedule, build_schedule, _regime_schedule, _regime_segments


@dataclass(frozen=True)
class McConfig:
    """Replication count and stream policy for rollout estimates.

    chunk is the fixed replication block size; it is part of the
    determinism contract (results depend on it only through float
    summation order, which stays fixed for a given value).
    """

    replications: int = 100_000
    seed_policy: RngSeedPolicy = field(default_factory=RngSeedPolicy)
    chunk: int = 16_384

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if self.chunk < 1:
            raise ValueError("chunk must be >= 1")


def simulate_match(
    rates: ScoringRates, weights: MinuteWeights, stream: np.random.Generator
) -> MatchTimeline:
    """Draw one match (goals only) from the per-minute Bernoulli model.

    Consumes a single (90, 2) uniform block: column 0 is the home side.
    """
    schedule = build_schedule(rates, weights)
    u = stream.random((MINUTES, 2))
    events = [
        MatchEvent(int(m) + 1, Team.HOME, EventKind.GOAL)
        for m in np.nonzero(u[:, 0] < schedule.home)[0]
    ]
    events += [
        MatchEvent(int(m) + 1, Team.AWAY, EventKind.GOAL)
        for m in np.nonzero(u[:, 1] < schedule.away)[0]
    ]
    return MatchTimeline(tuple(events))


def mc_outcome_probs(
    state: MatchState,
    schedule: RateSchedule,
    config: McConfig,
    stream: np.random.Generator | None = None,
) -> ProbTriple:
    """Estimate outcome probabilities by rolling out the remaining minutes.

    The rollout starts from the state's score and uses the schedule as
    given (build it with the red cards in force at the state's minute).
    """
    rng = stream if stream is not None else config.seed_policy.stream()
    rem_h = schedule.home[state.minute :]
    rem_a = schedule.away[state.minute :]
    d0 = state.diff
    counts = np.zeros(3, dtype=np.int64)
    done = 0
    while done < config.replications:
        c = min(config.chunk, config.replications - done)
        u = rng.random((c, rem_h.size, 2))
        change = (u[:, :, 0] < rem_h).sum(axis=1) - (u[:, :, 1] < rem_a).sum(axis=1)
        final = d0 + change
        counts[0] += int((final > 0).sum())
        counts[1] += int((final == 0).sum())
        counts[2] += int((final < 0).sum())
        done += c
    p = counts / config.replications
    return ProbTriple(float(p[0]), float(p[1]), float(p[2]))


def mc_prob_path(
    timeline: MatchTimeline,
    rates: ScoringRates,
    weights: MinuteWeights,
    config: McConfig,
    stream: np.random.Generator | None = None,
) -> np.ndarray:
    """(91, 3) belief path estimated by conditional rollouts.

    Minute t's estimate conditions on the observed score and the red
    cards seen by t (no lookahead). Row 90 is the realised outcome.
    """
    rng = stream if stream is not None else config.seed_policy.stream()
    segments = _regime_segments(timeline)
    schedules = [
        _regime_schedule(rates, weights, rh, ra) for (_, _, rh, ra) in segments
    ]
    diffs = np.array([replay_state(timeline, t).diff for t in range(MINUTES + 1)])

    counts = np.zeros((MINUTES + 1, 3), dtype=np.int64)
    done = 0
    while done < config.replications:
        c = min(config.chunk, config.replications - done)
        u = rng.random((c, MINUTES, 2))
        for (start, end, _, _), sched in zip(segments, schedules):
            step = (u[:, :, 0] < sched.home).astype(np.int16)
            step -= u[:, :, 1] < sched.away
            sfx = np.zeros((c, MINUTES + 1), dtype=np.int16)
            sfx[:, :MINUTES] = np.cumsum(step[:, ::-1], axis=1)[:, ::-1]
            for t in range(start, end + 1):
                final = diffs[t] + sfx[:, t]
                counts[t, 0] += int((final > 0).sum())
                counts[t, 1] += int((final == 0).sum())
                counts[t, 2] += int((final < 0).sum())
        done += c
    return counts / config.replications
