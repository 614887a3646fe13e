"""Suspense and surprise of a match, from its belief path.

Surprise is backward-looking: the distance the outcome beliefs actually
travelled, summed minute by minute. The settling of the final result
itself (minute-89 belief to the realised outcome) is not scored; only
in-play movement counts, which is what keeps a goalless match's surprise
at the drift of its belief path.

Suspense is forward-looking: how far beliefs could move in the next
minute, weighting the one-goal-ahead belief shifts by the probability
that either side scores. The anticipation term for the minute after the
match (index 90) is zero by definition.
"""

from __future__ import annotations

import numpy as np

from .core import (
    MINUTES,
    MatchExcitement,
    MatchTimeline,
    MinuteWeights,
    ScoringRates,
)
from . import engine as _engine


def surprise(path: np.ndarray) -> tuple[float, np.ndarray]:
    """Total and per-minute surprise of a (91, 3) belief path.

    per_minute[i] is the belief shift over minute i+1; the final entry
    (the jump onto the realised-outcome vertex) is zero by convention.
    """
    path = np.asarray(path, dtype=float)
    if path.shape != (MINUTES + 1, 3):
        raise ValueError(f"path shape {path.shape}, expected ({MINUTES + 1}, 3)")
    per_minute = np.zeros(MINUTES)
    steps = path[1:MINUTES] - path[: MINUTES - 1]
    per_minute[: MINUTES - 1] = np.sqrt((steps**2).sum(axis=1))
    return float(per_minute.sum()), per_minute


def suspense(
    path: np.ndarray,
    scoring: np.ndarray,
    cond_home: np.ndarray,
    cond_away: np.ndarray,
) -> tuple[float, np.ndarray]:
    """Total and per-minute suspense.

    Arguments follow engine.PathBundle: scoring[i] holds the goal
    probabilities for minute i+1, cond_home[i]/cond_away[i] the belief
    at minute i+1 were that side to score in it. per_minute[i] is the
    anticipation held after minute i+1 about minute i+2; the last entry
    is zero (there is no minute 91).
    """
    path = np.asarray(path, dtype=float)
    scoring = np.asarray(scoring, dtype=float)
    if path.shape != (MINUTES + 1, 3):
        raise ValueError(f"path shape {path.shape}")
    if scoring.shape != (MINUTES, 2):
        raise ValueError(f"scoring shape {scoring.shape}")
    if cond_home.shape != (MINUTES, 3) or cond_away.shape != (MINUTES, 3):
        raise ValueError("conditional paths must have shape (90, 3)")
    per_minute = np.zeros(MINUTES)
    cur = path[1:MINUTES]  # belief after minute t, t = 1..89
    dev_h = ((cond_home[1:] - cur) ** 2).sum(axis=1)
    dev_a = ((cond_away[1:] - cur) ** 2).sum(axis=1)
    per_minute[: MINUTES - 1] = np.sqrt(
        scoring[1:, 0] * dev_h + scoring[1:, 1] * dev_a
    )
    return float(per_minute.sum()), per_minute


def excitement(
    timeline: MatchTimeline,
    rates: ScoringRates,
    weights: MinuteWeights,
    engine: str = "analytic",
    config=None,
    method: str = "exact",
    stream=None,
) -> MatchExcitement:
    """Score one match: belief path plus both metrics.

    engine="analytic" evaluates the path exactly; engine="mc" estimates
    it by conditional rollouts (config: montecarlo.McConfig, drawing from
    `stream` when given) while the one-goal-ahead triples stay analytic.
    """
    bundle = _engine.path_bundle(timeline, rates, weights, method)
    if engine == "analytic":
        path = bundle.path
    elif engine == "mc":
        from . import montecarlo

        cfg = config if config is not None else montecarlo.McConfig()
        path = montecarlo.mc_prob_path(timeline, rates, weights, cfg, stream)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    total_sur, per_sur = surprise(path)
    total_sus, per_sus = suspense(path, bundle.scoring, bundle.cond_home, bundle.cond_away)
    return MatchExcitement(
        prob_path=path,
        per_minute_suspense=per_sus,
        per_minute_surprise=per_sur,
        suspense=total_sus,
        surprise=total_sur,
    )
