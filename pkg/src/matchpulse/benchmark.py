"""Simulated benchmarks over a grid of scoring-rate pairs.

Balanced low- and high-rate simulations pin down the reference range
used to judge real matches: a slow match is the ceiling for suspense,
a fast one the ceiling for surprise. The full grid yields the response
surface of both metrics in (lambda_home, lambda_away).

No red cards are simulated here; matches differ only through goals.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
import pandas as pd

from .core import MINUTES, MinuteWeights, RngSeedPolicy, ScoringRates
from .engine import DIFF_OFFSET, BeliefTable, RateSchedule, build_schedule

_BATCH = 2048  # matches scored per block; bounds memory, not results


@dataclass(frozen=True)
class GridSpec:
    """Rate grid: all unordered pairs from lambda_min..lambda_max by step.

    path_replications=None scores matches on exact beliefs. An integer R
    scores them on beliefs estimated as R-replication rollout frequencies
    (reproduced distributionally via multinomial resampling); use this to
    compare against benchmarks that were themselves measured by rollout.
    """

    lambda_min: float = 0.0
    lambda_max: float = 5.0
    step: float = 0.1
    matches: int = 10_000
    path_replications: int | None = None

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.lambda_max < self.lambda_min:
            raise ValueError("lambda_max below lambda_min")
        if self.matches < 1:
            raise ValueError("matches must be >= 1")
        if self.path_replications is not None and self.path_replications < 1:
            raise ValueError("path_replications must be >= 1 or None")

    def values(self) -> np.ndarray:
        n = int(round((self.lambda_max - self.lambda_min) / self.step)) + 1
        return np.round(self.lambda_min + self.step * np.arange(n), 10)

    def pairs(self) -> list[tuple[float, float]]:
        """Unordered pairs, reported as (lambda_home, lambda_away), home >= away."""
        vals = self.values()
        return [
            (float(vals[j]), float(vals[i]))
            for j in range(len(vals))
            for i in range(j + 1)
        ]


@dataclass(frozen=True)
class BenchmarkRange:
    """Reference bands from balanced matches at a low and a high rate.

    Suspense falls as rates rise, so its band runs from the high-rate
    mean up to the low-rate mean; surprise rises with rates, so its band
    runs the other way around.
    """

    lambda_low: float
    lambda_high: float
    matches: int
    suspense_low: float
    suspense_high: float
    surprise_low: float
    surprise_high: float
    degenerate: bool = False


def _score_batch(
    diffs: np.ndarray, table: BeliefTable, schedule: RateSchedule
) -> tuple[np.ndarray, np.ndarray]:
    """Suspense and surprise totals for a block of simulated matches.

    diffs is (n, 91): goal difference after each minute, column 0 zero.
    Same quantities as excitement.suspense/surprise, vectorised through
    the belief table.
    """
    rows = np.arange(MINUTES + 1)
    P = table.triples[rows[None, :], diffs + DIFF_OFFSET]  # (n, 91, 3)

    steps = P[:, 1:MINUTES] - P[:, : MINUTES - 1]
    sur = np.sqrt((steps**2).sum(axis=2)).sum(axis=1)

    cur = P[:, 1:MINUTES]  # beliefs after minutes 1..89
    idx = diffs[:, 1:MINUTES] + DIFF_OFFSET
    hyp_rows = np.arange(2, MINUTES + 1)  # one-goal-ahead triples at minutes 2..90
    ch = table.triples[hyp_rows[None, :], idx + 1]
    ca = table.triples[hyp_rows[None, :], idx - 1]
    dev_h = ((ch - cur) ** 2).sum(axis=2)
    dev_a = ((ca - cur) ** 2).sum(axis=2)
    w_h = schedule.home[1:MINUTES][None, :]
    w_a = schedule.away[1:MINUTES][None, :]
    sus = np.sqrt(w_h * dev_h + w_a * dev_a).sum(axis=1)
    return sus, sur


def _resample(
    gen: np.random.Generator, replications: int, p: np.ndarray
) -> np.ndarray:
    # rows sum to 1 only up to fp drift; renormalise before sampling
    q = p / p.sum(axis=-1, keepdims=True)
    return gen.multinomial(replications, q) / float(replications)


def _estimated_score_one(
    diff_row: np.ndarray,
    table: BeliefTable,
    schedule: RateSchedule,
    replications: int,
    gen: np.random.Generator,
) -> tuple[float, float]:
    """Score one match on beliefs re-estimated from finite rollouts.

    Every belief triple consulted is replaced by the outcome frequencies
    of `replications` independent rollouts. Rollouts are iid given the
    match state, so the estimate is distributed multinomial(R, p)/R,
    independently per consulted triple; sampling that directly gives the
    same law as running the rollouts, at none of the cost. Estimation
    noise inflates every Euclidean step on average, so totals sit above
    their exact-belief counterparts; use this mode to compare against
    reference values that were themselves measured by rollout.
    """
    rows = np.arange(MINUTES + 1)
    p = table.triples[rows, diff_row + DIFF_OFFSET]
    idx = diff_row[1:MINUTES] + DIFF_OFFSET
    hyp = np.arange(2, MINUTES + 1)
    ch = table.triples[hyp, idx + 1]
    ca = table.triples[hyp, idx - 1]
    p = _resample(gen, replications, p)
    ch = _resample(gen, replications, ch)
    ca = _resample(gen, replications, ca)

    steps = p[1:MINUTES] - p[: MINUTES - 1]
    sur = float(np.sqrt((steps**2).sum(axis=1)).sum())

    cur = p[1:MINUTES]
    dev_h = ((ch - cur) ** 2).sum(axis=1)
    dev_a = ((ca - cur) ** 2).sum(axis=1)
    w_h = schedule.home[1:MINUTES]
    w_a = schedule.away[1:MINUTES]
    sus = float(np.sqrt(w_h * dev_h + w_a * dev_a).sum())
    return sus, sur


def simulate_pair(
    lambda_home: float,
    lambda_away: float,
    weights: MinuteWeights,
    matches: int,
    seed_policy: RngSeedPolicy,
    pair_index: int = 0,
    path_replications: int | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-match suspense and surprise totals for one rate pair.

    Match i draws its (90, 2) uniform block from stream(pair_index, i),
    identically to montecarlo.simulate_match on the same stream. With
    path_replications=R, match i is scored on rollout-estimated beliefs
    instead of exact ones, mixing its estimation noise from
    stream(pair_index, i, 1); see _estimated_score_one.
    """
    schedule = build_schedule(ScoringRates(lambda_home, lambda_away), weights)
    table = BeliefTable.from_schedule(schedule, "exact")
    sus = np.empty(matches)
    sur = np.empty(matches)
    for lo in range(0, matches, _BATCH):
        c = min(_BATCH, matches - lo)
        goals = np.empty((c, MINUTES), dtype=np.int16)
        for i in range(c):
            u = seed_policy.stream(pair_index, lo + i).random((MINUTES, 2))
            goals[i] = (u[:, 0] < schedule.home).astype(np.int16) - (
                u[:, 1] < schedule.away
            )
        diffs = np.zeros((c, MINUTES + 1), dtype=np.int16)
        diffs[:, 1:] = np.cumsum(goals, axis=1)
        if path_replications is None:
            sus[lo : lo + c], sur[lo : lo + c] = _score_batch(diffs, table, schedule)
        else:
            for i in range(c):
                gen = seed_policy.stream(pair_index, lo + i, 1)
                sus[lo + i], sur[lo + i] = _estimated_score_one(
                    diffs[i], table, schedule, path_replications, gen
                )
    return sus, sur


def _summary(values: np.ndarray) -> dict:
    return {
        "mean": float(values.mean()),
        "median": float(np.median(values)),
        "sd": float(values.std(ddof=1)) if values.size > 1 else 0.0,
        "min": float(values.min()),
        "max": float(values.max()),
    }


def _pair_task(args) -> dict:
    lh, la, weight_values, matches, seed, pair_index, path_replications = args
    weights = MinuteWeights(np.asarray(weight_values))
    sus, sur = simulate_pair(
        lh, la, weights, matches, RngSeedPolicy(seed), pair_index, path_replications
    )
    row = {"lambda_home": lh, "lambda_away": la, "matches": matches}
    row.update({f"suspense_{k}": v for k, v in _summary(sus).items()})
    row.update({f"surprise_{k}": v for k, v in _summary(sur).items()})
    return row


def simulate_grid(
    spec: GridSpec,
    weights: MinuteWeights,
    seed_policy: RngSeedPolicy,
    threads: int = 1,
) -> pd.DataFrame:
    """Summary statistics of both metrics for every grid pair.

    Pair p uses streams (p, 0..matches-1); results do not depend on
    threads. One row per unordered pair, home rate >= away rate.
    """
    tasks = [
        (
            lh,
            la,
            weights.values,
            spec.matches,
            seed_policy.global_seed,
            p,
            spec.path_replications,
        )
        for p, (lh, la) in enumerate(spec.pairs())
    ]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_pair_task, tasks, chunksize=8))
    else:
        rows = [_pair_task(t) for t in tasks]
    return pd.DataFrame(rows)


def benchmark_range(
    weights: MinuteWeights,
    lambda_low: float = 0.5,
    lambda_high: float = 2.5,
    matches: int = 10_000,
    seed_policy: RngSeedPolicy | None = None,
    path_replications: int | None = None,
) -> BenchmarkRange:
    """Reference band from balanced matches at the two anchor rates.

    Uses stream paths (0, i) for the low pair and (1, i) for the high.
    """
    if lambda_high < lambda_low:
        raise ValueError("lambda_high below lambda_low")
    policy = seed_policy if seed_policy is not None else RngSeedPolicy()
    sus_lo, sur_lo = simulate_pair(
        lambda_low, lambda_low, weights, matches, policy, 0, path_replications
    )
    if lambda_high == lambda_low:
        sus_hi, sur_hi = sus_lo, sur_lo
    else:
        sus_hi, sur_hi = simulate_pair(
            lambda_high, lambda_high, weights, matches, policy, 1, path_replications
        )
    return BenchmarkRange(
        lambda_low=lambda_low,
        lambda_high=lambda_high,
        matches=matches,
        suspense_low=float(sus_hi.mean()),
        suspense_high=float(sus_lo.mean()),
        surprise_low=float(sur_lo.mean()),
        surprise_high=float(sur_hi.mean()),
        degenerate=lambda_high == lambda_low,
    )


def surface_export(grid: pd.DataFrame, mirror: bool = True) -> pd.DataFrame:
    """Tidy (lambda_home, lambda_away, means) surface for plotting.

    With mirror=True the unordered grid is reflected across the diagonal
    so the surface covers both orderings.
    """
    cols = ["lambda_home", "lambda_away", "suspense_mean", "surprise_mean"]
    out = grid[cols].copy()
    if mirror:
        off = grid[grid.lambda_home != grid.lambda_away]
        flipped = off[cols].rename(
            columns={"lambda_home": "lambda_away", "lambda_away": "lambda_home"}
        )
        out = pd.concat([out, flipped[cols]], ignore_index=True)
    return out.sort_values(["lambda_home", "lambda_away"], ignore_index=True)
