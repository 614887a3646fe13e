"""Command-line pipeline over the library.

Every command is a thin orchestration of library calls; anything the CLI
produces can be reproduced by those calls directly. All output files
start with a provenance comment (version, seed, and the flags used,
minus --threads, which never affects results). Exit codes: 0 success,
1 runtime failure, 2 usage error.

Input paths that do not exist as given are retried relative to the
MATCHPULSE_DATA environment variable, if set.
"""

from __future__ import annotations

import argparse
import os
import shlex
import sys
import warnings
from dataclasses import asdict

import numpy as np
import pandas as pd

from . import __version__
from .analysis import MatchRecord, TrendModelSpec, trend_ols, trend_table
from .benchmark import GridSpec, benchmark_range, simulate_grid, simulate_pair, surface_export
from .calibration import calibrate_record
from .core import MinuteWeights, RngSeedPolicy, english_league_weights, uniform_weights
from .dataio import (
    SchemaError,
    estimate_weights,
    join_odds,
    load_excitement,
    load_matches,
    load_odds,
    load_weights,
    persist_excitement,
    weights_from_timelines,
    write_weights,
)
from .excitement import excitement
from .montecarlo import McConfig


class UsageError(Exception):
    """Bad flags or unusable input files; mapped to exit code 2."""


def _resolve(path: str | None) -> str | None:
    """Fall back to $MATCHPULSE_DATA for relative inputs that don't exist."""
    if path and not os.path.exists(path):
        base = os.environ.get("MATCHPULSE_DATA")
        if base and not os.path.isabs(path):
            candidate = os.path.join(base, path)
            if os.path.exists(candidate):
                return candidate
    return path


def _require_file(path: str | None, what: str) -> str:
    if not path:
        raise UsageError(f"missing required {what} file")
    resolved = _resolve(path)
    if not os.path.exists(resolved):
        raise UsageError(f"{what} file not found: {path}")
    return resolved


def _provenance(argv: list[str], seed: int | None) -> str:
    """Provenance line for output headers; strips --threads (result-neutral)."""
    shown: list[str] = []
    skip = False
    for a in argv:
        if skip:
            skip = False
            continue
        if a == "--threads":
            skip = True
            continue
        if a.startswith("--threads="):
            continue
        shown.append(a)
    seed_part = f" | seed={seed}" if seed is not None else ""
    return f"matchpulse {__version__}{seed_part} | matchpulse {shlex.join(shown)}"


def _write_frame(path: str, frame: pd.DataFrame, provenance: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# {provenance}\n")
        frame.to_csv(fh, index=False, lineterminator="\n")


def _weights_by_league(args, items) -> dict[str, MinuteWeights]:
    """League → weights: from --weights when given, else estimated.

    Estimation falls back to uniform for a league with no goals rather
    than failing the whole run.
    """
    if args.weights:
        return load_weights(_require_file(args.weights, "weights"))
    by_league: dict[str, list] = {}
    for meta, tl in items:
        by_league.setdefault(meta.league, []).append(tl)
    out = {}
    for league, tls in sorted(by_league.items()):
        try:
            out[league] = weights_from_timelines(tls)
        except ValueError:
            warnings.warn(f"league {league!r} has no goals; using uniform weights")
            out[league] = uniform_weights()
    return out


def _single_weights(args) -> MinuteWeights:
    """One weight vector for rate-grid commands.

    --weights files may carry several leagues; --league picks one. With
    no file, the built-in stylised top-flight distribution is used.
    """
    if not args.weights:
        return english_league_weights()
    table = load_weights(_require_file(args.weights, "weights"))
    if args.league:
        if args.league not in table:
            raise UsageError(f"league {args.league!r} not in weights file")
        return table[args.league]
    if len(table) != 1:
        raise UsageError(
            f"weights file has {len(table)} leagues; pick one with --league"
        )
    return next(iter(table.values()))


def cmd_benchmark(args, argv: list[str]) -> None:
    prov = _provenance(argv, args.seed)
    policy = RngSeedPolicy(args.seed)
    weights = _single_weights(args)
    os.makedirs(args.out, exist_ok=True)

    band = benchmark_range(
        weights, args.lambda_low, args.lambda_high, args.matches, policy
    )
    _write_frame(
        os.path.join(args.out, "benchmark_range.csv"),
        pd.DataFrame([asdict(band)]),
        prov,
    )

    spec = GridSpec(step=args.step, matches=args.matches)
    grid = simulate_grid(spec, weights, policy, threads=args.threads)
    _write_frame(os.path.join(args.out, "benchmark_grid.csv"), grid, prov)
    _write_frame(
        os.path.join(args.out, "benchmark_surface.csv"), surface_export(grid), prov
    )


def cmd_simulate(args, argv: list[str]) -> None:
    prov = _provenance(argv, args.seed)
    policy = RngSeedPolicy(args.seed)
    weights = _single_weights(args)
    sus, sur = simulate_pair(
        args.lambda_home, args.lambda_away, weights, args.matches, policy, 0
    )
    frame = pd.DataFrame(
        {"match_index": np.arange(args.matches), "suspense": sus, "surprise": sur}
    )
    _write_frame(args.out, frame, prov)


def cmd_score(args, argv: list[str]) -> None:
    prov = _provenance(argv, args.seed)
    policy = RngSeedPolicy(args.seed)
    items = load_matches(_require_file(args.matches, "matches"))
    odds = load_odds(_require_file(args.odds, "odds"))
    joined, no_odds, _ = join_odds(items, odds)
    weights_map = _weights_by_league(args, items)

    records: list[MatchRecord] = []
    diagnostics: list[dict] = [
        {"match_id": mid, "reason": "no_odds", "objective": "", "iterations": ""}
        for mid in no_odds
    ]
    for index, (meta, timeline, odds_rec) in enumerate(joined):
        cal = calibrate_record(odds_rec)
        if not cal.converged:
            diagnostics.append(
                {
                    "match_id": meta.match_id,
                    "reason": "no_convergence",
                    "objective": f"{cal.objective:.6g}",
                    "iterations": cal.iterations,
                }
            )
            continue
        if meta.league not in weights_map:
            raise UsageError(f"league {meta.league!r} not in weights file")
        exc = excitement(
            timeline,
            cal.rates,
            weights_map[meta.league],
            engine=args.engine,
            config=McConfig(replications=args.reps, seed_policy=policy),
            stream=policy.stream(index) if args.engine == "mc" else None,
        )
        records.append(
            MatchRecord(
                match_id=meta.match_id,
                league=meta.league,
                season=meta.season,
                date=meta.date,
                home_team=meta.home_team,
                away_team=meta.away_team,
                suspense=exc.suspense,
                surprise=exc.surprise,
                pre_match=exc.pre_match,
            )
        )
    persist_excitement(records, args.out, provenance=prov)
    diag_frame = pd.DataFrame(
        diagnostics, columns=["match_id", "reason", "objective", "iterations"]
    )
    _write_frame(args.out + ".diagnostics.csv", diag_frame, prov)


def cmd_calibrate(args, argv: list[str]) -> None:
    prov = _provenance(argv, None)
    odds = load_odds(_require_file(args.odds, "odds"))
    rows = []
    for rec in odds:
        cal = calibrate_record(rec)
        rows.append(
            {
                "match_id": rec.match_id,
                "lambda_home": cal.rates.lambda_home,
                "lambda_away": cal.rates.lambda_away,
                "objective": cal.objective,
                "iterations": cal.iterations,
                "converged": cal.converged,
            }
        )
    _write_frame(args.out, pd.DataFrame(rows), prov)


def cmd_trends(args, argv: list[str]) -> None:
    prov = _provenance(argv, None)
    records = load_excitement(_require_file(args.excitement, "excitement"))
    if args.league:
        records = [r for r in records if r.league in args.league]
        if not records:
            raise UsageError(f"no records for league(s) {', '.join(args.league)}")
    base = args.base_season if args.base_season is not None else min(
        r.season for r in records
    )
    teams = tuple(t for t in (args.top_teams or "").split(",") if t)

    fits = {}
    for label, outcome, with_teams in (
        ("(1)", "ln_suspense", False),
        ("(2)", "ln_suspense", True),
        ("(3)", "ln_surprise", False),
        ("(4)", "ln_surprise", True),
    ):
        if with_teams and not teams:
            continue
        spec = TrendModelSpec(outcome, base, teams if with_teams else ())
        fits[label] = trend_ols(records, spec)
    _write_frame(args.out, trend_table(fits), prov)


def cmd_weights(args, argv: list[str]) -> None:
    prov = _provenance(argv, None)
    items = load_matches(_require_file(args.matches, "matches"))
    write_weights(args.out, estimate_weights(items), provenance=prov)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matchpulse",
        description="Suspense and surprise analytics for football matches.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("benchmark", help="simulate reference bands and rate grid")
    p.add_argument("--lambda-low", type=float, default=0.5)
    p.add_argument("--lambda-high", type=float, default=2.5)
    p.add_argument("--step", type=float, default=0.1, help="grid step over [0, 5]")
    p.add_argument("--matches", type=int, default=10_000)
    p.add_argument("--weights", help="weights CSV (default: built-in distribution)")
    p.add_argument("--league", help="league to pick from the weights CSV")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("simulate", help="per-match totals at one rate pair")
    p.add_argument("--lambda-home", type=float, required=True)
    p.add_argument("--lambda-away", type=float, required=True)
    p.add_argument("--matches", type=int, default=1000)
    p.add_argument("--weights")
    p.add_argument("--league")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("score", help="calibrate odds and score matches")
    p.add_argument("--matches", required=True, help="matches CSV")
    p.add_argument("--odds", required=True, help="odds CSV")
    p.add_argument("--weights", help="weights CSV (default: estimated per league)")
    p.add_argument("--engine", choices=("analytic", "mc"), default="analytic")
    p.add_argument("--reps", type=int, default=100_000, help="mc engine rollouts")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="excitement CSV")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("calibrate", help="recover scoring rates from odds")
    p.add_argument("--odds", required=True, help="odds CSV")
    p.add_argument("--out", required=True, help="rates CSV")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("trends", help="season-trend regressions")
    p.add_argument("--excitement", required=True, help="scored-matches CSV")
    p.add_argument("--league", action="append", help="filter; repeatable")
    p.add_argument("--top-teams", help="comma-separated interaction teams")
    p.add_argument("--base-season", type=int, help="season coded as 0")
    p.add_argument("--out", required=True, help="coefficient CSV")
    p.set_defaults(func=cmd_trends)

    p = sub.add_parser("weights", help="estimate per-league minute weights")
    p.add_argument("--matches", required=True, help="matches CSV")
    p.add_argument("--out", required=True, help="weights CSV")
    p.set_defaults(func=cmd_weights)

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        args.func(args, argv)
        return 0
    except (UsageError, SchemaError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure, not a flag problem
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
