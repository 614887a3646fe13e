"""CSV ingestion and persistence for matches, odds, weights, and results.

Three input schemas, all UTF-8 with a header row and `.` decimals:

  matches:  match_id,league,season,date,home,away,events
            events = semicolon-joined `minute[+added]:team:kind` tokens,
            team H|A, kind goal|red, e.g. `45+2:H:goal;63:A:red`
  odds:     match_id,odds_h,odds_d,odds_a,threshold,over,under
            one row per over/under line, 1X2 columns repeated; empty
            threshold columns for a 1X2-only quote
  weights:  league,minute,weight

Computed excitement persists to a CSV headed by a version tag so stale
files are never silently reinterpreted.
"""

from __future__ import annotations

import csv
import os
import warnings
from dataclasses import dataclass

import numpy as np

from .analysis import MatchRecord
from .calibration import OddsRecord
from .core import (
    MINUTES,
    EventKind,
    MatchEvent,
    MatchTimeline,
    MinuteWeights,
    ProbTriple,
    Team,
    fold_injury_time,
)

EXCITEMENT_TAG = "# matchpulse excitement v1"

_MATCH_COLUMNS = ["match_id", "league", "season", "date", "home", "away", "events"]
_ODDS_COLUMNS = ["match_id", "odds_h", "odds_d", "odds_a", "threshold", "over", "under"]
_WEIGHT_COLUMNS = ["league", "minute", "weight"]


class SchemaError(ValueError):
    """Malformed input file; message carries path and 1-based line number."""

    def __init__(self, path: str, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


@dataclass(frozen=True)
class MatchMeta:
    """Identity columns of one match; pairs with a MatchTimeline."""

    match_id: str
    league: str
    season: int
    date: str
    home_team: str
    away_team: str


@dataclass(frozen=True)
class DatasetManifest:
    """File layout of one dataset run."""

    matches_path: str
    odds_path: str | None = None
    weights_path: str | None = None
    leagues: tuple[str, ...] = ()
    seasons: tuple[int, ...] = ()
    out_dir: str = "."

    def validate(self) -> None:
        for p in (self.matches_path, self.odds_path, self.weights_path):
            if p is not None and not os.path.exists(p):
                raise FileNotFoundError(p)


def _parse_event(token: str) -> MatchEvent:
    parts = token.split(":")
    if len(parts) != 3:
        raise ValueError(f"event token {token!r} is not minute:team:kind")
    raw_minute, raw_team, raw_kind = parts
    if "+" in raw_minute:
        base, _, added = raw_minute.partition("+")
        minute = fold_injury_time(int(base), int(added))
    else:
        minute = fold_injury_time(int(raw_minute))
    try:
        team = Team(raw_team)
    except ValueError:
        raise ValueError(f"unknown team {raw_team!r} in event {token!r} (use H or A)")
    try:
        kind = EventKind(raw_kind)
    except ValueError:
        raise ValueError(f"unknown event kind {raw_kind!r} in event {token!r}")
    return MatchEvent(minute, team, kind)


def _check_header(path: str, header: list[str] | None, expected: list[str]) -> None:
    if header is None or [h.strip() for h in header] != expected:
        raise SchemaError(path, 1, f"header must be {','.join(expected)}")


def _iter_csv(path: str, expected: list[str]):
    """Yield (line_number, row) for data rows, once past the header.

    Leading `#` comment lines (provenance headers) are skipped; line
    numbers always refer to the physical file so errors stay clickable.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header_seen = False
        lineno = 0
        for lineno, row in enumerate(reader, start=1):
            if not row or row[0].startswith("#"):
                continue
            if not header_seen:
                _check_header(path, row, expected)
                header_seen = True
                continue
            if len(row) != len(expected):
                raise SchemaError(
                    path, lineno, f"expected {len(expected)} columns, got {len(row)}"
                )
            yield lineno, row
        if not header_seen:
            raise SchemaError(path, max(lineno, 1), f"header must be {','.join(expected)}")


def load_matches(path: str) -> list[tuple[MatchMeta, MatchTimeline]]:
    """Read the matches CSV into metadata/timeline pairs.

    Injury-time folding happens here; downstream code only ever sees
    minutes 1..90. Duplicate match_ids and malformed rows are errors.
    """
    out: list[tuple[MatchMeta, MatchTimeline]] = []
    seen: set[str] = set()
    for lineno, row in _iter_csv(path, _MATCH_COLUMNS):
        match_id, league, season, date, home, away, events_field = row
        if match_id in seen:
            raise SchemaError(path, lineno, f"duplicate match_id {match_id!r}")
        seen.add(match_id)
        try:
            meta = MatchMeta(match_id, league, int(season), date, home, away)
            tokens = [t for t in events_field.split(";") if t.strip()]
            timeline = MatchTimeline(tuple(_parse_event(t) for t in tokens))
        except ValueError as exc:
            raise SchemaError(path, lineno, str(exc)) from exc
        out.append((meta, timeline))
    return out


def write_matches(
    path: str,
    items: list[tuple[MatchMeta, MatchTimeline]],
    provenance: str | None = None,
) -> None:
    """Inverse of load_matches; events serialise back to folded minutes."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if provenance:
            fh.write(f"# {provenance}\n")
        writer = csv.writer(fh)
        writer.writerow(_MATCH_COLUMNS)
        for meta, timeline in items:
            events = ";".join(
                f"{e.minute}:{e.team.value}:{e.kind.value}" for e in timeline.events
            )
            writer.writerow(
                [
                    meta.match_id,
                    meta.league,
                    meta.season,
                    meta.date,
                    meta.home_team,
                    meta.away_team,
                    events,
                ]
            )


def weights_from_timelines(timelines: list[MatchTimeline]) -> MinuteWeights:
    """Empirical minute weights: share of all goals per folded minute."""
    counts = np.zeros(MINUTES)
    for tl in timelines:
        for e in tl.events:
            if e.kind is EventKind.GOAL:
                counts[e.minute - 1] += 1
    total = counts.sum()
    if total == 0:
        raise ValueError(
            "no goals in group; cannot estimate minute weights "
            "(consider uniform_weights() as a fallback)"
        )
    return MinuteWeights(counts / total)


def estimate_weights(
    items: list[tuple[MatchMeta, MatchTimeline]]
) -> dict[str, MinuteWeights]:
    """Per-league empirical minute weights, both teams' goals pooled."""
    by_league: dict[str, list[MatchTimeline]] = {}
    for meta, tl in items:
        by_league.setdefault(meta.league, []).append(tl)
    return {
        league: weights_from_timelines(tls)
        for league, tls in sorted(by_league.items())
    }


def write_weights(
    path: str, weights: dict[str, MinuteWeights], provenance: str | None = None
) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if provenance:
            fh.write(f"# {provenance}\n")
        writer = csv.writer(fh)
        writer.writerow(_WEIGHT_COLUMNS)
        for league in sorted(weights):
            for minute, w in enumerate(weights[league].values, start=1):
                writer.writerow([league, minute, f"{w:.17g}"])


def load_weights(path: str) -> dict[str, MinuteWeights]:
    """Read per-league minute weights; every league needs all 90 minutes."""
    rows: dict[str, np.ndarray] = {}
    for lineno, row in _iter_csv(path, _WEIGHT_COLUMNS):
        league, minute_s, weight_s = row
        try:
            minute = int(minute_s)
            weight = float(weight_s)
        except ValueError as exc:
            raise SchemaError(path, lineno, str(exc)) from exc
        if not 1 <= minute <= MINUTES:
            raise SchemaError(path, lineno, f"minute {minute} outside 1..{MINUTES}")
        arr = rows.setdefault(league, np.full(MINUTES, np.nan))
        if not np.isnan(arr[minute - 1]):
            raise SchemaError(
                path, lineno, f"duplicate weight for {league!r} minute {minute}"
            )
        arr[minute - 1] = weight
    out = {}
    for league, arr in sorted(rows.items()):
        if np.isnan(arr).any():
            missing = int(np.flatnonzero(np.isnan(arr))[0]) + 1
            raise SchemaError(path, 0, f"{league!r} missing minute {missing}")
        out[league] = MinuteWeights(arr)
    return out


def _parse_odds_row(row: list[str]) -> tuple[tuple[float, float, float], tuple | None]:
    one_x_two = (float(row[1]), float(row[2]), float(row[3]))
    t_s, over_s, under_s = row[4], row[5], row[6]
    blank = [s.strip() == "" for s in (t_s, over_s, under_s)]
    if all(blank):
        return one_x_two, None
    if any(blank):
        raise ValueError("threshold, over, under must be all present or all empty")
    return one_x_two, (float(t_s), float(over_s), float(under_s))


def load_odds(path: str) -> list[OddsRecord]:
    """Read the odds CSV into one OddsRecord per match.

    The repeated 1X2 columns must agree across a match's rows; lines must
    not repeat a threshold. Validation errors carry the offending line.
    """
    first_seen: dict[str, tuple[float, float, float]] = {}
    lines: dict[str, list[tuple[float, float, float]]] = {}
    order: list[str] = []
    for lineno, row in _iter_csv(path, _ODDS_COLUMNS):
        match_id = row[0]
        try:
            one_x_two, line = _parse_odds_row(row)
        except ValueError as exc:
            raise SchemaError(path, lineno, str(exc)) from exc
        if match_id not in first_seen:
            first_seen[match_id] = one_x_two
            lines[match_id] = []
            order.append(match_id)
        elif first_seen[match_id] != one_x_two:
            raise SchemaError(
                path, lineno, f"1X2 odds for {match_id!r} differ between rows"
            )
        if line is not None:
            if any(line[0] == t for t, _, _ in lines[match_id]):
                raise SchemaError(
                    path, lineno, f"duplicate threshold {line[0]} for {match_id!r}"
                )
            lines[match_id].append(line)
    out = []
    for match_id in order:
        h, d, a = first_seen[match_id]
        try:
            out.append(
                OddsRecord(match_id, h, d, a, tuple(sorted(lines[match_id])))
            )
        except ValueError as exc:
            raise SchemaError(path, 0, f"{match_id!r}: {exc}") from exc
    return out


def write_odds(
    path: str, records: list[OddsRecord], provenance: str | None = None
) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if provenance:
            fh.write(f"# {provenance}\n")
        writer = csv.writer(fh)
        writer.writerow(_ODDS_COLUMNS)
        for rec in records:
            base = [
                rec.match_id,
                f"{rec.home_odds:.17g}",
                f"{rec.draw_odds:.17g}",
                f"{rec.away_odds:.17g}",
            ]
            if not rec.ou_lines:
                writer.writerow(base + ["", "", ""])
            for t, over, under in rec.ou_lines:
                writer.writerow(base + [f"{t:g}", f"{over:.17g}", f"{under:.17g}"])


def join_odds(
    items: list[tuple[MatchMeta, MatchTimeline]], odds: list[OddsRecord]
) -> tuple[list[tuple[MatchMeta, MatchTimeline, OddsRecord]], list[str], list[str]]:
    """Pair matches with their odds by match_id.

    Returns (joined, match_ids without odds, odds ids without a match);
    both leftovers also surface as warnings, and odds-less matches are
    thereby excluded from calibration.
    """
    by_id = {o.match_id: o for o in odds}
    joined = []
    unmatched_matches = []
    for meta, tl in items:
        rec = by_id.pop(meta.match_id, None)
        if rec is None:
            unmatched_matches.append(meta.match_id)
        else:
            joined.append((meta, tl, rec))
    unmatched_odds = list(by_id)
    if unmatched_matches:
        warnings.warn(f"{len(unmatched_matches)} matches without odds (excluded)")
    if unmatched_odds:
        warnings.warn(f"{len(unmatched_odds)} odds records without a match")
    return joined, unmatched_matches, unmatched_odds


_RECORD_COLUMNS = [
    "match_id",
    "league",
    "season",
    "date",
    "home_team",
    "away_team",
    "suspense",
    "surprise",
    "p_home",
    "p_draw",
    "p_away",
]


def persist_excitement(
    records: list[MatchRecord],
    path: str,
    append: bool = False,
    provenance: str | None = None,
) -> None:
    """Write scored matches under the version tag; floats keep 17 digits.

    With append=True onto an existing file, the tag is validated and only
    rows are added, so shards concatenate cleanly. An optional provenance
    string becomes an extra leading comment on fresh writes.
    """
    mode = "a" if append and os.path.exists(path) and os.path.getsize(path) else "w"
    if mode == "a":
        with open(path, newline="", encoding="utf-8") as fh:
            first = fh.readline().rstrip("\n")
        if first != EXCITEMENT_TAG:
            raise ValueError(f"cannot append to {path}: missing tag {EXCITEMENT_TAG!r}")
    with open(path, mode, newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if mode == "w":
            fh.write(EXCITEMENT_TAG + "\n")
            if provenance:
                fh.write(f"# {provenance}\n")
            writer.writerow(_RECORD_COLUMNS)
        for r in records:
            writer.writerow(
                [
                    r.match_id,
                    r.league,
                    r.season,
                    r.date,
                    r.home_team,
                    r.away_team,
                    f"{r.suspense:.17g}",
                    f"{r.surprise:.17g}",
                    f"{r.pre_match.home:.17g}",
                    f"{r.pre_match.draw:.17g}",
                    f"{r.pre_match.away:.17g}",
                ]
            )


def load_excitement(path: str) -> list[MatchRecord]:
    """Read scored matches back; rejects files without the version tag."""
    with open(path, newline="", encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
        if first != EXCITEMENT_TAG:
            raise ValueError(
                f"{path} is not an excitement file (expected tag {EXCITEMENT_TAG!r})"
            )
        rows = []
        reader = csv.reader(line for line in fh if not line.startswith("#"))
        header = next(reader, None)
        _check_header(path, header, _RECORD_COLUMNS)
        for row in reader:
            if not row:
                continue
            rows.append(
                MatchRecord(
                    match_id=row[0],
                    league=row[1],
                    season=int(row[2]),
                    date=row[3],
                    home_team=row[4],
                    away_team=row[5],
                    suspense=float(row[6]),
                    surprise=float(row[7]),
                    pre_match=ProbTriple(float(row[8]), float(row[9]), float(row[10])),
                )
            )
    return rows
