"""Descriptive and regression analysis of per-match excitement values.

Groups matches by league, season, and team; tests group means against a
benchmark lower bound; and fits log-linear season trends with standard
errors clustered on the unordered team pair, since the same pairing
recurs across seasons.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import stats as sps
from scipy.linalg import qr as scipy_qr

from .benchmark import BenchmarkRange
from .core import ProbTriple

_GROUPINGS = ("league", "team-season", "league-season")


@dataclass(frozen=True)
class MatchRecord:
    """One scored match: identity, excitement totals, pre-match outlook."""

    match_id: str
    league: str
    season: int
    date: str
    home_team: str
    away_team: str
    suspense: float
    surprise: float
    pre_match: ProbTriple

    def __post_init__(self):
        for name in ("suspense", "surprise"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{name}={v!r} must be finite and >= 0")


def records_frame(records: list[MatchRecord]) -> pd.DataFrame:
    """Flat frame of record fields; pre-match triple split into columns."""
    return pd.DataFrame(
        {
            "match_id": [r.match_id for r in records],
            "league": [r.league for r in records],
            "season": [r.season for r in records],
            "date": [r.date for r in records],
            "home_team": [r.home_team for r in records],
            "away_team": [r.away_team for r in records],
            "suspense": [r.suspense for r in records],
            "surprise": [r.surprise for r in records],
            "p_home": [r.pre_match.home for r in records],
            "p_draw": [r.pre_match.draw for r in records],
            "p_away": [r.pre_match.away for r in records],
        }
    )


def _team_season_frame(frame: pd.DataFrame) -> pd.DataFrame:
    """One row per (team, match): each match appears under both teams."""
    home = frame.assign(team=frame.home_team)
    away = frame.assign(team=frame.away_team)
    return pd.concat([home, away], ignore_index=True)


def describe(records: list[MatchRecord], group_by: str = "league") -> pd.DataFrame:
    """N/Mean/Median/SD/Min/Max of both metrics per group.

    group_by is one of league, team-season, league-season; team-season
    credits each match to both sides. Single-observation groups report
    SD = 0 and singleton=True rather than NaN.
    """
    if group_by not in _GROUPINGS:
        raise ValueError(f"group_by must be one of {_GROUPINGS}, got {group_by!r}")
    if not records:
        warnings.warn("describe: no records, result is empty")
        return pd.DataFrame()
    frame = records_frame(records)
    if group_by == "league":
        keys = ["league"]
    elif group_by == "league-season":
        keys = ["league", "season"]
    else:
        frame = _team_season_frame(frame)
        keys = ["team", "season"]

    rows = []
    for key, grp in frame.groupby(keys, sort=True):
        key = key if isinstance(key, tuple) else (key,)
        for metric in ("suspense", "surprise"):
            v = grp[metric].to_numpy()
            rows.append(
                dict(zip(keys, key))
                | {
                    "metric": metric,
                    "n": v.size,
                    "mean": v.mean(),
                    "median": float(np.median(v)),
                    "sd": float(v.std(ddof=1)) if v.size > 1 else 0.0,
                    "min": v.min(),
                    "max": v.max(),
                    "singleton": v.size == 1,
                }
            )
    return pd.DataFrame(rows)


def stars(p: float) -> str:
    """Significance markers at the 10/5/1 percent levels."""
    if p < 0.01:
        return "***"
    if p < 0.05:
        return "**"
    if p < 0.1:
        return "*"
    return ""


@dataclass(frozen=True)
class TTestResult:
    t: float
    p_one_sided: float
    markers: str
    degenerate: bool = False


def ttest_below(values: np.ndarray, benchmark_lower: float) -> TTestResult:
    """One-sample t-test that the mean lies below a known benchmark.

    One-sided p = P(T_{n-1} <= t) with t = (mean - benchmark)/(sd/sqrt n).
    Zero-variance samples have no t-statistic; they are decided by sign
    and flagged degenerate.
    """
    v = np.asarray(values, dtype=float)
    if v.size < 2:
        raise ValueError("ttest_below needs at least 2 values")
    if not np.all(np.isfinite(v)):
        raise ValueError("ttest_below requires finite values")
    mean = v.mean()
    sd = v.std(ddof=1)
    if sd == 0.0:
        if mean < benchmark_lower:
            return TTestResult(-np.inf, 0.0, stars(0.0), degenerate=True)
        if mean > benchmark_lower:
            return TTestResult(np.inf, 1.0, "", degenerate=True)
        return TTestResult(0.0, 0.5, "", degenerate=True)
    t = (mean - benchmark_lower) / (sd / np.sqrt(v.size))
    p = float(sps.t.cdf(t, df=v.size - 1))
    return TTestResult(float(t), p, stars(p))


def uncertainty_correlation(records: list[MatchRecord]) -> tuple[float, float]:
    """Pearson correlation of pre-match favourite gap with each metric.

    The gap |p_home - p_away| is 0 for a coin-flip match and grows with
    one-sidedness, so negative correlations mean uncertain matches are
    the more exciting ones.
    """
    frame = records_frame(records)
    gap = (frame.p_home - frame.p_away).abs().to_numpy()
    sus = frame.suspense.to_numpy()
    sur = frame.surprise.to_numpy()
    return (
        float(np.corrcoef(gap, sus)[0, 1]),
        float(np.corrcoef(gap, sur)[0, 1]),
    )


_OUTCOMES = ("ln_suspense", "ln_surprise")


@dataclass(frozen=True)
class TrendModelSpec:
    """Log-linear season-trend model.

    outcome: ln_suspense or ln_surprise. Season enters as a continuous
    regressor, start year minus base_season. Each top team adds a
    match-involves-team dummy plus its interaction with season; a match
    between two listed teams activates both. Standard errors cluster on
    the unordered (home_team, away_team) pair.
    """

    outcome: str
    base_season: int = 2010
    top_teams: tuple[str, ...] = ()

    def __post_init__(self):
        if self.outcome not in _OUTCOMES:
            raise ValueError(f"outcome must be one of {_OUTCOMES}")
        if len(set(self.top_teams)) != len(self.top_teams):
            raise ValueError("top_teams must be distinct")


@dataclass(frozen=True)
class TrendFit:
    table: pd.DataFrame  # term, estimate, se, t, p, stars
    n: int
    r2: float
    clusters: int
    outcome: str


def _design(frame: pd.DataFrame, spec: TrendModelSpec):
    season_c = (frame.season - spec.base_season).to_numpy(dtype=float)
    cols = [np.ones(len(frame)), season_c]
    names = ["const", "season"]
    for team in spec.top_teams:
        involved = (
            (frame.home_team == team) | (frame.away_team == team)
        ).to_numpy(dtype=float)
        cols.append(involved)
        names.append(team)
        cols.append(involved * season_c)
        names.append(f"{team} x season")
    return np.column_stack(cols), names


def trend_ols(records: list[MatchRecord], spec: TrendModelSpec) -> TrendFit:
    """OLS of the log metric on season with cluster-robust standard errors.

    Sandwich covariance summed over unordered team-pair clusters, scaled
    by the usual small-sample factor c = G/(G-1) * (n-1)/(n-k); p-values
    use t with G-1 degrees of freedom.
    """
    frame = records_frame(records)
    metric = "suspense" if spec.outcome == "ln_suspense" else "surprise"
    y_raw = frame[metric].to_numpy()
    bad = frame.match_id[y_raw <= 0].tolist()
    if bad:
        raise ValueError(
            f"log of non-positive {metric} for match_ids: {', '.join(map(str, bad))}"
        )
    y = np.log(y_raw)

    X, names = _design(frame, spec)
    n, k = X.shape
    r = np.linalg.matrix_rank(X)
    if r < k:
        # name the columns QR pivoting would drop
        _, _, piv = scipy_qr(X, mode="economic", pivoting=True)
        dropped = [names[j] for j in piv[r:]]
        raise ValueError(f"singular design; collinear columns: {', '.join(dropped)}")

    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ beta
    bread = np.linalg.inv(X.T @ X)

    pair = [
        tuple(sorted(p)) for p in zip(frame.home_team, frame.away_team)
    ]
    codes = pd.factorize(pd.Series(pair))[0]
    G = int(codes.max()) + 1
    if G < 2:
        raise ValueError("cluster-robust errors need at least 2 team-pair clusters")
    scores = np.zeros((G, k))
    np.add.at(scores, codes, X * resid[:, None])
    meat = scores.T @ scores
    c = (G / (G - 1)) * ((n - 1) / (n - k))
    cov = c * bread @ meat @ bread
    se = np.sqrt(np.diag(cov))

    t = beta / se
    p = 2.0 * sps.t.sf(np.abs(t), df=G - 1)
    r2 = 1.0 - (resid**2).sum() / ((y - y.mean()) ** 2).sum()
    table = pd.DataFrame(
        {
            "term": names,
            "estimate": beta,
            "se": se,
            "t": t,
            "p": p,
            "stars": [stars(v) for v in p],
        }
    )
    return TrendFit(table=table, n=n, r2=float(r2), clusters=G, outcome=spec.outcome)


def band_flags(
    records: list[MatchRecord], bench: BenchmarkRange, alpha: float = 0.05
) -> pd.DataFrame:
    """Per team-season markers for means significantly below the band floor.

    Tests each group's mean against the lower bound of the benchmark
    range for its metric (one-sided, alpha level). Groups of one match
    cannot be tested and are flagged untestable.
    """
    frame = _team_season_frame(records_frame(records))
    lows = {"suspense": bench.suspense_low, "surprise": bench.surprise_low}
    rows = []
    for (team, season), grp in frame.groupby(["team", "season"], sort=True):
        for metric, low in lows.items():
            v = grp[metric].to_numpy()
            if v.size < 2:
                rows.append(
                    {
                        "team": team,
                        "season": season,
                        "metric": metric,
                        "n": v.size,
                        "mean": v.mean(),
                        "below_band": False,
                        "testable": False,
                    }
                )
                continue
            res = ttest_below(v, low)
            rows.append(
                {
                    "team": team,
                    "season": season,
                    "metric": metric,
                    "n": v.size,
                    "mean": v.mean(),
                    "below_band": res.p_one_sided < alpha,
                    "testable": True,
                }
            )
    return pd.DataFrame(rows)


def team_season_quartiles(records: list[MatchRecord]) -> pd.DataFrame:
    """Box-plot source: quartiles and whisker reach per team-season.

    Whiskers follow the 1.5 IQR convention, clipped to observed values.
    """
    frame = _team_season_frame(records_frame(records))
    rows = []
    for (team, season), grp in frame.groupby(["team", "season"], sort=True):
        for metric in ("suspense", "surprise"):
            v = np.sort(grp[metric].to_numpy())
            q1, med, q3 = np.percentile(v, [25, 50, 75])
            iqr = q3 - q1
            lo = v[v >= q1 - 1.5 * iqr][0]
            hi = v[v <= q3 + 1.5 * iqr][-1]
            rows.append(
                {
                    "team": team,
                    "season": season,
                    "metric": metric,
                    "n": v.size,
                    "mean": v.mean(),
                    "q1": q1,
                    "median": med,
                    "q3": q3,
                    "whisker_lo": lo,
                    "whisker_hi": hi,
                }
            )
    return pd.DataFrame(rows)


def summary_table(
    records: list[MatchRecord],
    bench: BenchmarkRange | None = None,
) -> pd.DataFrame:
    """League-level descriptive table with optional below-band t-test stars.

    One row per (league, metric) plus a pooled all-league row; the mean
    carries markers from the one-sided test against the band floor for
    its metric when a benchmark range is supplied.
    """
    frame = records_frame(records)
    lows = (
        {"suspense": bench.suspense_low, "surprise": bench.surprise_low}
        if bench is not None
        else None
    )
    rows = []
    groups = [("All leagues", frame)] + [
        (lg, g) for lg, g in frame.groupby("league", sort=True)
    ]
    for label, grp in groups:
        for metric in ("suspense", "surprise"):
            v = grp[metric].to_numpy()
            mark = ""
            if lows is not None and v.size >= 2:
                mark = ttest_below(v, lows[metric]).markers
            rows.append(
                {
                    "league": label,
                    "metric": metric,
                    "n": v.size,
                    "mean": v.mean(),
                    "mean_markers": mark,
                    "median": float(np.median(v)),
                    "sd": float(v.std(ddof=1)) if v.size > 1 else 0.0,
                    "min": v.min(),
                    "max": v.max(),
                }
            )
    return pd.DataFrame(rows)


def trend_table(fits: dict[str, TrendFit]) -> pd.DataFrame:
    """Wide regression table: one column per fit, terms as paired rows.

    Each term contributes an estimate row (with markers) and an
    se row in parentheses; footer rows carry N, clusters, and R^2.
    """
    terms: list[str] = []
    for fit in fits.values():
        for term in fit.table.term:
            if term not in terms:
                terms.append(term)
    data: dict[str, list[str]] = {"term": []}
    for term in terms:
        data["term"] += [term, ""]
    for label, fit in fits.items():
        col = []
        by_term = fit.table.set_index("term")
        for term in terms:
            if term in by_term.index:
                row = by_term.loc[term]
                col += [f"{row.estimate:.4f}{row.stars}", f"({row.se:.4f})"]
            else:
                col += ["", ""]
        data[label] = col
    out = pd.DataFrame(data)
    footer = {"term": ["N", "Clusters", "R2"]}
    for label, fit in fits.items():
        footer[label] = [str(fit.n), str(fit.clusters), f"{fit.r2:.4f}"]
    return pd.concat([out, pd.DataFrame(footer)], ignore_index=True)
