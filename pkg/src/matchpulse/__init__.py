"""In-play outcome probabilities, suspense and surprise for football matches."""

__version__ = "0.1.0"

from .core import (
    MINUTES,
    EventKind,
    MatchEvent,
    MatchExcitement,
    MatchState,
    MatchTimeline,
    MinuteWeights,
    ProbTriple,
    RngSeedPolicy,
    ScoreProbPair,
    ScoringRates,
    Team,
    english_league_weights,
    fold_injury_time,
    replay_state,
    uniform_weights,
)
from .engine import (
    BeliefTable,
    PathBundle,
    RateSchedule,
    build_schedule,
    next_minute_scoring,
    outcome_probs,
    path_bundle,
    prob_path,
    remaining_means,
)
from .excitement import excitement, surprise, suspense
from .montecarlo import McConfig, mc_outcome_probs, mc_prob_path, simulate_match
from .benchmark import (
    BenchmarkRange,
    GridSpec,
    benchmark_range,
    simulate_grid,
    simulate_pair,
    surface_export,
)
from .calibration import (
    CalibrationResult,
    ImpliedProbs,
    OddsRecord,
    calibrate_rates,
    calibrate_record,
    deoverround,
    model_probs,
    synthetic_odds,
)
from .analysis import (
    MatchRecord,
    TrendFit,
    TrendModelSpec,
    TTestResult,
    band_flags,
    describe,
    records_frame,
    stars,
    summary_table,
    team_season_quartiles,
    trend_ols,
    trend_table,
    ttest_below,
    uncertainty_correlation,
)
from .dataio import (
    EXCITEMENT_TAG,
    DatasetManifest,
    MatchMeta,
    SchemaError,
    estimate_weights,
    join_odds,
    load_excitement,
    load_matches,
    load_odds,
    load_weights,
    persist_excitement,
    weights_from_timelines,
    write_matches,
    write_odds,
    write_weights,
)
