import os

import numpy as np
import pandas as pd
import pytest

from matchpulse.calibration import calibrate_record
from matchpulse.cli import main, _provenance
from matchpulse.core import RngSeedPolicy, english_league_weights
from matchpulse.benchmark import simulate_pair
from matchpulse.dataio import load_excitement, load_matches, load_weights
from matchpulse.excitement import excitement


def read_csv(path):
    return pd.read_csv(path, comment="#")


def first_line(path):
    with open(path) as fh:
        return fh.readline().rstrip("\n")


def test_version_and_usage_exit_codes(capsys):
    assert main(["--version"]) == 0
    assert main([]) == 2
    assert main(["simulate", "--lambda-home", "1"]) == 2  # missing required flags
    capsys.readouterr()


def test_missing_input_is_usage_error(tmp_path, capsys):
    out = str(tmp_path / "x.csv")
    code = main(["score", "--matches", "nope.csv", "--odds", "nope.csv", "--out", out])
    assert code == 2
    assert "not found" in capsys.readouterr().err


def test_malformed_input_is_usage_error(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("wrong,header\n1,2\n")
    out = str(tmp_path / "x.csv")
    code = main(["calibrate", "--odds", str(bad), "--out", out])
    assert code == 2
    assert "header must be" in capsys.readouterr().err


def test_provenance_strips_threads():
    line = _provenance(
        ["benchmark", "--threads", "8", "--seed", "3", "--threads=2"], seed=3
    )
    assert "--threads" not in line
    assert "--seed 3" in line and "seed=3" in line
    assert line.startswith("matchpulse ")


def test_simulate_matches_library(tmp_path):
    out = str(tmp_path / "sim.csv")
    code = main(
        [
            "simulate",
            "--lambda-home", "1.3",
            "--lambda-away", "0.9",
            "--matches", "25",
            "--seed", "11",
            "--out", out,
        ]
    )
    assert code == 0
    assert first_line(out).startswith("# matchpulse ")
    frame = read_csv(out)
    sus, sur = simulate_pair(
        1.3, 0.9, english_league_weights(), 25, RngSeedPolicy(11), 0
    )
    np.testing.assert_allclose(frame.suspense.to_numpy(), sus, atol=1e-12)
    np.testing.assert_allclose(frame.surprise.to_numpy(), sur, atol=1e-12)


def test_benchmark_outputs_and_thread_invariance(tmp_path):
    out = str(tmp_path / "bench")
    args = [
        "benchmark",
        "--lambda-low", "0.5",
        "--lambda-high", "1.0",
        "--step", "2.5",
        "--matches", "60",
        "--seed", "4",
        "--out", out,
    ]
    assert main(args + ["--threads", "1"]) == 0
    blobs = {}
    for name in ("benchmark_range.csv", "benchmark_grid.csv", "benchmark_surface.csv"):
        with open(os.path.join(out, name), "rb") as fh:
            blobs[name] = fh.read()
        assert b"--threads" not in blobs[name]
    assert main(args + ["--threads", "2"]) == 0
    for name, blob in blobs.items():
        with open(os.path.join(out, name), "rb") as fh:
            assert fh.read() == blob, f"{name} differs across --threads"
    band = read_csv(os.path.join(out, "benchmark_range.csv"))
    assert band.loc[0, "suspense_high"] > band.loc[0, "suspense_low"]
    grid = read_csv(os.path.join(out, "benchmark_grid.csv"))
    assert len(grid) == 6  # lambda in {0, 2.5, 5.0} -> 6 unordered pairs


def test_score_end_to_end(dataset, tmp_path):
    out = str(tmp_path / "exc.csv")
    code = main(
        [
            "score",
            "--matches", dataset["matches"],
            "--odds", dataset["odds"],
            "--weights", dataset["weights"],
            "--out", out,
        ]
    )
    assert code == 0
    records = load_excitement(out)
    assert len(records) == len(dataset["items"])
    assert os.path.exists(out + ".diagnostics.csv")

    # spot-check one match against the direct library pipeline
    meta, timeline = dataset["items"][0]
    odds_rec = next(o for o in dataset["odds_records"] if o.match_id == meta.match_id)
    cal = calibrate_record(odds_rec)
    exc = excitement(
        timeline, cal.rates, load_weights(dataset["weights"])[meta.league]
    )
    got = next(r for r in records if r.match_id == meta.match_id)
    np.testing.assert_allclose(got.suspense, exc.suspense, atol=1e-12)
    np.testing.assert_allclose(got.surprise, exc.surprise, atol=1e-12)
    np.testing.assert_allclose(got.pre_match.home, exc.pre_match.home, atol=1e-12)


def test_score_without_weights_estimates_from_data(dataset, tmp_path):
    out = str(tmp_path / "exc.csv")
    code = main(
        ["score", "--matches", dataset["matches"], "--odds", dataset["odds"],
         "--out", out]
    )
    assert code == 0
    assert len(load_excitement(out)) == len(dataset["items"])


def test_score_mc_engine_close_to_analytic(dataset, tmp_path):
    ana = str(tmp_path / "ana.csv")
    mc = str(tmp_path / "mc.csv")
    base = [
        "score",
        "--matches", dataset["matches"],
        "--odds", dataset["odds"],
        "--weights", dataset["weights"],
    ]
    assert main(base + ["--out", ana]) == 0
    assert main(base + ["--engine", "mc", "--reps", "8000", "--out", mc]) == 0
    a = {r.match_id: r for r in load_excitement(ana)}
    m = {r.match_id: r for r in load_excitement(mc)}
    gaps = [abs(m[k].surprise - a[k].surprise) for k in a]
    gaps += [abs(m[k].suspense - a[k].suspense) for k in a]
    assert max(gaps) < 0.1


def test_score_flags_unmatched_odds(dataset, tmp_path):
    # drop the first odds row -> that match is excluded and diagnosed
    odds = pd.read_csv(dataset["odds"])
    trimmed = str(tmp_path / "odds.csv")
    skipped = odds.iloc[0].match_id
    odds[odds.match_id != skipped].to_csv(trimmed, index=False)
    out = str(tmp_path / "exc.csv")
    with pytest.warns(UserWarning):
        code = main(
            ["score", "--matches", dataset["matches"], "--odds", trimmed,
             "--weights", dataset["weights"], "--out", out]
        )
    assert code == 0
    assert all(r.match_id != skipped for r in load_excitement(out))
    diag = read_csv(out + ".diagnostics.csv")
    assert (diag.match_id == skipped).any()
    assert (diag.reason == "no_odds").any()


def test_calibrate_recovers_planted_rates(dataset, tmp_path):
    out = str(tmp_path / "rates.csv")
    assert main(["calibrate", "--odds", dataset["odds"], "--out", out]) == 0
    frame = read_csv(out).set_index("match_id")
    for mid, rates in dataset["planted"].items():
        assert abs(frame.loc[mid, "lambda_home"] - rates.lambda_home) < 0.03
        assert abs(frame.loc[mid, "lambda_away"] - rates.lambda_away) < 0.03
    assert frame.converged.all()


def test_weights_command_round_trips(dataset, tmp_path):
    out = str(tmp_path / "w.csv")
    assert main(["weights", "--matches", dataset["matches"], "--out", out]) == 0
    table = load_weights(out)
    assert set(table) == {"alpha", "beta"}
    items = load_matches(dataset["matches"])
    from matchpulse.dataio import estimate_weights

    want = estimate_weights(items)
    np.testing.assert_array_equal(table["alpha"].values, want["alpha"].values)


def score_fixture(dataset, tmp_path):
    out = str(tmp_path / "exc.csv")
    main(
        ["score", "--matches", dataset["matches"], "--odds", dataset["odds"],
         "--weights", dataset["weights"], "--out", out]
    )
    return out


def test_trends_columns(dataset, tmp_path):
    exc = score_fixture(dataset, tmp_path)
    out = str(tmp_path / "trends.csv")
    code = main(
        ["trends", "--excitement", exc, "--top-teams", "Reds,Blues", "--out", out]
    )
    assert code == 0
    frame = read_csv(out)
    assert list(frame.columns) == ["term", "(1)", "(2)", "(3)", "(4)"]
    assert "Reds x season" in frame.term.tolist()
    assert frame.term.tolist()[-3:] == ["N", "Clusters", "R2"]

    plain = str(tmp_path / "plain.csv")
    assert main(["trends", "--excitement", exc, "--out", plain]) == 0
    assert list(read_csv(plain).columns) == ["term", "(1)", "(3)"]


def test_trends_league_filter(dataset, tmp_path, capsys):
    exc = score_fixture(dataset, tmp_path)
    out = str(tmp_path / "trends.csv")
    assert main(["trends", "--excitement", exc, "--league", "beta", "--out", out]) == 0
    code = main(
        ["trends", "--excitement", exc, "--league", "gamma", "--out", out]
    )
    assert code == 2
    assert "no records" in capsys.readouterr().err


def test_data_dir_fallback(dataset, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("MATCHPULSE_DATA", os.path.dirname(dataset["matches"]))
    out = str(tmp_path / "rates.csv")
    assert main(["calibrate", "--odds", "odds.csv", "--out", out]) == 0


def test_unwritable_output_is_usage_error(capsys):
    code = main(
        ["simulate", "--lambda-home", "1.0", "--lambda-away", "1.0",
         "--matches", "2", "--out", "/nonexistent-dir/deep/sim.csv"]
    )
    assert code == 2
    capsys.readouterr()


def test_runtime_failure_exit_code(tmp_path, capsys):
    # a zero suspense cannot be logged; that is a data failure, not usage
    from matchpulse.analysis import MatchRecord
    from matchpulse.core import ProbTriple
    from matchpulse.dataio import persist_excitement

    records = [
        MatchRecord(f"m{i}", "L", 2014 + i % 3, "d", f"H{i % 2}", f"W{i % 2}",
                    suspense=5.0 if i else 0.0, surprise=1.0 + 0.1 * i,
                    pre_match=ProbTriple(0.4, 0.3, 0.3))
        for i in range(8)
    ]
    exc = str(tmp_path / "exc.csv")
    persist_excitement(records, exc)
    code = main(["trends", "--excitement", exc, "--out", str(tmp_path / "t.csv")])
    assert code == 1
    assert "m0" in capsys.readouterr().err
