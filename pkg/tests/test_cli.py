import json
from pathlib import Path

import numpy as np
import pytest

from solar_markov.cli import main
from solar_markov.config import parse_config_text, apply_overrides, RunConfig
from solar_markov.generator import SegmentationPlan, SegmentedModel
from solar_markov.markov import read_matrix, write_matrix


def day_rows(date, window_values, start_min=6 * 60):
    """Full day of 5-minute samples; ``window_values`` start at ``start_min``."""
    first = start_min // 5
    for i in range(288):
        k = i - first
        v = window_values[k] if 0 <= k < len(window_values) else 0.0
        yield f"{date}T{i * 5 // 60:02d}:{i * 5 % 60:02d}", v


@pytest.fixture(scope="module")
def fitted(tmp_path_factory, fixture_csv):
    out = tmp_path_factory.mktemp("fit")
    assert main(["fit", fixture_csv, "--out", str(out)]) == 0
    return out


class TestFit:
    def test_summer_writes_five_matrices(self, fitted):
        mats = sorted(p.name for p in fitted.glob("matrix_s*.txt"))
        assert mats == [f"matrix_s{i}.txt" for i in range(1, 6)]
        for p in fitted.glob("matrix_s*.txt"):
            P = read_matrix(p)
            live = P.sum(axis=1) > 0
            np.testing.assert_allclose(P.sum(axis=1)[live], 1.0, atol=1e-9)
        manifest = json.loads((fitted / "model.json").read_text())
        assert manifest["day_count"] == 31 and manifest["fit_on"] == "repday"
        assert manifest["initial_state"] == "L"

    def test_counts_follow_matrices(self, fitted):
        for s in range(1, 6):
            counts = read_matrix(fitted / f"counts_s{s}.txt")
            P = read_matrix(fitted / f"matrix_s{s}.txt")
            rows = counts.sum(axis=1)
            for i in np.flatnonzero(rows):
                np.testing.assert_allclose(P[i], counts[i] / rows[i], atol=1e-9)

    def test_winter_preset_writes_four(self, tmp_path, fixture_csv):
        assert main(["fit", fixture_csv, "--preset", "winter-paper", "--out", str(tmp_path)]) == 0
        assert len(list(tmp_path.glob("matrix_s*.txt"))) == 4

    def test_emit_matrices(self, tmp_path, fixture_csv, capsys):
        assert main(["fit", fixture_csv, "--out", str(tmp_path), "--emit-matrices"]) == 0
        assert capsys.readouterr().out.count("# segment") == 5

    def test_missing_file(self, tmp_path, capsys):
        out = tmp_path / "never"
        assert main(["fit", str(tmp_path / "nope.csv"), "--out", str(out)]) == 2
        assert not out.exists()
        assert "not found" in capsys.readouterr().err

    def test_malformed_data_reports_line(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("2013-07-01T00:00,1\n2013-07-01T00:05,oops\n")
        assert main(["fit", str(bad), "--out", str(tmp_path / "o")]) == 2
        assert "line 2" in capsys.readouterr().err

    def test_bad_config(self, tmp_path, fixture_csv):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("nonsense = 1\n")
        assert main(["fit", fixture_csv, "--config", str(cfg), "--out", str(tmp_path)]) == 2


class TestTest:
    def test_fixture_rejects_independence(self, tmp_path, fixture_csv):
        assert main(["test", fixture_csv, "--out", str(tmp_path)]) == 0
        dep = json.loads((tmp_path / "dependency_test.json").read_text())
        assert dep["reject_independence"] is True
        assert dep["dof"] == 9 and dep["k"] == 4
        assert dep["critical_value"] == pytest.approx(16.9190, abs=1e-3)
        assert dep["total_transitions"] == 179
        assert json.loads((tmp_path / "stationarity.json").read_text())["stationary"] is False

    def test_from_fitted_model(self, tmp_path, fitted):
        assert main(["test", "--model", str(fitted), "--out", str(tmp_path)]) == 0
        assert (tmp_path / "dependency_test.json").exists()

    def test_identical_halves_are_stationary(self, tmp_path, write_csv):
        # one hour Low then one hour Medium, split into two 2-hour segments
        window = [100.0] * 12 + [300.0] * 12
        path = write_csv(list(day_rows("2013-07-01", window + window)))
        args = ["test", str(path), "--segments", "06:00,08:00,10:00", "--out", str(tmp_path)]
        assert main(args) == 0
        report = json.loads((tmp_path / "stationarity.json").read_text())
        assert report["stationary"] is True
        # the carried Medium -> Low step at 08:00 belongs to the first segment
        assert report["max_distance"] == pytest.approx(1 / 12)

    def test_printed_matrices_not_stationary(self, tmp_path, reference_segments):
        paths = []
        for s, P in enumerate(reference_segments, start=1):
            paths.append(str(tmp_path / f"P{s}.txt"))
            write_matrix(paths[-1], P)
        assert main(["test", "--matrices", *paths, "--out", str(tmp_path)]) == 0
        report = json.loads((tmp_path / "stationarity.json").read_text())
        assert report["stationary"] is False
        assert report["max_distance"] == pytest.approx(1.0)
        assert not (tmp_path / "dependency_test.json").exists()


def _write_model(directory, matrices, boundaries):
    plan = SegmentationPlan.from_boundaries(boundaries)
    model = SegmentedModel(plan, tuple(np.asarray(P, float) for P in matrices))
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "model.json").write_text(json.dumps({"model": model.to_dict(), "initial_state": "L"}))
    return directory


class TestGenerate:
    def test_fitted_model_gives_full_window(self, tmp_path, fitted):
        assert main(["generate", "--model", str(fitted), "--out", str(tmp_path)]) == 0
        lines = (tmp_path / "trace.csv").read_text().splitlines()
        assert len(lines) == 181
        assert lines[1].startswith("04:30,")
        summary = json.loads((tmp_path / "generation.json").read_text())
        assert summary["slots"] == 180

    def test_diff_modes(self, tmp_path, reference_segments):
        model_dir = _write_model(tmp_path / "m", [reference_segments[0]], ["04:30", "07:30"])
        assert main(["generate", "--model", str(model_dir), "--out", str(tmp_path), "--diff-modes"]) == 0
        diff = json.loads((tmp_path / "mode_diff.json").read_text())
        assert diff["count"] > 0
        assert diff["differing_slots"] == list(range(5, 18))
        assert (tmp_path / "trace_strict_alg1.csv").exists()

    def test_missing_model(self, tmp_path):
        assert main(["generate", "--model", str(tmp_path / "none"), "--out", str(tmp_path)]) == 2

    def test_initial_override(self, tmp_path):
        model_dir = _write_model(tmp_path / "m", [np.eye(4)], ["06:00", "06:30"])
        assert main(["generate", "--model", str(model_dir), "--out", str(tmp_path), "--initial", "H"]) == 0
        codes = [line.split(",")[1] for line in (tmp_path / "trace.csv").read_text().splitlines()[1:]]
        assert codes == ["3"] * 6


class TestSample:
    def test_deterministic(self, tmp_path, fitted):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            assert main(["sample", "--model", str(fitted), "--out", str(out), "--seed", "5"]) == 0
        assert (a / "sample.csv").read_text() == (b / "sample.csv").read_text()
        assert len((a / "sample.csv").read_text().splitlines()) == 181


class TestEvaluate:
    def test_fitted_pipeline(self, tmp_path, fitted):
        assert main(["generate", "--model", str(fitted), "--out", str(tmp_path)]) == 0
        assert main(["evaluate", "--model", str(fitted), "--out", str(tmp_path)]) == 0
        report = json.loads((tmp_path / "evaluation.json").read_text())
        assert report["length"] == 180
        assert 0 <= report["match_fraction"] <= 1
        assert (tmp_path / "overlay.csv").exists()

    def test_identical_traces(self, tmp_path, fitted):
        obs = str(fitted / "observed_states.csv")
        assert main(["evaluate", obs, obs, "--out", str(tmp_path)]) == 0
        report = json.loads((tmp_path / "evaluation.json").read_text())
        assert report["match_fraction"] == 1.0 and report["sigma_gap"] == 0.0

    def test_length_mismatch_exit_3(self, tmp_path, fitted, capsys):
        obs = fitted / "observed_states.csv"
        short = tmp_path / "short.csv"
        short.write_text("\n".join(obs.read_text().splitlines()[:100]) + "\n")
        assert main(["evaluate", str(obs), str(short), "--out", str(tmp_path)]) == 3
        assert "lengths differ" in capsys.readouterr().err


class TestDumpConfig:
    def test_round_trip(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("threshold.lr = 150\nfit.on = pooled\n")
        argv = ["fit", "x.csv", "--config", str(cfg), "--segments", "06:00,09:00", "--mr", "400", "--dump-config"]
        assert main(argv) == 0
        text = capsys.readouterr().out
        parsed = apply_overrides(RunConfig(), parse_config_text(text))
        assert parsed.threshold_lr == 150 and parsed.threshold_mr == 400
        assert parsed.fit_on == "pooled" and parsed.data == "x.csv"
        assert parsed.plan_preset is None
        dumped = tmp_path / "dumped.cfg"
        dumped.write_text(text)
        assert main(["fit", "--config", str(dumped), "--dump-config"]) == 0
        assert capsys.readouterr().out == text

    def test_preset_and_segments_conflict(self):
        assert main(["fit", "--preset", "summer-paper", "--segments", "06:00,07:00", "--dump-config"]) == 2
