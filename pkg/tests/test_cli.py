import json

import numpy as np
import pytest

from jointblup import CensoredSample, emit, ingest, parse_targets
from jointblup.cli import main
from jointblup.reference import SCHMEE_HAHN_FAILURES


@pytest.fixture()
def sample_csv(tmp_path):
    path = tmp_path / "failures.csv"
    path.write_text("value\n" + "\n".join(str(v) for v in SCHMEE_HAHN_FAILURES) + "\n")
    return path


class TestIngest:
    def test_csv(self, sample_csv):
        sample = ingest(sample_csv, n=10)
        assert sample.n == 10 and sample.r == 5
        np.testing.assert_allclose(sample.values, SCHMEE_HAHN_FAILURES)

    def test_csv_requires_n(self, sample_csv):
        with pytest.raises(ValueError, match="pass n explicitly"):
            ingest(sample_csv)

    def test_json(self, tmp_path):
        path = tmp_path / "sample.json"
        path.write_text(json.dumps({"n": 10, "values": [1.0, 2.5, 4.0]}))
        sample = ingest(path)
        assert sample.n == 10 and sample.r == 3

    def test_json_n_conflict(self, tmp_path):
        path = tmp_path / "sample.json"
        path.write_text(json.dumps({"n": 10, "values": [1.0, 2.5]}))
        with pytest.raises(ValueError, match="declares n=10"):
            ingest(path, n=12)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(ValueError, match="value"):
            ingest(path, n=10)

    def test_unsorted_rejected_not_sorted(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("value\n5.0\n3.0\n7.0\n")
        with pytest.raises(ValueError, match="strictly increasing"):
            ingest(path, n=10)

    def test_ties_rejected(self, tmp_path):
        path = tmp_path / "ties.csv"
        path.write_text("value\n5\n5\n7\n")
        with pytest.raises(ValueError, match="strictly increasing"):
            ingest(path, n=10)

    def test_too_many_observations_rejected(self, tmp_path):
        path = tmp_path / "full.csv"
        path.write_text("value\n1\n2\n3\n")
        with pytest.raises(ValueError, match="below the sample size"):
            ingest(path, n=3)

    def test_single_observation_rejected(self, tmp_path):
        path = tmp_path / "one.csv"
        path.write_text("value\n1\n")
        with pytest.raises(ValueError, match="at least two"):
            ingest(path, n=5)

    def test_non_numeric_rejected(self, tmp_path):
        path = tmp_path / "text.csv"
        path.write_text("value\nfast\nslow\n")
        with pytest.raises(ValueError, match="non-numeric"):
            ingest(path, n=5)

    @pytest.mark.parametrize("fmt,name", [("csv", "out.csv"), ("json", "out.json")])
    def test_round_trip(self, tmp_path, fmt, name):
        sample = CensoredSample(n=9, values=[1.25, 2.0, 3.75, 10.5])
        path = emit(sample, tmp_path / name, fmt)
        back = ingest(path, fmt, n=9 if fmt == "csv" else None)
        assert back.n == sample.n
        np.testing.assert_array_equal(back.values, sample.values)


def test_parse_targets():
    assert parse_targets("6,7;8;9,10") == ((6, 7), (8,), (9, 10))
    assert parse_targets("6") == ((6,),)
    with pytest.raises(ValueError):
        parse_targets("6,x")
    with pytest.raises(ValueError):
        parse_targets(";")


class TestCommands:
    def test_predict_matches_library(self, sample_csv, tmp_path, capsys, moments_for, schmee_hahn):
        code = main([
            "predict", "--family", "normal", "--n", "10", "--input", str(sample_csv),
            "--targets", "6,7", "--format", "json", "--cache", str(tmp_path / "cache"),
        ])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["schema_version"] == 1
        from jointblup import blue_estimate, joint_blup

        ms = moments_for("normal", 10)
        blue = blue_estimate(schmee_hahn, ms)
        jp = joint_blup(schmee_hahn, ms, 6, 7)
        assert doc["estimate"]["location"] == pytest.approx(blue.location, rel=1e-12)
        assert doc["pairs"][0]["joint"]["predicted_s"] == pytest.approx(jp.predicted_s, rel=1e-12)
        assert doc["pairs"][0]["efficiency"]["d_efficiency"] == pytest.approx(0.9737, abs=0.002)

    def test_json_output_is_deterministic(self, sample_csv, tmp_path, capsys):
        argv = [
            "predict", "--family", "normal", "--n", "10", "--input", str(sample_csv),
            "--targets", "6,7;9,10", "--format", "json", "--cache", str(tmp_path / "cache"),
        ]
        assert main(argv) == 0
        first = capsys.readouterr().out
        assert main(argv) == 0
        assert capsys.readouterr().out == first

    def test_estimate_table_output(self, sample_csv, capsys):
        code = main([
            "estimate", "--family", "normal", "--n", "10",
            "--input", str(sample_csv), "--r", "5",
        ])
        assert code == 0
        out = capsys.readouterr().out
        assert "location" in out and "scale" in out

    def test_estimate_r_mismatch(self, sample_csv, capsys):
        code = main([
            "estimate", "--family", "normal", "--n", "10",
            "--input", str(sample_csv), "--r", "4",
        ])
        assert code == 1
        assert "r=4" in capsys.readouterr().err

    def test_moments_command(self, tmp_path, capsys):
        code = main([
            "moments", "--family", "exponential", "--n", "4",
            "--format", "json", "--cache", str(tmp_path),
        ])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["provenance"] == "closed-form"
        assert doc["means"][0] == pytest.approx(0.25)
        assert (tmp_path / "exponential_n04.json").exists()

    def test_moments_quadrature_overrides(self, capsys):
        code = main([
            "moments", "--family", "normal", "--n", "3", "--format", "json",
            "--quad-panels", "6", "--quad-nodes", "12", "--quad-grading", "0.3",
        ])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["quadrature"] == {
            "panels_per_side": 6, "nodes_per_panel": 12, "grading": 0.3,
        }

    def test_predict_single_target_only(self, sample_csv, capsys):
        code = main([
            "predict", "--family", "normal", "--n", "10",
            "--input", str(sample_csv), "--targets", "8", "--format", "json",
        ])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["pairs"] == []
        assert [m["target"] for m in doc["marginal"]] == [8]

    def test_efficiency_command(self, sample_csv, capsys):
        code = main([
            "efficiency", "--family", "normal", "--n", "10",
            "--input", str(sample_csv), "--targets", "6,7",
        ])
        assert code == 0
        assert "0.9737" in capsys.readouterr().out

    def test_efficiency_rejects_single_targets(self, sample_csv, capsys):
        code = main([
            "efficiency", "--family", "normal", "--n", "10",
            "--input", str(sample_csv), "--targets", "6",
        ])
        assert code == 1
        assert "pairs" in capsys.readouterr().err


class TestValidationExits:
    def test_three_target_request_is_infeasible(self, sample_csv, capsys):
        code = main([
            "predict", "--family", "normal", "--n", "10",
            "--input", str(sample_csv), "--targets", "6,7,8",
        ])
        assert code == 1
        err = capsys.readouterr().err
        assert "infeasible-count" in err

    def test_duplicate_pair_target_rejected_before_compute(self, sample_csv, capsys):
        code = main([
            "predict", "--family", "normal", "--n", "10",
            "--input", str(sample_csv), "--targets", "6,6",
        ])
        assert code == 1
        assert "increasing" in capsys.readouterr().err

    def test_unknown_family(self, sample_csv, capsys):
        code = main([
            "predict", "--family", "weibull", "--n", "10",
            "--input", str(sample_csv), "--targets", "6,7",
        ])
        assert code == 1
        assert "unsupported family" in capsys.readouterr().err

    def test_target_below_r_rejected(self, sample_csv, capsys):
        code = main([
            "predict", "--family", "normal", "--n", "10",
            "--input", str(sample_csv), "--targets", "5,7",
        ])
        assert code == 1
        assert "target 5" in capsys.readouterr().err

    def test_usage_error_exits_1(self, capsys):
        code = main(["predict", "--family", "normal"])
        assert code == 1

    def test_numerical_failure_exits_2(self, capsys):
        # a hopelessly coarse quadrature fails moment validation
        code = main([
            "moments", "--family", "normal", "--n", "10",
            "--quad-panels", "1", "--quad-nodes", "2", "--quad-grading", "0.5",
        ])
        assert code == 2
        assert "numerical failure" in capsys.readouterr().err


class TestReproduce:
    def test_table2_reproduces_fully(self, tmp_path, capsys):
        code = main(["reproduce", "table2", "--format", "json", "--cache", str(tmp_path)])
        doc = json.loads(capsys.readouterr().out)
        assert code == 0
        assert doc["passed"] is True
        assert doc["summary"] == {"total": 180, "failed": 0}

    def test_table1_reports_known_prediction_mismatches(self, tmp_path, capsys):
        # the bundled reference predictions are inconsistent with the bundled
        # reference coefficients; the harness must say so, not hide it
        code = main(["reproduce", "table1", "--format", "json", "--cache", str(tmp_path)])
        doc = json.loads(capsys.readouterr().out)
        assert code == 3
        assert doc["passed"] is False
        failed_cells = {c["cell"] for c in doc["checks"] if not c["passed"]}
        assert failed_cells == {
            f"{kind}_prediction[{s}]" for kind in ("marginal", "joint") for s in range(6, 11)
        }
        efficiency_cells = [c for c in doc["checks"] if "efficiency" in c["cell"] or "gain" in c["cell"]]
        assert len(efficiency_cells) == 30
        assert all(c["passed"] for c in efficiency_cells)
        gains = [c for c in doc["checks"] if c["cell"].startswith("overall_gain")]
        assert len(gains) == 10
        assert all(c["computed"] > 0 for c in gains)

    def test_table_render_mentions_failures(self, tmp_path, capsys):
        code = main(["reproduce", "table1", "--cache", str(tmp_path)])
        assert code == 3
        out = capsys.readouterr().out
        assert "FAIL" in out and "cells reproduced" in out
