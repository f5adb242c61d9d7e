"""CLI surface: dispatch, determinism, provenance embedding, exit codes."""

import json

import numpy as np
import pytest

from branchlaw import batch_from_json
from branchlaw.cli import build_parser, main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


class TestConstants:
    def test_prints_r_star_and_agreement(self, capsys):
        code, out = run(["constants", "--abs-tol", "1e-10"], capsys)
        assert code == 0
        assert "2.55269463584" in out
        assert "|difference|" in out


class TestMoments:
    def test_csv_contains_second_moment_row(self, tmp_path, capsys):
        out_file = tmp_path / "m.csv"
        code, _ = run(["moments", "--alpha", "1", "-K", "5", "--out", str(out_file)], capsys)
        assert code == 0
        lines = out_file.read_text().splitlines()
        cfg = json.loads(lines[0][2:])
        assert cfg["alpha"] == 1.0
        row = dict(zip(lines[1].split(","), lines[3].split(",")))
        assert row["k"] == "2"
        assert float(row["mu_k"]) == pytest.approx(4.0 / 3.0, rel=1e-15)

    def test_json_format(self, tmp_path, capsys):
        out_file = tmp_path / "m.json"
        code, _ = run(["moments", "-K", "3", "--format", "json", "--out", str(out_file)],
                      capsys)
        assert code == 0
        payload = json.loads(out_file.read_text())
        assert payload["config"]["schema_version"] == 1
        assert len(payload["rows"]) == 3


class TestTables:
    def test_mgf_grid(self, tmp_path, capsys):
        out_file = tmp_path / "mgf.csv"
        code, out = run(["mgf", "--grid", "0.1:0.5:3", "--out", str(out_file)], capsys)
        assert code == 0
        lines = out_file.read_text().splitlines()
        assert lines[1].split(",")[:2] == ["r", "r_over_rstar"]
        assert len(lines) == 5

    def test_laplace_grid(self, tmp_path, capsys):
        out_file = tmp_path / "lap.csv"
        code, _ = run(["laplace", "--grid", "0.5:10:4", "--out", str(out_file)], capsys)
        assert code == 0
        rows = out_file.read_text().splitlines()[2:]
        vals = [float(r.split(",")[1]) for r in rows]
        assert all(a > b for a, b in zip(vals, vals[1:]))


class TestSimulate:
    def test_w_csv_deterministic(self, tmp_path, capsys):
        f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["simulate", "--kind", "w", "--samples", "500", "--seed", "9"]
        assert run(args + ["--out", str(f1)], capsys)[0] == 0
        assert run(args + ["--out", str(f2)], capsys)[0] == 0
        assert f1.read_bytes() == f2.read_bytes()

    def test_w1_json_loads_as_batch(self, tmp_path, capsys):
        out_file = tmp_path / "w1.json"
        code, _ = run(["simulate", "--kind", "w1", "--samples", "300", "--seed", "4",
                       "--format", "json", "--out", str(out_file)], capsys)
        assert code == 0
        batch = batch_from_json(out_file)
        assert batch.n == 300
        assert float(batch.values.min()) >= 0.0

    def test_selfdecomp_writes_both_sides(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("BRANCHLAW_OUTDIR", str(tmp_path))
        code, out = run(["simulate", "--kind", "selfdecomp", "--samples", "200",
                        "--seed", "3"], capsys)
        assert code == 0
        assert (tmp_path / "batch_selfdecomp_lhs.csv").exists()
        assert (tmp_path / "batch_selfdecomp_rhs.csv").exists()

    def test_config_embedded(self, tmp_path, capsys):
        out_file = tmp_path / "w.csv"
        run(["simulate", "--kind", "w", "--samples", "100", "--seed", "11",
             "--prune-eps", "0.01", "--out", str(out_file)], capsys)
        header = json.loads(out_file.read_text().splitlines()[0][2:])
        assert header["params"]["seed"] == 11
        assert header["params"]["prune_eps"] == 0.01


class TestParser:
    def test_unknown_command_exits_2(self):
        with pytest.raises(SystemExit) as err:
            build_parser().parse_args(["frobnicate"])
        assert err.value.code == 2

    def test_bad_flag_exits_2(self):
        with pytest.raises(SystemExit) as err:
            build_parser().parse_args(["simulate", "--no-such-flag"])
        assert err.value.code == 2

    def test_verify_flags_parse(self):
        ns = build_parser().parse_args(
            ["verify", "--samples", "1000", "--seed", "42", "--slow-suite"])
        assert ns.samples == 1000
        assert ns.slow_suite is True
