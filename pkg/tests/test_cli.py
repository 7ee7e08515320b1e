"""Command-line entry points and their exit-code contract."""

import pytest

import fasmon.channel
from fasmon import CSV_HEADER, parse_csv
from fasmon.cli import main
from fasmon.validation import run_validation


def _cfg(tmp_path, text):
    path = tmp_path / "run.cfg"
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestRun:
    def test_happy_path_with_svg(self, tmp_path):
        cfg = _cfg(tmp_path, "experiment = custom\n"
                             "sweep_variable = ratio_db\n"
                             "sweep_values = -12, -8\n"
                             "schemes = ProposedClosedForm, Passive\n")
        out = tmp_path / "rows.csv"
        svg = tmp_path / "rows.svg"
        rc = main(["run", "--config", cfg, "--out", str(out), "--svg", str(svg)])
        assert rc == 0
        rows = parse_csv(str(out))
        assert len(rows) == 4
        assert svg.read_text(encoding="utf-8").startswith("<svg")

    def test_set_overrides(self, tmp_path):
        cfg = _cfg(tmp_path, "")
        out = tmp_path / "rows.csv"
        rc = main(["run", "--config", cfg, "--out", str(out),
                   "--set", "experiment=custom",
                   "--set", "sweep_variable=ratio_db",
                   "--set", "sweep_values=-10",
                   "--set", "schemes=Passive"])
        assert rc == 0
        rows = parse_csv(str(out))
        assert [(r.scheme, r.x_value) for r in rows] == [("Passive", -10.0)]

    def test_missing_config_file(self, tmp_path, capsys):
        rc = main(["run", "--config", str(tmp_path / "absent.cfg"),
                   "--out", str(tmp_path / "rows.csv")])
        assert rc == 1
        assert "cannot read config" in capsys.readouterr().err

    def test_bad_config_reports_location(self, tmp_path, capsys):
        cfg = _cfg(tmp_path, "p_s_db = 20\nmystery = 1\n")
        rc = main(["run", "--config", cfg, "--out", str(tmp_path / "rows.csv")])
        assert rc == 2
        err = capsys.readouterr().err
        assert "mystery" in err and "line 2" in err

    def test_partial_sweep_writes_and_signals(self, tmp_path, capsys):
        # the bisection scheme needs two ports, so the n_ports = 1 point
        # fails while the rest of the sweep completes
        cfg = _cfg(tmp_path, "experiment = custom\n"
                             "sweep_variable = n_ports\n"
                             "sweep_values = 1, 2\n"
                             "schemes = ProposedBisect\n")
        out = tmp_path / "rows.csv"
        rc = main(["run", "--config", cfg, "--out", str(out)])
        assert rc == 3
        assert "partial result: 1 of 2" in capsys.readouterr().err
        rows = parse_csv(str(out))
        assert [(r.scheme, r.x_value) for r in rows] == [("ProposedBisect", 2.0)]

    def test_unwritable_output(self, tmp_path, capsys):
        cfg = _cfg(tmp_path, "experiment = custom\n"
                             "sweep_variable = ratio_db\n"
                             "sweep_values = -10\n"
                             "schemes = Passive\n")
        rc = main(["run", "--config", cfg,
                   "--out", str(tmp_path / "no" / "such" / "dir.csv")])
        assert rc == 1
        assert "cannot write output" in capsys.readouterr().err


class TestValidate:
    def test_quick_suite_passes(self, capsys):
        rc = main(["validate"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "all 12 checks passed" in out
        assert out.count("[PASS]") == 12

    def test_seed_flag_accepted(self, capsys):
        assert main(["validate", "--seed", "999"]) == 0
        capsys.readouterr()

    def test_detects_corrupted_channel_model(self, monkeypatch, capsys):
        # breaking the sampler's residual weight must fail the Monte Carlo
        # cross-check and nothing upstream of it
        monkeypatch.setattr(fasmon.channel, "_mix_weight", lambda mu: 1.0 - mu)
        rc = run_validation(seed=12345)
        out = capsys.readouterr().out
        assert rc == 4
        assert "[FAIL] mc-monitor-outage" in out


def test_header_is_stable():
    assert CSV_HEADER == ("experiment,scheme,x_name,x_value,r_star_bits,"
                          "pm_star_db,rate_analytic,rate_mc_mean,"
                          "rate_mc_ci95,clamped")
