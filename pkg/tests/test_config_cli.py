"""Config parsing and the command-line front end (exit codes, files)."""

import json

import numpy as np
import pytest

import mbmint as mb
from mbmint import cli, theory
from mbmint.config import load_config
from mbmint.errors import ConfigError

GOOD = """
[hurst]
family = "constant"
h = 0.75

[experiment]
n_grid = [64, 128, 256]
replications = 1000
master_seed = 20250809
"""

SIN_VOLTERRA = """
[hurst]
family = "sin"
h0 = 0.7
h1 = 0.1

[simulator]
kind = "volterra"
oversample = 4

[experiment]
n_grid = [16, 32, 64]
replications = 200
master_seed = 11
"""


def write(tmp_path, text, name="config.toml"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


class TestLoadConfig:
    def test_defaults_fill_optional_sections(self, tmp_path):
        app = load_config(write(tmp_path, GOOD))
        cfg = app.experiment
        assert cfg.hurst.h_min == 0.75
        assert cfg.payoff.name == "call(a=0)"
        assert cfg.simulator == "cholesky"
        assert cfg.n_grid == (64, 128, 256)
        assert app.output.report == "report.json"

    def test_inline_table_syntax(self, tmp_path):
        text = 'hurst = { family = "sin", h0 = 0.7, h1 = 0.1, phase = 0.0 }\n' \
               'payoff = { kind = "call", a = 0.0 }\n'
        app = load_config(write(tmp_path, text))
        assert app.experiment.hurst(0.25) == pytest.approx(0.8, abs=1e-12)

    def test_unknown_key_names_location(self, tmp_path):
        bad = GOOD + "\n[payoff]\nkinds = \"call\"\n"
        with pytest.raises(ConfigError, match=r"\[payoff\] unknown key 'kinds'"):
            load_config(write(tmp_path, bad))

    def test_unknown_section_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match=r"unknown section \[plotting\]"):
            load_config(write(tmp_path, GOOD + "\n[plotting]\nstyle = 1\n"))

    def test_missing_hurst_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match=r"\[hurst\]"):
            load_config(write(tmp_path, "[payoff]\nkind = \"call\"\n"))

    def test_type_errors_are_located(self, tmp_path):
        bad = GOOD.replace("replications = 1000", 'replications = "many"')
        with pytest.raises(ConfigError, match="replications"):
            load_config(write(tmp_path, bad))

    def test_malformed_toml(self, tmp_path):
        with pytest.raises(ConfigError, match="parse error"):
            load_config(write(tmp_path, "[hurst\nfamily ="))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(tmp_path / "nope.toml")


class TestValidateCommand:
    def test_pass(self, tmp_path, capsys):
        code = cli.main(["validate", write(tmp_path, GOOD)])
        out = capsys.readouterr().out
        assert code == 0
        assert "(A1) pass" in out and "(A2) pass" in out

    def test_a1_failure_exit_one(self, tmp_path, capsys):
        bad = GOOD.replace("h = 0.75", "h = 0.5")
        code = cli.main(["validate", write(tmp_path, bad)])
        assert code == 1
        assert "(A1)" in capsys.readouterr().out

    def test_parse_error_exit_two(self, tmp_path):
        assert cli.main(["validate", write(tmp_path, "not toml [")]) == 2


class TestSimulateCommand:
    def test_csv_shape_and_origin(self, tmp_path, capsys):
        out = tmp_path / "path.csv"
        code = cli.main(
            ["simulate", write(tmp_path, GOOD), "--n", "4", "--seed", "1",
             "--out", str(out)]
        )
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "t,x"
        assert len(lines) == 6
        assert lines[1] == "0,0"

    def test_byte_identical_reruns(self, tmp_path):
        cfgp = write(tmp_path, GOOD)
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        cli.main(["simulate", cfgp, "--n", "8", "--seed", "3", "--out", str(out1)])
        cli.main(["simulate", cfgp, "--n", "8", "--seed", "3", "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()

    def test_isometry_echo_for_volterra(self, tmp_path, capsys):
        code = cli.main(
            ["simulate", write(tmp_path, SIN_VOLTERRA), "--n", "16",
             "--out", str(tmp_path / "p.csv")]
        )
        assert code == 0
        assert "isometry" in capsys.readouterr().out


class TestConstantCommand:
    def test_json_payload(self, tmp_path, capsys):
        code = cli.main(["constant", write(tmp_path, GOOD)])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["exponents"]["h_tilde"] == 0.75
        assert payload["exponents"]["leading_exponent"] == pytest.approx(0.5)
        assert payload["leading_constant"] == pytest.approx(0.7978845608, rel=1e-8)
        h = mb.constant_hurst(0.75)
        assert payload["inner"]["0"] == pytest.approx(
            mb.leading_constant_inner(h, 0.0), rel=1e-12
        )


class TestConvergeCommand:
    def test_writes_report_and_errors(self, tmp_path, capsys):
        out = tmp_path / "results"
        code = cli.main(
            ["converge", write(tmp_path, GOOD), "--out", str(out)]
        )
        assert code == 0
        report = json.loads((out / "report.json").read_text())
        assert report["verdicts"]["all_pass"] is True
        assert [row["n"] for row in report["per_n"]] == [64, 128, 256]
        lines = (out / "errors.csv").read_text().strip().splitlines()
        assert lines[0] == "n,mean,stderr,normalized"
        assert len(lines) == 4

    def test_verdict_failure_exit_one(self, tmp_path, monkeypatch):
        """Inject a wrong theoretical slope through the theory hook."""
        real = theory.rate_exponents

        def wrong(h, delta=1e-3, force=False):
            ex = real(h, delta, force)
            return theory.RateExponents(
                h_tilde=ex.h_tilde,
                leading_exponent=2.5,  # absurd decay no finite run achieves
                remainder_exponent=2.6,
                lower_bound_applicable=ex.lower_bound_applicable,
                lower_leading_exponent=ex.lower_leading_exponent,
            )

        monkeypatch.setattr(theory, "rate_exponents", wrong)
        code = cli.main(
            ["converge", write(tmp_path, GOOD), "--out", str(tmp_path / "r")]
        )
        assert code == 1

    def test_missing_required_section_exit_two(self, tmp_path):
        code = cli.main(
            ["converge", write(tmp_path, '[payoff]\nkind = "call"\n')]
        )
        assert code == 2

    def test_quadratic_payoff_round_trip(self, tmp_path):
        """Density-measure payoff: report serializes and the normalized error
        hits the exact constant 1/2 (smooth case has no remainder)."""
        text = GOOD + '\n[payoff]\nkind = "quadratic"\n'
        out = tmp_path / "q"
        code = cli.main(["converge", write(tmp_path, text), "--out", str(out)])
        assert code == 0
        report = json.loads((out / "report.json").read_text())
        assert report["leading_constant_theory"] == pytest.approx(0.5, rel=1e-8)
        assert report["per_n"][-1]["normalized"] == pytest.approx(0.5, rel=0.05)

    def test_threads_byte_identical_reports(self, tmp_path):
        cfgp = write(tmp_path, GOOD)
        cli.main(["converge", cfgp, "--threads", "1", "--out", str(tmp_path / "t1")])
        cli.main(["converge", cfgp, "--threads", "4", "--out", str(tmp_path / "t4")])
        b1 = (tmp_path / "t1" / "report.json").read_bytes()
        b4 = (tmp_path / "t4" / "report.json").read_bytes()
        assert b1 == b4


class TestLemmasCommand:
    def test_defaults_pass(self, capsys):
        assert cli.main(["lemmas"]) == 0
        out = capsys.readouterr().out
        assert "pass" in out and "bounded" in out

    def test_lowered_bound_fails(self):
        assert cli.main(["lemmas", "--bound", "1.0"]) == 1

    def test_empty_grid_exit_two(self):
        assert cli.main(["lemmas", "--a-grid", ""]) == 2

    def test_usage_error_exit_two(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["frobnicate"])
        assert exc.value.code == 2
