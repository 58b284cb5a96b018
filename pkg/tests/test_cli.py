import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from zdlab.cli import main


def _run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _read_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


class TestVerifyTft:
    def test_all_c_opponent_passes(self, capsys):
        code, out, err = _run(["verify-tft", "--opponent", "all_c"], capsys)
        assert code == 0
        header, rows = _read_csv(out)
        row = dict(zip(header, rows[0]))
        assert float(row["pi_cc"]) == 1.0
        assert float(row["dev_k1"]) == 0.0
        assert row["pass"] == "true"
        assert "1/1 opponents passed" in err

    def test_tft_opponent_from_cd(self, capsys):
        code, out, _ = _run(
            ["verify-tft", "--opponent", "tft", "--initial", "cd"], capsys
        )
        assert code == 0
        header, rows = _read_csv(out)
        row = dict(zip(header, rows[0]))
        assert (float(row["pi_cd"]), float(row["pi_dc"])) == (0.5, 0.5)
        assert float(row["pi_cd_minus_pi_dc"]) == 0.0
        assert row["unique"] == "false"  # TFT vs TFT has three recurrent classes

    def test_chain_structure_surfaced_when_not_unique(self, capsys):
        code, out, _ = _run(
            ["verify-tft", "--opponent", "tft", "--initial", "cd",
             "--format", "json"],
            capsys,
        )
        assert code == 0
        row = json.loads(out)["rows"][0]
        assert row["unique"] is False
        classes = {tuple(c["states"]): (c["recurrent"], c["period"])
                   for c in row["chain_classes"]}
        assert classes[("cd", "dc")] == (True, 2)
        assert classes[("cc",)] == (True, 1)

    def test_random_opponents(self, capsys):
        code, out, _ = _run(["verify-tft", "--random", "25", "--seed", "42"], capsys)
        assert code == 0
        _, rows = _read_csv(out)
        assert len(rows) == 25

    def test_flagship_thousand_opponents(self, capsys):
        code, out, err = _run(["verify-tft", "--random", "1000", "--seed", "42"], capsys)
        assert code == 0
        assert "1000/1000 opponents passed" in err
        _, rows = _read_csv(out)
        assert len(rows) == 1000 and all(r[-1] == "true" for r in rows)

    def test_json_format(self, capsys):
        code, out, _ = _run(
            ["verify-tft", "--opponent", "wsls", "--format", "json"], capsys
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["all_passed"] is True
        assert payload["manifest"]["command"] == "verify-tft"
        assert payload["manifest"]["payoffs"] == {"R": 3.0, "S": 0.0, "T": 5.0, "P": 1.0}

    def test_zero_random_is_usage_error(self, capsys):
        code, _, err = _run(["verify-tft", "--random", "0"], capsys)
        assert code == 2

    def test_manifest_on_stderr_for_csv_stdout(self, capsys):
        _, _, err = _run(["verify-tft", "--opponent", "all_d"], capsys)
        manifest = json.loads(err.split("verify-tft:")[0])
        assert manifest["tool"] == "zdlab"


class TestDecompose:
    def test_tft_zd(self, capsys):
        code, out, _ = _run(["decompose", "tft"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["exact"] is True
        assert payload["coefficients"]["s1"] == pytest.approx(0.2, abs=1e-12)
        assert payload["coefficients"]["s2"] == pytest.approx(-0.2, abs=1e-12)
        assert payload["coefficients"]["1"] == pytest.approx(0.0, abs=1e-12)

    def test_wsls_zd_inexact(self, capsys):
        code, out, _ = _run(["decompose", "wsls", "--basis", "zd"], capsys)
        assert code == 0  # degeneracy and misfit are data, not errors
        payload = json.loads(out)
        assert payload["exact"] is False
        assert payload["residual_norm"] > 1e-6

    def test_wsls_wsls4_exact(self, capsys):
        code, out, _ = _run(["decompose", "wsls", "--basis", "wsls4"], capsys)
        payload = json.loads(out)
        assert payload["exact"] is True
        assert payload["coefficients"]["s1"] == pytest.approx(-51 / 140, abs=1e-12)
        assert payload["coefficients"]["s2"] == pytest.approx(-79 / 140, abs=1e-12)
        assert payload["coefficients"]["s1*s2"] == pytest.approx(3 / 28, abs=1e-12)
        assert payload["coefficients"]["1"] == pytest.approx(51 / 28, abs=1e-12)

    def test_monomial_basis_spans_generic_strategies(self, capsys):
        code, out, _ = _run(
            ["decompose", "0.3,0.4,0.5,0.6", "--basis", "monomial:3"], capsys
        )
        assert code == 0
        assert json.loads(out)["exact"] is True

    def test_exponential_basis_contains_tft_only(self, capsys):
        code, out, _ = _run(["decompose", "tft", "--basis", "exp:0.5"], capsys)
        assert code == 0 and json.loads(out)["exact"] is True
        code, out, _ = _run(
            ["decompose", "0.3,0.4,0.5,0.6", "--basis", "exp:0.5"], capsys
        )
        assert code == 0 and json.loads(out)["exact"] is False

    def test_csv_format(self, capsys, tmp_path):
        out_file = tmp_path / "d.csv"
        code, _, _ = _run(
            ["decompose", "tft", "--format", "csv", "--out", str(out_file)], capsys
        )
        assert code == 0
        header, rows = _read_csv(out_file.read_text())
        assert header[:2] == ["label", "coefficient"]
        assert len(rows) == 3
        assert (tmp_path / "d.manifest.json").exists()

    def test_unknown_basis(self, capsys):
        code, _, err = _run(["decompose", "tft", "--basis", "fourier"], capsys)
        assert code == 2 and "basis" in err

    def test_unknown_strategy(self, capsys):
        code, _, _ = _run(["decompose", "grim"], capsys)
        assert code == 2


class TestSimulate:
    def test_tft_vs_alld(self, capsys):
        code, out, _ = _run(
            ["simulate", "tft", "all_d", "--rounds", "1000", "--seed", "7",
             "--initial", "cc"],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["report"]["frequencies"][3] >= 0.997
        assert payload["report"]["prng"] == "numpy.random.PCG64"

    def test_byte_identical_outputs(self, capsys, tmp_path):
        argv = ["simulate", "tft", "random:0.3", "--rounds", "2000", "--seed", "9"]
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        assert main(argv + ["--out", str(first)]) == 0
        assert main(argv + ["--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_csv_summary_sidecar(self, capsys, tmp_path):
        out_file = tmp_path / "run.json"
        main(["simulate", "wsls", "tft", "--rounds", "500", "--out", str(out_file)])
        header, rows = _read_csv((tmp_path / "run.csv").read_text())
        assert header == ["state", "count", "frequency"]
        assert [r[0] for r in rows] == ["cc", "cd", "dc", "dd"]
        assert sum(int(r[1]) for r in rows) == 500

    def test_epsilon_out_of_range(self, capsys):
        code, _, err = _run(["simulate", "tft", "all_d", "--epsilon", "0.7"], capsys)
        assert code == 2 and "noise" in err

    def test_burn_in_must_leave_rounds(self, capsys):
        code, _, err = _run(
            ["simulate", "tft", "all_d", "--rounds", "100", "--burn-in", "100"], capsys
        )
        assert code == 2 and "empty sample" in err


class TestSweep:
    def test_wsls_payoff_dependence(self, capsys):
        code, out, _ = _run(
            ["sweep", "--wsls-coeffs", "--payoff-grid", "T=4.5,5.0,5.5"], capsys
        )
        assert code == 0
        header, rows = _read_csv(out)
        assert len(rows) == 3
        coeff_cols = [header.index(c) for c in ("alpha_s1", "alpha_s2", "alpha_s1s2", "gamma")]
        vectors = {tuple(row[i] for i in coeff_cols) for row in rows}
        assert len(vectors) == 3  # three distinct coefficient vectors

    def test_degenerate_grid_point_is_isolated(self, capsys):
        # R = P = 1 is constructible only permissively and drops the rank
        code, out, _ = _run(
            ["sweep", "--wsls-coeffs", "--payoff-grid", "R=1.0,3.0"], capsys
        )
        assert code == 0
        header, rows = _read_csv(out)
        assert rows[0][header.index("rank")] == "3"
        assert rows[0][header.index("exact")] == "false"
        assert rows[1][header.index("rank")] == "4"

    def test_unbuildable_grid_point_reported_in_row(self, capsys):
        # T = S = 0 cannot form even a permissive matrix; the sweep continues
        code, out, _ = _run(
            ["sweep", "--wsls-coeffs", "--payoff-grid", "T=0.0,5.0;S=0.0"], capsys
        )
        assert code == 0
        header, rows = _read_csv(out)
        assert "T != S" in rows[0][header.index("error")]
        assert rows[1][header.index("error")] == ""

    def test_tft_k_range(self, capsys):
        code, out, _ = _run(["sweep", "--tft-k-range", "1:10"], capsys)
        assert code == 0
        header, rows = _read_csv(out)
        assert len(rows) == 10
        assert all(float(r[header.index("max_abs_error")]) <= 1e-12 for r in rows)

    def test_h_range(self, capsys):
        # values starting with '-' need the = form, as usual with argparse
        code, out, _ = _run(["sweep", "--h-range=-2,-1,-0.5,0.5,1,2"], capsys)
        assert code == 0
        _, rows = _read_csv(out)
        assert len(rows) == 6
        header, _ = _read_csv(out)
        coeff = float(rows[0][header.index("coefficient")])
        assert coeff == pytest.approx(1.0 / (np.exp(-10.0) - 1.0))

    def test_empty_grid_is_usage_error(self, capsys):
        code, _, err = _run(["sweep", "--wsls-coeffs", "--payoff-grid", ""], capsys)
        assert code == 2
        code, _, _ = _run(["sweep", "--tft-k-range", "5:1"], capsys)
        assert code == 2
        code, _, _ = _run(["sweep", "--h-range", ""], capsys)
        assert code == 2

    def test_exactly_one_mode_required(self, capsys):
        code, _, _ = _run(["sweep"], capsys)
        assert code == 2
        code, _, _ = _run(
            ["sweep", "--tft-k-range", "1:3", "--h-range", "1"], capsys
        )
        assert code == 2

    def test_json_format(self, capsys):
        code, out, _ = _run(
            ["sweep", "--tft-k-range", "1:3", "--format", "json"], capsys
        )
        payload = json.loads(out)
        assert [row["k"] for row in payload["rows"]] == [1, 2, 3]


class TestEntryPoints:
    def test_module_invocation(self):
        result = subprocess.run(
            [sys.executable, "-m", "zdlab", "--version"],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0
        assert "zdlab" in result.stdout

    def test_usage_error_exit_code(self):
        result = subprocess.run(
            [sys.executable, "-m", "zdlab", "simulate", "tft"],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 2

    def test_malformed_payoffs(self, capsys):
        code, _, err = _run(["decompose", "tft", "--payoffs", "3,0,5"], capsys)
        assert code == 2 and "payoffs" in err
