import json
import math

import click
import pytest
from click.testing import CliRunner

from favard_l1.cli import main, parse_float_list, parse_n_range


@pytest.fixture
def runner():
    return CliRunner()


def run_json(runner, args):
    result = runner.invoke(main, args + ["--format", "json"])
    assert result.exit_code == 0, result.output
    return json.loads(result.output)

###############################################################################################################
# Argument parsing

def test_parse_n_range():
    assert parse_n_range("2..5", 2, 256) == [2, 3, 4, 5]
    assert parse_n_range("7", 2, 256) == [7]
    for text in ("1..3", "5..2", "2..300", "a..b", ""):
        with pytest.raises(click.BadParameter):
            parse_n_range(text, 2, 256)


def test_parse_float_list():
    assert parse_float_list("0.25, 3/8") == [0.25, 0.375]
    with pytest.raises(click.BadParameter):
        parse_float_list("1/0")

###############################################################################################################
# constants

def test_constants_table(runner):
    result = runner.invoke(main, ["constants", "--r-max", "6"])
    assert result.exit_code == 0, result.output
    assert "61/46080*pi^6" in result.output


def test_constants_csv_for_r0(runner):
    result = runner.invoke(main, ["constants", "--r-max", "0", "--format", "csv"])
    assert result.exit_code == 0
    assert len(result.output.splitlines()) == 2


def test_constants_json_values(runner):
    document = run_json(runner, ["constants", "--r-max", "3"])
    assert document["passed"] is True
    assert document["rows"][2]["K_r"] == pytest.approx(math.pi ** 2 / 8, abs=1e-15)
    assert document["rows"][3]["exact"] == "1/24*pi^3"


def test_constants_rejects_large_r(runner):
    assert runner.invoke(main, ["constants", "--r-max", "65"]).exit_code == 2

###############################################################################################################
# certify

def test_certify_k1_json(runner):
    document = run_json(runner, ["certify", "K1", "2..3"])
    rows = document["rows"]
    assert [row["n"] for row in rows] == [2, 3]
    assert rows[0]["lower"] == pytest.approx(1.0, abs=1e-10)
    assert all(row["passed"] and row["sign_ok"] for row in rows)
    assert all(row["lower_error"] <= 1e-10 for row in rows)


def test_certify_lowercase_kernel_csv(runner):
    result = runner.invoke(main, ["certify", "k2", "4", "--format", "csv"])
    assert result.exit_code == 0, result.output
    header, row = result.output.splitlines()
    assert header.startswith("kernel,n,lower,upper,gap")
    assert row.startswith("K2,4,")


@pytest.mark.parametrize("args", [["certify", "B13", "2..3"], ["certify", "K1", "1..3"],
                                  ["certify", "K1", "3..x"], ["certify", "K1"]])
def test_certify_usage_errors(runner, args):
    assert runner.invoke(main, args).exit_code == 2

###############################################################################################################
# steklov, series, lipschitz

def test_steklov_exact_regime(runner):
    document = run_json(runner, ["steklov", "--m", "2", "--h", "1/4", "--n", "2"])
    row = document["rows"][0]
    assert row["regime"] == "EXACT"
    assert row["value"] == pytest.approx(0.5, abs=1e-12)
    assert row["certified"] is True
    assert document["passed"] is True


def test_steklov_out_of_domain_exits_1(runner):
    result = runner.invoke(main, ["steklov", "--m", "3", "--h", "0.5", "--n", "2"])
    assert result.exit_code == 1
    assert "Error" in result.output


def test_series_k1(runner):
    document = run_json(runner, ["series", "K1"])
    row = document["rows"][0]
    assert row["R"] == 40
    assert row["max_error"] <= 1e-8
    assert row["tail_bound"] <= 1e-10


def test_series_short_truncation_fails(runner):
    result = runner.invoke(main, ["series", "K2", "--R", "2", "--format", "json"])
    assert result.exit_code == 1
    row = json.loads(result.output)["rows"][0]
    assert row["R"] == 2
    assert row["tail_bound"] > 1e-8
    assert row["passed"] is False


def test_series_loose_tolerance_accepts_short_truncation(runner):
    document = run_json(runner, ["series", "K2", "--R", "2", "--tol", "10"])
    assert document["rows"][0]["passed"] is True


def test_lipschitz_abs(runner):
    document = run_json(runner, ["lipschitz", "abs", "2..4"])
    rows = document["rows"]
    assert [row["n"] for row in rows] == [2, 3, 4]
    assert all(row["max_slack"] <= 1e-9 for row in rows)
    assert rows[0]["T"] == pytest.approx(1.0, abs=1e-15)


def test_lipschitz_shifted(runner):
    document = run_json(runner, ["lipschitz", "abs_shifted", "4", "--shift", "-0.25"])
    assert document["rows"][0]["function"] == "abs_shifted(-0.25)"
    assert document["passed"] is True

###############################################################################################################
# Output and configuration

def test_output_is_deterministic(runner):
    args = ["certify", "B2", "2..3", "--format", "json"]
    assert runner.invoke(main, args).output == runner.invoke(main, args).output


def test_out_writes_file(runner, tmp_path):
    path = tmp_path / "constants.csv"
    result = runner.invoke(main, ["constants", "--r-max", "2", "--format", "csv", "--out", str(path)])
    assert result.exit_code == 0
    assert result.output == ""
    assert path.read_text().splitlines()[0].startswith("r,K_r,exact")


def test_config_override(runner, write_config):
    path = write_config("float_digits: 6\n")
    result = runner.invoke(main, ["--config", path, "constants", "--r-max", "1", "--format", "csv"])
    assert result.exit_code == 0, result.output
    assert "1.5708," in result.output


def test_config_unknown_key_is_a_usage_error(runner, write_config):
    path = write_config("grid_size: 10\n")
    result = runner.invoke(main, ["--config", path, "constants"])
    assert result.exit_code == 2


def test_missing_config_file(runner, tmp_path):
    result = runner.invoke(main, ["--config", str(tmp_path / "missing.yaml"), "constants"])
    assert result.exit_code == 2
