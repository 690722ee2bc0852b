#!/usr/bin/env python3
"""
Test script for the command line: exit codes, output formats and settings
"""

import json
import logging
import os
import tempfile

import pytest
from dotenv import load_dotenv
from pydantic import ValidationError
from typer.testing import CliRunner

from helpers.delsarte_lp import lp_from_json
from helpers.errors import ParameterError
from helpers.simplex import solve_exact
from main import EXIT_CAP, EXIT_FAILURE, EXIT_USAGE, app
from schemas import RunConfig, parse_int_range

# Set up logging
logging.basicConfig(level=logging.INFO, format="%(asctime)s - %(levelname)s - %(message)s")

# Load environment variables
load_dotenv()

runner = CliRunner(mix_stderr=False)


def invoke(*args, env=None):
    return runner.invoke(app, list(args), env=env)


def test_bound_text_and_csv():
    print("=" * 60)
    print("Testing the bound command")
    print("=" * 60)
    result = invoke("bound", "--scheme", "bilinear", "--q", "2", "--n", "2", "--m", "2", "--d", "2")
    assert result.exit_code == 0, result.stderr
    assert "formula=4" in result.stdout
    assert "verdict=match" in result.stdout
    print(f"   {result.stdout.strip()}")

    result = invoke("bound", "--scheme", "polar-c", "--q", "2", "--n", "3", "--d", "3", "--format", "csv")
    assert result.exit_code == 0, result.stderr
    header, row = result.stdout.strip().split("\n")
    assert header == "family,q,n,m,d,t,formula,solver,certificate,verdict"
    assert row.startswith("polar-c,2,3,,3,,9,9,")
    assert row.endswith(",match")


def test_bound_ekr_json():
    result = invoke("bound", "--scheme", "hermitian", "--q", "2", "--n", "2", "--t", "1", "--format", "json", "--decimal")
    assert result.exit_code == 0, result.stderr
    document = json.loads(result.stdout)
    assert len(document) == 1
    assert document[0]["formula_value"] == "8/3"
    assert document[0]["t"] == 1
    assert "elapsed_ms" not in document[0]
    assert document[0]["approx"] is not None


def test_bound_usage_errors():
    result = invoke("bound", "--scheme", "hamming", "--q", "2", "--n", "5", "--d", "3")
    assert result.exit_code == EXIT_USAGE
    assert "Piret condition fails" in result.stderr
    assert "Traceback" not in result.stderr

    result = invoke("certify", "--scheme", "polar-2d", "--q", "2", "--n", "3", "--d", "2")
    assert result.exit_code == EXIT_USAGE
    assert "Traceback" not in result.stderr

    result = invoke("bound", "--scheme", "hamming", "--q", "2", "--n", "3")
    assert result.exit_code == EXIT_USAGE

    result = invoke("bound", "--scheme", "hamming", "--q", "2", "--n", "3", "--d", "2", "--t", "1")
    assert result.exit_code == EXIT_USAGE

    result = invoke("bound", "--scheme", "no-such-family", "--q", "2", "--n", "3", "--d", "2")
    assert result.exit_code == EXIT_USAGE


def test_export_lp():
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "lp.json")
        result = invoke("bound", "--scheme", "qjohnson", "--q", "2", "--n", "2", "--m", "2", "--d", "2",
                        "--export-lp", path)
        assert result.exit_code == 0, result.stderr
        with open(path) as handle:
            document = json.load(handle)
    assert solve_exact(lp_from_json(document)).objective_value == 5


def test_certify():
    print("=" * 60)
    print("Testing the certify command")
    print("=" * 60)
    result = invoke("certify", "--scheme", "hermitian", "--q", "2", "--n", "2", "--d", "2")
    assert result.exit_code == 0, result.stderr
    document = json.loads(result.stdout)
    assert document["verified"] is True
    assert document["primal_objective"] == document["dual_objective"] == "6"
    assert document["complementary_slackness_failures"] == []

    result = invoke("certify", "--scheme", "qjohnson", "--q", "2", "--n", "2", "--m", "2", "--d", "2", "--format", "text")
    assert result.exit_code == 0, result.stderr
    assert "primal objective:   5" in result.stdout
    assert "verdict: verified" in result.stdout

    result = invoke("certify", "--scheme", "polar-2a-odd", "--q", "2", "--n", "2", "--d", "1")
    assert result.exit_code == 0, result.stderr
    assert json.loads(result.stdout)["primal_objective"] == "27"

    result = invoke("certify", "--scheme", "polar-2d", "--q", "2", "--n", "3", "--d", "2")
    assert result.exit_code == EXIT_USAGE

    result = invoke("certify", "--scheme", "hermitian", "--q", "2", "--n", "2", "--d", "2", "--format", "csv")
    assert result.exit_code == EXIT_USAGE


def test_verify():
    result = invoke("verify", "--only", "conjecture-dn", "--q", "2", "--n", "3")
    assert result.exit_code == 0, result.stderr
    assert "NOTE conjecture-dn" in result.stdout
    assert "0 failed, 2 reported" in result.stdout

    result = invoke("verify", "--only", "orthogonality", "--only", "qbinomial", "--q", "2", "--n", "1..2",
                    "--format", "json")
    assert result.exit_code == 0, result.stderr
    document = json.loads(result.stdout)
    assert document["failed"] == 0
    assert document["passed"] == len(document["results"])

    result = invoke("verify", "--only", "no-such-check")
    assert result.exit_code == EXIT_USAGE


def test_oracle():
    print("=" * 60)
    print("Testing the oracle command")
    print("=" * 60)
    result = invoke("oracle", "--scheme", "bilinear", "--q", "2", "--n", "2", "--m", "2", "--d", "2",
                    "--trials", "10", "--format", "json", "--witness")
    assert result.exit_code == 0, result.stderr
    document = json.loads(result.stdout)
    assert document["max_code"] == 4
    assert document["lp_bound"] == "4"
    assert document["consistent"] is True
    assert len(document["witness"]["vertices"]) == 4

    result = invoke("oracle", "--scheme", "bilinear", "--q", "2", "--n", "2", "--m", "2", "--d", "2", "--trials", "5")
    assert result.exit_code == 0, result.stderr
    assert "attains the LP bound" in result.stdout

    result = invoke("oracle", "--scheme", "bilinear", "--q", "2", "--n", "3", "--m", "3", "--d", "2", "--cap", "100")
    assert result.exit_code == EXIT_CAP

    result = invoke("oracle", "--scheme", "hamming", "--q", "2", "--n", "3", "--d", "2")
    assert result.exit_code == EXIT_USAGE


def test_table_is_deterministic():
    print("=" * 60)
    print("Testing the table command")
    print("=" * 60)
    args = ["table", "--scheme", "bilinear", "--scheme", "polar-c", "--q", "2", "--n", "2..3", "--m", "3", "--d", "2..3"]
    first = invoke(*args)
    second = invoke(*args)
    assert first.exit_code == second.exit_code == 0, first.stderr
    assert first.stdout == second.stdout
    lines = first.stdout.strip().split("\n")
    assert len(lines) == 7
    assert all(not line.endswith(",mismatch") for line in lines[1:])
    assert lines[1].startswith("bilinear,2,2,3,2,")
    print(f"   {len(lines) - 1} rows")

    result = invoke("table", "--scheme", "bilinear", "--q", "2", "--n", "2", "--d", "2")
    assert result.exit_code == EXIT_USAGE


def test_environment_settings():
    result = invoke("bound", "--scheme", "hamming", "--q", "4", "--n", "3", "--d", "2", env={"DELSARTE_WORKERS": "zero"})
    assert result.exit_code == EXIT_USAGE
    result = invoke("bound", "--scheme", "hamming", "--q", "4", "--n", "3", "--d", "2",
                    env={"DELSARTE_CLIQUE_TIME_BUDGET": "0", "DELSARTE_LOG_LEVEL": "info"})
    assert result.exit_code == 0, result.stderr
    assert "formula=16" in result.stdout
    assert EXIT_FAILURE == 1


def test_parameter_parsing():
    assert parse_int_range("3") == [3]
    assert parse_int_range("2,3,2") == [2, 3]
    assert parse_int_range("1..4") == [1, 2, 3, 4]
    assert parse_int_range("1..2,5") == [1, 2, 5]
    with pytest.raises(ParameterError):
        parse_int_range("4..1")
    with pytest.raises(ParameterError):
        parse_int_range("two")
    with pytest.raises(ParameterError):
        parse_int_range("1..1000")

    config = RunConfig(command="table", schemes=["hamming"], q_values="2..3", n_values="1..2", d_values="1")
    assert config.q_values == [2, 3] and config.workers == 1
    with pytest.raises(ValidationError):
        RunConfig(command="bound", schemes=["hamming"], q_values=1, n_values=3, d_values=2)
    with pytest.raises(ValidationError):
        RunConfig(command="bound", q_values=2)


if __name__ == "__main__":
    tests = [
        test_bound_text_and_csv,
        test_bound_ekr_json,
        test_bound_usage_errors,
        test_export_lp,
        test_certify,
        test_verify,
        test_oracle,
        test_table_is_deterministic,
        test_environment_settings,
        test_parameter_parsing,
    ]
    try:
        for test in tests:
            test()
        print("\nAll CLI tests passed")
        exit(0)
    except Exception as e:
        logging.error(f"Test failed with error: {str(e)}", exc_info=True)
        exit(1)
