#!/usr/bin/env python
"""
Test the command line through click's runner.
"""
import csv
import json
import os

import numpy as np
import pytest
from click.testing import CliRunner

from plumbing_periods.cli import EXIT_FAILURE, EXIT_NONCONVERGENCE, EXIT_SCENARIO, main
from plumbing_periods.runner import PAYLOADS

from .conftest import SCENARIOS

G1 = os.path.join(SCENARIOS, "g1.json")


@pytest.fixture
def runner(tmp_path, monkeypatch):
    """Runs from an empty directory so no stray config.json is picked up."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("PLUMBING_PERIODS_CONFIG", raising=False)
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(main, ["--log-level", "error", *args])


def write_scenario(tmp_path, raw, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(raw))
    return str(path)


def test_validate(runner):
    result = invoke(runner, "validate", "--scenario", G1)
    assert result.exit_code == 0, result.output
    payload = json.loads(result.stdout)
    assert payload["passed"] is True
    assert payload["genus"] == 1


def test_solve_writes_json(runner, tmp_path):
    out = tmp_path / "out"
    result = invoke(runner, "solve", "--scenario", G1, "--out", str(out))
    assert result.exit_code == 0, result.output
    payload = json.loads((out / "g1_solve.json").read_text())
    assert payload["K"] >= 1
    assert payload["residuals"]["e1"]["jump_residual"] < 1e-9
    assert set(payload["samples"]) == {"v"}


def test_solve_with_both_backends(runner):
    result = invoke(runner, "solve", "--scenario", G1, "--backend", "both", "--seed", "3")
    assert result.exit_code == 0, result.output
    assert json.loads(result.stdout)["backend_difference"] < 1e-9


def test_period_matrix_and_closed_form(runner):
    result = invoke(runner, "period-matrix", "--scenario", G1)
    assert result.exit_code == 0, result.output
    result = invoke(runner, "closed-form", "--scenario", G1)
    assert result.exit_code == 0, result.output
    assert json.loads(result.stdout)["formula"] == "tot_deg_tau"


@pytest.mark.parametrize("name", ["g1", "g2", "banana", "theta"])
def test_bundled_scenarios(runner, name):
    path = os.path.join(SCENARIOS, f"{name}.json")
    result = invoke(runner, "validate", "--scenario", path)
    assert result.exit_code == 0, result.output
    result = invoke(runner, "solve", "--scenario", path)
    assert result.exit_code == 0, result.output
    residuals = json.loads(result.stdout)["residuals"]
    assert all(item["jump_residual"] < 1e-9 for item in residuals.values())
    result = invoke(runner, "period-matrix", "--scenario", path)
    assert result.exit_code == 0, result.output
    payload = json.loads(result.stdout)
    assert payload["symmetry_defect"] < 1e-8
    assert payload["expansion_difference"] < 1e-6


def test_oracle_compare(runner):
    result = invoke(runner, "oracle-compare", "--scenario", os.path.join(SCENARIOS, "g2.json"))
    assert result.exit_code == 0, result.output
    assert json.loads(result.stdout)["passed"] is True


def test_twisted_check(runner):
    result = invoke(runner, "twisted-check", "--scenario", os.path.join(SCENARIOS, "twisted_two_level.json"))
    assert result.exit_code == 0, result.output
    conditions = json.loads(result.stdout)["conditions"]
    assert all(item["passed"] for item in conditions.values())


def test_every_payload_is_a_command():
    assert set(main.commands) == set(PAYLOADS)


def test_sweep_writes_csv(runner, tmp_path):
    out = tmp_path / "sweep"
    result = invoke(runner, "sweep", "--scenario", os.path.join(SCENARIOS, "g1_sweep.json"), "--out", str(out))
    assert result.exit_code == 0, result.output
    with open(out / "g1_sweep_sweep.csv") as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 9
    payload = json.loads((out / "g1_sweep_sweep.json").read_text())
    assert 0.45 <= payload["slope"] <= 0.6
    # the slope is the fit of the CSV columns themselves
    log_s = [float(row["log_s"]) for row in rows]
    log_eta = [float(row["log_eta"]) for row in rows]
    assert payload["slope"] == pytest.approx(np.polyfit(log_s, log_eta, 1)[0], rel=1e-9)


def test_scenario_errors_exit_2(runner, tmp_path):
    result = invoke(runner, "validate", "--scenario", str(tmp_path / "absent.json"))
    assert result.exit_code == EXIT_SCENARIO
    path = write_scenario(tmp_path, {"curve": {"vertices": ["v"]}, "bogus": True})
    assert invoke(runner, "validate", "--scenario", path).exit_code == EXIT_SCENARIO
    # a sweep needs a sweep section
    assert invoke(runner, "sweep", "--scenario", G1).exit_code == EXIT_SCENARIO


def test_nonconvergence_exits_3(runner, tmp_path):
    raw = json.loads(open(G1).read())
    raw["solver"] = {"k_max": 1}
    result = invoke(runner, "solve", "--scenario", write_scenario(tmp_path, raw))
    assert result.exit_code == EXIT_NONCONVERGENCE


def test_failed_check_exits_4(runner, tmp_path):
    """Overlapping charts fail validation."""
    raw = json.loads(open(G1).read())
    raw["curve"]["edges"][0]["q_to"] = 2.5
    result = invoke(runner, "validate", "--scenario", write_scenario(tmp_path, raw))
    assert result.exit_code == EXIT_FAILURE


def test_bad_config_exits_2(runner, tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"solver": {"k_max": 0}}))
    result = runner.invoke(main, ["--config", str(config), "validate", "--scenario", G1])
    assert result.exit_code == EXIT_SCENARIO
    result = runner.invoke(main, ["--config", str(tmp_path / "absent.json"), "validate", "--scenario", G1])
    assert result.exit_code == EXIT_SCENARIO


def test_period(runner):
    result = invoke(runner, "period", "--scenario", G1)
    assert result.exit_code == 0, result.output


@pytest.mark.slow
def test_twisted_build_over_grid(runner):
    result = invoke(runner, "twisted-build", "--scenario", os.path.join(SCENARIOS, "twisted_two_level.json"))
    assert result.exit_code == 0, result.output
    payload = json.loads(result.stdout)
    assert payload["monotone"] is True
    assert len(payload["grid"]) == 4
