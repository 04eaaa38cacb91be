#!/usr/bin/env python
"""
Test scenario parsing and the settings a scenario lays over the config.
"""
import json
import os

import pytest

from plumbing_periods.errors import ScenarioError
from plumbing_periods.scenario import load_scenario, parse_scenario
from plumbing_periods.utils.config import default_config

from .conftest import SCENARIOS

BUNDLED = sorted(name for name in os.listdir(SCENARIOS) if name.endswith(".json"))

G1 = {
    "name": "g1",
    "curve": {"vertices": ["v"], "edges": [{"id": "e1", "from": "v", "to": "v", "q_from": 2, "q_to": -2}]},
    "s": 1e-4,
}


def with_changes(**changes):
    raw = json.loads(json.dumps(G1))
    raw.update(changes)
    return raw


@pytest.mark.parametrize("name", BUNDLED)
def test_bundled_scenarios_parse(name):
    scenario = load_scenario(os.path.join(SCENARIOS, name))
    assert scenario.name == name[: -len(".json")]
    curve = scenario.build_curve()
    assert curve.vertices


def test_complex_notation():
    """Numbers, [re, im] pairs and strings all read as complex."""
    raw = with_changes(params={"e1": [0.0, 1e-4]})
    raw["curve"]["edges"][0]["q_to"] = "-2+0j"
    scenario = parse_scenario(raw)
    assert scenario.plumbing()["e1"] == 1e-4j
    assert scenario.build_curve().edge("e1").q_target == -2


def test_plumbing_parameters():
    scenario = parse_scenario(G1)
    assert scenario.plumbing()["e1"] == 1e-4
    assert scenario.plumbing(1e-3)["e1"] == 1e-3
    with pytest.raises(ScenarioError):
        parse_scenario(with_changes(s=None)).plumbing()


@pytest.mark.parametrize(
    "changes",
    [
        {"params": {"e9": 1e-4}},
        {"differential": {"w": {"terms": []}}},
        {"cycle": ["+e9"]},
        {"unexpected": 1},
        {"sweep": {"num": 1}},
        {"solver": {"ratio_limit": 2.0}},
        {"twisted": {"differentials": {}, "levels": {"v": 1}}},
        {"twisted": {"differentials": {}, "levels": {"v": 0}, "t": [1e-3]}},
    ],
)
def test_schema_errors(changes):
    with pytest.raises(ScenarioError):
        parse_scenario(with_changes(**changes))


def test_curve_references():
    raw = with_changes()
    raw["curve"]["edges"].append({"id": "e1", "from": "v", "to": "w", "q_from": 5, "q_to": 6})
    with pytest.raises(ScenarioError, match="unknown vertex"):
        parse_scenario(raw)
    raw["curve"]["edges"][-1]["to"] = "v"
    with pytest.raises(ScenarioError, match="unique"):
        parse_scenario(raw)


def test_unreadable_files(tmp_path):
    with pytest.raises(ScenarioError):
        load_scenario(str(tmp_path / "absent.json"))
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    with pytest.raises(ScenarioError):
        load_scenario(str(broken))


def test_json_text():
    assert parse_scenario(json.dumps(G1)).s == 1e-4


def test_differential_terms_are_summed():
    raw = with_changes(
        differential={"v": {"terms": [{"pole": 2, "coeff": 1}, {"pole": 2, "coeff": 1}, {"pole": -2, "coeff": -2}]}}
    )
    omega = parse_scenario(raw).differential_map()["v"]
    assert omega.residue(2) == 2
    assert omega.residue(-2) == -2


def test_config_overrides():
    raw = with_changes(solver={"k_max": 5, "K": 2}, n_quad=32, max_word_length=3)
    config = parse_scenario(raw).config(default_config())
    assert config["solver"]["k_max"] == 5
    assert "K" not in config["solver"]
    assert config["solver"]["tol"] == default_config()["solver"]["tol"]
    assert config["quadrature"]["n_quad"] == 32
    assert config["schottky"]["max_word_length"] == 3


def test_sweep_grid():
    scenario = load_scenario(os.path.join(SCENARIOS, "g1_sweep.json"))
    values = scenario.sweep.values()
    assert len(values) == 9
    assert values[0] == pytest.approx(1e-2)
    assert values[-1] == pytest.approx(1e-6)


def test_twisted_section():
    scenario = load_scenario(os.path.join(SCENARIOS, "twisted_two_level.json"))
    twisted = scenario.twisted.build()
    assert twisted.level_count == 2
    assert scenario.twisted.scaling().t == (1e-4,)
    assert set(scenario.twisted.omega_map()) == {"u"}
