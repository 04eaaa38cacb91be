#!/usr/bin/env python
"""
Test the MCP tool server.
"""
import json
import os

import pytest
from fastmcp import FastMCP

from plumbing_periods.server.mcp_server import TOOLS, init_server, run_tool
from plumbing_periods.runner import PAYLOADS
from plumbing_periods.utils.config import default_config, merge_config

from .conftest import SCENARIOS


@pytest.fixture
def test_config():
    """Defaults with a test server name."""
    return merge_config(default_config(), {"server": {"mcp_name": "Plumbing Periods Test"}})


def scenario(name):
    with open(os.path.join(SCENARIOS, f"{name}.json")) as f:
        return json.load(f)


def test_mcp_server_setup(test_config):
    server = init_server(test_config)
    assert isinstance(server, FastMCP)
    assert server.name == "Plumbing Periods Test"


def test_tools_map_to_payloads():
    assert set(TOOLS.values()) <= set(PAYLOADS)


def test_validate_tool(test_config):
    payload = run_tool("validate", scenario("banana"), test_config)
    assert payload["status"] == "ok"
    assert payload["genus"] == 1
    assert payload["passed"] is True


def test_twisted_check_tool(test_config):
    payload = run_tool("twisted-check", scenario("twisted_two_level"), test_config)
    assert payload["status"] == "ok"
    assert payload["passed"] is True


def test_errors_become_dicts(test_config):
    """Bad input never raises out of a tool."""
    payload = run_tool("validate", {"curve": {"vertices": ["v"]}, "bogus": 1}, test_config)
    assert payload["status"] == "error"
    assert payload["error"].startswith("Error in validate:")
    payload = run_tool("solve", scenario("g1"), test_config, backend="abacus")
    assert payload["status"] == "error"
    assert "abacus" in payload["error"]
    payload = run_tool("sweep", scenario("g1"), test_config)
    assert payload["status"] == "error"
