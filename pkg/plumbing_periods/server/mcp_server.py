#!/usr/bin/env python
"""
Plumbing Periods MCP Server - exposes the scenario computations as MCP tools.

Every tool takes a scenario document (the same JSON the command line reads)
and returns the JSON payload, or {"error": ..., "status": "error"}.
"""
import logging
from typing import Any, Dict, Optional

from fastmcp import FastMCP

from plumbing_periods.runner import PAYLOADS, Run
from plumbing_periods.scenario import parse_scenario
from plumbing_periods.utils.config import configure_logging, get_config_with_validation

logger = logging.getLogger(__name__)

TOOLS = {
    "periods/validate": "validate",
    "periods/solve": "solve",
    "periods/periodMatrix": "period-matrix",
    "periods/oracleCompare": "oracle-compare",
    "periods/closedForm": "closed-form",
    "periods/twistedCheck": "twisted-check",
}


def run_tool(command: str, scenario: Dict[str, Any], config: Dict[str, Any], backend: str = "residue") -> Dict:
    """Run one payload on a scenario document, turning failures into error dicts."""
    try:
        run = Run(parse_scenario(scenario), config, backend)
        payload = PAYLOADS[command](run)
        payload.setdefault("status", "ok")
        return payload
    except Exception as e:
        error_msg = f"Error in {command}: {str(e)}"
        logger.error(error_msg)
        return {"error": error_msg, "status": "error"}


def init_server(config: Optional[Dict[str, Any]] = None) -> FastMCP:
    config = config or get_config_with_validation()
    server = FastMCP(name=config.get("server", {}).get("mcp_name", "Plumbing Periods"))

    @server.tool("periods/validate")
    def validate_tool(scenario: Dict[str, Any]) -> Dict:
        """Check a curve and its plumbing parameters."""
        return run_tool(TOOLS["periods/validate"], scenario, config)

    @server.tool("periods/solve")
    def solve_tool(scenario: Dict[str, Any], backend: str = "residue") -> Dict:
        """Solve the jump problem for the scenario's differential."""
        return run_tool(TOOLS["periods/solve"], scenario, config, backend)

    @server.tool("periods/periodMatrix")
    def period_matrix_tool(scenario: Dict[str, Any]) -> Dict:
        """Period matrix of the plumbed curve, numeric and expansion."""
        return run_tool(TOOLS["periods/periodMatrix"], scenario, config)

    @server.tool("periods/oracleCompare")
    def oracle_compare_tool(scenario: Dict[str, Any]) -> Dict:
        """Compare the numeric period matrix with the Schottky series."""
        return run_tool(TOOLS["periods/oracleCompare"], scenario, config)

    @server.tool("periods/closedForm")
    def closed_form_tool(scenario: Dict[str, Any]) -> Dict:
        """Closed-form period matrix for totally degenerate and banana curves."""
        return run_tool(TOOLS["periods/closedForm"], scenario, config)

    @server.tool("periods/twistedCheck")
    def twisted_check_tool(scenario: Dict[str, Any]) -> Dict:
        """Compatibility report of a twisted differential."""
        return run_tool(TOOLS["periods/twistedCheck"], scenario, config)

    return server


def main():
    """Run the MCP server."""
    config = get_config_with_validation()
    configure_logging(config=config)
    server = init_server(config)
    logger.info("Starting %s MCP server", config["server"]["mcp_name"])
    server.run()


if __name__ == "__main__":
    main()
