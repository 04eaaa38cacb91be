#!/usr/bin/env python
"""
Command-line driver: reads a scenario file, runs one computation and writes
JSON (plus CSV for sweeps).

Exit status: 0 on success, 2 for scenario errors, 3 when the jump series
does not converge, 4 for any other failure or a failed check.
"""
import json
import logging
import os
import sys
from typing import Any, Optional

import click
from pydantic import ValidationError

from plumbing_periods.errors import NonConvergenceError, PlumbingError, ScenarioError
from plumbing_periods.runner import BACKENDS, PAYLOADS, CheckFailed, Run, write_sweep_csv
from plumbing_periods.scenario import load_scenario
from plumbing_periods.utils.config import configure_logging, get_config_with_validation

logger = logging.getLogger(__name__)

EXIT_SCENARIO = 2
EXIT_NONCONVERGENCE = 3
EXIT_FAILURE = 4


def _write(payload: Any, out: Optional[str], name: str) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out is None:
        click.echo(text)
        return
    os.makedirs(out, exist_ok=True)
    path = os.path.join(out, f"{name}.json")
    with open(path, "w") as f:
        f.write(text + "\n")
    click.echo(path)


def exit_code(exc: Exception) -> int:
    if isinstance(exc, (ScenarioError, ValidationError)):
        return EXIT_SCENARIO
    if isinstance(exc, NonConvergenceError):
        return EXIT_NONCONVERGENCE
    return EXIT_FAILURE


@click.group()
@click.option("--config", "config_path", default=None, type=click.Path(dir_okay=False), help="Config JSON file.")
@click.option("--log-level", default=None, help="Logging level; overrides the config.")
@click.pass_context
def main(ctx: click.Context, config_path: Optional[str], log_level: Optional[str]):
    """Plumbing degenerations of nodal curves: solves, periods and checks."""
    try:
        config = get_config_with_validation(config_path)
    except (OSError, ValueError) as exc:
        click.echo(f"Error: {exc}", err=True)
        ctx.exit(EXIT_SCENARIO)
    configure_logging(log_level, config)
    ctx.ensure_object(dict)
    ctx.obj["config"] = config


def _register(name: str) -> None:
    payload_fn = PAYLOADS[name]

    @main.command(name, help=payload_fn.__doc__ or f"Run {name} on a scenario.")
    @click.option("--scenario", "scenario_path", required=True, type=click.Path(dir_okay=False), help="Scenario JSON file.")
    @click.option("--out", default=None, type=click.Path(file_okay=False), help="Output directory; stdout when omitted.")
    @click.option(
        "--backend",
        default="residue",
        show_default=True,
        type=click.Choice(list(BACKENDS), case_sensitive=False),
        help="Solver backend.",
    )
    @click.option("--seed", default=0, show_default=True, type=int, help="Seed for randomized sample points.")
    @click.pass_context
    def run_command(ctx: click.Context, scenario_path: str, out: Optional[str], backend: str, seed: int):
        try:
            scenario = load_scenario(scenario_path)
            run = Run(scenario, ctx.obj["config"], backend.lower(), seed)
            payload = payload_fn(run)
            _write(payload, out, f"{scenario.name}_{name}")
            if out is not None and "rows" in payload:
                write_sweep_csv(payload["rows"], os.path.join(out, f"{scenario.name}_{name}.csv"))
            if payload.get("passed") is False:
                raise CheckFailed(f"{name} check failed")
        except Exception as exc:
            code = exit_code(exc)
            if code == EXIT_FAILURE and not isinstance(exc, PlumbingError):
                logger.exception("unexpected error in %s", name)
            click.echo(f"Error: {exc}", err=True)
            ctx.exit(code)


for _name in PAYLOADS:
    _register(_name)


if __name__ == "__main__":
    sys.exit(main())
