#!/usr/bin/env python
"""
Config utilities for plumbing_periods.
"""
import copy
import json
import logging
import os
from typing import Any, Dict, Optional

from dotenv import load_dotenv

# Default paths
DEFAULT_CONFIG_PATH = "config.json"
DEFAULT_CONFIG_ENV_VAR = "PLUMBING_PERIODS_CONFIG"

DEFAULTS: Dict[str, Dict[str, Any]] = {
    "solver": {"tol": 1e-14, "k_max": 32, "ratio_limit": 0.5, "force": False},
    "quadrature": {"n_quad": 64},
    "schottky": {"max_word_length": 8},
    "logging": {"level": "INFO"},
    "server": {"mcp_name": "Plumbing Periods"},
}

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def expand_path(path: str) -> str:
    """
    Expand a file path that may include ~ for home directory.

    Args:
        path: The path to expand

    Returns:
        The expanded path as a string
    """
    return os.path.expanduser(path)


def default_config() -> Dict[str, Any]:
    """A fresh copy of the documented defaults."""
    return copy.deepcopy(DEFAULTS)


def merge_config(base: Dict[str, Any], override: Optional[Dict[str, Any]]) -> Dict[str, Any]:
    """Section-wise merge; values in override win."""
    merged = copy.deepcopy(base)
    for section, values in (override or {}).items():
        if isinstance(values, dict):
            merged.setdefault(section, {}).update(values)
        else:
            merged[section] = values
    return merged


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """
    Load configuration from a JSON file on top of the defaults.

    Args:
        config_path: Path to the config file, or None to use the environment
                    variable (a .env file is honoured) or the default path

    Returns:
        Dictionary containing configuration; the defaults alone when no
        path was given and the default file does not exist

    Raises:
        FileNotFoundError: If an explicitly requested config file doesn't exist
        json.JSONDecodeError: If the config file isn't valid JSON
    """
    explicit = config_path is not None
    if config_path is None:
        load_dotenv()
        explicit = DEFAULT_CONFIG_ENV_VAR in os.environ
        config_path = os.environ.get(DEFAULT_CONFIG_ENV_VAR, DEFAULT_CONFIG_PATH)

    config_path = expand_path(config_path)

    if not os.path.isfile(config_path):
        if explicit:
            raise FileNotFoundError(f"Configuration file not found: {config_path}")
        return default_config()

    with open(config_path, "r") as f:
        config = json.load(f)

    return merge_config(default_config(), config)


def validate_config(config: Dict[str, Any]) -> None:
    """
    Validate the configuration to ensure it has all required fields.

    Args:
        config: Configuration dictionary to validate

    Raises:
        ValueError: If configuration is missing required fields or has bad values
    """
    for section in ("solver", "quadrature", "schottky"):
        if section not in config:
            raise ValueError(f"Missing required configuration section: {section}")

    solver = config["solver"]
    for field in ("tol", "k_max", "ratio_limit"):
        if field not in solver:
            raise ValueError(f"Missing required solver configuration field: {field}")
    if solver["tol"] <= 0:
        raise ValueError("solver.tol must be positive")
    if int(solver["k_max"]) < 1:
        raise ValueError("solver.k_max must be at least 1")
    if not 0 < solver["ratio_limit"] < 1:
        raise ValueError("solver.ratio_limit must lie in (0, 1)")

    if int(config["quadrature"].get("n_quad", 0)) < 4:
        raise ValueError("quadrature.n_quad must be at least 4")
    if int(config["schottky"].get("max_word_length", -1)) < 0:
        raise ValueError("schottky.max_word_length must be non-negative")

    level = config.get("logging", {}).get("level", "INFO")
    if logging.getLevelName(str(level).upper()) not in (
        logging.DEBUG, logging.INFO, logging.WARNING, logging.ERROR, logging.CRITICAL,
    ):
        raise ValueError(f"Unsupported logging level: {level}")


def get_config_with_validation(config_path: Optional[str] = None) -> Dict[str, Any]:
    """
    Load and validate configuration.

    Args:
        config_path: Path to the config file, or None to use environment variable
                    or default path

    Returns:
        Dictionary containing validated configuration

    Raises:
        FileNotFoundError: If the config file doesn't exist
        json.JSONDecodeError: If the config file isn't valid JSON
        ValueError: If configuration is missing required fields
    """
    config = load_config(config_path)
    validate_config(config)
    return config


def solver_options(config: Dict[str, Any]) -> Dict[str, Any]:
    """Keyword arguments for the jump solver from a config."""
    solver = config["solver"]
    return {
        "tol": float(solver["tol"]),
        "k_max": int(solver["k_max"]),
        "ratio_limit": float(solver["ratio_limit"]),
        "force": bool(solver.get("force", False)),
    }


def configure_logging(level: Optional[str] = None, config: Optional[Dict[str, Any]] = None) -> None:
    """Configure the root logger once from a level name or the config."""
    if level is None:
        level = (config or DEFAULTS).get("logging", {}).get("level", "INFO")
    logging.basicConfig(level=str(level).upper(), format=LOG_FORMAT)
    logging.getLogger().setLevel(str(level).upper())
