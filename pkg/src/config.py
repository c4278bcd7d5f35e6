"""
Configuration management for the experiment runner and the MCP server.
"""
import logging
import os
from typing import Any, Dict

import yaml

logger = logging.getLogger(__name__)

DEFAULT_RUN = {
    "example": "flat-p",
    "lambda": 1.0,
    "mu": 1.0,
    "omega": 20.0,
    "eta_re": None,  # None -> kappa_s
    "eta_im": 0.0,
    "h": None,  # None -> -1 for flat, sampled min f - 0.5 otherwise
    "cut_over_pi": 10,
    "N_list": [8, 16, 32, 64, 128],
    "nb": 101,
    "region": [-2.5, 2.5, 0.5, 1.5],
    "seed": 20240501,
    "format": "csv",
    "output_path": "results/errors.csv",
}

DEFAULT_SOLVER = {
    "series_threshold_factor": 0.05,
    "diagonal_switch": 1e-7,
    "block_rows": 64,
    "condition_limit": 1e12,
}


def _default_config() -> Dict[str, Any]:
    return {
        "debug": False,
        "run": dict(DEFAULT_RUN),
        "solver": dict(DEFAULT_SOLVER),
    }


def _resolve_path(root: str, path: str) -> str:
    if os.path.isabs(path):
        return path
    return os.path.join(root, path)


def load_config(root: str, filename: str = "config.yaml") -> Dict[str, Any]:
    """
    Load configuration from config.yaml (or another YAML file) in the repository root.

    The `run` and `solver` sections are merged key by key over the defaults.

    Args:
        root: Path to the directory holding the YAML file
        filename: File name inside root

    Returns:
        Configuration dictionary
    """
    config_path = os.path.join(root, filename)
    default_config = _default_config()
    default_config["run"]["output_path"] = _resolve_path(root, DEFAULT_RUN["output_path"])

    if not os.path.exists(config_path):
        return default_config

    try:
        with open(config_path, "r", encoding="utf-8") as f:
            config = yaml.safe_load(f) or {}

        merged_config = _default_config()
        merged_config["debug"] = bool(config.get("debug", False))
        for section in ("run", "solver"):
            values = config.get(section) or {}
            if not isinstance(values, dict):
                raise ValueError(f"Section '{section}' must be a mapping")
            merged_config[section].update(values)

        merged_config["run"]["output_path"] = _resolve_path(
            root, merged_config["run"]["output_path"]
        )
        return merged_config

    except Exception as e:
        logger.error(f"Error loading config {config_path}: {e}")
        return default_config


def get_debug_mode(config: Dict[str, Any]) -> bool:
    """
    Get debug mode flag from configuration.

    Args:
        config: Configuration dictionary

    Returns:
        True if debug mode is enabled, False otherwise
    """
    return config.get("debug", False)


def get_run_settings(config: Dict[str, Any]) -> Dict[str, Any]:
    """
    Get the experiment settings (`run:` section) from configuration.

    Args:
        config: Configuration dictionary

    Returns:
        Dictionary with every run key, defaults filled in
    """
    settings = dict(DEFAULT_RUN)
    settings.update(config.get("run", {}))
    return settings


def get_solver_settings(config: Dict[str, Any]) -> Dict[str, Any]:
    """
    Get the numerical switches (`solver:` section) from configuration.

    Args:
        config: Configuration dictionary

    Returns:
        Dictionary accepted by SolverConfig.from_dict
    """
    settings = dict(DEFAULT_SOLVER)
    settings.update(config.get("solver", {}))
    return settings
