#!/usr/bin/env python3
"""
MCP server exposing the rough-surface elastic scattering experiments.
"""
import os
import sys
import json
import logging
from typing import List, Optional

# Keep stdio unbuffered for the MCP protocol
sys.stdout.reconfigure(line_buffering=True) if hasattr(sys.stdout, 'reconfigure') else None
sys.stderr.reconfigure(line_buffering=True) if hasattr(sys.stderr, 'reconfigure') else None

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from fastmcp import FastMCP

from src.config import load_config, get_debug_mode, get_run_settings, get_solver_settings
from src.elastic.navier_green import ElasticMedium
from src.elastic.surface import NAMED_SURFACES, named_surface, sample_profile
from src.experiments import (
    EXAMPLES,
    RunConfig,
    default_image_level,
    evaluate_scattered_field,
    run_experiment_async,
)
from src.results_storage import emit_results

# Repository root (parent of servers folder)
mcp_server_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
config = load_config(mcp_server_root)
debug_mode = get_debug_mode(config)

# All logging goes to stderr; stdout carries JSON-RPC only
logging.basicConfig(
    level=logging.DEBUG if debug_mode else logging.WARNING,
    format='[%(asctime)s] %(name)s:%(levelname)s: %(message)s',
    datefmt='%Y-%m-%d %H:%M:%S',
    stream=sys.stderr
)
logger = logging.getLogger(__name__)

debug_logger = logging.getLogger("debug")
debug_handler = logging.StreamHandler(sys.stderr)
debug_handler.setLevel(logging.DEBUG if debug_mode else logging.WARNING)
debug_handler.setFormatter(logging.Formatter('[DEBUG] %(message)s'))
debug_logger.addHandler(debug_handler)
debug_logger.setLevel(logging.DEBUG if debug_mode else logging.WARNING)
debug_logger.propagate = False

progress_logger = logging.getLogger("progress")
progress_handler = logging.StreamHandler(sys.stderr)
progress_handler.setLevel(logging.INFO)
progress_handler.setFormatter(logging.Formatter('%(message)s'))
progress_logger.addHandler(progress_handler)
progress_logger.setLevel(logging.INFO)
progress_logger.propagate = False

if debug_mode:
    debug_logger.debug(f"MCP server root: {mcp_server_root}")
    debug_logger.debug(f"Python executable: {sys.executable}")

mcp = FastMCP(
    "Rough Elastic Scattering",
    instructions=(
        "This server solves time-harmonic elastic scattering by rough surfaces with a "
        "Nyström boundary integral method. Available tools: list_examples, run_experiment, "
        "evaluate_field, describe_medium, surface_profile."
    )
)


def _run_config(
    example: Optional[str] = None,
    N_list: Optional[List[int]] = None,
    omega: Optional[float] = None,
    nb: Optional[int] = None,
    seed: Optional[int] = None,
    surface: Optional[str] = None,
) -> RunConfig:
    """RunConfig from config.yaml with tool arguments on top."""
    settings = get_run_settings(config)
    overrides = {
        "example": example,
        "N_list": N_list,
        "omega": omega,
        "nb": nb,
        "seed": seed,
        "surface": surface,
    }
    settings.update({key: value for key, value in overrides.items() if value is not None})
    return RunConfig.from_settings(settings, get_solver_settings(config))


@mcp.tool()
def list_examples() -> str:
    """
    List the built-in experiments and surfaces with their default image levels.

    Returns:
        JSON string with examples, surfaces and default settings
    """
    try:
        settings = get_run_settings(config)
        cut = _run_config().cut
        result = {
            "examples": list(EXAMPLES),
            "surfaces": {
                name: {"default_image_level": default_image_level(name, cut)}
                for name in NAMED_SURFACES
            },
            "defaults": settings,
        }
        return json.dumps(result, indent=2)
    except Exception as e:
        logger.error(f"Error listing examples: {e}")
        return json.dumps({"error": str(e)})


@mcp.tool()
async def run_experiment(
    example: str = "flat-p",
    N_list: Optional[List[int]] = None,
    omega: Optional[float] = None,
    nb: Optional[int] = None,
    seed: Optional[int] = None,
    save: bool = False,
) -> str:
    """
    Run a convergence experiment and return the error table.

    Args:
        example: flat-p, flat-s, periodic or rough
        N_list: Refinement levels (default from config.yaml)
        omega: Angular frequency override
        nb: Number of random evaluation points
        seed: Random seed for the evaluation points
        save: Also write the JSON manifest to the configured output path

    Returns:
        JSON string with error rows, runtimes and solve reports
    """
    try:
        if debug_mode:
            debug_logger.debug(f"Tool called: run_experiment(example={example}, N_list={N_list})")
        run_config = _run_config(example=example, N_list=N_list, omega=omega, nb=nb, seed=seed)
        run = await run_experiment_async(run_config, progress_logger=progress_logger)

        result = {
            "config": run.config.to_dict(),
            "results": [
                {"example": r.example, "N": r.N, "statistic": r.statistic, "error": r.error}
                for r in run.rows
            ],
            "runtime_seconds": {str(n): t for n, t in run.runtime_seconds.items()},
            "reports": {str(n): rep.to_dict() for n, rep in run.reports.items()},
        }
        if save:
            path = os.path.splitext(run.config.output_path)[0] + ".json"
            result["saved_to"] = emit_results(
                run.rows, "json", path,
                config=run.config.to_dict(), runtime_seconds=run.runtime_seconds,
            )
        return json.dumps(result, indent=2)
    except Exception as e:
        logger.error(f"Error running experiment: {e}")
        if debug_mode:
            debug_logger.debug(f"Exception in run_experiment: {e}", exc_info=True)
        return json.dumps({"error": str(e)})


@mcp.tool()
def evaluate_field(
    points: List[List[float]],
    example: str = "flat-p",
    N: int = 32,
    surface: Optional[str] = None,
) -> str:
    """
    Evaluate the scattered field at given points above the surface.

    Args:
        points: List of [x1, x2] points
        example: flat-p, flat-s, periodic, rough or custom
        N: Refinement level
        surface: Surface for the custom example

    Returns:
        JSON string with scattered (and exact, when known) values as [re, im] pairs
    """
    try:
        run_config = _run_config(example=example, N_list=[N], surface=surface)
        return json.dumps(evaluate_scattered_field(run_config, points, N), indent=2)
    except Exception as e:
        logger.error(f"Error evaluating field: {e}")
        return json.dumps({"error": str(e)})


@mcp.tool()
def describe_medium(lam: float = 1.0, mu: float = 1.0, omega: float = 20.0) -> str:
    """
    Wavenumbers and stress parameters of an elastic medium.

    Returns:
        JSON string with kappa_s, kappa_p, mu_tilde, lambda_tilde and eta
    """
    try:
        return json.dumps(ElasticMedium(lam=lam, mu=mu, omega=omega).describe(), indent=2)
    except Exception as e:
        logger.error(f"Error describing medium: {e}")
        return json.dumps({"error": str(e)})


@mcp.tool()
def surface_profile(name: str = "rough", x_min: float = -10.0, x_max: float = 10.0, count: int = 201) -> str:
    """
    Sample a built-in surface profile x2 = f(x1).

    Returns:
        JSON string with the sampled points
    """
    try:
        profile = sample_profile(named_surface(name), (x_min, x_max), count)
        return json.dumps({"surface": name, "points": profile.tolist()})
    except Exception as e:
        logger.error(f"Error sampling surface: {e}")
        return json.dumps({"error": str(e)})


def main():
    import argparse

    parser = argparse.ArgumentParser(description="Rough Elastic Scattering MCP Server")
    parser.add_argument("--transport", default="stdio", choices=["stdio", "sse"], help="Transport mode (stdio or sse)")
    parser.add_argument("--host", default="localhost", help="Host for SSE server")
    parser.add_argument("--port", type=int, default=8000, help="Port for SSE server")
    args = parser.parse_args()

    if debug_mode:
        debug_logger.debug(f"Starting MCP server ({args.transport} transport)")

    try:
        if args.transport == "stdio":
            sys.stderr.write("[MCP SERVER] Server ready, waiting for MCP protocol messages on stdin\n")
            sys.stderr.flush()
            mcp.run(transport="stdio")
        else:
            sys.stderr.write(f"[MCP SERVER] Starting MCP server with SSE transport on {args.host}:{args.port}...\n")
            sys.stderr.flush()
            mcp.run(transport="sse", host=args.host, port=args.port)
    except KeyboardInterrupt:
        sys.stderr.write("[MCP SERVER] Received KeyboardInterrupt, shutting down gracefully\n")
        sys.stderr.flush()
    except Exception as e:
        sys.stderr.write(f"[MCP SERVER] Fatal error: {e}\n")
        sys.stderr.flush()
        sys.exit(1)


if __name__ == "__main__":
    main()
