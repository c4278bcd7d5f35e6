#!/usr/bin/env python3
"""
Command-line runner for the scattering experiments.

Precedence of settings: command-line flag > config.yaml > built-in defaults.

    python -m src.cli --example rough --N 8 --N 16 --N 32 --out results/rough.csv
"""
import argparse
import logging
import math
import os
import sys
from typing import Any, Dict, List, Optional

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from src.config import get_debug_mode, get_run_settings, get_solver_settings, load_config
from src.elastic.errors import ScatteringError
from src.experiments import EXAMPLES, RunConfig, density_self_convergence_study, run_experiment
from src.results_storage import emit_results

logger = logging.getLogger(__name__)

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def _region(text: str) -> List[float]:
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"--region needs x0,x1,y0,y1, got '{text}'")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--region values must be numbers, got '{text}'") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Nyström solver for elastic scattering by rough surfaces: convergence experiments"
    )
    parser.add_argument("--example", choices=EXAMPLES, help="Experiment to run")
    parser.add_argument("--N", dest="N", type=int, action="append", help="Refinement level (repeatable)")
    cut = parser.add_mutually_exclusive_group()
    cut.add_argument("--cut", type=float, help="Half-width of the truncated line (2 N cut / pi must be an integer)")
    cut.add_argument("--cut-pi", type=float, help="Half-width of the truncated line in multiples of pi")
    parser.add_argument("--lambda", dest="lam", type=float, help="Lame constant lambda")
    parser.add_argument("--mu", type=float, help="Lame constant mu (shear modulus)")
    parser.add_argument("--omega", type=float, help="Angular frequency")
    parser.add_argument("--eta-re", type=float, help="Real part of the coupling parameter eta (> 0)")
    parser.add_argument("--eta-im", type=float, help="Imaginary part of eta")
    parser.add_argument("--h", type=float, help="Image line level, below the surface")
    parser.add_argument("--nb", type=int, help="Number of random evaluation points")
    parser.add_argument("--seed", type=int, help="Random seed for the evaluation points")
    parser.add_argument("--region", type=_region, help="Evaluation rectangle x0,x1,y0,y1")
    parser.add_argument("--surface", help="Surface for the custom example (flat, periodic, rough)")
    parser.add_argument("--format", choices=("csv", "json"), help="Output format")
    parser.add_argument("--out", help="Output file path")
    parser.add_argument("--config", help="YAML configuration file (default: config.yaml in the repository)")
    parser.add_argument("--timing", action="store_true", help="Record runtime per N in the JSON manifest")
    parser.add_argument(
        "--self-convergence", action="store_true",
        help="Also report max differences of consecutive boundary densities",
    )
    parser.add_argument("--debug", action="store_true", help="Verbose logging")
    return parser


def merge_settings(args: argparse.Namespace, run: Dict[str, Any]) -> Dict[str, Any]:
    """Overlay command-line flags on the run settings from the config file."""
    merged = dict(run)
    overrides = {
        "example": args.example,
        "N_list": args.N,
        "cut": args.cut,
        "cut_over_pi": args.cut_pi,
        "lambda": args.lam,
        "mu": args.mu,
        "omega": args.omega,
        "eta_re": args.eta_re,
        "eta_im": args.eta_im,
        "h": args.h,
        "nb": args.nb,
        "seed": args.seed,
        "region": args.region,
        "surface": args.surface,
        "format": args.format,
        "output_path": args.out,
    }
    merged.update({key: value for key, value in overrides.items() if value is not None})
    if args.cut_pi is not None:
        merged.pop("cut", None)
    if args.eta_im is not None and merged.get("eta_re") is None:
        # eta_im alone shifts the default kappa_s
        merged["eta_re"] = float(merged.get("omega", 20.0)) / math.sqrt(float(merged.get("mu", 1.0)))
    return merged


def setup_logging(debug: bool) -> logging.Logger:
    """Configure stderr logging and return the progress logger."""
    logging.basicConfig(
        level=logging.DEBUG if debug else logging.WARNING,
        format='[%(asctime)s] %(name)s:%(levelname)s: %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
        stream=sys.stderr,
    )
    progress_logger = logging.getLogger("progress")
    if not progress_logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter('%(message)s'))
        progress_logger.addHandler(handler)
    progress_logger.setLevel(logging.INFO)
    progress_logger.propagate = False
    return progress_logger


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    if args.config:
        config_path = os.path.abspath(args.config)
        config = load_config(os.path.dirname(config_path), os.path.basename(config_path))
    else:
        config = load_config(REPO_ROOT)
    debug = args.debug or get_debug_mode(config)
    progress_logger = setup_logging(debug)

    try:
        settings = merge_settings(args, get_run_settings(config))
        run_config = RunConfig.from_settings(settings, get_solver_settings(config))
        run = run_experiment(run_config, progress_logger=progress_logger)

        extra = {}
        if args.self_convergence:
            extra["density_self_convergence"] = density_self_convergence_study(run_config)
        if args.timing:
            extra["solve_reports"] = {str(n): r.to_dict() for n, r in run.reports.items()}

        path = emit_results(
            run.rows,
            run.config.format,
            run.config.output_path,
            config=run.config.to_dict(),
            runtime_seconds=run.runtime_seconds if args.timing else None,
            extra=extra or None,
        )
        progress_logger.info(f"✅ Results written to {path}")
        for row in extra.get("density_self_convergence", []):
            progress_logger.info(f"   density N={row['N']} -> {row['N_fine']}: {row['difference']:.3e}")
        return 0
    except ScatteringError as e:
        logger.error(f"Experiment failed: {e}")
        sys.stderr.write(f"Error: {e}\n")
        return 1
    except Exception as e:
        logger.error(f"Unexpected error: {e}", exc_info=debug)
        sys.stderr.write(f"Error: {e}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
