"""
Experiment orchestration: run configuration, random evaluation points, the
mean-squared error metric and convergence runs over a list of refinements.
"""
import asyncio
import logging
import math
import time
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.elastic.config import SolverConfig
from src.elastic.errors import DegenerateGeometryError, InvalidArgumentError
from src.elastic.fields import (
    CombinedPlane,
    IncidentField,
    PointSource,
    boundary_data_from_incident,
    example_incident,
    exact_scattered,
    scattered_eval,
)
from src.elastic.navier_green import ElasticMedium
from src.elastic.nystrom_solver import SolveReport, density_self_convergence, solve_boundary_problem
from src.elastic.quadrature import make_discretization
from src.elastic.surface import NAMED_SURFACES, SurfaceProfile, named_surface
from src.results_storage import ErrorRow

logger = logging.getLogger(__name__)

EXAMPLES = ("flat-p", "flat-s", "periodic", "rough", "custom")
STATISTICS = ("Re u1", "Im u1", "|u1|", "Re u2", "Im u2", "|u2|")

# Sampling resolution for the surface minimum / maximum checks
_PROFILE_SPACING = 0.01
# Default gap between the sampled surface minimum and the image line
_IMAGE_GAP = 0.5


@dataclass
class RunConfig:
    """
    One experiment: example, medium, discretization and evaluation points.

    eta and h left as None are resolved by resolve_config(): eta -> kappa_s,
    h -> -1 for the flat examples and (sampled min f) - 0.5 otherwise.
    """

    example: str = "flat-p"
    lam: float = 1.0
    mu: float = 1.0
    omega: float = 20.0
    eta: Optional[complex] = None
    h: Optional[float] = None
    cut: float = 10 * math.pi
    N_list: List[int] = field(default_factory=lambda: [8, 16, 32, 64, 128])
    nb: int = 101
    region: Tuple[float, float, float, float] = (-2.5, 2.5, 0.5, 1.5)
    seed: int = 20240501
    output_path: str = "results/errors.csv"
    format: str = "csv"
    # custom example only
    surface_name: str = "flat"
    incident: Optional[IncidentField] = None
    solver: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        """Validate configuration after initialization."""
        if self.example not in EXAMPLES:
            raise InvalidArgumentError(f"Unknown example '{self.example}', expected one of {EXAMPLES}")
        if not self.N_list or any(int(n) != n or n < 1 for n in self.N_list):
            raise InvalidArgumentError(f"N_list must hold positive integers, got {self.N_list}")
        self.N_list = [int(n) for n in self.N_list]
        if self.nb < 1:
            raise InvalidArgumentError(f"nb must be >= 1, got {self.nb}")
        self.region = tuple(float(v) for v in self.region)
        if len(self.region) != 4 or self.region[0] >= self.region[1] or self.region[2] >= self.region[3]:
            raise InvalidArgumentError(f"region must be (x0, x1, y0, y1) with x0 < x1, y0 < y1, got {self.region}")
        if self.format not in ("csv", "json"):
            raise InvalidArgumentError(f"format must be 'csv' or 'json', got '{self.format}'")
        if self.surface_name not in NAMED_SURFACES:
            raise InvalidArgumentError(f"Unknown surface '{self.surface_name}'")
        if self.eta is not None:
            self.eta = complex(self.eta)

    @property
    def surface_key(self) -> str:
        if self.example in ("flat-p", "flat-s"):
            return "flat"
        if self.example == "custom":
            return self.surface_name
        return self.example

    @classmethod
    def from_settings(
        cls, run: Dict[str, Any], solver: Optional[Dict[str, Any]] = None
    ) -> "RunConfig":
        """
        Build from the `run:` and `solver:` sections of config.yaml.

        A raw half-width `cut` wins over `cut_over_pi`.

        Args:
            run: Run settings (see src.config.DEFAULT_RUN)
            solver: Solver settings

        Returns:
            RunConfig
        """
        eta = None
        if run.get("eta_re") is not None:
            eta = complex(float(run["eta_re"]), float(run.get("eta_im") or 0.0))
        return cls(
            example=run.get("example", "flat-p"),
            lam=float(run.get("lambda", 1.0)),
            mu=float(run.get("mu", 1.0)),
            omega=float(run.get("omega", 20.0)),
            eta=eta,
            h=None if run.get("h") is None else float(run["h"]),
            cut=(
                float(run["cut"]) if run.get("cut") is not None
                else float(run.get("cut_over_pi", 10)) * math.pi
            ),
            N_list=list(run.get("N_list", [8, 16, 32, 64, 128])),
            nb=int(run.get("nb", 101)),
            region=tuple(run.get("region", (-2.5, 2.5, 0.5, 1.5))),
            seed=int(run.get("seed", 20240501)),
            output_path=run.get("output_path", "results/errors.csv"),
            format=run.get("format", "csv"),
            surface_name=run.get("surface", "flat"),
            solver=SolverConfig.from_dict(solver or {}),
        )

    def to_dict(self) -> Dict[str, Any]:
        """Plain-data view for the JSON manifest."""
        eta = None if self.eta is None else complex(self.eta)
        return {
            "example": self.example,
            "lambda": self.lam,
            "mu": self.mu,
            "omega": self.omega,
            "eta_re": None if eta is None else eta.real,
            "eta_im": None if eta is None else eta.imag,
            "h": self.h,
            "cut": self.cut,
            "cut_over_pi": self.cut / math.pi,
            "N_list": list(self.N_list),
            "nb": self.nb,
            "region": list(self.region),
            "seed": self.seed,
            "format": self.format,
            "output_path": self.output_path,
            "surface": self.surface_key,
            "incident": None if self.incident is None else repr(self.incident),
            "solver": {
                "series_threshold_factor": self.solver.series_threshold_factor,
                "diagonal_switch": self.solver.diagonal_switch,
                "block_rows": self.solver.block_rows,
                "condition_limit": self.solver.condition_limit,
            },
        }


@dataclass
class ExperimentRun:
    """Everything one run_experiment() call produces."""

    config: RunConfig
    rows: List[ErrorRow] = field(default_factory=list)
    runtime_seconds: Dict[int, float] = field(default_factory=dict)
    reports: Dict[int, SolveReport] = field(default_factory=dict)
    points: Optional[np.ndarray] = None
    fields: Dict[int, np.ndarray] = field(default_factory=dict)

    def max_error(self, N: int) -> float:
        """Largest of the six statistics at refinement N."""
        return max(row.error for row in self.rows if row.N == N)


def error_metric(reference: Sequence, computed: Sequence) -> float:
    """
    Mean of squared absolute deviations (1/Nb) sum |v_i - v_i^app|^2.

    Args:
        reference: Exact values at the evaluation points
        computed: Approximate values at the same points

    Returns:
        Non-negative error

    Raises:
        InvalidArgumentError: on empty input or a length mismatch
    """
    reference = np.asarray(reference)
    computed = np.asarray(computed)
    if reference.shape != computed.shape:
        raise InvalidArgumentError(
            f"Length mismatch: {reference.shape} reference vs {computed.shape} computed values"
        )
    if reference.size == 0:
        raise InvalidArgumentError("error_metric needs at least one value")
    return float(np.mean(np.abs(reference - computed) ** 2))


def field_statistics(values: np.ndarray) -> Dict[str, np.ndarray]:
    """Re, Im and modulus of both components of (nb, 2) complex field values."""
    return {
        "Re u1": values[:, 0].real,
        "Im u1": values[:, 0].imag,
        "|u1|": np.abs(values[:, 0]),
        "Re u2": values[:, 1].real,
        "Im u2": values[:, 1].imag,
        "|u2|": np.abs(values[:, 1]),
    }


def sample_points(
    region: Sequence[float],
    nb: int,
    seed: int,
    surfaces: Optional[Sequence[SurfaceProfile]] = None,
) -> np.ndarray:
    """
    Uniform random points in the rectangle [x0, x1] x [y0, y1].

    Args:
        region: (x0, x1, y0, y1)
        nb: Number of points >= 1
        seed: Seed of the numpy Generator
        surfaces: Surfaces the points must lie above (all named surfaces by default)

    Returns:
        Array of shape (nb, 2)

    Raises:
        DegenerateGeometryError: if the rectangle does not lie strictly above the
            sampled maximum height of every surface over [x0, x1]
    """
    if nb < 1:
        raise InvalidArgumentError(f"nb must be >= 1, got {nb}")
    x0, x1, y0, y1 = (float(v) for v in region)
    if surfaces is None:
        surfaces = [named_surface(name) for name in NAMED_SURFACES]
    for surface in surfaces:
        ceiling = surface.maximum_height((x0, x1), _PROFILE_SPACING)
        if y0 <= ceiling:
            raise DegenerateGeometryError(
                f"Evaluation region {tuple(region)} is not strictly above surface "
                f"'{surface.name}' (maximum height {ceiling:.4g})"
            )

    rng = np.random.default_rng(seed)
    return rng.uniform(low=(x0, y0), high=(x1, y1), size=(nb, 2))


def default_image_level(surface_name: str, cut: float) -> float:
    """-1 for the flat surface, otherwise the sampled min of f over [-cut-1, cut+1] minus 0.5."""
    if surface_name == "flat":
        return -1.0
    surface = named_surface(surface_name)
    return surface.minimum_height((-cut - 1.0, cut + 1.0), _PROFILE_SPACING) - _IMAGE_GAP


def resolve_config(config: RunConfig) -> RunConfig:
    """Copy of the config with eta and h filled in."""
    h = config.h
    if h is None:
        h = default_image_level(config.surface_key, config.cut)
    eta = config.eta
    if eta is None:
        eta = complex(ElasticMedium(config.lam, config.mu, config.omega).eta)
    return replace(config, h=float(h), eta=eta)


def build_problem(config: RunConfig) -> Tuple[ElasticMedium, SurfaceProfile, IncidentField]:
    """
    Medium, surface and incident field of a resolved configuration.

    Raises:
        DegenerateGeometryError: if the image line touches the surface or a
            point source sits above the image line
    """
    config = resolve_config(config)
    medium = ElasticMedium(lam=config.lam, mu=config.mu, omega=config.omega, eta=config.eta)
    surface = named_surface(config.surface_key, image_level=config.h)
    surface.check_image_level((-config.cut - 1.0, config.cut + 1.0), _PROFILE_SPACING)

    if config.example == "custom":
        incident = config.incident or CombinedPlane(1.0, 0.0)
    else:
        incident = example_incident(config.example)
    if isinstance(incident, PointSource) and not incident.z[1] < surface.image_level:
        raise DegenerateGeometryError(
            f"Point source z={incident.z} must lie below the image line h={surface.image_level}"
        )
    return medium, surface, incident


def _solve_and_evaluate(
    config: RunConfig,
    medium: ElasticMedium,
    surface: SurfaceProfile,
    incident: IncidentField,
    points: np.ndarray,
    n: int,
    progress_logger: Optional[logging.Logger] = None,
) -> Tuple[np.ndarray, SolveReport, float]:
    started = time.perf_counter()
    disc = make_discretization(config.cut, n)
    data = boundary_data_from_incident(incident, medium, surface)
    density = solve_boundary_problem(medium, surface, disc, data, config.solver, progress_logger)
    values = scattered_eval(medium, surface, disc, density, points)
    return values, density.report, time.perf_counter() - started


def _error_rows(example: str, n: int, reference: np.ndarray, values: np.ndarray) -> List[ErrorRow]:
    exact = field_statistics(reference)
    approx = field_statistics(values)
    return [
        ErrorRow(example=example, N=n, statistic=label, error=error_metric(exact[label], approx[label]))
        for label in STATISTICS
    ]


def run_experiment(
    config: RunConfig, progress_logger: Optional[logging.Logger] = None
) -> ExperimentRun:
    """
    Solve for each N in config.N_list, evaluate the scattered field at the
    random points and compare with the exact field where one is known.

    Args:
        config: Run configuration
        progress_logger: Optional logger for progress lines

    Returns:
        ExperimentRun with six error rows per N (none for the custom example)
    """
    config = resolve_config(config)
    medium, surface, incident = build_problem(config)
    points = sample_points(config.region, config.nb, config.seed, [surface])
    reference = None
    if config.example != "custom":
        reference = exact_scattered(config.example, medium, points)

    run = ExperimentRun(config=config, points=points)
    if progress_logger:
        progress_logger.info(
            f"🚀 Running '{config.example}' for N in {config.N_list} (h={config.h:.4g}, eta={config.eta})"
        )
    for index, n in enumerate(config.N_list, 1):
        values, report, elapsed = _solve_and_evaluate(
            config, medium, surface, incident, points, n, progress_logger
        )
        run.fields[n] = values
        run.reports[n] = report
        run.runtime_seconds[n] = elapsed
        if reference is not None:
            run.rows.extend(_error_rows(config.example, n, reference, values))
            logger.info(f"{config.example} N={n}: max error {run.max_error(n):.3e} ({elapsed:.1f}s)")
        if progress_logger:
            progress_logger.info(f"   Progress: {index}/{len(config.N_list)} refinements (N={n})")

    if progress_logger:
        progress_logger.info(f"✅ Finished '{config.example}' ({len(run.rows)} error rows)")
    return run


def run_example(config: RunConfig, progress_logger: Optional[logging.Logger] = None) -> List[ErrorRow]:
    """Six error rows per refinement in config.N_list."""
    return run_experiment(config, progress_logger).rows


async def run_experiment_async(
    config: RunConfig,
    progress_logger: Optional[logging.Logger] = None,
    concurrency: int = 2,
) -> ExperimentRun:
    """
    run_experiment with independent refinements solved concurrently in worker threads.

    Rows are emitted in N_list order regardless of completion order.
    """
    config = resolve_config(config)
    medium, surface, incident = build_problem(config)
    points = sample_points(config.region, config.nb, config.seed, [surface])
    reference = None
    if config.example != "custom":
        reference = exact_scattered(config.example, medium, points)

    semaphore = asyncio.Semaphore(concurrency)
    completed = 0
    total = len(config.N_list)

    async def solve_one(n: int):
        nonlocal completed
        async with semaphore:
            result = await asyncio.to_thread(
                _solve_and_evaluate, config, medium, surface, incident, points, n, None
            )
            completed += 1
            if progress_logger:
                progress_logger.info(f"   Progress: {completed}/{total} refinements (N={n} done)")
            return n, result

    if progress_logger:
        progress_logger.info(f"🚀 Running '{config.example}' for N in {config.N_list} ({concurrency} workers)")
    results = dict(await asyncio.gather(*(solve_one(n) for n in config.N_list)))

    run = ExperimentRun(config=config, points=points)
    for n in config.N_list:
        values, report, elapsed = results[n]
        run.fields[n] = values
        run.reports[n] = report
        run.runtime_seconds[n] = elapsed
        if reference is not None:
            run.rows.extend(_error_rows(config.example, n, reference, values))
    if progress_logger:
        progress_logger.info(f"✅ Finished '{config.example}' ({len(run.rows)} error rows)")
    return run


def evaluate_scattered_field(
    config: RunConfig, points: Sequence[Sequence[float]], N: Optional[int] = None
) -> Dict[str, Any]:
    """
    Scattered field at user-given points for one refinement.

    Args:
        config: Run configuration (any example, including custom)
        points: Evaluation points strictly above the surface
        N: Refinement, defaults to the last entry of config.N_list

    Returns:
        Dict with the points, the field values as [re, im] pairs and, where
        known, the exact values
    """
    config = resolve_config(config)
    n = int(N or config.N_list[-1])
    medium, surface, incident = build_problem(config)
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    values, report, elapsed = _solve_and_evaluate(config, medium, surface, incident, pts, n)

    def as_pairs(arr: np.ndarray) -> List[List[List[float]]]:
        return [[[c.real, c.imag] for c in row] for row in arr]

    result = {
        "example": config.example,
        "N": n,
        "points": pts.tolist(),
        "scattered": as_pairs(values),
        "report": report.to_dict(),
        "runtime_seconds": elapsed,
    }
    if config.example != "custom":
        result["exact"] = as_pairs(exact_scattered(config.example, medium, pts))
    return result


def density_self_convergence_study(
    config: RunConfig, N_list: Optional[List[int]] = None
) -> List[Dict[str, float]]:
    """
    Differences of consecutive boundary densities on shared knots.

    Args:
        config: Run configuration
        N_list: Refinements, each a multiple of the previous (config.N_list by default)

    Returns:
        Rows {"N", "N_fine", "difference"}
    """
    config = resolve_config(config)
    medium, surface, incident = build_problem(config)
    data = boundary_data_from_incident(incident, medium, surface)
    return density_self_convergence(
        medium, surface, config.cut, N_list or config.N_list, data, config.solver
    )
