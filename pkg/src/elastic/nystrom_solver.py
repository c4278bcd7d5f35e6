"""
Nyström collocation for the boundary integral equation

    psi(s) + int A(s,t) psi(t) dt = 2 g(s),    g = -u_inc on the surface,

discretized at the knots as

    psi_i + sum_j [R_j(t_i) B(t_i,t_j) + (pi/N) C(t_i,t_j)] psi_j = 2 g(t_i).

The 2K x 2K system stores the unknowns knot by knot: (psi_0,1, psi_0,2, psi_1,1, ...).
"""
import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np
import scipy.linalg as la

from .config import SolverConfig
from .errors import InvalidArgumentError, NearSingularSystemError
from .kernel_split import KernelPair, kernel_pair
from .navier_green import ElasticMedium
from .quadrature import Discretization, knot_weights, log_weight, make_discretization
from .surface import SurfaceProfile

logger = logging.getLogger(__name__)

# Residual above this multiple of ||2g|| is logged as a warning
RESIDUAL_TOLERANCE = 1e-10


@dataclass
class BoundaryData:
    """Dirichlet data g(s) = g(x(s)) as a vectorized function s -> (..., 2) complex."""

    evaluator: Callable[[np.ndarray], np.ndarray]

    def __call__(self, s) -> np.ndarray:
        return np.asarray(self.evaluator(np.asarray(s, dtype=float)), dtype=complex)

    def on_knots(self, disc: Discretization) -> np.ndarray:
        """g at every knot, shape (K, 2); rejects non-finite values."""
        values = self(disc.knots).reshape(disc.count, 2)
        if not np.all(np.isfinite(values)):
            raise InvalidArgumentError("Boundary data is not finite on the knot window")
        return values

    @classmethod
    def zero(cls) -> "BoundaryData":
        return cls(lambda s: np.zeros(np.shape(s) + (2,), dtype=complex))


@dataclass
class SolveReport:
    """Diagnostics of one dense solve."""

    unknowns: int
    residual: float
    relative_residual: float
    condition: float
    assembly_seconds: float = 0.0
    solve_seconds: float = 0.0

    def to_dict(self) -> Dict[str, float]:
        return {
            "unknowns": self.unknowns,
            "residual": self.residual,
            "relative_residual": self.relative_residual,
            "condition": self.condition,
            "assembly_seconds": self.assembly_seconds,
            "solve_seconds": self.solve_seconds,
        }


@dataclass
class Density:
    """Solved boundary density psi at the knots, values of shape (K, 2)."""

    disc: Discretization
    values: np.ndarray
    report: Optional[SolveReport] = field(default=None, compare=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex).reshape(-1, 2)
        if self.values.shape[0] != self.disc.count:
            raise InvalidArgumentError(
                f"Density has {self.values.shape[0]} values for {self.disc.count} knots"
            )
        if not np.all(np.isfinite(self.values)):
            raise InvalidArgumentError("Density contains non-finite values")

    @property
    def knots(self) -> np.ndarray:
        return self.disc.knots


def _check_pair(medium: ElasticMedium, surface: SurfaceProfile, pair: KernelPair) -> None:
    if pair.medium != medium or pair.surface != surface:
        raise InvalidArgumentError("Kernel pair was built for another medium or surface")


def assemble(
    medium: ElasticMedium,
    surface: SurfaceProfile,
    disc: Discretization,
    pair: KernelPair,
    progress_logger: Optional[logging.Logger] = None,
) -> np.ndarray:
    """
    Dense collocation matrix with blocks
    delta_ij I + R_j(t_i) B(t_i, t_j) + (pi/N) C(t_i, t_j).

    Rows are evaluated in blocks of pair.config.block_rows collocation knots.

    Args:
        medium: Elastic medium
        surface: Surface profile
        disc: Knot set
        pair: Split kernel for the same medium and surface
        progress_logger: Optional logger for progress lines

    Returns:
        Complex array of shape (2K, 2K)
    """
    _check_pair(medium, surface, pair)
    count = disc.count
    step = disc.step
    knots = disc.knots
    block_rows = pair.config.block_rows
    system = np.empty((2 * count, 2 * count), dtype=complex)
    eye = np.eye(2)

    for start in range(0, count, block_rows):
        rows = np.arange(start, min(start + block_rows, count))
        kernel_b, kernel_c = pair.evaluate(knots[rows][:, None], knots[None, :])
        weights = knot_weights(disc, rows)
        block = weights[:, :, None, None] * kernel_b + step * kernel_c
        block[np.arange(len(rows)), rows] += eye
        system[2 * rows[0]:2 * (rows[-1] + 1)] = block.transpose(0, 2, 1, 3).reshape(
            2 * len(rows), 2 * count
        )
        logger.debug(f"Assembled rows {rows[0]}..{rows[-1]} of {count}")
        if progress_logger:
            progress_logger.info(f"   Progress: {rows[-1] + 1}/{count} collocation rows")

    return system


def _condition_estimate(system: np.ndarray, lu: np.ndarray) -> float:
    """1-norm condition number estimate from the LU factors."""
    gecon, = la.get_lapack_funcs(("gecon",), (lu,))
    anorm = np.linalg.norm(system, 1)
    rcond, info = gecon(lu, anorm, norm="1")
    if info != 0 or rcond <= 0:
        return float("inf")
    return float(1.0 / rcond)


def solve(
    system: np.ndarray,
    boundary_data: BoundaryData,
    disc: Discretization,
    config: Optional[SolverConfig] = None,
) -> Density:
    """
    Solve the collocation system for the right side 2 g(t_i).

    Args:
        system: Matrix from assemble()
        boundary_data: Dirichlet data g
        disc: Knot set used for the system
        config: Solver switches (condition limit)

    Returns:
        Density with a SolveReport attached

    Raises:
        NearSingularSystemError: if the condition estimate exceeds the limit
    """
    config = config or SolverConfig()
    if system.shape != (2 * disc.count, 2 * disc.count):
        raise InvalidArgumentError(
            f"System shape {system.shape} does not match {disc.count} knots"
        )
    rhs = 2.0 * boundary_data.on_knots(disc).reshape(-1)

    started = time.perf_counter()
    lu, piv = la.lu_factor(system, check_finite=True)
    condition = _condition_estimate(system, lu)
    if condition > config.condition_limit:
        raise NearSingularSystemError(
            f"Collocation matrix is near-singular (condition estimate {condition:.3e})",
            condition=condition,
        )
    solution = la.lu_solve((lu, piv), rhs)
    elapsed = time.perf_counter() - started

    residual = float(np.max(np.abs(system @ solution - rhs))) if rhs.size else 0.0
    scale = float(np.max(np.abs(rhs))) if rhs.size else 0.0
    relative = residual / scale if scale > 0 else residual
    if relative > RESIDUAL_TOLERANCE:
        logger.warning(f"Solve residual {relative:.3e} (relative) exceeds {RESIDUAL_TOLERANCE}")
    logger.debug(f"Solved {rhs.size} unknowns, condition ~{condition:.3e}, residual {relative:.3e}")

    report = SolveReport(
        unknowns=rhs.size,
        residual=residual,
        relative_residual=relative,
        condition=condition,
        solve_seconds=elapsed,
    )
    return Density(disc=disc, values=solution.reshape(-1, 2), report=report)


def solve_boundary_problem(
    medium: ElasticMedium,
    surface: SurfaceProfile,
    disc: Discretization,
    boundary_data: BoundaryData,
    config: Optional[SolverConfig] = None,
    progress_logger: Optional[logging.Logger] = None,
) -> Density:
    """Assemble and solve in one call; the report records assembly time too."""
    config = config or SolverConfig()
    pair = kernel_pair(medium, surface, config)
    started = time.perf_counter()
    system = assemble(medium, surface, disc, pair, progress_logger=progress_logger)
    assembly_seconds = time.perf_counter() - started
    density = solve(system, boundary_data, disc, config)
    density.report.assembly_seconds = assembly_seconds
    logger.info(
        f"N={disc.N}: {2 * disc.count} unknowns, assembly {assembly_seconds:.2f}s, "
        f"solve {density.report.solve_seconds:.2f}s"
    )
    return density


def interpolate_density(
    density: Density, pair: KernelPair, boundary_data: BoundaryData, s: float
) -> np.ndarray:
    """
    Nyström interpolation psi(s) = 2 g(s) - sum_j alpha_j(s) psi(t_j).

    Args:
        density: Solved density
        pair: Split kernel used for the solve
        boundary_data: Dirichlet data used for the solve
        s: Parameter inside the knot window

    Returns:
        Complex 2-vector

    Raises:
        InvalidArgumentError: if s lies outside [-cut, cut]
    """
    disc = density.disc
    s = float(s)
    if not disc.contains(s):
        raise InvalidArgumentError(f"s={s} lies outside the knot window [-{disc.cut}, {disc.cut}]")
    kernel_b, kernel_c = pair.evaluate(s, disc.knots)
    weights = np.asarray(log_weight(disc.N, s, disc.knots))
    alpha = weights[:, None, None] * kernel_b + disc.step * kernel_c
    coupling = np.einsum("jkl,jl->k", alpha, density.values)
    return 2.0 * boundary_data(s).reshape(2) - coupling


def density_self_convergence(
    medium: ElasticMedium,
    surface: SurfaceProfile,
    cut: float,
    N_list: List[int],
    boundary_data: BoundaryData,
    config: Optional[SolverConfig] = None,
    progress_logger: Optional[logging.Logger] = None,
) -> List[Dict[str, float]]:
    """
    Max-norm difference of densities of consecutive refinements on the coarse knots.

    Each refinement in N_list must be a multiple of its predecessor.

    Returns:
        One dict {"N", "N_fine", "difference"} per consecutive pair
    """
    levels = sorted(set(int(n) for n in N_list))
    if len(levels) < 2:
        raise InvalidArgumentError("Self-convergence needs at least two refinement levels")
    for coarse, fine in zip(levels, levels[1:]):
        if fine % coarse:
            raise InvalidArgumentError(f"N={fine} is not a multiple of N={coarse}")
    densities = {}
    for n in levels:
        disc = make_discretization(cut, n)
        densities[n] = solve_boundary_problem(
            medium, surface, disc, boundary_data, config, progress_logger
        )

    rows = []
    for coarse, fine in zip(levels, levels[1:]):
        shared = densities[fine].values[:: fine // coarse]
        difference = float(np.max(np.abs(shared - densities[coarse].values)))
        rows.append({"N": coarse, "N_fine": fine, "difference": difference})
        logger.info(f"Density self-convergence N={coarse} -> {fine}: {difference:.3e}")
    return rows
