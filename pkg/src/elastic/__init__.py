"""
Nyström boundary integral solver for time-harmonic elastic scattering by
unbounded rough surfaces with a Dirichlet (rigid) boundary condition.

This module provides:
- Green's tensor and generalized traction of the Navier equation
- Logarithmic splitting of the boundary kernel with stable near-diagonal evaluation
- Trigonometric quadrature and dense Nyström assembly/solve
- Incident fields, exact reference fields and scattered-field evaluation

Example Usage:
    from src.elastic import (
        ElasticMedium, named_surface, make_discretization,
        PlaneP, boundary_data_from_incident, solve_boundary_problem, scattered_eval,
    )

    medium = ElasticMedium(lam=1.0, mu=1.0, omega=20.0)
    surface = named_surface("flat", image_level=-1.0)
    disc = make_discretization(10 * math.pi, 32)

    data = boundary_data_from_incident(PlaneP((0.0, -1.0)), medium, surface)
    density = solve_boundary_problem(medium, surface, disc, data)
    u = scattered_eval(medium, surface, disc, density, [[0.0, 1.0]])
"""

from .config import SolverConfig
from .errors import (
    DegenerateGeometryError,
    DomainError,
    InvalidArgumentError,
    NearSingularSystemError,
    ScatteringError,
    SingularityError,
)
from .fields import (
    CombinedPlane,
    PlaneP,
    PlaneS,
    PointSource,
    boundary_data_from_incident,
    exact_scattered,
    incident_eval,
    scattered_eval,
)
from .kernel_split import KernelPair, kernel_pair
from .navier_green import ElasticMedium, green_tensor, green_traction
from .nystrom_solver import (
    BoundaryData,
    Density,
    assemble,
    interpolate_density,
    solve,
    solve_boundary_problem,
)
from .quadrature import Discretization, make_discretization
from .surface import SurfaceProfile, named_surface, sample_profile

__all__ = [
    "SolverConfig",
    "ScatteringError",
    "DomainError",
    "SingularityError",
    "DegenerateGeometryError",
    "InvalidArgumentError",
    "NearSingularSystemError",
    "ElasticMedium",
    "green_tensor",
    "green_traction",
    "SurfaceProfile",
    "named_surface",
    "sample_profile",
    "KernelPair",
    "kernel_pair",
    "Discretization",
    "make_discretization",
    "BoundaryData",
    "Density",
    "assemble",
    "solve",
    "solve_boundary_problem",
    "interpolate_density",
    "PlaneP",
    "PlaneS",
    "CombinedPlane",
    "PointSource",
    "incident_eval",
    "exact_scattered",
    "boundary_data_from_incident",
    "scattered_eval",
]

__version__ = "1.0.0"
