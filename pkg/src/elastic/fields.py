"""
Incident fields, closed-form reference solutions and the scattered field
evaluated from a solved density.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import InvalidArgumentError, SingularityError
from .navier_green import ElasticMedium, combined_layer_kernel, green_tensor
from .nystrom_solver import BoundaryData, Density
from .quadrature import Discretization
from .surface import SurfaceProfile

logger = logging.getLogger(__name__)

DOWNWARD = (0.0, -1.0)
DEFAULT_SOURCE = (0.0, -3.0)
DEFAULT_POLARIZATION = (0.6, 0.8)

# Evaluation points processed per vectorized chunk
_POINT_CHUNK = 64


def _unit(theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (2,) or not np.isclose(np.linalg.norm(theta), 1.0, atol=1e-12):
        raise InvalidArgumentError(f"Direction must be a unit 2-vector, got {theta}")
    return theta


def _points(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (2,):
        raise InvalidArgumentError(f"Points must have a trailing axis of length 2, got {x.shape}")
    return x


@dataclass(frozen=True)
class PlaneP:
    """Compressional plane wave theta exp(i kappa_p x.theta)."""

    theta: tuple = DOWNWARD

    def __post_init__(self):
        object.__setattr__(self, "theta", tuple(_unit(self.theta)))

    def evaluate(self, medium: ElasticMedium, x) -> np.ndarray:
        x = _points(x)
        theta = np.asarray(self.theta)
        phase = np.exp(1j * medium.kappa_p * (x @ theta))
        return phase[..., None] * theta


@dataclass(frozen=True)
class PlaneS:
    """Shear plane wave theta_perp exp(i kappa_s x.theta) with theta_perp = (theta_2, -theta_1)."""

    theta: tuple = DOWNWARD

    def __post_init__(self):
        object.__setattr__(self, "theta", tuple(_unit(self.theta)))

    def evaluate(self, medium: ElasticMedium, x) -> np.ndarray:
        x = _points(x)
        theta = np.asarray(self.theta)
        theta_perp = np.array([theta[1], -theta[0]])
        phase = np.exp(1j * medium.kappa_s * (x @ theta))
        return phase[..., None] * theta_perp


@dataclass(frozen=True)
class CombinedPlane:
    """alpha * P-wave + beta * S-wave travelling in direction theta."""

    alpha: complex = 1.0
    beta: complex = 0.0
    theta: tuple = DOWNWARD

    def __post_init__(self):
        object.__setattr__(self, "theta", tuple(_unit(self.theta)))
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))

    def evaluate(self, medium: ElasticMedium, x) -> np.ndarray:
        return (
            self.alpha * PlaneP(self.theta).evaluate(medium, x)
            + self.beta * PlaneS(self.theta).evaluate(medium, x)
        )


@dataclass(frozen=True)
class PointSource:
    """Point force G(x, z) q located at z below the surface."""

    z: tuple = DEFAULT_SOURCE
    q: tuple = DEFAULT_POLARIZATION

    def __post_init__(self):
        object.__setattr__(self, "z", tuple(float(v) for v in self.z))
        object.__setattr__(self, "q", tuple(complex(v) for v in self.q))
        if len(self.z) != 2 or len(self.q) != 2:
            raise InvalidArgumentError("Point source needs 2-vectors z and q")

    def evaluate(self, medium: ElasticMedium, x) -> np.ndarray:
        x = _points(x)
        tensor = green_tensor(medium, x, np.asarray(self.z))
        return tensor @ np.asarray(self.q)


IncidentField = Union[PlaneP, PlaneS, CombinedPlane, PointSource]


def incident_eval(incident: IncidentField, medium: ElasticMedium, x) -> np.ndarray:
    """
    Incident displacement at x.

    Args:
        incident: PlaneP, PlaneS, CombinedPlane or PointSource
        medium: Elastic medium
        x: Point(s), shape (..., 2)

    Returns:
        Complex array (..., 2)

    Raises:
        SingularityError: for a point source evaluated at its own location
    """
    return incident.evaluate(medium, x)


def example_incident(example: str) -> IncidentField:
    """Incident field used by a named example."""
    if example == "flat-p":
        return PlaneP(DOWNWARD)
    if example == "flat-s":
        return PlaneS(DOWNWARD)
    if example in ("periodic", "rough"):
        return PointSource(DEFAULT_SOURCE, DEFAULT_POLARIZATION)
    raise InvalidArgumentError(f"No incident field is defined for example '{example}'")


def exact_scattered(
    example: str, medium: ElasticMedium, x, source: Optional[PointSource] = None
) -> np.ndarray:
    """
    Closed-form scattered field of a named example.

    flat-p: (0, exp(i kappa_p x2)); flat-s: (exp(i kappa_s x2), 0);
    periodic / rough: -G(x, z) q for the point source below the surface.

    Args:
        example: "flat-p", "flat-s", "periodic" or "rough"
        medium: Elastic medium
        x: Point(s) above the surface, shape (..., 2)
        source: Point source, default z = (0, -3), q = (0.6, 0.8)

    Returns:
        Complex array (..., 2)
    """
    x = _points(x)
    if example == "flat-p":
        values = np.zeros(x.shape, dtype=complex)
        values[..., 1] = np.exp(1j * medium.kappa_p * x[..., 1])
        return values
    if example == "flat-s":
        values = np.zeros(x.shape, dtype=complex)
        values[..., 0] = np.exp(1j * medium.kappa_s * x[..., 1])
        return values
    if example in ("periodic", "rough"):
        return -(source or PointSource()).evaluate(medium, x)
    raise InvalidArgumentError(f"No exact solution is known for example '{example}'")


def boundary_data_from_incident(
    incident: IncidentField, medium: ElasticMedium, surface: SurfaceProfile
) -> BoundaryData:
    """Dirichlet data g(s) = -u_inc(x(s))."""
    return BoundaryData(lambda s: -incident.evaluate(medium, surface.point(s)))


def scattered_eval(
    medium: ElasticMedium,
    surface: SurfaceProfile,
    disc: Discretization,
    density: Density,
    x,
) -> np.ndarray:
    """
    Scattered field from the combined layer potential with the pi/N rule:

        (pi/N) sum_j [Pi(x,y_j) - i eta G(x,y_j) - (Pi(x,y'_j) - i eta G(x,y'_j))] psi_j J_j

    Args:
        medium: Elastic medium
        surface: Surface profile
        disc: Knot set
        density: Solved density on the same knots
        x: Point(s) strictly above the surface, shape (..., 2)

    Returns:
        Complex array (..., 2)

    Raises:
        SingularityError: if a point lies on or below the surface
    """
    x = _points(x)
    if density.disc.count != disc.count:
        raise InvalidArgumentError("Density and discretization do not match")
    points = x.reshape(-1, 2)
    heights = np.broadcast_to(surface.f(points[:, 0]), points[:, 0].shape)
    if np.any(points[:, 1] <= heights):
        raise SingularityError("Scattered field requested on or below the surface")

    weighted = density.values * surface.jacobian(disc.knots)[:, None]
    out = np.empty((points.shape[0], 2), dtype=complex)
    for start in range(0, points.shape[0], _POINT_CHUNK):
        chunk = points[start:start + _POINT_CHUNK]
        kernel = combined_layer_kernel(medium, surface, chunk[:, None, :], disc.knots[None, :])
        out[start:start + _POINT_CHUNK] = disc.step * np.einsum("pjkl,jl->pk", kernel, weighted)
    return out.reshape(x.shape)
