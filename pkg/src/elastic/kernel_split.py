"""
Kernel of the boundary operator D - i eta S and its logarithmic splitting

    A(s,t) = (1/2pi) ln(4 sin^2((s-t)/2)) B(s,t) + C(s,t)

with A = -i eta A1 + A2 - A3:
    A1 = 2 G(x(s), y(t)) J(t)                      single layer
    A2 = 2 Pi(x(s), y(t)) J(t)                     double layer
    A3 = 2 [Pi(x(s), y'(t)) - i eta G(x(s), y'(t))] J(t)   image part (smooth)

A1 and A2 split as B ln|s-t| + C. The B pieces are the kernels with every
Hankel function replaced by (2i/pi) J_n. The C pieces are evaluated either as
A - B ln|s-t| or, close to the diagonal, from the regular remainder of the
Hankel functions plus the negative-power terms, which combine into bounded
closed forms for the chosen stress parameters.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy.special import expit

from . import specfun
from .config import SolverConfig
from .errors import SingularityError
from .navier_green import (
    ComplexMat2,
    ElasticMedium,
    bessel_table,
    direct_kernels,
    gradient_from_coefficients,
    image_kernels,
    radial_coefficients,
    regular_table,
    tensor_from_coefficients,
    traction_from_gradient,
)
from .surface import PairGeometry, SurfaceProfile, pair_geometry

logger = logging.getLogger(__name__)


def chi(u):
    """
    Smooth even cut-off: 1 for |u| <= 1, 0 for |u| >= pi and
    1 / (1 + exp(1/(pi - |u|) + 1/(1 - |u|))) in between.
    """
    arr = np.abs(np.atleast_1d(np.asarray(u, dtype=float)))
    out = np.zeros_like(arr)
    out[arr <= 1.0] = 1.0
    mid = (arr > 1.0) & (arr < np.pi)
    v = arr[mid]
    out[mid] = expit(-(1.0 / (np.pi - v) + 1.0 / (1.0 - v)))
    out = out.reshape(np.shape(u))
    return float(out) if out.ndim == 0 else out


def series_threshold(medium: ElasticMedium, config: SolverConfig) -> float:
    """|s - t| below which C is assembled from the regularized series."""
    return config.series_threshold_factor * min(1.0, 1.0 / medium.kappa_s)


# ---------------------------------------------------------------------------
# Vectorized pieces on flattened PairGeometry
# ---------------------------------------------------------------------------

def _two_jac(g: PairGeometry) -> np.ndarray:
    return 2.0 * g.jac_t[..., None, None]


def _direct_pieces(medium: ElasticMedium, g: PairGeometry) -> Tuple[np.ndarray, np.ndarray]:
    """A1, A2."""
    tensor, traction = direct_kernels(medium, g.d, g.nu_t, g.nu_perp_t)
    return _two_jac(g) * tensor, _two_jac(g) * traction


def _log_pieces(medium: ElasticMedium, g: PairGeometry) -> Tuple[np.ndarray, np.ndarray]:
    """B1, B2: the coefficients of ln|s - t|."""
    a, b, a_r, b_r = radial_coefficients(medium, bessel_table(medium, g.r))
    b1 = _two_jac(g) * tensor_from_coefficients(a, b, g.d)
    grad = -gradient_from_coefficients(b, a_r, b_r, g.d)
    b2 = _two_jac(g) * traction_from_gradient(medium, grad, g.nu_t, g.nu_perp_t)
    return b1, b2


def _series_pieces(medium: ElasticMedium, g: PairGeometry) -> Tuple[np.ndarray, np.ndarray]:
    """C1, C2 near the diagonal, including s = t."""
    a, b, a_r, b_r = radial_coefficients(medium, regular_table(medium, g.r, g.log_ratio))
    s_a, s_b, s_b2 = medium.singular_a, medium.singular_b, medium.singular_b2
    eye = np.eye(2)

    c1 = _two_jac(g) * (tensor_from_coefficients(a, b, g.d) + s_b * g.zeta)

    grad = -gradient_from_coefficients(b, a_r, b_r, g.d)
    regular = traction_from_gradient(medium, grad, g.nu_t, g.nu_perp_t)
    # O(1/r) terms cancel exactly for the chosen mu~, lambda~; what is left is bounded
    scale = ((medium.mu + medium.mu_tilde) * g.xi / g.jac_t)[..., None, None]
    singular = scale * (
        (s_a + s_b) * eye - (2.0 * s_b + s_b2 * g.r ** 2)[..., None, None] * g.zeta
    ) + medium.lambda_tilde * s_b2 * (g.d[..., :, None] * g.nu_t[..., None, :])
    c2 = _two_jac(g) * (regular + singular)
    return c1, c2


def _image_piece(medium: ElasticMedium, g: PairGeometry) -> np.ndarray:
    """A3."""
    tensor, traction = image_kernels(medium, g.d_image, g.nu_t, g.nu_perp_t)
    return _two_jac(g) * (traction - 1j * medium.eta * tensor)


@dataclass
class SplitPieces:
    """B1, C1, B2, C2 and A3 on a flat list of parameter pairs."""

    b1: np.ndarray
    c1: np.ndarray
    b2: np.ndarray
    c2: np.ndarray
    a3: np.ndarray


def split_pieces(
    medium: ElasticMedium, g: PairGeometry, threshold: float
) -> SplitPieces:
    """
    Evaluate every split piece on flattened geometry.

    Pairs with |s - t| < threshold use the series branch, the rest use
    C = A - B ln|s - t| with direct Hankel evaluation.
    """
    b1, b2 = _log_pieces(medium, g)
    c1 = np.empty_like(b1)
    c2 = np.empty_like(b2)
    near = np.abs(g.u) < threshold
    if np.any(near):
        c1[near], c2[near] = _series_pieces(medium, g.subset(near))
    far = ~near
    if np.any(far):
        a1, a2 = _direct_pieces(medium, g.subset(far))
        log_u = np.log(np.abs(g.u[far]))[:, None, None]
        c1[far] = a1 - b1[far] * log_u
        c2[far] = a2 - b2[far] * log_u
    return SplitPieces(b1=b1, c1=c1, b2=b2, c2=c2, a3=_image_piece(medium, g))


def _flat_geometry(
    surface: SurfaceProfile, s, t, config: SolverConfig
) -> Tuple[PairGeometry, tuple]:
    shape = np.broadcast(np.asarray(s), np.asarray(t)).shape
    s_b, t_b = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    g = pair_geometry(surface, s_b.ravel(), t_b.ravel(), config.diagonal_switch)
    return g, shape


def _shaped(values: np.ndarray, shape: tuple) -> ComplexMat2:
    return values.reshape(shape + (2, 2))


# ---------------------------------------------------------------------------
# Public kernel operations
# ---------------------------------------------------------------------------

def kernel_A1(medium: ElasticMedium, surface: SurfaceProfile, s, t) -> ComplexMat2:
    """Single-layer kernel 2 G(x(s), y(t)) sqrt(1 + f'(t)^2); s != t."""
    g, shape = _flat_geometry(surface, s, t, SolverConfig())
    if np.any(g.r == 0):
        raise SingularityError("kernel_A1 is undefined at s = t")
    return _shaped(_direct_pieces(medium, g)[0], shape)


def kernel_A2(medium: ElasticMedium, surface: SurfaceProfile, s, t) -> ComplexMat2:
    """Double-layer kernel 2 Pi(x(s), y(t)) sqrt(1 + f'(t)^2); s != t."""
    g, shape = _flat_geometry(surface, s, t, SolverConfig())
    if np.any(g.r == 0):
        raise SingularityError("kernel_A2 is undefined at s = t")
    return _shaped(_direct_pieces(medium, g)[1], shape)


def kernel_A3(medium: ElasticMedium, surface: SurfaceProfile, s, t) -> ComplexMat2:
    """Image kernel 2 [Pi(x, y') - i eta G(x, y')] sqrt(1 + f'(t)^2); smooth everywhere."""
    g, shape = _flat_geometry(surface, s, t, SolverConfig())
    return _shaped(_image_piece(medium, g), shape)


def kernel_B1_C1(
    medium: ElasticMedium, surface: SurfaceProfile, s, t, config: Optional[SolverConfig] = None
) -> Tuple[ComplexMat2, ComplexMat2]:
    """
    Split of the single-layer kernel A1 = B1 ln|s-t| + C1, valid on the diagonal.

    Returns:
        (B1, C1)
    """
    config = config or SolverConfig()
    g, shape = _flat_geometry(surface, s, t, config)
    pieces = split_pieces(medium, g, series_threshold(medium, config))
    return _shaped(pieces.b1, shape), _shaped(pieces.c1, shape)


def kernel_B2_C2(
    medium: ElasticMedium, surface: SurfaceProfile, s, t, config: Optional[SolverConfig] = None
) -> Tuple[ComplexMat2, ComplexMat2]:
    """
    Split of the double-layer kernel A2 = B2 ln|s-t| + C2, valid on the diagonal.

    Returns:
        (B2, C2)
    """
    config = config or SolverConfig()
    g, shape = _flat_geometry(surface, s, t, config)
    pieces = split_pieces(medium, g, series_threshold(medium, config))
    return _shaped(pieces.b2, shape), _shaped(pieces.c2, shape)


@dataclass
class KernelPair:
    """
    Final split kernel (B, C) of the boundary operator.

    B = pi B* chi(s-t) and
    C = B* [(1 - chi) ln|s-t| - chi ln(sin((s-t)/2) / ((s-t)/2))] + C*
    with B* = -i eta B1 + B2 and C* = -i eta C1 + C2 - A3.
    """

    medium: ElasticMedium
    surface: SurfaceProfile
    config: SolverConfig = field(default_factory=SolverConfig)

    @property
    def threshold(self) -> float:
        return series_threshold(self.medium, self.config)

    def evaluate(self, s, t) -> Tuple[ComplexMat2, ComplexMat2]:
        """
        B(s, t) and C(s, t) on broadcast parameter arrays.

        Pairs with |s - t| >= pi only need the full kernel A; B vanishes there.

        Returns:
            (B, C) with shape (..., 2, 2)
        """
        g, shape = _flat_geometry(self.surface, s, t, self.config)
        eta = self.medium.eta
        n = g.u.shape[0]
        kernel_b = np.zeros((n, 2, 2), dtype=complex)
        kernel_c = np.empty((n, 2, 2), dtype=complex)

        band = np.abs(g.u) < np.pi
        outside = ~band
        if np.any(outside):
            g_out = g.subset(outside)
            a1, a2 = _direct_pieces(self.medium, g_out)
            kernel_c[outside] = -1j * eta * a1 + a2 - _image_piece(self.medium, g_out)

        if np.any(band):
            g_in = g.subset(band)
            pieces = split_pieces(self.medium, g_in, self.threshold)
            b_star = -1j * eta * pieces.b1 + pieces.b2
            c_star = -1j * eta * pieces.c1 + pieces.c2 - pieces.a3
            u = g_in.u
            cut = chi(u)[:, None, None]
            kernel_b[band] = np.pi * b_star * cut

            values = np.empty_like(c_star)
            near = np.abs(u) < self.threshold
            values[near] = c_star[near] - b_star[near] * specfun.log_sinc_half(u[near])[:, None, None]
            mid = ~near
            # C = A - chi B* ln|2 sin(u/2)| with A = B* ln|u| + C*
            log_u = np.log(np.abs(u[mid]))[:, None, None]
            log_two_sin = np.log(np.abs(2.0 * np.sin(u[mid] / 2.0)))[:, None, None]
            values[mid] = c_star[mid] + b_star[mid] * (log_u - cut[mid] * log_two_sin)
            kernel_c[band] = values

        return _shaped(kernel_b, shape), _shaped(kernel_c, shape)

    def B(self, s, t) -> ComplexMat2:
        return self.evaluate(s, t)[0]

    def C(self, s, t) -> ComplexMat2:
        return self.evaluate(s, t)[1]

    def full_kernel(self, s, t) -> ComplexMat2:
        """A = -i eta A1 + A2 - A3 by direct evaluation (s != t)."""
        eta = self.medium.eta
        return (
            -1j * eta * kernel_A1(self.medium, self.surface, s, t)
            + kernel_A2(self.medium, self.surface, s, t)
            - kernel_A3(self.medium, self.surface, s, t)
        )


def kernel_pair(
    medium: ElasticMedium, surface: SurfaceProfile, config: Optional[SolverConfig] = None
) -> KernelPair:
    """Build the split kernel for a medium and surface."""
    pair = KernelPair(medium=medium, surface=surface, config=config or SolverConfig())
    logger.debug(
        f"KernelPair for surface '{surface.name}' (h={surface.image_level}), "
        f"series threshold {pair.threshold:.3g}"
    )
    return pair
