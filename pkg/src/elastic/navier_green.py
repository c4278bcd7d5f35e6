"""
Free-space Green's tensor of the two-dimensional Navier equation

    mu * Laplace(u) + (lambda + mu) * grad div u + omega^2 u = 0,

its generalized traction taken at the surface point, and the image-point
combination used in place of the Dirichlet half-plane tensor.

G(x, y) = a(r) I + b(r) d d^T with d = x - y, r = |d| and

    a = (i/4mu) H0(ks r) - (i/4w^2) (g1(ks) - g1(kp))
    b = (i/4w^2) (g2(ks) - g2(kp)),       g_n(k) = k^n H_n(k r) / r^n.

Every kernel in the package is assembled from the four radial coefficients
(a, b, a'/r, b'/r). Swapping the radial family (Hankel, Bessel-J, or the
regularized remainder) produces the split pieces without re-deriving the
tensor algebra. The half-plane correction term U is not modelled; the
Dirichlet tensor is replaced by G(x, y) - G(x, y').
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import specfun
from .errors import DegenerateGeometryError, InvalidArgumentError, SingularityError
from .surface import SurfaceProfile

logger = logging.getLogger(__name__)

# 2x2 complex matrix (or a stack of them along leading axes)
ComplexMat2 = np.ndarray

REFLECTION = np.array([1.0, -1.0])


@dataclass(frozen=True)
class ElasticMedium:
    """
    Isotropic elastic medium at a fixed angular frequency.

    The stress parameters mu_tilde, lambda_tilde follow the choice that makes the
    double-layer kernel weakly singular:
        mu_tilde = mu (lambda + mu) / (lambda + 3 mu)
        lambda_tilde = (lambda + mu)(lambda + 2 mu) / (lambda + 3 mu)
    The coupling eta defaults to kappa_s.
    """

    lam: float = 1.0
    mu: float = 1.0
    omega: float = 20.0
    eta: Optional[complex] = None

    def __post_init__(self):
        if not self.mu > 0:
            raise InvalidArgumentError(f"mu must be > 0, got {self.mu}")
        if not self.lam + 2.0 * self.mu > 0:
            raise InvalidArgumentError(
                f"lambda + 2 mu must be > 0, got {self.lam + 2.0 * self.mu}"
            )
        if not self.omega > 0:
            raise InvalidArgumentError(f"omega must be > 0, got {self.omega}")
        if self.lam + 3.0 * self.mu == 0:
            raise InvalidArgumentError("lambda + 3 mu must be non-zero")
        eta = complex(self.kappa_s if self.eta is None else self.eta)
        if not eta.real > 0:
            raise InvalidArgumentError(f"eta must have positive real part, got {eta}")
        object.__setattr__(self, "eta", eta)

    @property
    def kappa_s(self) -> float:
        return self.omega / np.sqrt(self.mu)

    @property
    def kappa_p(self) -> float:
        return self.omega / np.sqrt(self.lam + 2.0 * self.mu)

    @property
    def c_s2(self) -> float:
        return 1.0 / self.mu

    @property
    def c_p2(self) -> float:
        return 1.0 / (self.lam + 2.0 * self.mu)

    @property
    def mu_tilde(self) -> float:
        return self.mu * (self.lam + self.mu) / (self.lam + 3.0 * self.mu)

    @property
    def lambda_tilde(self) -> float:
        return (self.lam + self.mu) * (self.lam + 2.0 * self.mu) / (self.lam + 3.0 * self.mu)

    # Coefficients of the negative powers of r left in (a, b, a'/r, b'/r)
    # after the logarithmic part is removed:
    #   b ~ S_b / r^2,  a'/r ~ S_a / r^2,  b'/r ~ -2 S_b / r^4 - S_b2 / r^2
    @property
    def singular_a(self) -> float:
        return (-2.0 * self.c_s2 + (self.c_s2 - self.c_p2)) / (4.0 * np.pi)

    @property
    def singular_b(self) -> float:
        return (self.c_s2 - self.c_p2) / (4.0 * np.pi)

    @property
    def singular_b2(self) -> float:
        return self.omega ** 2 * (self.c_s2 ** 2 - self.c_p2 ** 2) / (16.0 * np.pi)

    def describe(self) -> dict:
        """Plain-data summary for logs and manifests."""
        return {
            "lambda": self.lam,
            "mu": self.mu,
            "omega": self.omega,
            "eta_re": self.eta.real,
            "eta_im": self.eta.imag,
            "kappa_s": self.kappa_s,
            "kappa_p": self.kappa_p,
            "mu_tilde": self.mu_tilde,
            "lambda_tilde": self.lambda_tilde,
        }


# ---------------------------------------------------------------------------
# Radial families and tensor algebra (vectorized over leading axes)
# ---------------------------------------------------------------------------

def hankel_table(medium: ElasticMedium, r: np.ndarray) -> np.ndarray:
    """g_n(k) = k^n H_n(k r)/r^n for n = 0..3, k in (kappa_s, kappa_p); shape (4, 2, *r.shape)."""
    r = np.asarray(r, dtype=float)
    table = np.empty((4, 2) + r.shape, dtype=complex)
    for col, kappa in enumerate((medium.kappa_s, medium.kappa_p)):
        for n in range(4):
            table[n, col] = (kappa / r) ** n * specfun.hankel1(n, kappa * r)
    return table


def bessel_table(medium: ElasticMedium, r: np.ndarray) -> np.ndarray:
    """(2i/pi) k^n J_n(k r)/r^n, the logarithmic-weight family; regular at r = 0."""
    r = np.asarray(r, dtype=float)
    table = np.empty((4, 2) + r.shape, dtype=complex)
    for col, kappa in enumerate((medium.kappa_s, medium.kappa_p)):
        for n in range(4):
            table[n, col] = 2j / np.pi * kappa ** (2 * n) * specfun.j_over_pow(n, kappa * r)
    return table


def regular_table(medium: ElasticMedium, r: np.ndarray, log_ratio: np.ndarray) -> np.ndarray:
    """Regular remainder family k^n rho_n^reg(k r)/r^n; bounded at r = 0."""
    r = np.asarray(r, dtype=float)
    table = np.empty((4, 2) + r.shape, dtype=complex)
    for col, kappa in enumerate((medium.kappa_s, medium.kappa_p)):
        for n in range(4):
            table[n, col] = specfun.scaled_regular_hankel(n, kappa, r, log_ratio)
    return table


def radial_coefficients(medium: ElasticMedium, table: np.ndarray) -> Tuple[np.ndarray, ...]:
    """
    Map a radial family table to (a, b, a'/r, b'/r).

    Args:
        medium: Elastic medium
        table: Array (4, 2, ...) from one of the *_table builders

    Returns:
        Tuple of four complex arrays with the trailing shape of the table
    """
    ci = 1j / (4.0 * medium.mu)
    cw = 1j / (4.0 * medium.omega ** 2)
    g0s = table[0, 0]
    g1s, g1p = table[1, 0], table[1, 1]
    g2s, g2p = table[2, 0], table[2, 1]
    g3s, g3p = table[3, 0], table[3, 1]
    a = ci * g0s - cw * (g1s - g1p)
    b = cw * (g2s - g2p)
    a_r = -ci * g1s + cw * (g2s - g2p)
    b_r = -cw * (g3s - g3p)
    return a, b, a_r, b_r


def tensor_from_coefficients(a: np.ndarray, b: np.ndarray, d: np.ndarray) -> ComplexMat2:
    """a I + b d d^T, shape (..., 2, 2)."""
    eye = np.eye(2)
    return a[..., None, None] * eye + b[..., None, None] * (d[..., :, None] * d[..., None, :])


def gradient_from_coefficients(
    b: np.ndarray, a_r: np.ndarray, b_r: np.ndarray, d: np.ndarray
) -> np.ndarray:
    """
    dG_jk/dd_m for G = a I + b d d^T as a function of d; shape (..., 2, 2, 2).
    """
    eye = np.eye(2)
    dd = d[..., :, None] * d[..., None, :]
    grad = a_r[..., None, None, None] * (eye[:, :, None] * d[..., None, None, :])
    grad = grad + b_r[..., None, None, None] * (dd[..., :, :, None] * d[..., None, None, :])
    # b (delta_jm d_k + delta_km d_j)
    grad = grad + b[..., None, None, None] * (
        eye[:, None, :] * d[..., None, :, None] + eye[None, :, :] * d[..., :, None, None]
    )
    return grad


def traction_from_gradient(
    medium: ElasticMedium, grad: np.ndarray, nu: np.ndarray, nu_perp: np.ndarray
) -> ComplexMat2:
    """
    Apply the generalized stress operator to each row G_j. of a tensor field.

    grad[..., j, k, m] is d/dy_m of G_jk. Row j of the result is

        (mu + mu~) dG_j./dnu + lambda~ nu div G_j. - mu~ nu_perp div_perp G_j.

    with div_perp phi = d phi_1/dy_2 - d phi_2/dy_1.
    """
    normal = np.einsum("...jkm,...m->...jk", grad, nu)
    div = np.einsum("...jnn->...j", grad)
    curl = grad[..., :, 0, 1] - grad[..., :, 1, 0]
    return (
        (medium.mu + medium.mu_tilde) * normal
        + medium.lambda_tilde * div[..., :, None] * nu[..., None, :]
        - medium.mu_tilde * curl[..., :, None] * nu_perp[..., None, :]
    )


def _require_positive(r: np.ndarray, error: type, what: str) -> None:
    if np.any(r <= 0):
        raise error(f"{what}: coincident points (r = 0)")


def direct_kernels(
    medium: ElasticMedium, d: np.ndarray, nu: np.ndarray, nu_perp: np.ndarray
) -> Tuple[ComplexMat2, ComplexMat2]:
    """
    Green's tensor and its traction at y for separation d = x - y.

    Returns:
        (G, Pi) each of shape (..., 2, 2)
    """
    r = np.hypot(d[..., 0], d[..., 1])
    _require_positive(r, SingularityError, "direct kernel")
    a, b, a_r, b_r = radial_coefficients(medium, hankel_table(medium, r))
    tensor = tensor_from_coefficients(a, b, d)
    grad = -gradient_from_coefficients(b, a_r, b_r, d)
    return tensor, traction_from_gradient(medium, grad, nu, nu_perp)


def image_kernels(
    medium: ElasticMedium, d_image: np.ndarray, nu: np.ndarray, nu_perp: np.ndarray
) -> Tuple[ComplexMat2, ComplexMat2]:
    """
    G(x, y') and the traction at y of y -> G(x, y'(y)) for d_image = x - y'.

    The reflection y' = (y1, 2h - y2) flips the sign of the y2-derivative.
    """
    r = np.hypot(d_image[..., 0], d_image[..., 1])
    _require_positive(r, DegenerateGeometryError, "image kernel")
    a, b, a_r, b_r = radial_coefficients(medium, hankel_table(medium, r))
    tensor = tensor_from_coefficients(a, b, d_image)
    grad = -gradient_from_coefficients(b, a_r, b_r, d_image) * REFLECTION
    return tensor, traction_from_gradient(medium, grad, nu, nu_perp)


def _as_point(x) -> np.ndarray:
    point = np.asarray(x, dtype=float)
    if point.shape[-1:] != (2,):
        raise InvalidArgumentError(f"Points must have a trailing axis of length 2, got {point.shape}")
    return point


def _surface_frame(surface: SurfaceProfile, t) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    t = np.asarray(t, dtype=float)
    y = surface.point(t)
    nu = surface.normal(t)
    nu_perp = np.stack([nu[..., 1], -nu[..., 0]], axis=-1)
    y_image = np.stack([y[..., 0], 2.0 * surface.image_level - y[..., 1]], axis=-1)
    return y, y_image, nu, nu_perp


def green_tensor(medium: ElasticMedium, x, y) -> ComplexMat2:
    """
    Free-space Green's tensor G(x, y).

    Args:
        medium: Elastic medium
        x: Observation point(s), shape (..., 2)
        y: Source point(s), shape (..., 2)

    Returns:
        Complex array (..., 2, 2)

    Raises:
        SingularityError: if x = y for any pair
    """
    d = _as_point(x) - _as_point(y)
    r = np.hypot(d[..., 0], d[..., 1])
    _require_positive(r, SingularityError, "green_tensor")
    a, b, _, _ = radial_coefficients(medium, hankel_table(medium, r))
    return tensor_from_coefficients(a, b, d)


def green_traction(medium: ElasticMedium, surface: SurfaceProfile, x, t) -> ComplexMat2:
    """
    Traction kernel Pi(x, y(t)): row j is the generalized stress at y(t) of G_j.(x, .).

    This is the double-layer kernel before the factor 2 sqrt(1 + f'(t)^2).
    """
    y, _, nu, nu_perp = _surface_frame(surface, t)
    _, traction = direct_kernels(medium, _as_point(x) - y, nu, nu_perp)
    return traction


def image_combined(medium: ElasticMedium, surface: SurfaceProfile, x, t) -> ComplexMat2:
    """
    Traction at y(t) of the reflected tensor G(x, y'(t)) minus i eta G(x, y'(t)).

    Raises:
        DegenerateGeometryError: if x coincides with the image point
    """
    _, y_image, nu, nu_perp = _surface_frame(surface, t)
    tensor, traction = image_kernels(medium, _as_point(x) - y_image, nu, nu_perp)
    return traction - 1j * medium.eta * tensor


def combined_layer_kernel(medium: ElasticMedium, surface: SurfaceProfile, x, t) -> ComplexMat2:
    """
    Pi(x, y) - i eta G(x, y) - [Pi(x, y') - i eta G(x, y')] at y = y(t).

    The integrand of the combined layer potential, without the surface Jacobian.
    """
    y, y_image, nu, nu_perp = _surface_frame(surface, t)
    x = _as_point(x)
    tensor, traction = direct_kernels(medium, x - y, nu, nu_perp)
    image_tensor, image_traction = image_kernels(medium, x - y_image, nu, nu_perp)
    return traction - 1j * medium.eta * tensor - (image_traction - 1j * medium.eta * image_tensor)
