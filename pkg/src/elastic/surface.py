"""
Rough-surface profiles x2 = f(x1) and the geometric quantities entering the
boundary kernels.

A point on the surface is x(s) = (s, f(s)); the integration point is
y(t) = (t, f(t)) and its reflection across the image line x2 = h is
y'(t) = (t, 2h - f(t)). The unit normal at y(t) points upward.
"""
import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, Optional, Tuple, Union

import numpy as np

from .errors import DegenerateGeometryError, InvalidArgumentError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]
ProfileFn = Callable[[ArrayLike], ArrayLike]

DEFAULT_DIAGONAL_SWITCH = 1e-7

# Below this |s-t| the chord rise and xi come from integrals of f' and f''
STABLE_BAND = 1e-2

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(8)
_GAUSS_NODES = 0.5 * (_GAUSS_NODES + 1.0)
_GAUSS_WEIGHTS = 0.5 * _GAUSS_WEIGHTS


def _band_integrals(surface: "SurfaceProfile", t: np.ndarray, u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Mean slope and weighted curvature of the chord from t to t + u:

        slope     = int_0^1 f'(t + u x) dx          (f(s) - f(t) = u * slope)
        curvature = int_0^1 (1 - x) f''(t + u x) dx (u f'(t) + f(t) - f(s) = -u^2 * curvature)
    """
    tau = t[:, None] + u[:, None] * _GAUSS_NODES
    slope = np.broadcast_to(surface.df(tau), tau.shape) @ _GAUSS_WEIGHTS
    curvature = np.broadcast_to(surface.ddf(tau), tau.shape) @ (_GAUSS_WEIGHTS * (1.0 - _GAUSS_NODES))
    return slope, curvature


@dataclass(frozen=True)
class SurfaceProfile:
    """
    Graph surface with analytic first and second derivatives.

    Attributes:
        f, df, ddf: height profile and its derivatives (vectorized callables)
        name: identifier used by the CLI and result files
        smoothness_order: n such that f is C^(n+2)
        lower_bound: c with inf f >= c
        deriv_bound: M bounding |f'| on the line, None when f' is unbounded
        image_level: h, the level of the image line, must lie below the surface
    """

    f: ProfileFn
    df: ProfileFn
    ddf: ProfileFn
    name: str = "custom"
    smoothness_order: int = 2
    lower_bound: float = 0.0
    deriv_bound: Optional[float] = None
    image_level: float = -1.0

    def __post_init__(self):
        if self.image_level >= self.lower_bound:
            logger.debug(
                f"Surface '{self.name}': image level {self.image_level} is not below the "
                f"global bound {self.lower_bound}; window checks will decide"
            )

    def with_image_level(self, h: float) -> "SurfaceProfile":
        """Copy of this profile with another image line level."""
        return replace(self, image_level=float(h))

    def point(self, s: ArrayLike) -> np.ndarray:
        """x(s) = (s, f(s)), shape (..., 2)."""
        s = np.asarray(s, dtype=float)
        return np.stack([s, np.broadcast_to(self.f(s), s.shape)], axis=-1)

    def jacobian(self, t: ArrayLike) -> np.ndarray:
        """sqrt(1 + f'(t)^2)."""
        return np.sqrt(1.0 + np.asarray(self.df(np.asarray(t, dtype=float))) ** 2)

    def normal(self, t: ArrayLike) -> np.ndarray:
        """Upward unit normal (-f'(t), 1)/J, shape (..., 2)."""
        t = np.asarray(t, dtype=float)
        slope = np.broadcast_to(self.df(t), t.shape)
        jac = np.sqrt(1.0 + slope ** 2)
        return np.stack([-slope / jac, 1.0 / jac], axis=-1)

    def minimum_height(self, window: Tuple[float, float], spacing: float) -> float:
        """Sampled minimum of f over a window at the given resolution."""
        lo, hi = window
        count = max(int(np.ceil((hi - lo) / spacing)) + 1, 2)
        return float(np.min(self.f(np.linspace(lo, hi, count))))

    def maximum_height(self, window: Tuple[float, float], spacing: float) -> float:
        """Sampled maximum of f over a window at the given resolution."""
        lo, hi = window
        count = max(int(np.ceil((hi - lo) / spacing)) + 1, 2)
        return float(np.max(self.f(np.linspace(lo, hi, count))))

    def check_image_level(self, window: Tuple[float, float], spacing: float) -> float:
        """
        Verify h < inf f over the window (sampled at the given spacing).

        Returns:
            The margin min f - h

        Raises:
            DegenerateGeometryError: if the image line touches or crosses the surface
        """
        margin = self.minimum_height(window, spacing) - self.image_level
        if margin <= 0:
            raise DegenerateGeometryError(
                f"Image level h={self.image_level} is not below surface '{self.name}' "
                f"on window {window} (margin {margin:.3g})"
            )
        return margin


@dataclass(frozen=True)
class GeometryAt:
    """Geometric quantities for one parameter pair (s, t)."""

    s: float
    t: float
    r: float
    r_image: float
    nu_t: np.ndarray
    l_t: np.ndarray
    l_perp_t: np.ndarray
    jacobian_t: float


@dataclass
class PairGeometry:
    """
    Vectorized geometry for broadcast parameter arrays s and t.

    Arrays carry the broadcast shape of (s, t); vectors add a trailing axis of 2.
    Diagonal limits are substituted where |s - t| < the diagonal switch.
    """

    u: np.ndarray
    d: np.ndarray
    r: np.ndarray
    d_image: np.ndarray
    r_image: np.ndarray
    nu_t: np.ndarray
    nu_perp_t: np.ndarray
    jac_t: np.ndarray
    ratio: np.ndarray
    log_ratio: np.ndarray
    xi: np.ndarray
    zeta: np.ndarray
    diagonal: np.ndarray = field(repr=False)

    def subset(self, mask: np.ndarray) -> "PairGeometry":
        """Geometry restricted to the entries selected by a boolean mask (flattened)."""
        return PairGeometry(**{name: getattr(self, name)[mask] for name in self.__dataclass_fields__})


def pair_geometry(
    surface: SurfaceProfile,
    s: ArrayLike,
    t: ArrayLike,
    diagonal_switch: float = DEFAULT_DIAGONAL_SWITCH,
) -> PairGeometry:
    """
    Evaluate every geometric quantity the kernels need on broadcast (s, t).

    Args:
        surface: Surface profile (with image level)
        s: Collocation parameter(s)
        t: Integration parameter(s)
        diagonal_switch: |s - t| below which closed-form diagonal limits are used

    Returns:
        PairGeometry with arrays of the broadcast shape
    """
    s, t = np.broadcast_arrays(
        np.atleast_1d(np.asarray(s, dtype=float)), np.atleast_1d(np.asarray(t, dtype=float))
    )
    f_s = np.broadcast_to(surface.f(s), s.shape)
    f_t = np.broadcast_to(surface.f(t), t.shape)
    df_s = np.broadcast_to(surface.df(s), s.shape)
    df_t = np.broadcast_to(surface.df(t), t.shape)
    ddf_s = np.broadcast_to(surface.ddf(s), s.shape)

    u = s - t
    rise = np.array(f_s - f_t, dtype=float)
    numerator = u * df_t - rise

    band = np.abs(u) < STABLE_BAND
    slope = np.zeros(int(np.count_nonzero(band)))
    if slope.size:
        slope, curvature = _band_integrals(surface, t[band], u[band])
        rise[band] = u[band] * slope
        numerator[band] = -u[band] ** 2 * curvature

    d = np.stack([u, rise], axis=-1)
    r = np.hypot(d[..., 0], d[..., 1])
    d_image = np.stack([u, f_s + f_t - 2.0 * surface.image_level], axis=-1)
    r_image = np.hypot(d_image[..., 0], d_image[..., 1])

    jac_t = np.sqrt(1.0 + df_t ** 2)
    nu_t = np.stack([-df_t / jac_t, 1.0 / jac_t], axis=-1)
    nu_perp_t = np.stack([nu_t[..., 1], -nu_t[..., 0]], axis=-1)

    diagonal = np.abs(u) < diagonal_switch
    off = ~diagonal
    jac_s = np.sqrt(1.0 + df_s ** 2)

    ratio = np.empty_like(r)
    ratio[off] = r[off] / np.abs(u[off])
    ratio[band] = np.sqrt(1.0 + slope ** 2)
    ratio[diagonal] = jac_s[diagonal]

    xi = np.empty_like(r)
    xi[off] = numerator[off] / r[off] ** 2
    if slope.size:
        xi[band] = -curvature / (1.0 + slope ** 2)
    xi[diagonal] = -ddf_s[diagonal] / (2.0 * jac_s[diagonal] ** 2)

    zeta = np.empty(r.shape + (2, 2))
    chord = np.empty_like(d)
    chord[off] = d[off] / r[off][..., None]
    tangent = np.stack([np.ones_like(df_s), df_s], axis=-1) / jac_s[..., None]
    chord[diagonal] = tangent[diagonal]
    zeta[...] = chord[..., :, None] * chord[..., None, :]

    return PairGeometry(
        u=u,
        d=d,
        r=r,
        d_image=d_image,
        r_image=r_image,
        nu_t=nu_t,
        nu_perp_t=nu_perp_t,
        jac_t=jac_t,
        ratio=ratio,
        log_ratio=np.log(ratio),
        xi=xi,
        zeta=zeta,
        diagonal=diagonal,
    )


def _pair_shape(s: ArrayLike, t: ArrayLike) -> tuple:
    return np.broadcast(np.asarray(s), np.asarray(t)).shape


def geometry(surface: SurfaceProfile, s: float, t: float) -> GeometryAt:
    """Scalar geometry record for one (s, t) pair."""
    g = pair_geometry(surface, s, t)
    jac = float(g.jac_t[0])
    nu = np.array(g.nu_t[0], dtype=float)
    return GeometryAt(
        s=float(s),
        t=float(t),
        r=float(g.r[0]),
        r_image=float(g.r_image[0]),
        nu_t=nu,
        l_t=jac * nu,
        l_perp_t=jac * np.array(g.nu_perp_t[0], dtype=float),
        jacobian_t=jac,
    )


def r_ratio(surface: SurfaceProfile, s: ArrayLike, t: ArrayLike) -> ArrayLike:
    """r(s,t)/|s-t|, equal to sqrt(1 + f'(s)^2) on the diagonal."""
    shape = _pair_shape(s, t)
    value = pair_geometry(surface, s, t).ratio.reshape(shape)
    return float(value) if shape == () else value


def xi(surface: SurfaceProfile, s: ArrayLike, t: ArrayLike) -> ArrayLike:
    """((s-t) f'(t) + f(t) - f(s)) / r^2, equal to -f''/(2(1+f'^2)) on the diagonal."""
    shape = _pair_shape(s, t)
    value = pair_geometry(surface, s, t).xi.reshape(shape)
    return float(value) if shape == () else value


def zeta(surface: SurfaceProfile, s: ArrayLike, t: ArrayLike) -> np.ndarray:
    """Outer product of the unit chord (x(s) - y(t))/r; unit tangent outer product on the diagonal."""
    shape = _pair_shape(s, t)
    return pair_geometry(surface, s, t).zeta.reshape(shape + (2, 2))


def sample_profile(surface: SurfaceProfile, window: Tuple[float, float], count: int) -> np.ndarray:
    """
    Sample (x1, f(x1)) on an equispaced grid.

    Returns:
        Array of shape (count, 2)
    """
    if count < 2:
        raise InvalidArgumentError(f"count must be >= 2, got {count}")
    x1 = np.linspace(window[0], window[1], count)
    return surface.point(x1)


# ---------------------------------------------------------------------------
# Built-in named surfaces
# ---------------------------------------------------------------------------

def _flat(h: float) -> SurfaceProfile:
    zero = lambda x: np.zeros_like(np.asarray(x, dtype=float))
    return SurfaceProfile(
        f=zero, df=zero, ddf=zero, name="flat",
        smoothness_order=8, lower_bound=0.0, deriv_bound=0.0, image_level=h,
    )


_PERIODIC_TERMS = ((0.084, 0.6 * np.pi, 0.0), (0.084, 0.24 * np.pi, 0.0), (0.03, 1.5 * np.pi, 1.0))


def _periodic_f(x):
    x = np.asarray(x, dtype=float)
    return sum(a * np.sin(w * (x - shift)) for a, w, shift in _PERIODIC_TERMS)


def _periodic_df(x):
    x = np.asarray(x, dtype=float)
    return sum(a * w * np.cos(w * (x - shift)) for a, w, shift in _PERIODIC_TERMS)


def _periodic_ddf(x):
    x = np.asarray(x, dtype=float)
    return sum(-a * w ** 2 * np.sin(w * (x - shift)) for a, w, shift in _PERIODIC_TERMS)


def _periodic(h: float) -> SurfaceProfile:
    return SurfaceProfile(
        f=_periodic_f, df=_periodic_df, ddf=_periodic_ddf, name="periodic",
        smoothness_order=8,
        lower_bound=-sum(a for a, _, _ in _PERIODIC_TERMS),
        deriv_bound=sum(a * w for a, w, _ in _PERIODIC_TERMS),
        image_level=h,
    )


def _rough_f(x):
    x = np.asarray(x, dtype=float)
    return 0.1 * np.cos(0.1 * x ** 2) * np.exp(-np.sin(x))


def _rough_df(x):
    x = np.asarray(x, dtype=float)
    g = 0.2 * x * np.sin(0.1 * x ** 2) + np.cos(x) * np.cos(0.1 * x ** 2)
    return -0.1 * np.exp(-np.sin(x)) * g


def _rough_ddf(x):
    x = np.asarray(x, dtype=float)
    c2, s2 = np.cos(0.1 * x ** 2), np.sin(0.1 * x ** 2)
    g = 0.2 * x * s2 + np.cos(x) * c2
    dg = 0.2 * s2 + 0.04 * x ** 2 * c2 - np.sin(x) * c2 - 0.2 * x * np.cos(x) * s2
    return -0.1 * np.exp(-np.sin(x)) * (dg - np.cos(x) * g)


def _rough(h: float) -> SurfaceProfile:
    return SurfaceProfile(
        f=_rough_f, df=_rough_df, ddf=_rough_ddf, name="rough",
        smoothness_order=8, lower_bound=-0.1 * np.e, deriv_bound=None, image_level=h,
    )


NAMED_SURFACES: Dict[str, Callable[[float], SurfaceProfile]] = {
    "flat": _flat,
    "periodic": _periodic,
    "rough": _rough,
}


def named_surface(name: str, image_level: float = -1.0) -> SurfaceProfile:
    """
    Build one of the built-in surfaces.

    Args:
        name: "flat", "periodic" or "rough"
        image_level: Level h of the image line

    Returns:
        SurfaceProfile
    """
    try:
        factory = NAMED_SURFACES[name]
    except KeyError:
        raise InvalidArgumentError(
            f"Unknown surface '{name}', expected one of {sorted(NAMED_SURFACES)}"
        ) from None
    return factory(float(image_level))
