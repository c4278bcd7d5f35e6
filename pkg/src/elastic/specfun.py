"""
Real-argument Bessel, Neumann and Hankel functions of orders 0..3 and the
regularized combinations used for near-diagonal kernel evaluation.

All functions accept scalars or numpy arrays and broadcast like numpy ufuncs.
"""
import logging
import math
from typing import Union

import numpy as np
from scipy import special

from .errors import DomainError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

EULER_GAMMA = 0.5772156649015329
SUPPORTED_ORDERS = (0, 1, 2, 3)

# Below this argument j_over_pow switches to its ascending series
J_OVER_POW_SWITCH = 0.05
_J_OVER_POW_TERMS = 8

# Below this |u| the log of sin(u/2)/(u/2) uses its Taylor series
LOG_SINC_SWITCH = 1e-3


def _check_order(n: int) -> int:
    if isinstance(n, bool) or int(n) != n or int(n) not in SUPPORTED_ORDERS:
        raise DomainError(f"Unsupported Bessel order {n!r}; expected one of {SUPPORTED_ORDERS}")
    return int(n)


def _check_argument(x: ArrayLike, strictly_positive: bool) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("Bessel argument must be finite")
    if strictly_positive and np.any(arr <= 0):
        raise DomainError(f"Argument must be > 0, got min {arr.min()}")
    if np.any(arr < 0):
        raise DomainError(f"Argument must be >= 0, got min {arr.min()}")
    return arr


def _unwrap(value: np.ndarray, like: ArrayLike):
    """Return a python scalar when the input was a scalar."""
    if np.ndim(like) == 0:
        return value.item() if isinstance(value, np.ndarray) else value
    return value


def bessel_j(n: int, x: ArrayLike) -> ArrayLike:
    """
    Bessel function of the first kind J_n(x).

    Args:
        n: Order, one of 0..3
        x: Real argument(s) >= 0

    Returns:
        J_n(x) with the shape of x
    """
    order = _check_order(n)
    arr = _check_argument(x, strictly_positive=False)
    return _unwrap(special.jv(order, arr), x)


def bessel_y(n: int, x: ArrayLike) -> ArrayLike:
    """
    Bessel function of the second kind Y_n(x).

    Args:
        n: Order, one of 0..3
        x: Real argument(s) > 0

    Returns:
        Y_n(x) with the shape of x
    """
    order = _check_order(n)
    arr = _check_argument(x, strictly_positive=True)
    return _unwrap(special.yv(order, arr), x)


def hankel1(n: int, x: ArrayLike) -> ArrayLike:
    """
    Hankel function of the first kind H_n^(1)(x) = J_n(x) + i Y_n(x).

    Args:
        n: Order, one of 0..3
        x: Real argument(s) > 0

    Returns:
        Complex H_n^(1)(x) with the shape of x
    """
    order = _check_order(n)
    arr = _check_argument(x, strictly_positive=True)
    return _unwrap(special.hankel1(order, arr), x)


def j_over_pow(n: int, x: ArrayLike) -> ArrayLike:
    """
    J_n(x) / x**n with the removable singularity at x = 0 filled in.

    The value at zero is 1 / (2**n n!). Small arguments use the ascending
    series, larger ones the library Bessel function.
    """
    order = _check_order(n)
    arr = np.atleast_1d(_check_argument(x, strictly_positive=False))
    out = np.empty_like(arr)

    small = arr < J_OVER_POW_SWITCH
    if np.any(small):
        q = (arr[small] / 2.0) ** 2
        total = np.zeros_like(q)
        term = np.full_like(q, 1.0 / (2.0 ** order * math.factorial(order)))
        for k in range(_J_OVER_POW_TERMS):
            total = total + term
            term = -term * q / ((k + 1) * (order + k + 1))
        out[small] = total
    large = ~small
    if np.any(large):
        out[large] = special.jv(order, arr[large]) / arr[large] ** order
    return _unwrap(out.reshape(np.shape(x)), x)


def harmonic(p: int) -> float:
    """
    Harmonic number phi(p) = sum_{m=1}^{p} 1/m, with phi(0) = 0.

    Args:
        p: Non-negative integer

    Returns:
        phi(p)
    """
    if isinstance(p, bool) or int(p) != p or p < 0:
        raise DomainError(f"harmonic() needs an integer >= 0, got {p!r}")
    return math.fsum(1.0 / m for m in range(1, int(p) + 1))


def singular_hankel_part(n: int, z: ArrayLike) -> ArrayLike:
    """
    Negative-power part of H_n^(1)(z) at z -> 0:

        -(i/pi) sum_{k=0}^{n-1} ((n-k-1)!/k!) (z/2)^(2k-n)

    Zero for n = 0. Used to cancel singular terms analytically.
    """
    order = _check_order(n)
    arr = _check_argument(z, strictly_positive=True)
    total = np.zeros_like(arr, dtype=complex)
    half = arr / 2.0
    for k in range(order):
        total += math.factorial(order - k - 1) / math.factorial(k) * half ** (2 * k - order)
    return _unwrap(-1j / np.pi * total, z)


def scaled_regular_hankel(n: int, kappa: float, r: ArrayLike, log_ratio: ArrayLike) -> ArrayLike:
    """
    kappa^n * rho_n^reg(kappa r) / r^n, bounded as r -> 0.

    Here rho_n(kappa r) = H_n^(1)(kappa r) - (2i/pi) J_n(kappa r) ln|s-t| splits into
    singular_hankel_part(n, kappa r) plus a regular remainder rho_n^reg. With
    log_ratio = ln(r / |s-t|) the remainder is

        [1 + (2i/pi)(C_E + ln(kappa/2) + log_ratio)] J_n(z)
        - (i/pi) sum_k (-1)^k (z/2)^(2k+n) (phi(k) + phi(n+k)) / (k! (n+k)!)

    with z = kappa r. The series is meant for small z (near-diagonal band).

    Args:
        n: Order 0..3
        kappa: Wavenumber > 0
        r: Distance(s) >= 0
        log_ratio: ln(r/|s-t|) broadcastable against r (ln of the Jacobian on the diagonal)

    Returns:
        Complex values with the broadcast shape of r and log_ratio
    """
    order = _check_order(n)
    if kappa <= 0:
        raise DomainError(f"kappa must be > 0, got {kappa}")
    r_arr = _check_argument(r, strictly_positive=False)
    log_arr = np.asarray(log_ratio, dtype=float)
    z = kappa * r_arr

    prefactor = 1.0 + 2j / np.pi * (EULER_GAMMA + np.log(kappa / 2.0) + log_arr)
    j_part = prefactor * j_over_pow(order, z)

    q = (z / 2.0) ** 2
    series = np.zeros(np.shape(q), dtype=float)
    power = np.ones_like(q)
    for k in range(60):
        coeff = (
            (-1) ** k * (harmonic(k) + harmonic(order + k))
            / (2.0 ** order * math.factorial(k) * math.factorial(order + k))
        )
        term = coeff * power
        series = series + term
        if k > 0 and np.all(np.abs(term) <= 1e-17 * np.maximum(np.abs(series), 1e-300)):
            break
        power = power * q
    else:
        logger.warning(f"Regular Hankel series did not converge for max z={np.max(z):.3g}")

    value = kappa ** (2 * order) * (j_part - 1j / np.pi * series)
    if np.ndim(value) == 0:
        return complex(value)
    return value


def log_sinc_half(u: ArrayLike) -> ArrayLike:
    """
    ln( sin(u/2) / (u/2) ) for |u| < 2*pi, equal to 0 at u = 0.
    """
    arr = np.atleast_1d(np.asarray(u, dtype=float))
    out = np.empty_like(arr)
    small = np.abs(arr) < LOG_SINC_SWITCH
    u2 = arr[small] ** 2
    out[small] = -u2 / 24.0 - u2 ** 2 / 2880.0
    big = ~small
    half = arr[big] / 2.0
    out[big] = np.log(np.sin(half) / half)
    return _unwrap(out.reshape(np.shape(u)), u)
