"""
Knots on the truncated parameter line and the two quadrature rules of the
Nyström scheme: trigonometric weights R_j(s) for the logarithmic part and the
plain pi/N rule for the smooth part.
"""
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import InvalidArgumentError

logger = logging.getLogger(__name__)

# Relative slack when checking that 2 N cut / pi is an integer
_INTEGER_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Discretization:
    """Equidistant knots t_j = -cut + j pi/N, j = 0..2N cut/pi, on [-cut, cut]."""

    cut: float
    N: int
    knots: np.ndarray = field(repr=False, compare=False)

    @property
    def step(self) -> float:
        return math.pi / self.N

    @property
    def count(self) -> int:
        return len(self.knots)

    def contains(self, s: float) -> bool:
        """True when s lies inside the knot window."""
        return -self.cut - 1e-12 <= s <= self.cut + 1e-12


def make_discretization(cut: float, N: int) -> Discretization:
    """
    Build the knot set for a half-width cut and refinement N.

    Args:
        cut: Half-width of the truncated line, a positive multiple of pi
        N: Refinement level >= 1

    Returns:
        Discretization with 2N cut/pi + 1 knots

    Raises:
        InvalidArgumentError: if N < 1 or 2N cut/pi is not an integer
    """
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise InvalidArgumentError(f"N must be a positive integer, got {N!r}")
    if not cut > 0 or not math.isfinite(cut):
        raise InvalidArgumentError(f"cut must be positive and finite, got {cut!r}")
    N = int(N)
    intervals = 2.0 * N * cut / math.pi
    rounded = round(intervals)
    if rounded < 1 or abs(intervals - rounded) > _INTEGER_TOLERANCE * max(1.0, intervals):
        raise InvalidArgumentError(
            f"cut={cut} is not compatible with N={N}: 2*N*cut/pi = {intervals} is not an integer"
        )
    knots = -cut + np.arange(rounded + 1) * (math.pi / N)
    knots[-1] = cut
    knots.setflags(write=False)
    logger.debug(f"Discretization cut={cut:.6g}, N={N}: {len(knots)} knots")
    return Discretization(cut=float(cut), N=N, knots=knots)


def log_weight(N: int, s, t_j):
    """
    Trigonometric weight

        R_j(s) = -(1/N) [ sum_{m=1}^{N-1} cos(m(s - t_j))/m + cos(N(s - t_j))/(2N) ]

    Args:
        N: Refinement level >= 1
        s: Evaluation parameter(s)
        t_j: Knot(s), broadcast against s

    Returns:
        Real weight(s) with the broadcast shape
    """
    if int(N) != N or N < 1:
        raise InvalidArgumentError(f"N must be a positive integer, got {N!r}")
    N = int(N)
    diff = np.asarray(s, dtype=float) - np.asarray(t_j, dtype=float)
    m = np.arange(1, N)
    total = np.cos(np.multiply.outer(diff, m)) @ (1.0 / m) if N > 1 else np.zeros_like(diff)
    total = total + np.cos(N * diff) / (2.0 * N)
    value = -total / N
    return float(value) if np.ndim(value) == 0 else value


@lru_cache(maxsize=32)
def _weight_table(N: int) -> np.ndarray:
    table = log_weight(N, np.arange(2 * N) * (math.pi / N), 0.0)
    table = np.atleast_1d(table)
    table.setflags(write=False)
    return table


def weight_table(N: int) -> np.ndarray:
    """R_j(t_i) for (i - j) mod 2N = 0..2N-1; knot-to-knot weights only depend on this."""
    if int(N) != N or N < 1:
        raise InvalidArgumentError(f"N must be a positive integer, got {N!r}")
    return _weight_table(int(N))


def knot_weights(disc: Discretization, rows: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Matrix of R_j(t_i) for collocation rows i (all knots by default) and all knots j.

    Returns:
        Array of shape (len(rows), disc.count)
    """
    rows = np.arange(disc.count) if rows is None else np.asarray(rows)
    offsets = np.subtract.outer(rows, np.arange(disc.count)) % (2 * disc.N)
    return weight_table(disc.N)[offsets]


def apply_log_rule(N: int, s: float, knots, samples) -> np.ndarray:
    """
    sum_j R_j(s) samples_j, the rule for (1/2pi) int ln(4 sin^2((s-t)/2)) g(t) dt.

    Args:
        N: Refinement level
        s: Evaluation parameter
        knots: Knot positions t_j
        samples: Values at the knots, first axis indexed by knot

    Returns:
        Weighted sum with the trailing shape of samples
    """
    samples = np.asarray(samples)
    weights = np.atleast_1d(log_weight(N, s, np.asarray(knots, dtype=float)))
    if weights.shape[0] != samples.shape[0]:
        raise InvalidArgumentError(
            f"{samples.shape[0]} samples given for {weights.shape[0]} knots"
        )
    return np.tensordot(weights, samples, axes=(0, 0))


def apply_smooth_rule(N: int, knots, samples) -> np.ndarray:
    """(pi/N) sum_j samples_j."""
    samples = np.asarray(samples)
    if len(knots) != samples.shape[0]:
        raise InvalidArgumentError(f"{samples.shape[0]} samples given for {len(knots)} knots")
    return (math.pi / N) * samples.sum(axis=0)
