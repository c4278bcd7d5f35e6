"""
Configuration management for the Nyström solver.
"""
from dataclasses import dataclass

from .errors import InvalidArgumentError


@dataclass
class SolverConfig:
    """Numerical switches shared by kernel evaluation, assembly and solve."""

    # Near-diagonal series branch is used for |s-t| < factor * min(1, 1/kappa_s)
    series_threshold_factor: float = 0.05

    # Closed-form diagonal limits for geometry quotients below this |s-t|
    diagonal_switch: float = 1e-7

    # Collocation rows evaluated per vectorized block during assembly
    block_rows: int = 64

    # Solve refuses systems whose 1-norm condition estimate exceeds this
    condition_limit: float = 1e12

    def __post_init__(self):
        """Validate configuration after initialization."""
        if not 0 < self.series_threshold_factor <= 0.5:
            raise InvalidArgumentError(
                f"series_threshold_factor must be in (0, 0.5], "
                f"got {self.series_threshold_factor}"
            )
        if not 0 < self.diagonal_switch < 1e-3:
            raise InvalidArgumentError(
                f"diagonal_switch must be in (0, 1e-3), got {self.diagonal_switch}"
            )
        if self.block_rows < 1:
            raise InvalidArgumentError(f"block_rows must be positive, got {self.block_rows}")
        if self.condition_limit <= 1:
            raise InvalidArgumentError(
                f"condition_limit must exceed 1, got {self.condition_limit}"
            )

    @classmethod
    def from_dict(cls, values: dict) -> "SolverConfig":
        """Build from a config.yaml `solver:` mapping, ignoring unknown keys."""
        known = {k: v for k, v in (values or {}).items() if k in cls.__dataclass_fields__}
        return cls(**known)
