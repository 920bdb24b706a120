"""Numeric settings shared by the quadrature, root-finding and FD layers."""

import os
from dataclasses import dataclass, replace

import numpy as np

# Optimal central-difference step for first derivatives, scaled per
# coordinate as fd_step * max(1, |x|).
DEFAULT_FD_STEP = float(np.cbrt(np.finfo(float).eps))

# Environment variable that overrides the default tolerance bundle
# (quad_abs_tol, quad_rel_tol, root_tol) with a single value.
TOL_ENV_VAR = "SIGEMBED_TOL"


@dataclass(frozen=True)
class NumericConfig:
    """Tolerances and iteration budgets for the numerical kernels."""

    quad_abs_tol: float = 1e-12
    quad_rel_tol: float = 1e-12
    root_tol: float = 1e-12
    max_iterations: int = 200
    fd_step: float = DEFAULT_FD_STEP

    def __post_init__(self):
        for name in ("quad_abs_tol", "quad_rel_tol", "root_tol", "fd_step"):
            value = getattr(self, name)
            if not (value > 0.0 and np.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")

    @classmethod
    def from_env(cls):
        """Default config, honouring the SIGEMBED_TOL override when set."""
        cfg = cls()
        raw = os.environ.get(TOL_ENV_VAR)
        if raw is None:
            return cfg
        try:
            tol = float(raw)
        except ValueError as exc:
            raise ValueError(f"{TOL_ENV_VAR} must be a float, got {raw!r}") from exc
        return replace(cfg, quad_abs_tol=tol, quad_rel_tol=tol, root_tol=tol)


def fd_steps(coords, base_step):
    """Per-coordinate central-difference steps, scaled by magnitude."""
    coords = np.asarray(coords, dtype=float)
    steps = base_step * np.maximum(1.0, np.abs(coords))
    if not np.all(np.isfinite(steps)) or np.any(steps <= 0.0):
        from .errors import NumericalError

        raise NumericalError(f"finite-difference step underflow/overflow: {steps}")
    return steps
