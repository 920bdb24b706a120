"""Embeddings into flat Minkowski space and pullback verification.

The workhorse map sends (t, x) to (f(t), t, x) with temporal function
f(t) = -(2/3)(1 + t)^(3/2), defined for t > -1.  Isometry is certified by
pulling the flat metric eta = diag(-1, +1, ..., +1) back through the
embedding Jacobian and comparing against the source metric.
"""

from dataclasses import dataclass

import numpy as np

from .config import NumericConfig, fd_steps
from .errors import DomainError, ImmersionError, PreconditionError
from .metric import ChartPoint, eval_metric

# Rank cutoff for the immersion check, relative to the largest singular value.
_RANK_RTOL = 1e-10


@dataclass(frozen=True)
class MinkowskiEvent:
    """Event (tau, y^1, ..., y^{N-1}) in flat space with metric
    diag(-1, +1, ..., +1)."""

    tau: float
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "tau", float(self.tau))
        object.__setattr__(self, "y", np.atleast_1d(np.asarray(self.y, dtype=float)))
        if not np.isfinite(self.tau) or not np.all(np.isfinite(self.y)):
            raise ValueError(f"event has non-finite coordinates: {self}")

    @property
    def dim(self):
        return 1 + self.y.size

    def coords(self):
        return np.concatenate(([self.tau], self.y))

    @classmethod
    def from_coords(cls, coords):
        coords = np.asarray(coords, dtype=float)
        return cls(coords[0], coords[1:])


def minkowski_eta(dim):
    eta = np.eye(dim)
    eta[0, 0] = -1.0
    return eta


@dataclass(frozen=True)
class EmbeddingMap:
    """A map from chart points into Minkowski space.

    ``jacobian_eval`` is the analytic Jacobian (N x n) when available;
    finite differences of ``value_eval`` otherwise.  ``domain_check``
    guards evaluation.  The optional ``event_time`` / ``on_image_residual``
    pair enables orbit-intersection machinery: the first recovers the
    source time coordinate of the natural preimage of an ambient event,
    the second vanishes exactly on the image (both may return nan where
    undefined).  Optional ``value_batch`` / ``jacobian_batch`` evaluate
    (m, n) coordinate arrays for grid sweeps.
    """

    source_dim: int
    target_dim: int
    value_eval: object
    jacobian_eval: object = None
    domain_check: object = None
    event_time: object = None
    on_image_residual: object = None
    value_batch: object = None
    jacobian_batch: object = None

    def __post_init__(self):
        if self.source_dim < 2:
            raise ValueError(f"source dimension must be >= 2, got {self.source_dim}")
        if self.target_dim < self.source_dim:
            raise ValueError(
                f"target dimension {self.target_dim} < source dimension "
                f"{self.source_dim}: not an embedding"
            )

    def in_domain(self, p):
        return True if self.domain_check is None else bool(self.domain_check(p))


def temporal_f(t):
    """Temporal component f(t) = -(2/3)(1 + t)^(3/2); strictly decreasing."""
    t = float(t)
    if not t > -1.0:
        raise DomainError(f"temporal function requires t > -1, got t = {t}")
    return -(2.0 / 3.0) * (1.0 + t) ** 1.5


def temporal_f_prime(t):
    t = float(t)
    if not t > -1.0:
        raise DomainError(f"temporal function requires t > -1, got t = {t}")
    return -np.sqrt(1.0 + t)


def psi_toy(p):
    """(f(t), t, x^1, ..., x^{n-1}): the canonical-model embedding, target
    dimension n + 1."""
    return MinkowskiEvent(temporal_f(p.t), np.concatenate(([p.t], p.spatial)))


def psi_toy_map(n=2):
    """EmbeddingMap wrapper around ``psi_toy`` for an n-dimensional source."""

    def value_eval(p):
        return psi_toy(p)

    def jacobian_eval(p):
        jac = np.zeros((n + 1, n))
        jac[0, 0] = temporal_f_prime(p.t)
        jac[1, 0] = 1.0
        jac[2:, 1:] = np.eye(n - 1)
        return jac

    def domain_check(p):
        return p.t > -1.0

    def event_time(e):
        # The y^1 component carries the source time directly.
        return float(e.y[0])

    def on_image_residual(e):
        y1 = float(e.y[0])
        if y1 <= -1.0:
            return np.nan
        return e.tau - (-(2.0 / 3.0) * (1.0 + y1) ** 1.5)

    def value_batch(coords):
        coords = np.asarray(coords, dtype=float)
        if np.any(coords[:, 0] <= -1.0):
            raise DomainError("temporal function requires t > -1 on the whole batch")
        out = np.empty((coords.shape[0], n + 1))
        out[:, 0] = -(2.0 / 3.0) * (1.0 + coords[:, 0]) ** 1.5
        out[:, 1:] = coords
        return out

    def jacobian_batch(coords):
        coords = np.asarray(coords, dtype=float)
        m = coords.shape[0]
        jac = np.zeros((m, n + 1, n))
        jac[:, 0, 0] = -np.sqrt(1.0 + coords[:, 0])
        jac[:, 1, 0] = 1.0
        jac[:, 2:, 1:] = np.eye(n - 1)
        return jac

    return EmbeddingMap(
        source_dim=n,
        target_dim=n + 1,
        value_eval=value_eval,
        jacobian_eval=jacobian_eval,
        domain_check=domain_check,
        event_time=event_time,
        on_image_residual=on_image_residual,
        value_batch=value_batch,
        jacobian_batch=jacobian_batch,
    )


def fd_jacobian(map_, p, cfg=None):
    """Central-difference Jacobian of ``map_.value_eval`` at p."""
    cfg = cfg or NumericConfig()
    coords = p.coords()
    steps = fd_steps(coords, cfg.fd_step)
    jac = np.empty((map_.target_dim, map_.source_dim))
    for k in range(map_.source_dim):
        up = coords.copy()
        dn = coords.copy()
        up[k] += steps[k]
        dn[k] -= steps[k]
        e_up = map_.value_eval(ChartPoint.from_coords(up))
        e_dn = map_.value_eval(ChartPoint.from_coords(dn))
        jac[:, k] = (e_up.coords() - e_dn.coords()) / (2.0 * steps[k])
    return jac


def map_jacobian(map_, p, mode="analytic", cfg=None):
    """Jacobian in the requested mode ('analytic' or 'finite_difference')."""
    if mode == "analytic":
        if map_.jacobian_eval is None:
            raise PreconditionError(
                "map carries no analytic Jacobian; use mode='finite_difference'"
            )
        return np.asarray(map_.jacobian_eval(p), dtype=float)
    if mode == "finite_difference":
        return fd_jacobian(map_, p, cfg)
    raise ValueError(f"unknown Jacobian mode {mode!r}")


def pullback(map_, model, p, mode="analytic", cfg=None):
    """Pullback J^T eta J of the flat metric through the embedding at p.

    Raises ImmersionError (carrying the observed rank) when the Jacobian
    is column-rank deficient.
    """
    if model is not None and model.dimension != map_.source_dim:
        raise PreconditionError(
            f"model dimension {model.dimension} does not match map source "
            f"dimension {map_.source_dim}"
        )
    if not map_.in_domain(p):
        raise DomainError(f"point {p} outside the embedding domain")
    jac = map_jacobian(map_, p, mode, cfg)
    sv = np.linalg.svd(jac, compute_uv=False)
    rank = int(np.sum(sv > _RANK_RTOL * sv[0]))
    if rank < map_.source_dim:
        raise ImmersionError(
            f"embedding Jacobian has rank {rank} < {map_.source_dim} at {p}",
            rank=rank,
        )
    eta = minkowski_eta(map_.target_dim)
    back = jac.T @ eta @ jac
    return 0.5 * (back + back.T)


def isometry_residual(map_, model, p, mode="analytic", cfg=None):
    """Max-norm mismatch between the pulled-back flat metric and the model
    metric at p; zero exactly when the embedding is isometric there."""
    back = pullback(map_, model, p, mode, cfg)
    g = eval_metric(model, p)
    return float(np.abs(back - g).max())


def isometry_residual_grid(map_, model, coords, mode="analytic", cfg=None):
    """Max isometry residual over an (m, n) coordinate grid.

    Uses the map's batch evaluators when present (vectorised sweep),
    falling back to the pointwise operation otherwise.
    """
    coords = np.asarray(coords, dtype=float)
    batched = (map_.value_batch is not None and model.component_batch is not None
               and (mode != "analytic" or map_.jacobian_batch is not None))
    if not batched:
        return max(
            isometry_residual(map_, model, ChartPoint.from_coords(c), mode, cfg)
            for c in coords
        )
    if mode == "analytic":
        jac = map_.jacobian_batch(coords)
    elif mode == "finite_difference":
        cfg = cfg or NumericConfig()
        m, n = coords.shape
        jac = np.empty((m, map_.target_dim, n))
        steps = cfg.fd_step * np.maximum(1.0, np.abs(coords))
        for k in range(n):
            up = coords.copy()
            dn = coords.copy()
            up[:, k] += steps[:, k]
            dn[:, k] -= steps[:, k]
            jac[:, :, k] = (map_.value_batch(up) - map_.value_batch(dn)) / (
                2.0 * steps[:, k][:, None]
            )
    else:
        raise ValueError(f"unknown Jacobian mode {mode!r}")
    eta_diag = np.ones(map_.target_dim)
    eta_diag[0] = -1.0
    back = np.einsum("mia,i,mib->mab", jac, eta_diag, jac)
    g = model.component_batch(coords)
    return float(np.abs(back - g).max())
