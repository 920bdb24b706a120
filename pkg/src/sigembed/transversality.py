"""Orbit transversality and intersection counting.

The boost group's Killing field K = y1 d_tau + tau d_y1 spans the orbit
tangents; an embedded image is transverse to the orbit foliation where K
never lies in the span of the embedding Jacobian.  For the canonical-model
embedding the tangency obstruction reduces to the quadratic 2 t^2 + t + 2,
whose negative discriminant rules tangency out for every real t.  Orbit
intersections with an image are located by sign-change isolation of the
image-membership residual along the boost parameter.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import CapabilityError, PreconditionError, RegionError
from .minkowski import MinkowskiEvent, map_jacobian
from .misner import boost_tau_y1, in_region_R

# An orbit point counts as on-image when the membership residual refines
# below this absolute tolerance; rejects pole-crossing pseudo-roots.
MEMBERSHIP_TOL = 1e-9


@dataclass(frozen=True)
class OrbitSample:
    """One scan node: boost parameter, boosted event and, when the event
    lies on the image within tolerance, the source time of its preimage."""

    s: float
    event: MinkowskiEvent
    t_value: float = None


@dataclass(frozen=True)
class OrbitProfile:
    """Scan result: samples, refined intersections (s, t) and the
    monotonicity classification of the preimage-time profile."""

    samples: tuple
    intersections: tuple
    classification: str
    extremum_s: float = None


def killing_at(e):
    """Boost generator at an event: tau-component y1, y1-component tau,
    zero on spectators.  Vanishes only at the fixed point tau = y1 = 0."""
    k = np.zeros(e.dim)
    k[0] = float(e.y[0])
    k[1] = e.tau
    return k


def tangency_residual(map_, p, mode="analytic", cfg=None):
    """Normalised least-squares defect of fitting the Killing vector into
    the image tangent space at map(p); strictly positive iff K is not
    tangent there, i.e. the image is transverse to the orbit."""
    if map_.domain_check is not None and not map_.domain_check(p):
        raise PreconditionError(f"point {p} outside the embedding domain")
    event = map_.value_eval(p)
    k = killing_at(event)
    k_norm = float(np.linalg.norm(k))
    if k_norm == 0.0:
        raise PreconditionError(
            "orbit degenerates at the boost fixed point (tau = y1 = 0); "
            "tangency is undefined there"
        )
    jac = map_jacobian(map_, p, mode, cfg)
    # Spatial tangents must not all align with the first spatial axis,
    # otherwise a positive residual does not certify transversality.
    spectator_rows = jac[2:, :]
    if spectator_rows.size and np.abs(spectator_rows).max() <= 1e-14 * max(
        1.0, float(np.abs(jac).max())
    ):
        warnings.warn(
            "all spatial tangent vectors lie along the first spatial axis; "
            "the tangency test cannot certify transversality here",
            stacklevel=2,
        )
    coef, *_ = np.linalg.lstsq(jac, k, rcond=None)
    return float(np.linalg.norm(k - jac @ coef)) / k_norm


def tangency_obstruction_det(map_, p, mode="analytic", cfg=None):
    """|det([J | K])| for codimension-one embeddings.

    Vanishes exactly at tangency and, unlike the euclidean least-squares
    defect, is invariant under boosts of the ambient frame (unit
    determinant), so it is the quantity compared across frames.
    """
    if map_.target_dim != map_.source_dim + 1:
        raise CapabilityError(
            "determinant obstruction requires target dimension = source + 1"
        )
    event = map_.value_eval(p)
    jac = map_jacobian(map_, p, mode, cfg)
    k = killing_at(event)
    return float(abs(np.linalg.det(np.column_stack([jac, k]))))


def toy_tangency_poly(t):
    """(2 t^2 + t + 2, discriminant -15): the closed-form obstruction whose
    vanishing would make the boost generator tangent to the canonical-model
    image; the negative discriminant means it never vanishes."""
    t = float(t)
    return 2.0 * t * t + t + 2.0, -15.0


def _boosted_event(base, s):
    tau, y1 = boost_tau_y1(base.tau, float(base.y[0]), s)
    y = base.y.copy()
    y[0] = y1
    return MinkowskiEvent(tau, y)


def _require_orbit_capable(map_):
    if map_.on_image_residual is None or map_.event_time is None:
        raise CapabilityError(
            "map does not expose an image-membership residual and preimage "
            "time; orbit scans need an invertible-on-image map"
        )


def _refine_root(map_, base, s_lo, s_hi, r_lo, r_hi, iters=100):
    for _ in range(iters):
        s_mid = 0.5 * (s_lo + s_hi)
        r_mid = map_.on_image_residual(_boosted_event(base, s_mid))
        if not np.isfinite(r_mid):
            return None
        if r_mid == 0.0:
            return s_mid
        if (r_mid < 0.0) == (r_lo < 0.0):
            s_lo, r_lo = s_mid, r_mid
        else:
            s_hi, r_hi = s_mid, r_mid
        if s_hi - s_lo <= 1e-14 * max(1.0, abs(s_hi)):
            break
    return 0.5 * (s_lo + s_hi)


def _scan_intersections(map_, base, s_grid, residuals):
    ds = s_grid[1] - s_grid[0]
    roots = []
    for s, r in zip(s_grid, residuals):
        if np.isfinite(r) and abs(r) <= MEMBERSHIP_TOL:
            roots.append(float(s))
    for i in range(len(s_grid) - 1):
        r0, r1 = residuals[i], residuals[i + 1]
        if not (np.isfinite(r0) and np.isfinite(r1)):
            continue
        if abs(r0) <= MEMBERSHIP_TOL or abs(r1) <= MEMBERSHIP_TOL:
            continue  # already collected as node roots
        if (r0 < 0.0) != (r1 < 0.0):
            s_star = _refine_root(map_, base, s_grid[i], s_grid[i + 1], r0, r1)
            if s_star is None:
                continue
            r_star = map_.on_image_residual(_boosted_event(base, s_star))
            # pole crossings refine to a sign change with a large residual
            if np.isfinite(r_star) and abs(r_star) <= MEMBERSHIP_TOL:
                roots.append(float(s_star))
    roots.sort()
    merged = []
    for s in roots:
        if not merged or s - merged[-1] > 0.5 * ds:
            merged.append(s)
    return merged


def _classify_profile(s_grid, times):
    finite = np.isfinite(times)
    pairs = finite[:-1] & finite[1:]
    if not pairs.any():
        return "undetermined", None
    diffs = (times[1:] - times[:-1])[pairs]
    scale = max(1.0, float(np.nanmax(np.abs(times[finite]))))
    tol = 1e-10 * scale
    increasing = bool(np.any(diffs > tol))
    decreasing = bool(np.any(diffs < -tol))
    if increasing and decreasing:
        flips = np.nonzero(pairs)[0]
        signs = np.sign(diffs)
        change = np.nonzero(signs[:-1] != signs[1:])[0]
        idx = flips[change[0] + 1] if change.size else flips[0]
        return "interior_extremum", float(s_grid[idx])
    if increasing or decreasing:
        return "strictly_monotone", None
    # flat profile: the preimage time is stationary all along the orbit
    mid = len(s_grid) // 2
    return "interior_extremum", float(s_grid[mid])


def orbit_time_profile(map_, base, s_range=(-20.0, 20.0), samples=801, cfg=None):
    """Scan the boost orbit through ``base``: membership residual roots and
    the preimage-time profile with its monotonicity classification.

    The base must lie in the half-space y1 - tau > 0 (orbits preserve it);
    the map must expose membership and preimage-time evaluators.
    """
    _require_orbit_capable(map_)
    if not in_region_R(base):
        raise RegionError(
            f"orbit base outside the half-space: tau = {base.tau}, y1 = {base.y[0]}",
            tau=base.tau, y1=float(base.y[0]),
        )
    if samples < 2:
        raise PreconditionError(f"samples must be >= 2, got {samples}")
    s_grid = np.linspace(float(s_range[0]), float(s_range[1]), int(samples))
    events = [_boosted_event(base, s) for s in s_grid]
    residuals = np.array([map_.on_image_residual(e) for e in events], dtype=float)
    times = np.array([map_.event_time(e) for e in events], dtype=float)

    sample_list = []
    for s, e, r, tv in zip(s_grid, events, residuals, times):
        on_image = np.isfinite(r) and abs(r) <= MEMBERSHIP_TOL
        sample_list.append(
            OrbitSample(s=float(s), event=e,
                        t_value=float(tv) if on_image and np.isfinite(tv) else None)
        )

    roots = _scan_intersections(map_, base, s_grid, residuals)
    intersections = []
    for s_star in roots:
        t_star = map_.event_time(_boosted_event(base, s_star))
        intersections.append((float(s_star), float(t_star)))

    classification, extremum_s = _classify_profile(s_grid, times)
    return OrbitProfile(
        samples=tuple(sample_list),
        intersections=tuple(intersections),
        classification=classification,
        extremum_s=extremum_s,
    )


def orbit_intersection_count(map_, base, s_range=(-20.0, 20.0), samples=2001,
                             cfg=None):
    """Number of isolated boost parameters at which the orbit through
    ``base`` lies on the embedded image."""
    _require_orbit_capable(map_)
    if not in_region_R(base):
        raise RegionError(
            f"orbit base outside the half-space: tau = {base.tau}, y1 = {base.y[0]}",
            tau=base.tau, y1=float(base.y[0]),
        )
    s_grid = np.linspace(float(s_range[0]), float(s_range[1]), int(samples))
    residuals = np.array(
        [map_.on_image_residual(_boosted_event(base, s)) for s in s_grid],
        dtype=float,
    )
    return len(_scan_intersections(map_, base, s_grid, residuals))
