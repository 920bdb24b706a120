"""Boost group, quotient coordinates and composed embeddings.

The half-space R = {y1 - tau > 0} of Minkowski space is quotiented by the
discrete boost group generated by a hyperbolic rotation of rapidity pi in
the (tau, y1) plane.  Quotient coordinates are

    T = ((y1)^2 - tau^2)/4,    phi = -2 ln((y1 - tau)/2)   (mod 2 pi),

and the quotient metric is g = -2 dT dphi - T dphi^2 + sum (dy^i)^2.
Boosting by rapidity s scales u = y1 - tau by e^(-s), hence shifts the
unwrapped phi by +2 s; the generator therefore shifts phi by one full
period +2 pi, which is exactly the identification the quotient makes.
"""

import math
from dataclasses import dataclass

import numpy as np

from .config import NumericConfig, fd_steps
from .errors import PreconditionError, RegionError
from .minkowski import MinkowskiEvent, minkowski_eta, psi_toy_map
from .explicit import HyperbolaFamily, explicit_embedding_map

TWO_PI = 2.0 * math.pi

# Sign of the angular coordinate, fixed against the metric above by the
# quotient-isometry oracle: with g_Tphi = -1, only phi = -2 ln(u/2) pulls
# the quotient metric back to diag(-1, +1, ...).
PHI_SIGN = -2.0


@dataclass(frozen=True)
class MisnerEvent:
    """Quotient point (T, phi, y^2, ...) with phi canonical in [0, 2 pi).

    ``phi_raw`` keeps the unwrapped angle of the representative that
    produced the event; ``branch`` is the sheet index, so that
    phi_raw = phi + 2 pi branch.  Orbits with T > 0 are closed timelike
    curves; T < 0 gives hyperbolic orbits.
    """

    T: float
    phi: float
    spectators: np.ndarray
    phi_raw: float

    def __post_init__(self):
        object.__setattr__(self, "T", float(self.T))
        object.__setattr__(self, "phi", float(self.phi))
        object.__setattr__(self, "phi_raw", float(self.phi_raw))
        spect = np.asarray(self.spectators, dtype=float).reshape(-1)
        object.__setattr__(self, "spectators", spect)
        if not np.isfinite(self.T) or not np.all(np.isfinite(spect)):
            raise ValueError(f"quotient point has non-finite coordinates: {self}")
        if not (0.0 <= self.phi < TWO_PI):
            raise ValueError(f"phi must be canonical in [0, 2 pi), got {self.phi}")

    @property
    def branch(self):
        return int(round((self.phi_raw - self.phi) / TWO_PI))


@dataclass(frozen=True)
class BoostSpec:
    """Group element: rapidity of the generator and its integer power."""

    rapidity: float = math.pi
    power: int = 1

    def __post_init__(self):
        if self.rapidity == 0.0:
            raise ValueError("generator rapidity must be nonzero")

    @property
    def total_rapidity(self):
        return self.rapidity * self.power


def boost_tau_y1(tau, y1, s):
    """Hyperbolic rotation of rapidity s in the (tau, y1) plane."""
    ch = np.cosh(s)
    sh = np.sinh(s)
    return tau * ch + y1 * sh, tau * sh + y1 * ch


def boost(e, spec=BoostSpec()):
    """Apply the group element to an event; spectators are untouched."""
    tau, y1 = boost_tau_y1(e.tau, e.y[0], spec.total_rapidity)
    y = e.y.copy()
    y[0] = y1
    return MinkowskiEvent(tau, y)


def in_region_R(e):
    """True iff the event lies in the quotient-admissible half-space."""
    return float(e.y[0]) - e.tau > 0.0


def to_misner(e):
    """Quotient coordinates of an event in the half-space.

    Returns a MisnerEvent carrying both the canonical phi and the
    unwrapped phi_raw of the given representative.
    """
    u = float(e.y[0]) - e.tau
    if not u > 0.0:
        raise RegionError(
            f"event outside the half-space y1 - tau > 0: tau = {e.tau}, y1 = {e.y[0]}",
            tau=e.tau, y1=float(e.y[0]),
        )
    T = (float(e.y[0]) ** 2 - e.tau**2) / 4.0
    phi_raw = PHI_SIGN * math.log(u / 2.0)
    phi = phi_raw % TWO_PI
    if phi >= TWO_PI:  # guard the half-open range against rounding
        phi -= TWO_PI
    return MisnerEvent(T=T, phi=phi, spectators=e.y[1:].copy(), phi_raw=phi_raw)


def from_misner(m, branch=0):
    """Representative Minkowski event of a quotient point on a chosen sheet.

    The covering is infinite-sheeted, so the branch index is explicit:
    the representative satisfies phi_raw = phi + 2 pi branch, and
    u = y1 - tau > 0 by construction for every T.
    """
    phi_raw = m.phi + TWO_PI * branch
    u = 2.0 * math.exp(phi_raw / PHI_SIGN)
    v = 4.0 * m.T / u
    tau = 0.5 * (v - u)
    y1 = 0.5 * (v + u)
    return MinkowskiEvent(tau, np.concatenate(([y1], m.spectators)))


def misner_metric(T, dim=2):
    """Quotient metric at coordinate time T, in (T, phi, y^2, ...) order."""
    if dim < 2:
        raise PreconditionError(f"dimension must be >= 2, got {dim}")
    g = np.eye(dim)
    g[0, 0] = 0.0
    g[0, 1] = g[1, 0] = -1.0
    g[1, 1] = -float(T)
    return g


def quotient_map_coords(coords):
    """(T, phi_raw, spectators) of flattened event coordinates; the chart
    form of the quotient map used for differentiation."""
    tau = coords[0]
    y1 = coords[1]
    u = y1 - tau
    if not u > 0.0:
        raise RegionError(
            f"event outside the half-space y1 - tau > 0: tau = {tau}, y1 = {y1}",
            tau=float(tau), y1=float(y1),
        )
    out = np.empty_like(coords)
    out[0] = (y1 * y1 - tau * tau) / 4.0
    out[1] = PHI_SIGN * math.log(u / 2.0)
    out[2:] = coords[2:]
    return out


def quotient_isometry_residual(e, cfg=None):
    """Max-norm mismatch between the quotient metric pulled back through
    the (finite-difference) Jacobian of the quotient map and the flat
    metric at e; zero where the quotient map is a local isometry."""
    if not in_region_R(e):
        raise RegionError(
            f"event outside the half-space y1 - tau > 0: tau = {e.tau}, y1 = {e.y[0]}",
            tau=e.tau, y1=float(e.y[0]),
        )
    cfg = cfg or NumericConfig()
    coords = e.coords()
    dim = coords.size
    steps = fd_steps(coords, cfg.fd_step)
    # Keep the stencil inside the half-space.
    u = coords[1] - coords[0]
    steps = np.minimum(steps, 0.25 * u)
    jac = np.empty((dim, dim))
    for k in range(dim):
        up = coords.copy()
        dn = coords.copy()
        up[k] += steps[k]
        dn[k] -= steps[k]
        jac[:, k] = (quotient_map_coords(up) - quotient_map_coords(dn)) / (2.0 * steps[k])
    T = (coords[1] ** 2 - coords[0] ** 2) / 4.0
    g_quot = misner_metric(T, dim)
    back = jac.T @ g_quot @ jac
    return float(np.abs(back - minkowski_eta(dim)).max())


def source_embedding_map(source, n=2, family=None, cfg=None):
    """Embedding selected by name: 'psi_toy' or 'explicit'.

    The explicit family defaults to shift 1 here so composed images stay
    strictly inside the half-space and off the origin.
    """
    if source == "psi_toy":
        return psi_toy_map(n)
    if source == "explicit":
        family = family if family is not None else HyperbolaFamily(shift=1.0)
        return explicit_embedding_map(n, family, cfg)
    raise ValueError(f"unknown source embedding {source!r}")


def compose_embedding(p, source="explicit", family=None, cfg=None):
    """Quotient image of a chart point through the chosen embedding.

    The ambient image must land in the half-space; violations raise a
    RegionError naming the offending (tau, y1) pair rather than silently
    restricting the domain.
    """
    map_ = source_embedding_map(source, p.n, family, cfg)
    event = map_.value_eval(p)
    return to_misner(event)
