"""Hot numeric kernels: singular arc-length quadrature and its inversion.

The arc-length integral

    I(theta) = integral_0^theta sqrt(|4/(sqrt(2) - 2 s)^4 - 1|) ds

has a square-root kink at s = 0 and a non-integrable pole at
s = 1/sqrt(2).  The substitution s = sign(theta) * w^2 removes the kink,
after which an adaptive Gauss-Kronrod (G7, K15) scheme converges fast on
any compact subset of (-inf, 1/sqrt(2)).

Two backends implement the same panel-acceptance rule:

* scalar loops compiled with numba (the default when numba imports), and
* a pure-numpy path that evaluates all pending panels of one integral per
  refinement round (used when numba is unavailable or SIGEMBED_NO_NUMBA=1).

Both stay importable so ``benchmarks/bench_kernels.py`` can compare them;
cross-backend agreement is covered by tests.

Status codes returned by the raw kernels: 0 ok, 1 budget exhausted.
"""

import numpy as np

from ._accel import NUMBA_ENABLED, njit

SQRT2 = float(np.sqrt(2.0))
THETA_POLE = float(np.sqrt(0.5))
# Seed slope of the inversion near t = 0: theta ~ t / 2**(5/6).
SEED_SLOPE = float(2.0 ** (-5.0 / 6.0))
_EPS = float(np.finfo(float).eps)

# Gauss-Kronrod (G7, K15) nodes and weights on [-1, 1]; nonnegative nodes,
# symmetric extension applied in the evaluation loops.  Indices 1, 3, 5 and
# the centre are the embedded Gauss nodes.
_XGK = np.array([
    0.99145537112081263921,
    0.94910791234275852453,
    0.86486442335976907279,
    0.74153118559939443986,
    0.58608723546769113029,
    0.40584515137739716691,
    0.20778495500789846760,
])
_WGK = np.array([
    0.02293532201052922496,
    0.06309209262997855329,
    0.10479001032225018384,
    0.14065325971552591875,
    0.16900472663926790283,
    0.19035057806478540991,
    0.20443294007529889241,
])
_WGK_CENTER = 0.20948214108472782801
_WG = np.array([
    0.12948496616886969327,
    0.27970539148927666790,
    0.38183005050511894495,
])
_WG_CENTER = 0.41795918367346938776

_MAX_STACK = 4096


def _integrand_w_scalar(w, sign):
    # integrand after s = sign * w**2: 2 w sqrt(|4 (sqrt2 - 2 s)^-4 - 1|)
    s = sign * w * w
    u = SQRT2 - 2.0 * s
    q = 4.0 / (u * u * u * u) - 1.0
    return 2.0 * w * np.sqrt(abs(q))


def _make_arc_core(integrand, jit):
    """Adaptive stack driver over a scalar integrand (numba-compilable)."""

    @jit
    def gk15(a, b, sign):
        c = 0.5 * (a + b)
        h = 0.5 * (b - a)
        f0 = integrand(c, sign)
        resk = _WGK_CENTER * f0
        resg = _WG_CENTER * f0
        for j in range(7):
            x = h * _XGK[j]
            f1 = integrand(c - x, sign)
            f2 = integrand(c + x, sign)
            resk += _WGK[j] * (f1 + f2)
            if j == 1 or j == 3 or j == 5:
                resg += _WG[(j - 1) // 2] * (f1 + f2)
        return h * resk, h * abs(resk - resg)

    @jit
    def arc_core(theta, abs_tol, rel_tol, max_panels):
        # Globally adaptive: always split the worst-error panel, so the
        # grid grades itself geometrically into the pole as theta nears it.
        if theta == 0.0:
            return 0.0, 0
        sign = 1.0 if theta > 0.0 else -1.0
        w_max = np.sqrt(abs(theta))

        pan_a = np.empty(_MAX_STACK)
        pan_b = np.empty(_MAX_STACK)
        pan_v = np.empty(_MAX_STACK)
        pan_e = np.empty(_MAX_STACK)
        pan_a[0] = 0.0
        pan_b[0] = w_max
        pan_v[0], pan_e[0] = gk15(0.0, w_max, sign)
        count = 1
        splits = 0
        while True:
            total = 0.0
            err_total = 0.0
            worst = 0
            for i in range(count):
                total += pan_v[i]
                err_total += pan_e[i]
                if pan_e[i] > pan_e[worst]:
                    worst = i
            if err_total <= max(abs_tol, rel_tol * abs(total)):
                return sign * total, 0
            if pan_b[worst] - pan_a[worst] <= 64.0 * _EPS * w_max:
                return sign * total, 0  # roundoff floor; cannot refine further
            if splits >= max_panels or count >= _MAX_STACK - 1:
                return sign * total, 1
            a = pan_a[worst]
            b = pan_b[worst]
            mid = 0.5 * (a + b)
            pan_b[worst] = mid
            pan_v[worst], pan_e[worst] = gk15(a, mid, sign)
            pan_a[count] = mid
            pan_b[count] = b
            pan_v[count], pan_e[count] = gk15(mid, b, sign)
            count += 1
            splits += 1

    return arc_core


def _make_theta_root(arc_core, jit):
    """Bracketed inversion of I(theta) = (2/3)|t|^(3/2) sgn(t).

    I is strictly increasing, so the root is unique.  Brackets grow
    geometrically from the small-t seed; refinement is a secant step
    safeguarded by the bracket, with bisection forced every third step.
    """

    @jit
    def theta_root(t, quad_abs, quad_rel, root_tol, max_iter, max_panels):
        if t == 0.0:
            return 0.0, 0
        target = (2.0 / 3.0) * abs(t) ** 1.5 * (1.0 if t > 0.0 else -1.0)
        # Residual acceptance lives in I-space: near the pole dI/dtheta is
        # huge, so a theta-width criterion would wreck the t round-trip.
        f_tol = max(root_tol * max(1.0, abs(target)),
                    quad_abs, quad_rel * abs(target))

        # Bracket [lo, hi] with I(lo) <= target <= I(hi).
        if t > 0.0:
            lo = 0.0
            g_lo = -target
            hi = min(SEED_SLOPE * t, THETA_POLE * (1.0 - 2.0 ** -8))
            val, st = arc_core(hi, quad_abs, quad_rel, max_panels)
            if st != 0:
                return hi, st
            g_hi = val - target
            k = 0
            while g_hi < 0.0:
                k += 1
                if k > max_iter:
                    return hi, 1
                hi = THETA_POLE - 0.5 * (THETA_POLE - hi)
                val, st = arc_core(hi, quad_abs, quad_rel, max_panels)
                if st != 0:
                    return hi, st
                g_hi = val - target
        else:
            # |I(theta)| <= |theta| for theta < 0, so I(target) >= target.
            hi = target
            val, st = arc_core(hi, quad_abs, quad_rel, max_panels)
            if st != 0:
                return hi, st
            g_hi = val - target
            lo = target - 2.0
            val, st = arc_core(lo, quad_abs, quad_rel, max_panels)
            if st != 0:
                return lo, st
            g_lo = val - target
            k = 0
            while g_lo > 0.0:
                k += 1
                if k > max_iter:
                    return lo, 1
                lo = target - 2.0 ** (k + 1)
                val, st = arc_core(lo, quad_abs, quad_rel, max_panels)
                if st != 0:
                    return lo, st
                g_lo = val - target

        if g_lo == 0.0:
            return lo, 0
        if g_hi == 0.0:
            return hi, 0

        x_prev, g_prev = lo, g_lo
        x_cur, g_cur = hi, g_hi
        for it in range(max_iter):
            width = hi - lo
            if width <= 16.0 * _EPS * max(1.0, abs(lo), abs(hi)):
                return 0.5 * (lo + hi), 0  # float64 resolution floor
            x = 0.5 * (lo + hi)
            if it % 3 != 2 and g_cur != g_prev:
                x_sec = x_cur - g_cur * (x_cur - x_prev) / (g_cur - g_prev)
                margin = 0.01 * width
                if lo + margin < x_sec < hi - margin:
                    x = x_sec
            val, st = arc_core(x, quad_abs, quad_rel, max_panels)
            if st != 0:
                return x, st
            g = val - target
            if abs(g) <= f_tol:
                return x, 0
            if g < 0.0:
                lo = x
            else:
                hi = x
            x_prev, g_prev = x_cur, g_cur
            x_cur, g_cur = x, g
        return 0.5 * (lo + hi), 1

    return theta_root


# ---------------------------------------------------------------------------
# pure-numpy backend: all pending panels of an integral per round
# ---------------------------------------------------------------------------

def _integrand_w_array(w, sign):
    s = sign * w * w
    u = SQRT2 - 2.0 * s
    q = 4.0 / (u * u * u * u) - 1.0
    return 2.0 * w * np.sqrt(np.abs(q))


_NODES = np.concatenate([-_XGK, [0.0], _XGK[::-1]])          # 15 ascending
_WEIGHTS_K = np.concatenate([_WGK, [_WGK_CENTER], _WGK[::-1]])
_WEIGHTS_G = np.zeros(15)
_WEIGHTS_G[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG, [_WG_CENTER], _WG[::-1]])


def _gk15_panels(a, b, sign):
    """Vectorised G7/K15 over panel arrays a, b; returns (vals, errs)."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    w = c[:, None] + h[:, None] * _NODES[None, :]
    f = _integrand_w_array(w, sign)
    resk = f @ _WEIGHTS_K
    resg = f @ _WEIGHTS_G
    return h * resk, h * np.abs(resk - resg)


def arc_core_numpy(theta, abs_tol, rel_tol, max_panels):
    # Same globally adaptive worst-panel strategy as the compiled backend;
    # only the 15-node rule evaluation is vectorised.
    if theta == 0.0:
        return 0.0, 0
    sign = 1.0 if theta > 0.0 else -1.0
    w_max = np.sqrt(abs(theta))

    pan_a = np.empty(_MAX_STACK)
    pan_b = np.empty(_MAX_STACK)
    pan_v = np.empty(_MAX_STACK)
    pan_e = np.empty(_MAX_STACK)
    pan_a[0] = 0.0
    pan_b[0] = w_max
    v, e = _gk15_panels(pan_a[:1], pan_b[:1], sign)
    pan_v[0], pan_e[0] = v[0], e[0]
    count = 1
    splits = 0
    while True:
        total = float(pan_v[:count].sum())
        err_total = float(pan_e[:count].sum())
        worst = int(np.argmax(pan_e[:count]))
        if err_total <= max(abs_tol, rel_tol * abs(total)):
            return sign * total, 0
        if pan_b[worst] - pan_a[worst] <= 64.0 * _EPS * w_max:
            return sign * total, 0  # roundoff floor; cannot refine further
        if splits >= max_panels or count >= _MAX_STACK - 1:
            return sign * total, 1
        a = pan_a[worst]
        b = pan_b[worst]
        mid = 0.5 * (a + b)
        children_a = np.array([a, mid])
        children_b = np.array([mid, b])
        v, e = _gk15_panels(children_a, children_b, sign)
        pan_b[worst] = mid
        pan_v[worst], pan_e[worst] = v[0], e[0]
        pan_a[count] = mid
        pan_b[count] = b
        pan_v[count], pan_e[count] = v[1], e[1]
        count += 1
        splits += 1


def _passthrough(func):
    return func


theta_root_numpy = _make_theta_root(arc_core_numpy, _passthrough)


# ---------------------------------------------------------------------------
# backend selection
# ---------------------------------------------------------------------------

if NUMBA_ENABLED:
    _jit = njit(cache=True)
    arc_core_numba = _make_arc_core(_jit(_integrand_w_scalar), _jit)
    theta_root_numba = _make_theta_root(arc_core_numba, _jit)

    @_jit
    def _arc_batch_numba(thetas, abs_tol, rel_tol, max_panels, out, status):
        for i in range(thetas.shape[0]):
            out[i], status[i] = arc_core_numba(thetas[i], abs_tol, rel_tol, max_panels)

    @_jit
    def _theta_batch_numba(ts, quad_abs, quad_rel, root_tol, max_iter, max_panels,
                           out, status):
        for i in range(ts.shape[0]):
            out[i], status[i] = theta_root_numba(
                ts[i], quad_abs, quad_rel, root_tol, max_iter, max_panels
            )

    _arc_core = arc_core_numba
    _theta_root = theta_root_numba
else:
    arc_core_numba = None
    theta_root_numba = None
    _arc_core = arc_core_numpy
    _theta_root = theta_root_numpy


# ---------------------------------------------------------------------------
# python-facing wrappers
# ---------------------------------------------------------------------------

def _max_panels(cfg):
    return 100 * cfg.max_iterations


def arc_integral_raw(theta, cfg):
    """(value, status) without error translation; theta must be < pole."""
    return _arc_core(float(theta), cfg.quad_abs_tol, cfg.quad_rel_tol, _max_panels(cfg))


def theta_root_raw(t, cfg):
    return _theta_root(
        float(t), cfg.quad_abs_tol, cfg.quad_rel_tol,
        cfg.root_tol, cfg.max_iterations, _max_panels(cfg),
    )


def arc_integral_batch(thetas, cfg):
    """Arc integral over an array of thetas; returns (values, statuses)."""
    thetas = np.ascontiguousarray(thetas, dtype=np.float64)
    out = np.empty_like(thetas)
    status = np.zeros(thetas.shape[0], dtype=np.int64)
    if NUMBA_ENABLED:
        _arc_batch_numba(thetas, cfg.quad_abs_tol, cfg.quad_rel_tol,
                         _max_panels(cfg), out, status)
    else:
        for i in range(thetas.shape[0]):
            out[i], status[i] = arc_core_numpy(
                thetas[i], cfg.quad_abs_tol, cfg.quad_rel_tol, _max_panels(cfg)
            )
    return out, status


def theta_root_batch(ts, cfg):
    """Inversion over an array of t values; returns (thetas, statuses)."""
    ts = np.ascontiguousarray(ts, dtype=np.float64)
    out = np.empty_like(ts)
    status = np.zeros(ts.shape[0], dtype=np.int64)
    if NUMBA_ENABLED:
        _theta_batch_numba(
            ts, cfg.quad_abs_tol, cfg.quad_rel_tol,
            cfg.root_tol, cfg.max_iterations, _max_panels(cfg), out, status,
        )
    else:
        for i in range(ts.shape[0]):
            out[i], status[i] = theta_root_numpy(
                ts[i], cfg.quad_abs_tol, cfg.quad_rel_tol,
                cfg.root_tol, cfg.max_iterations, _max_panels(cfg),
            )
    return out, status
