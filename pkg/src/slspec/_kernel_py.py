"""Pure-Python integration kernel: Dormand-Prince 5(4) with PI step control.

Integrates the first-order system

    u'  = u1 / p(x)
    u1' = (q(x) - z r(x)) u

for complex z between two interior points, optionally accumulating the
quadrature S' = r |u|^2 alongside (used by the endpoint classifier).  Near a
singular endpoint the step size is capped proportionally to the distance to
that endpoint, so approaches refine geometrically.

This module is the fallback twin of the compiled kernel `_kernel_cy`; both
expose the same `integrate_kernel` signature and the same algorithm.
"""

from __future__ import annotations

import math

BACKEND_NAME = "python"

# status codes
OK = 0
MAX_STEPS = 1
STEP_UNDERFLOW = 2
BAD_COEFFICIENT = 3
OVERFLOW = 4

# coefficient kinds (mirrors model.py; kept literal so the kernel is
# self-contained)
_GENERIC = 0
_CONST = 1
_INVSQ = 2
_LEGENDRE = 3
_LAGUERRE = 4

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = (
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
)
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_A71, _A73, _A74, _A75, _A76 = (
    35.0 / 384.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
)
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)

_SAFETY = 0.9
_FAC_MIN = 0.2
_FAC_MAX = 10.0
_PI_ALPHA = 0.17
_PI_BETA = 0.04
_GUARD_FRAC = 0.5
# magnitude guard; kept low enough that |u|^2 in the L2 accumulator stays finite
_HUGE = 1e140


def _coeffs(kind, params, pfun, qfun, rfun, x):
    """Evaluate (p, q, r) at x for the given coefficient family."""
    if kind == _CONST:
        return params[0], params[1], params[2]
    if kind == _INVSQ:
        return 1.0, params[0] / (x * x), 1.0
    if kind == _LEGENDRE:
        return 1.0 - x * x, 0.0, 1.0
    if kind == _LAGUERRE:
        b = params[0]
        e = math.exp(-x)
        pb = math.pow(x, b)
        return pb * e, 0.0, pb / x * e
    return pfun(x), qfun(x), rfun(x)


def integrate_kernel(
    kind,
    params,
    pfun,
    qfun,
    rfun,
    z,
    x0,
    u0,
    u10,
    x1,
    rtol,
    atol,
    max_steps,
    min_step,
    guard_lo,
    guard_hi,
    accumulate_l2,
):
    """March from (x0, u0, u10) to x1; returns
    (status, xs, us, u1s, l2_accum, n_steps) with xs/us/u1s the accepted
    steps including both ends.  guard_lo/guard_hi are singular-endpoint
    coordinates (use +-inf to disable the step ceiling on that side)."""
    direction = 1.0 if x1 > x0 else -1.0
    span = abs(x1 - x0)

    x = x0
    u = complex(u0)
    u1 = complex(u10)
    s_acc = 0.0

    xs = [x]
    us = [u]
    u1s = [u1]

    def rhs(xx, uu, uu1):
        p, q, r = _coeffs(kind, params, pfun, qfun, rfun, xx)
        if not p > 0.0 or not r > 0.0:
            return None
        du = uu1 / p
        du1 = (q - z * r) * uu
        if accumulate_l2:
            au = abs(uu)
            return du, du1, r * au * au
        return du, du1, 0.0

    def hmax_at(xx, remaining):
        h = remaining
        d_lo = xx - guard_lo
        if d_lo < h:
            g = _GUARD_FRAC * d_lo
            if g < h:
                h = g
        d_hi = guard_hi - xx
        if d_hi < h:
            g = _GUARD_FRAC * d_hi
            if g < h:
                h = g
        return h

    k1 = rhs(x, u, u1)
    if k1 is None:
        return BAD_COEFFICIENT, xs, us, u1s, s_acc, 0

    # initial step: modest fraction of the guarded range, shrunk if the RHS
    # is large on the current scale
    h = hmax_at(x, span) * 0.1
    scale0 = atol + rtol * max(abs(u), abs(u1), 1.0)
    fnorm = max(abs(k1[0]), abs(k1[1]))
    if fnorm * h > 100.0 * scale0:
        h = 100.0 * scale0 / fnorm
    if h <= 0.0 or not math.isfinite(h):
        h = span * 1e-6

    err_old = 1e-4
    n_steps = 0
    status = OK

    while True:
        remaining = abs(x1 - x)
        if remaining <= 0.0:
            break
        if n_steps >= max_steps:
            status = MAX_STEPS
            break

        hmax = hmax_at(x, remaining)
        if h > hmax:
            h = hmax
        floor = max(min_step, 5e-16 * (abs(x) + abs(h)))
        if h < floor:
            h = floor
        last = h >= remaining
        if last:
            h = remaining
        hs = h * direction

        k1d_u, k1d_u1, k1d_s = k1

        def stage(c, *aks):
            uu = u
            uu1 = u1
            for a, kd in aks:
                uu = uu + hs * a * kd[0]
                uu1 = uu1 + hs * a * kd[1]
            return rhs(x + c * hs, uu, uu1)

        k2 = stage(_C2, (_A21, k1))
        if k2 is None:
            status = BAD_COEFFICIENT
            break
        k3 = stage(_C3, (_A31, k1), (_A32, k2))
        if k3 is None:
            status = BAD_COEFFICIENT
            break
        k4 = stage(_C4, (_A41, k1), (_A42, k2), (_A43, k3))
        if k4 is None:
            status = BAD_COEFFICIENT
            break
        k5 = stage(_C5, (_A51, k1), (_A52, k2), (_A53, k3), (_A54, k4))
        if k5 is None:
            status = BAD_COEFFICIENT
            break
        k6 = stage(
            1.0, (_A61, k1), (_A62, k2), (_A63, k3), (_A64, k4), (_A65, k5)
        )
        if k6 is None:
            status = BAD_COEFFICIENT
            break

        u_new = u + hs * (
            _A71 * k1[0] + _A73 * k3[0] + _A74 * k4[0] + _A75 * k5[0] + _A76 * k6[0]
        )
        u1_new = u1 + hs * (
            _A71 * k1[1] + _A73 * k3[1] + _A74 * k4[1] + _A75 * k5[1] + _A76 * k6[1]
        )
        s_new = s_acc + hs * (
            _A71 * k1[2] + _A73 * k3[2] + _A74 * k4[2] + _A75 * k5[2] + _A76 * k6[2]
        )
        x_new = x1 if last else x + hs

        k7 = rhs(x_new, u_new, u1_new)
        if k7 is None:
            status = BAD_COEFFICIENT
            break

        e_u = hs * (
            _E1 * k1[0]
            + _E3 * k3[0]
            + _E4 * k4[0]
            + _E5 * k5[0]
            + _E6 * k6[0]
            + _E7 * k7[0]
        )
        e_u1 = hs * (
            _E1 * k1[1]
            + _E3 * k3[1]
            + _E4 * k4[1]
            + _E5 * k5[1]
            + _E6 * k6[1]
            + _E7 * k7[1]
        )
        sc_u = atol + rtol * max(abs(u), abs(u_new))
        sc_u1 = atol + rtol * max(abs(u1), abs(u1_new))
        err = math.sqrt(0.5 * (abs(e_u / sc_u) ** 2 + abs(e_u1 / sc_u1) ** 2))

        n_steps += 1
        if err <= 1.0:
            x, u, u1, s_acc = x_new, u_new, u1_new, s_new
            k1 = k7
            xs.append(x)
            us.append(u)
            u1s.append(u1)
            if max(abs(u), abs(u1)) > _HUGE:
                status = OVERFLOW
                break
            if err == 0.0:
                fac = _FAC_MAX
            else:
                fac = _SAFETY * (err ** -_PI_ALPHA) * (err_old ** _PI_BETA)
                if fac > _FAC_MAX:
                    fac = _FAC_MAX
                elif fac < _FAC_MIN:
                    fac = _FAC_MIN
            err_old = max(err, 1e-10)
            h = h * fac
        else:
            fac = _SAFETY * (err ** -_PI_ALPHA)
            if fac < _FAC_MIN:
                fac = _FAC_MIN
            elif fac > 1.0:
                fac = 1.0
            h_new = h * fac
            if h_new < max(min_step, 5e-16 * abs(x)) and not last:
                status = STEP_UNDERFLOW
                break
            h = h_new

    return status, xs, us, u1s, s_acc, n_steps
