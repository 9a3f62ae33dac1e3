"""Adaptive integration of tau u = z u between interior points.

Wraps the RK kernel (compiled or pure-Python) behind problem-aware guards:
singular endpoints impose a step ceiling proportional to the distance to the
endpoint, regular endpoints do not.  Also provides the variation-of-constants
particular solution of (tau - lambda0) y = f against a normalized reference
basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import kernels
from .errors import DomainArgumentError, IntegrationError
from .model import LEFT, RIGHT, SLProblem, SolutionState, Trajectory
from .quadrature import adaptive_quad


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_steps: int = 10**6
    min_step: float = 0.0

    def __post_init__(self):
        if not (self.rel_tol > 0.0 and self.abs_tol > 0.0):
            raise DomainArgumentError("tolerances must be positive")
        if self.max_steps < 1:
            raise DomainArgumentError("max_steps must be >= 1")


DEFAULT_CONFIG = IntegratorConfig()


def _guards(problem: SLProblem) -> tuple[float, float]:
    """Step-ceiling anchors: the endpoint coordinate when the endpoint is
    singular, else -inf/+inf (no ceiling)."""
    lo = problem.a if not problem.regular_a else -math.inf
    hi = problem.b if not problem.regular_b else math.inf
    return lo, hi


def integrate(
    problem: SLProblem,
    z: complex,
    from_state: SolutionState,
    to_x: float,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
    allow_endpoint: bool = False,
) -> Trajectory:
    """Integrate tau u = z u from `from_state` to `to_x` in either direction.

    `allow_endpoint` permits starting from / ending at a *regular* endpoint
    (used when seeding classical initial conditions); otherwise both points
    must be strictly interior.
    """
    x0, x1 = from_state.x, to_x
    if x0 == x1:
        raise DomainArgumentError("from.x and to_x must differ")
    for x in (x0, x1):
        if problem.interior(x):
            continue
        ok = (
            allow_endpoint
            and (
                (x == problem.a and problem.regular_a)
                or (x == problem.b and problem.regular_b)
            )
        )
        if not ok:
            raise DomainArgumentError(f"x={x} outside the open interval")

    guard_lo, guard_hi = _guards(problem)
    status, xs, us, u1s, _, n_steps = kernels.integrate_kernel(
        problem.coeff_kind,
        problem.coeff_params,
        problem.p,
        problem.q,
        problem.r,
        complex(z),
        x0,
        complex(from_state.u),
        complex(from_state.u1),
        x1,
        cfg.rel_tol,
        cfg.abs_tol,
        cfg.max_steps,
        cfg.min_step,
        guard_lo,
        guard_hi,
        False,
    )
    if status != kernels.OK:
        last = SolutionState(xs[-1], us[-1], u1s[-1])
        reasons = {
            kernels.MAX_STEPS: "step count exhausted",
            kernels.STEP_UNDERFLOW: "step size underflow near a coefficient blow-up",
            kernels.BAD_COEFFICIENT: "coefficient evaluation failed (p or r not positive)",
            kernels.OVERFLOW: "solution magnitude overflow",
        }
        raise IntegrationError(
            f"integration {x0} -> {x1} failed: {reasons.get(status, status)} "
            f"(reached x={last.x} after {n_steps} steps)",
            last_state=last,
            n_steps=n_steps,
        )
    direction = 1 if x1 > x0 else -1
    states = tuple(SolutionState(x, u, u1) for x, u, u1 in zip(xs, us, u1s))
    return Trajectory(states=states, z=complex(z), direction=direction)


def integrate_l2(
    problem: SLProblem,
    z: complex,
    from_state: SolutionState,
    to_x: float,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
) -> tuple[SolutionState, float, int]:
    """Integrate like `integrate` while accumulating int r |u|^2 dx along the
    way.  Returns (final_state, l2_integral, status); unlike `integrate`,
    kernel failures are reported in the status so the classifier can treat a
    blow-up as evidence instead of an error."""
    problem.require_interior(from_state.x)
    guard_lo, guard_hi = _guards(problem)
    status, xs, us, u1s, s_acc, _ = kernels.integrate_kernel(
        problem.coeff_kind,
        problem.coeff_params,
        problem.p,
        problem.q,
        problem.r,
        complex(z),
        from_state.x,
        complex(from_state.u),
        complex(from_state.u1),
        to_x,
        cfg.rel_tol,
        cfg.abs_tol,
        cfg.max_steps,
        cfg.min_step,
        guard_lo,
        guard_hi,
        True,
    )
    final = SolutionState(xs[-1], us[-1], u1s[-1])
    # integration runs in either direction; the accumulator is signed
    return final, abs(s_acc), status


def solve_inhomogeneous(
    problem: SLProblem,
    lambda0: float,
    basis,
    f,
    x0: float,
    x: float,
    rel_tol: float = 1e-11,
    abs_tol: float = 1e-13,
) -> SolutionState:
    """Particular solution of (tau - lambda0) y = f by variation of constants.

    With the normalized pair (u, uhat) from `basis` (W(uhat, u) = 1):

        y(x)    = uhat(x) * I_u - u(x) * I_uhat,
        y^[1](x) = uhat^[1](x) * I_u - u^[1](x) * I_uhat,

    where I_u = int_x0^x r u f dt and I_uhat = int_x0^x r uhat f dt.  The two
    quadratures are evaluated adaptively; both integration orders (x0 < x or
    x < x0) are supported.
    """
    problem.require_interior(x0)
    problem.require_interior(x)
    u_h = basis.principal
    uh_h = basis.nonprincipal

    if x == x0:
        return SolutionState(x, 0.0, 0.0)

    def f_u(t):
        return problem.r(t) * u_h.at(t).u * f(t)

    def f_uhat(t):
        return problem.r(t) * uh_h.at(t).u * f(t)

    i_u = adaptive_quad(f_u, x0, x, rel_tol=rel_tol, abs_tol=abs_tol)
    i_uhat = adaptive_quad(f_uhat, x0, x, rel_tol=rel_tol, abs_tol=abs_tol)

    su = u_h.at(x)
    suh = uh_h.at(x)
    y = suh.u * i_u - su.u * i_uhat
    y1 = suh.u1 * i_u - su.u1 * i_uhat
    return SolutionState(x, y, y1)
