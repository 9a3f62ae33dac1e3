"""Core value types: problems, solution states, trajectories, Wronskians.

A problem bundles the interval (a,b) with the three coefficient functions
p, q, r of the expression

    tau u = (1/r) [ -(p u')' + q u ],

together with optional endpoint metadata.  The second state variable
throughout the package is the quasi-derivative u^[1] = p*u'.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import DomainArgumentError

Coefficient = Callable[[float], float]

LEFT = "left"
RIGHT = "right"

# Coefficient fast paths understood by the integration kernels.  GENERIC
# means "call the Python functions"; the others are closed forms evaluated
# inside the kernel.
COEFF_GENERIC = 0
COEFF_CONST = 1      # p, q, r constant;              params (p0, q0, r0)
COEFF_INVSQ = 2      # p = r = 1, q = c/x^2;          params (c,)
COEFF_LEGENDRE = 3   # p = 1 - x^2, q = 0, r = 1;     params ()
COEFF_LAGUERRE = 4   # p = x^b e^-x, q = 0,
                     # r = x^(b-1) e^-x;              params (b,)


@dataclass(frozen=True)
class EndpointAsymptotics:
    """Leading coefficient behaviour at one endpoint, supplied by the catalog.

    p(x) ~ p_coefficient * |x - d|^p_exponent, and q/r ~ C |x - d|^qr_exponent
    when q is singular relative to r (None when q/r stays bounded).
    """

    p_exponent: float
    p_coefficient: float
    qr_exponent: Optional[float] = None


@dataclass(frozen=True)
class SLProblem:
    """A three-coefficient problem on (a, b), endpoints possibly infinite.

    Coefficients are pure evaluation functions; they must be evaluable at any
    interior point and positivity of p and r is enforced pointwise wherever
    the numerics visit.  `regular_a`/`regular_b` flag endpoints up to which
    the coefficients are integrable (classical boundary values exist there).
    `coeff_kind`/`coeff_params` select a compiled fast path for the kernels;
    user problems default to the generic callable path.
    """

    a: float
    b: float
    p: Coefficient
    q: Coefficient
    r: Coefficient
    name: str = ""
    params: dict = field(default_factory=dict)
    regular_a: bool = False
    regular_b: bool = False
    asym_a: Optional[EndpointAsymptotics] = None
    asym_b: Optional[EndpointAsymptotics] = None
    coeff_kind: int = COEFF_GENERIC
    coeff_params: tuple = ()

    def __post_init__(self):
        if not self.a < self.b:
            raise DomainArgumentError(f"need a < b, got a={self.a}, b={self.b}")
        if math.isnan(self.a) or math.isnan(self.b):
            raise DomainArgumentError("endpoints must not be NaN")

    def interior(self, x: float) -> bool:
        return self.a < x < self.b

    def require_interior(self, x: float) -> None:
        if not self.interior(x):
            raise DomainArgumentError(
                f"x={x} not strictly inside ({self.a}, {self.b})"
            )

    def endpoint(self, side: str) -> float:
        if side == LEFT:
            return self.a
        if side == RIGHT:
            return self.b
        raise DomainArgumentError(f"endpoint must be 'left' or 'right', got {side!r}")

    def is_regular(self, side: str) -> bool:
        return self.regular_a if side == LEFT else self.regular_b

    def asymptotics(self, side: str) -> Optional[EndpointAsymptotics]:
        return self.asym_a if side == LEFT else self.asym_b

    def coefficients_at(self, x: float) -> tuple[float, float, float]:
        """Evaluate (p, q, r) at an interior point, enforcing positivity."""
        self.require_interior(x)
        p, q, r = self.p(x), self.q(x), self.r(x)
        if not p > 0.0:
            raise DomainArgumentError(f"p({x}) = {p} is not positive")
        if not r > 0.0:
            raise DomainArgumentError(f"r({x}) = {r} is not positive")
        return p, q, r


@dataclass(frozen=True)
class SolutionState:
    """Value pair (u, u^[1]) at one interior point."""

    x: float
    u: complex
    u1: complex


@dataclass(frozen=True)
class Trajectory:
    """Dense sampled solution curve with its spectral parameter.

    `states` are the accepted integrator steps in integration order;
    `direction` is +1 for left-to-right, -1 for right-to-left.
    """

    states: tuple[SolutionState, ...]
    z: complex
    direction: int

    def __post_init__(self):
        xs = [s.x for s in self.states]
        for x0, x1 in zip(xs, xs[1:]):
            if (x1 - x0) * self.direction <= 0:
                raise DomainArgumentError(
                    "trajectory x values must be strictly monotone in "
                    "direction order"
                )

    @property
    def initial(self) -> SolutionState:
        return self.states[0]

    @property
    def final(self) -> SolutionState:
        return self.states[-1]

    def __len__(self) -> int:
        return len(self.states)


def wronskian(f: SolutionState, g: SolutionState) -> complex:
    """W(f,g) = f*g^[1] - f^[1]*g, both states taken at the same point."""
    if f.x != g.x:
        raise DomainArgumentError(
            f"wronskian needs states at equal x, got {f.x} and {g.x}"
        )
    return f.u * g.u1 - f.u1 * g.u


def wronskian_values(u: complex, u1: complex, v: complex, v1: complex) -> complex:
    """Wronskian from raw value pairs (no position check)."""
    return u * v1 - u1 * v


def apply_tau(
    problem: SLProblem, x: float, u: complex, u1: complex, u1_deriv: complex
) -> complex:
    """Apply tau given u, its quasi-derivative and the derivative of the
    quasi-derivative: tau u = r^-1 [ -(u^[1])' + q u ]."""
    problem.require_interior(x)
    q = problem.q(x)
    r = problem.r(x)
    if not r > 0.0:
        raise DomainArgumentError(f"r({x}) = {r} is not positive")
    return (-u1_deriv + q * u) / r
