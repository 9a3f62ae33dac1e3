"""Solution handles: evaluable solutions of tau u = z u on one side.

A handle produces the pair (u, u^[1]) at any interior point on its side of
the interval.  Closed-form handles wrap callables (catalog solutions);
integrated handles march the ODE outward from a seed, caching every accepted
step so that repeated evaluations (probe sequences) reuse earlier work.
Handles carry a log-scale factor so combinations stay representable when a
solution grows like exp(x) toward a far truncation point.
"""

from __future__ import annotations

import bisect
import math
from typing import Callable

from .errors import DomainArgumentError, IntegrationError
from .integrator import DEFAULT_CONFIG, IntegratorConfig, integrate
from .model import SLProblem, SolutionState


class SolutionHandle:
    """Interface: `at(x)` returns the SolutionState (true values).

    `eval_noise` is the relative accuracy of an evaluation (machine epsilon
    scale for closed forms, the integrator tolerance for marched solutions);
    the boundary-value extractor uses it to model subtraction noise.
    """

    log_scale: float = 0.0
    eval_noise: float = 1e-15

    def at(self, x: float) -> SolutionState:  # pragma: no cover - interface
        raise NotImplementedError


class CallableSolution(SolutionHandle):
    """Closed-form solution from value and quasi-derivative callables."""

    def __init__(
        self,
        u: Callable[[float], complex],
        u1: Callable[[float], complex],
        log_scale: float = 0.0,
        label: str = "",
    ):
        self._u = u
        self._u1 = u1
        self.log_scale = log_scale
        self.label = label

    def at(self, x: float) -> SolutionState:
        s = math.exp(self.log_scale) if self.log_scale else 1.0
        return SolutionState(x, s * self._u(x), s * self._u1(x))


class LinearCombination(SolutionHandle):
    """c1*h1 + c2*h2 + ... of handles sharing problem and z."""

    def __init__(self, handles, coefficients, label: str = ""):
        if len(handles) != len(coefficients):
            raise DomainArgumentError("need one coefficient per handle")
        self._handles = tuple(handles)
        self._coeffs = tuple(complex(c) for c in coefficients)
        self.eval_noise = max(h.eval_noise for h in self._handles)
        self.label = label

    def at(self, x: float) -> SolutionState:
        u = 0.0
        u1 = 0.0
        for h, c in zip(self._handles, self._coeffs):
            s = h.at(x)
            u += c * s.u
            u1 += c * s.u1
        return SolutionState(x, u, u1)


class ScaledSolution(SolutionHandle):
    def __init__(self, handle: SolutionHandle, factor: complex):
        self._handle = handle
        self._factor = complex(factor)
        self.eval_noise = handle.eval_noise

    def at(self, x: float) -> SolutionState:
        s = self._handle.at(x)
        return SolutionState(s.x, self._factor * s.u, self._factor * s.u1)


class IntegratedSolution(SolutionHandle):
    """Solution defined by a seed state, extended by integration on demand.

    All accepted integrator steps are cached as anchors; an evaluation
    integrates the short gap from the nearest cached anchor.  Evaluations may
    lie on either side of the seed.
    """

    def __init__(
        self,
        problem: SLProblem,
        z: complex,
        seed: SolutionState,
        cfg: IntegratorConfig = DEFAULT_CONFIG,
        label: str = "",
    ):
        problem.require_interior(seed.x)
        self.problem = problem
        self.z = complex(z)
        self.cfg = cfg
        self.label = label
        self.seed_x = seed.x
        self.eval_noise = max(1e-15, cfg.rel_tol)
        self._xs = [seed.x]
        self._states = [seed]

    def _insert(self, states) -> None:
        for s in states:
            i = bisect.bisect_left(self._xs, s.x)
            if i < len(self._xs) and self._xs[i] == s.x:
                continue
            self._xs.insert(i, s.x)
            self._states.insert(i, s)

    def at(self, x: float) -> SolutionState:
        self.problem.require_interior(x)
        i = bisect.bisect_left(self._xs, x)
        if i < len(self._xs) and self._xs[i] == x:
            return self._states[i]
        # nearest anchor on either side
        candidates = []
        if i > 0:
            candidates.append(self._states[i - 1])
        if i < len(self._xs):
            candidates.append(self._states[i])
        start = min(candidates, key=lambda s: abs(s.x - x))
        traj = integrate(self.problem, self.z, start, x, self.cfg)
        self._insert(traj.states)
        return traj.final

    def march(self, xs) -> list[SolutionState]:
        """Evaluate at several points, ordered to reuse the cache."""
        out = {}
        for x in sorted(xs, key=lambda t: abs(t - self.seed_x)):
            out[x] = self.at(x)
        return [out[x] for x in xs]


def evaluate_many(handle: SolutionHandle, xs) -> list[SolutionState]:
    if isinstance(handle, IntegratedSolution):
        return handle.march(xs)
    return [handle.at(x) for x in xs]
