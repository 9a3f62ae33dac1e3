"""Endpoint classification: limit circle vs limit point, and oscillation probes.

Two independent solutions are integrated toward the endpoint while the
integral int r |u|^2 dx is accumulated over nested geometric windows.  The
window-sum ratios decide square-integrability per solution: decaying window
sums mean a convergent tail, sustained ratios at or above the threshold mean
divergence.  Both convergent -> limit circle; at least one divergent ->
limit point; anything else is reported Inconclusive rather than guessed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainArgumentError, InconclusiveError
from .integrator import DEFAULT_CONFIG, IntegratorConfig, integrate, integrate_l2
from .kernels import OK as KERNEL_OK
from .model import LEFT, RIGHT, SLProblem, SolutionState

LIMIT_CIRCLE = "LimitCircle"
LIMIT_POINT = "LimitPoint"
INCONCLUSIVE = "Inconclusive"

# ratio threshold chosen to keep slowly convergent log^2 tails (window ratio
# -> 1/2 with a (k+1)^2/k^2 factor) safely on the convergent side
_RATIO_THRESHOLD = 0.99
_RATIO_RUN = 6


@dataclass(frozen=True)
class ClassifierConfig:
    integrator: IntegratorConfig = field(
        default_factory=lambda: IntegratorConfig(rel_tol=1e-9, abs_tol=1e-12)
    )
    n_windows: int = 36
    start_offset: float = 0.125  # first window edge distance for finite endpoints
    infinite_start: float = 2.0  # first window edge for infinite endpoints
    infinite_max: float = 1024.0
    tiny_sum: float = 1e-280


@dataclass(frozen=True)
class TailEvidence:
    """Window sums of int r |u|^2 for one solution and the verdict flag."""

    window_sums: tuple[float, ...]
    flag: str  # "convergent" | "divergent" | "ambiguous"
    note: str = ""


@dataclass(frozen=True)
class EndpointReport:
    endpoint: str
    verdict: str
    z_used: complex
    l2_tail_estimates: tuple[TailEvidence, ...]
    oscillatory: bool | None = None
    note: str = ""


def _window_edges(problem: SLProblem, endpoint: str, cfg: ClassifierConfig):
    """Window edges marching toward the endpoint, starting from the anchor
    side.  Finite endpoints: d -/+ offset*2^-k; infinite: +-start*2^k."""
    d = problem.endpoint(endpoint)
    if math.isinf(d):
        sign = 1.0 if endpoint == RIGHT else -1.0
        edges = []
        x = cfg.infinite_start
        while x <= cfg.infinite_max:
            edges.append(sign * x)
            x *= 2.0
        return edges
    sign = 1.0 if endpoint == LEFT else -1.0
    span = abs(problem.b - problem.a)
    offset = min(cfg.start_offset, 0.25 * span)
    return [d + sign * offset * 2.0**-k for k in range(cfg.n_windows)]


def _anchor(problem: SLProblem, endpoint: str) -> float:
    lo, hi = problem.a, problem.b
    if not math.isinf(lo) and not math.isinf(hi):
        return 0.5 * (lo + hi)
    if math.isinf(lo) and math.isinf(hi):
        return 0.0
    if math.isinf(hi):
        return lo + 1.0
    return hi - 1.0


def _march_window_sums(problem, z, seed, edges, cfg):
    """Window integrals of r |u|^2 between successive edges; integration
    failures (for instance overflow of a genuinely growing solution) end the
    march and are recorded as evidence."""
    sums = []
    state = seed
    note = ""
    for edge in edges:
        final, s_val, status = integrate_l2(problem, z, state, edge, cfg.integrator)
        if status != KERNEL_OK:
            note = f"integration stopped at x={final.x} (status {status})"
            break
        sums.append(s_val)
        state = final
    return sums, note


def _flag_for(sums, note, cfg) -> TailEvidence:
    if note and len(sums) < _RATIO_RUN + 1:
        # blew up almost immediately: treat as divergent growth
        return TailEvidence(tuple(sums), "divergent", note or "early blow-up")
    if not sums:
        return TailEvidence((), "ambiguous", note)
    if sums[-1] < cfg.tiny_sum:
        return TailEvidence(tuple(sums), "convergent", "tail underflow")
    ratios = [
        s1 / s0 if s0 > 0.0 else math.inf for s0, s1 in zip(sums, sums[1:])
    ]
    if note:
        # a mid-march blow-up with growing recent sums is divergence
        recent = ratios[-_RATIO_RUN:]
        if all(r > 1.0 for r in recent):
            return TailEvidence(tuple(sums), "divergent", note)
        return TailEvidence(tuple(sums), "ambiguous", note)
    recent = ratios[-_RATIO_RUN:]
    if len(recent) < _RATIO_RUN:
        return TailEvidence(tuple(sums), "ambiguous", "too few windows")
    if all(r < _RATIO_THRESHOLD for r in recent):
        return TailEvidence(tuple(sums), "convergent")
    if all(r >= _RATIO_THRESHOLD for r in recent):
        return TailEvidence(tuple(sums), "divergent")
    return TailEvidence(tuple(sums), "ambiguous")


def classify_endpoint(
    problem: SLProblem,
    endpoint: str,
    z: complex,
    cfg: ClassifierConfig = ClassifierConfig(),
) -> EndpointReport:
    """Weyl-alternative classification at one endpoint for the probe z.

    Nonreal z is required unless the problem carries endpoint asymptotics
    (catalog problems); at real z the alternative's uniqueness clause fails
    and numerics alone cannot decide.
    """
    z = complex(z)
    if z.imag == 0.0 and problem.asymptotics(endpoint) is None:
        raise DomainArgumentError(
            "real-z classification requires catalog-supplied endpoint asymptotics"
        )
    edges = _window_edges(problem, endpoint, cfg)
    anchor = _anchor(problem, endpoint)
    evidence = []
    for seed_u, seed_u1 in ((1.0, 0.0), (0.0, 1.0)):
        seed = SolutionState(anchor, seed_u, seed_u1)
        # move to the first window edge, then march window by window
        try:
            traj = integrate(problem, z, seed, edges[0], cfg.integrator)
        except Exception as exc:  # pragma: no cover - defensive
            evidence.append(TailEvidence((), "ambiguous", f"approach failed: {exc}"))
            continue
        sums, note = _march_window_sums(problem, z, traj.final, edges[1:], cfg)
        evidence.append(_flag_for(sums, note, cfg))

    flags = [e.flag for e in evidence]
    if any(f == "divergent" for f in flags):
        verdict = LIMIT_POINT
    elif all(f == "convergent" for f in flags):
        verdict = LIMIT_CIRCLE
    else:
        verdict = INCONCLUSIVE
    return EndpointReport(
        endpoint=endpoint,
        verdict=verdict,
        z_used=z,
        l2_tail_estimates=tuple(evidence),
        oscillatory=None,
    )


def deficiency_indices(report_a: EndpointReport, report_b: EndpointReport) -> int:
    """n_+ = n_- from the two verdicts: 2 for LC/LC, 1 for exactly one LC,
    0 for LP/LP; refuses Inconclusive input."""
    for rep in (report_a, report_b):
        if rep.verdict == INCONCLUSIVE:
            raise InconclusiveError(
                f"cannot count deficiency indices: {rep.endpoint} endpoint "
                "classification is inconclusive"
            )
    return sum(
        1 for rep in (report_a, report_b) if rep.verdict == LIMIT_CIRCLE
    )


def is_nonoscillatory(
    problem: SLProblem,
    endpoint: str,
    lam: float,
    cfg: ClassifierConfig = ClassifierConfig(),
) -> bool:
    """Best-effort oscillation probe at real lambda: a real solution is
    marched along the geometric sequence toward the endpoint and its sign
    changes are counted; nonoscillatory means no sign change beyond some
    point of the sequence (here: none in the deeper half)."""
    edges = _window_edges(problem, endpoint, cfg)
    anchor = _anchor(problem, endpoint)
    state = SolutionState(anchor, 1.0, 0.5)
    signs = []
    cfg_int = cfg.integrator
    for edge in edges:
        try:
            traj = integrate(problem, lam, state, edge, cfg_int)
        except Exception:
            break
        # count sign changes across the stored steps as well
        for s in traj.states[1:]:
            v = s.u.real
            if v != 0.0:
                signs.append((s.x, math.copysign(1.0, v)))
        state = traj.final
    if len(signs) < 4:
        return True
    changes = [
        x1
        for (x0, s0), (x1, s1) in zip(signs, signs[1:])
        if s0 != s1
    ]
    if not changes:
        return True
    # nonoscillatory iff the sign changes stop: the last change must not lie
    # in the deeper half of the probed range
    last_change = changes[-1]
    halfway = signs[len(signs) // 2][0]
    d = problem.endpoint(endpoint)
    if math.isinf(d):
        return abs(last_change) < abs(halfway)
    return abs(last_change - d) > abs(halfway - d)
