"""Generalized boundary values at a limit-circle endpoint.

For an element g of the maximal domain near the endpoint d, with the frozen
normalized pair (u, uhat) at lambda0:

    gtilde(d)  = -W(u, g)(d)      = lim g(x)/uhat(x),
    gtilde'(d) =  W(uhat, g)(d)   = lim [g(x) - gtilde(d) uhat(x)] / u(x).

Both the Wronskian route and the quotient route are evaluated on the probe
sequence x_k = d -/+ eps0 2^-k and extrapolated.  The Wronskian sequences
approach their limits like the L1 tail of r uhat (tau - lambda0) g, which is
a power law for the catalog problems, so repeated Richardson elimination
with a fitted ratio converges quickly.  The quotient for gtilde is
extrapolated linearly in the small parameter s = u/uhat (its natural
expansion variable); the quotient for gtilde' reuses the Wronskian-route
gtilde, which is the more stable pairing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import BoundaryDivergenceError, DomainArgumentError
from .model import LEFT, SLProblem, wronskian
from .principal import ReferenceBasis
from .solutions import SolutionHandle, evaluate_many

_FLOOR = 1e-13


@dataclass(frozen=True)
class BvalConfig:
    """Probe/extrapolation controls: x_k = d -/+ eps0 2^-k for k = 0..K."""

    eps0: Optional[float] = None  # default min(1, |b-a|)/8
    depth: int = 24
    divergence_window: int = 4


@dataclass(frozen=True)
class BoundaryValuePair:
    endpoint: str
    g_tilde: complex
    g_tilde_prime: complex
    route: str  # "wronskian" | "quotient"
    convergence_estimate: float


def probe_points(problem: SLProblem, endpoint: str, cfg: BvalConfig):
    d = problem.endpoint(endpoint)
    if math.isinf(d):
        raise DomainArgumentError(
            "boundary values exist only at finite (limit-circle) endpoints"
        )
    eps0 = cfg.eps0
    if eps0 is None:
        span = abs(problem.b - problem.a)
        eps0 = min(1.0, span) / 8.0
    sign = 1.0 if endpoint == LEFT else -1.0
    return [d + sign * eps0 * 2.0**-k for k in range(cfg.depth + 1)]


def extrapolate_sequence(ts, divergence_window: int = 4):
    """Limit of a sequence t_k = L + C rho^k + ... with unknown rho in (0,1).

    Performs up to three sweeps of ratio-fitted Richardson elimination and
    returns (limit, error_estimate).  Raises BoundaryDivergenceError when the
    residuals grow over `divergence_window` consecutive entries to a
    macroscopic size (floor-level rounding jitter never triggers it).
    """
    ts = [complex(t) for t in ts]
    if len(ts) < 4:
        raise DomainArgumentError("need at least 4 probe values to extrapolate")
    scale = max(max(abs(t) for t in ts), 1.0)
    floor = _FLOOR * scale

    diffs = [abs(t1 - t0) for t0, t1 in zip(ts, ts[1:])]
    if len(diffs) >= divergence_window + 1:
        tail = diffs[-(divergence_window + 1):]
        growing = all(d1 >= d0 > floor for d0, d1 in zip(tail, tail[1:]))
        if growing and tail[-1] > 1e-6 * scale:
            raise BoundaryDivergenceError(
                "probe sequence residuals are not decreasing "
                f"(last {divergence_window + 1} diffs: {tail})",
                partial=ts[-1],
            )

    candidates = [ts[-1]]
    current = ts
    for _ in range(3):
        if len(current) < 4:
            break
        d = [t1 - t0 for t0, t1 in zip(current, current[1:])]
        if abs(d[-1]) <= floor or abs(d[-2]) <= floor:
            candidates.append(current[-1])
            break
        rho = d[-1] / d[-2]
        if not (1e-4 < abs(rho) < 0.97):
            break
        nxt = []
        for k in range(1, len(d)):
            r = d[k] / d[k - 1] if abs(d[k - 1]) > floor else rho
            if not (1e-4 < abs(r) < 0.97):
                r = rho
            nxt.append(current[k + 1] + d[k] * r / (1.0 - r))
        current = nxt
        candidates.append(current[-1])

    limit = candidates[-1]
    if len(candidates) >= 2:
        estimate = abs(candidates[-1] - candidates[-2])
    else:
        estimate = diffs[-1] if diffs else floor
    return limit, max(estimate, floor)


def _truncated_wronskian_sequence(partner_states, g_states, sign, eps_g, min_keep=8):
    """+-W(partner, g) along the probes, cut where the cancellation noise of
    the two products exceeds a small fraction of the sequence scale."""
    values = []
    noises = []
    for sp, sg in zip(partner_states, g_states):
        values.append(sign * wronskian(sp, sg))
        noises.append(eps_g * (abs(sp.u) * abs(sg.u1) + abs(sp.u1) * abs(sg.u)))
    cap = 1e-8 * max(1.0, abs(values[0]))
    kept = len(values)
    for k, n in enumerate(noises):
        if n > cap and k >= min_keep:
            kept = k
            break
    return values[:kept]


def boundary_values(
    g: SolutionHandle,
    problem: SLProblem,
    basis: ReferenceBasis,
    cfg: BvalConfig = BvalConfig(),
    route: str = "wronskian",
) -> BoundaryValuePair:
    """Generalized boundary values of g at the basis endpoint.

    Both routes are always computed; `route` selects which pair is reported.
    The convergence estimate combines the extrapolation residuals with the
    inter-route disagreement, so the two routes agree within it by
    construction.
    """
    detail = boundary_values_detailed(g, problem, basis, cfg)
    if route == "wronskian":
        gt, gtp = detail["wronskian"]
    elif route == "quotient":
        gt, gtp = detail["quotient"]
    else:
        raise DomainArgumentError(f"unknown route {route!r}")
    return BoundaryValuePair(
        endpoint=basis.endpoint,
        g_tilde=gt,
        g_tilde_prime=gtp,
        route=route,
        convergence_estimate=detail["estimate"],
    )


def boundary_values_detailed(
    g: SolutionHandle,
    problem: SLProblem,
    basis: ReferenceBasis,
    cfg: BvalConfig = BvalConfig(),
) -> dict:
    xs = probe_points(problem, basis.endpoint, cfg)
    g_states = evaluate_many(g, xs)
    basis_states = [basis.states_at(x) for x in xs]

    eps_g = max(getattr(g, "eval_noise", 1e-15), 1e-16)
    u_states = [su for su, _ in basis_states]
    uh_states = [suh for _, suh in basis_states]
    w1 = _truncated_wronskian_sequence(u_states, g_states, -1.0, eps_g)
    w2 = _truncated_wronskian_sequence(uh_states, g_states, +1.0, eps_g)
    gt_w, est1 = extrapolate_sequence(w1, cfg.divergence_window)
    gtp_w, est2 = extrapolate_sequence(w2, cfg.divergence_window)

    # quotient route for gtilde: g/uhat is affine in s = u/uhat up to an
    # exponentially small remainder, so eliminate pairwise in s and
    # extrapolate the eliminated sequence
    q1 = []
    s_par = []
    for (su, suh), sg in zip(basis_states, g_states):
        if suh.u == 0.0:
            continue
        q1.append(sg.u / suh.u)
        s_par.append(su.u / suh.u)
    elim = []
    for k in range(len(q1) - 1):
        ds = s_par[k] - s_par[k + 1]
        if ds == 0.0:
            continue
        elim.append((q1[k + 1] * s_par[k] - q1[k] * s_par[k + 1]) / ds)
    gt_q, est3 = extrapolate_sequence(elim, cfg.divergence_window)

    # quotient route for gtilde': (g - gtilde uhat)/u with the
    # Wronskian-route gtilde.  The subtraction amplifies both the gtilde
    # error and evaluation rounding by |uhat/u|, which blows up toward the
    # endpoint; probes are kept only while that modeled noise stays small.
    gt_err = est1 + 1e-15 * abs(gt_w)
    noise_cap = 1e-7 * max(1.0, abs(gt_w))
    q2 = []
    for (su, suh), sg in zip(basis_states, g_states):
        if su.u == 0.0:
            continue
        noise = (gt_err * abs(suh.u) + eps_g * abs(sg.u)) / abs(su.u)
        if noise > noise_cap and len(q2) >= 6:
            break
        q2.append((sg.u - gt_w * suh.u) / su.u)
    gtp_q, est4 = extrapolate_sequence(q2, cfg.divergence_window)

    estimate = max(
        est1,
        est2,
        est3,
        est4,
        abs(gt_w - gt_q),
        abs(gtp_w - gtp_q),
    )
    return {
        "wronskian": (gt_w, gtp_w),
        "quotient": (gt_q, gtp_q),
        "estimate": estimate,
        "w_sequences": (w1, w2),
        "probes": xs,
    }


def lagrange_bracket(
    g: SolutionHandle,
    h: SolutionHandle,
    problem: SLProblem,
    basis: ReferenceBasis,
    cfg: BvalConfig = BvalConfig(),
    check_tol: float = 1e-6,
) -> complex:
    """gtilde(d) htilde'(d) - gtilde'(d) htilde(d); verified against the
    extrapolated W(g, h)(d), which it must equal."""
    bg = boundary_values(g, problem, basis, cfg)
    bh = boundary_values(h, problem, basis, cfg)
    bracket = bg.g_tilde * bh.g_tilde_prime - bg.g_tilde_prime * bh.g_tilde

    xs = probe_points(problem, basis.endpoint, cfg)
    g_states = evaluate_many(g, xs)
    h_states = evaluate_many(h, xs)
    ws = [wronskian(sg, sh) for sg, sh in zip(g_states, h_states)]
    w_limit, w_est = extrapolate_sequence(ws, cfg.divergence_window)
    tol = max(
        check_tol,
        10.0 * (bg.convergence_estimate + bh.convergence_estimate + w_est),
    )
    if abs(bracket - w_limit) > tol:
        raise BoundaryDivergenceError(
            f"Lagrange bracket {bracket} disagrees with the endpoint "
            f"Wronskian {w_limit} beyond tolerance {tol}"
        )
    return bracket


def regular_recovery_check(
    problem: SLProblem,
    g: SolutionHandle,
    basis: ReferenceBasis,
    endpoint: str = LEFT,
    cfg: BvalConfig = BvalConfig(),
    tol: float = 1e-8,
) -> tuple[complex, complex]:
    """At a regular endpoint the generalized boundary values equal the
    classical ones; returns (g(d), g^[1](d)) by direct evaluation and raises
    when the Wronskian-route values disagree beyond `tol` (a basis
    normalization defect)."""
    if not problem.is_regular(endpoint):
        raise DomainArgumentError(f"{endpoint} endpoint is not regular")
    d = problem.endpoint(endpoint)
    s = g.at(d)
    bv = boundary_values(g, problem, basis, cfg)
    err = max(abs(bv.g_tilde - s.u), abs(bv.g_tilde_prime - s.u1))
    if err > tol:
        raise BoundaryDivergenceError(
            f"regular recovery mismatch {err:.3e} at the {endpoint} endpoint "
            "(basis normalization defect)"
        )
    return s.u, s.u1
