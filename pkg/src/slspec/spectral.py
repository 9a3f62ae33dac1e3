"""Eigenvalues by shooting and the singular Weyl-Titchmarsh-Kodaira m-function.

The fundamental pair at the left endpoint is fixed through its generalized
boundary data against the frozen reference basis:

    phi_alpha:   (gtilde, gtilde')(a) = (-sin alpha, cos alpha),
    theta_alpha: (gtilde, gtilde')(a) = ( cos alpha, sin alpha).

A solution with prescribed data is seeded at a + eps by the frozen-basis
combination and eps is halved until the measured boundary values reproduce
the target.  Eigenvalues of a separated (or Friedrichs) extension are the
roots of the characteristic function

    D(lambda) = gtilde_phi(b) cos beta + gtilde'_phi(b) sin beta

at a limit-circle right endpoint, or of the Wronskian of phi against a
backward-integrated recessive solution at a truncation point when the right
endpoint is limit point.  The m-function makes theta + m phi satisfy the
right-endpoint condition: a linear solve at a limit-circle endpoint, a
Dirichlet truncation with radius doubling (nested Weyl disks) otherwise.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional, Union

from .bvals import BoundaryValuePair, BvalConfig, boundary_values
from .classifier import LIMIT_CIRCLE, LIMIT_POINT, classify_endpoint
from .errors import DomainArgumentError, PoleError, SpectralError
from .integrator import IntegratorConfig, integrate
from .model import LEFT, RIGHT, SLProblem, SolutionState, wronskian
from .oracles import CatalogProblem
from .principal import ReferenceBasis, build_reference_basis
from .solutions import IntegratedSolution, ScaledSolution, SolutionHandle


@dataclass(frozen=True)
class SpectralConfig:
    integrator: IntegratorConfig = field(
        default_factory=lambda: IntegratorConfig(rel_tol=1e-10, abs_tol=1e-12)
    )
    bval: BvalConfig = field(default_factory=BvalConfig)
    seed_target_tol: float = 1e-8
    max_seed_halvings: int = 24
    n_panels: int = 400
    root_rel_tol: float = 1e-10
    truncation_x0: float = 20.0
    max_doublings: int = 6
    disk_tol: float = 1e-8
    match_x: Optional[float] = None


@dataclass(frozen=True)
class Eigenlist:
    eigenvalues: tuple[float, ...]
    characteristic_residuals: tuple[float, ...]
    bracket_info: dict

    def __post_init__(self):
        for a, b in zip(self.eigenvalues, self.eigenvalues[1:]):
            if not a < b:
                raise DomainArgumentError("eigenvalues must be strictly increasing")


@dataclass(frozen=True)
class MSample:
    z: complex
    m: complex
    truncation_radius: Optional[float]
    disk_radius_estimate: float


@dataclass(frozen=True)
class _Context:
    problem: SLProblem
    bases: dict
    verdicts: dict
    lambda0: float
    recessive_seed: Optional[object] = None


def _context(
    obj: Union[SLProblem, CatalogProblem],
    cfg: SpectralConfig,
    lambda0: Optional[float] = None,
) -> _Context:
    if isinstance(obj, CatalogProblem):
        return _Context(
            problem=obj.problem,
            bases=dict(obj.bases),
            verdicts=dict(obj.known_verdicts),
            lambda0=obj.lambda0,
            recessive_seed=obj.recessive_seed,
        )
    problem = obj
    verdicts = {}
    for side in (LEFT, RIGHT):
        if problem.is_regular(side):
            verdicts[side] = LIMIT_CIRCLE
        else:
            verdicts[side] = classify_endpoint(problem, side, 1j).verdict
    lam0 = -1.0 if lambda0 is None else lambda0
    bases = {}
    for side in (LEFT, RIGHT):
        if verdicts[side] == LIMIT_CIRCLE:
            bases[side] = build_reference_basis(problem, lam0, side, cfg.integrator)
    return _Context(problem, bases, verdicts, lam0)


class ShotSolution(ScaledSolution):
    """phi/theta handle carrying its seeding diagnostics."""

    def __init__(self, handle, factor, seed_eps, bval_residual):
        super().__init__(handle, factor)
        self.seed_eps = seed_eps
        self.bval_residual = bval_residual


def _seed_state(basis: ReferenceBasis, x: float, data) -> SolutionState:
    d1, d2 = data
    su, suh = basis.states_at(x)
    return SolutionState(x, d1 * suh.u + d2 * su.u, d1 * suh.u1 + d2 * su.u1)


def _default_seed_eps(problem: SLProblem, basis: ReferenceBasis, cfg: SpectralConfig):
    span = abs(problem.b - problem.a)
    eps0 = cfg.bval.eps0
    if eps0 is None:
        eps0 = min(1.0, span) / 8.0
    return eps0 * 2.0 ** -(cfg.bval.depth + 2)


def shoot_with_data(
    problem: SLProblem,
    basis: ReferenceBasis,
    data,
    z: complex,
    cfg: SpectralConfig = SpectralConfig(),
    eps_override: Optional[float] = None,
    verify: bool = True,
):
    """Solution with generalized boundary data `data` at the basis endpoint.

    With `eps_override` the seed offset is fixed and no verification loop
    runs (used inside eigenvalue scans, where the offset was calibrated once
    and smoothness of the characteristic function in lambda matters).
    """
    d = problem.endpoint(basis.endpoint)
    sign = 1.0 if basis.endpoint == LEFT else -1.0
    scale = abs(data[0]) + abs(data[1])
    if scale == 0.0:
        raise DomainArgumentError("boundary data must be nontrivial")

    if eps_override is not None and not verify:
        seed = _seed_state(basis, d + sign * eps_override, data)
        handle = IntegratedSolution(problem, z, seed, cfg.integrator)
        return ShotSolution(handle, 1.0, eps_override, math.nan)

    eps = eps_override if eps_override is not None else _default_seed_eps(
        problem, basis, cfg
    )
    tol = cfg.seed_target_tol * max(1.0, scale)
    best = None
    for _ in range(cfg.max_seed_halvings):
        seed = _seed_state(basis, d + sign * eps, data)
        handle = IntegratedSolution(problem, z, seed, cfg.integrator)
        bv = boundary_values(handle, problem, basis, cfg.bval)
        err = abs(bv.g_tilde - data[0]) + abs(bv.g_tilde_prime - data[1])
        if best is None or err < best[0]:
            best = (err, handle, eps, bv)
        if err <= tol:
            break
        eps *= 0.5
    err, handle, eps, bv = best
    if err > tol:
        raise SpectralError(
            f"seed refinement did not reach {tol:.1e} (best {err:.1e} at eps={eps:.1e})"
        )
    # rescale so the dominant target component is met exactly
    if abs(data[1]) >= abs(data[0]):
        factor = data[1] / bv.g_tilde_prime
    else:
        factor = data[0] / bv.g_tilde
    return ShotSolution(handle, factor, eps, err)


def shoot_left(
    problem_or_catalog,
    alpha: float,
    lam: complex,
    cfg: SpectralConfig = SpectralConfig(),
    basis_a: Optional[ReferenceBasis] = None,
) -> ShotSolution:
    """phi_alpha(lam, .): boundary data (-sin alpha, cos alpha) at the left
    endpoint, seeded from the frozen basis with eps-halving verification."""
    if basis_a is None:
        ctx = _context(problem_or_catalog, cfg)
        problem = ctx.problem
        basis_a = ctx.bases.get(LEFT)
        if basis_a is None:
            raise DomainArgumentError("no limit-circle basis at the left endpoint")
    else:
        problem = (
            problem_or_catalog.problem
            if isinstance(problem_or_catalog, CatalogProblem)
            else problem_or_catalog
        )
    return shoot_with_data(
        problem, basis_a, (-math.sin(alpha), math.cos(alpha)), lam, cfg
    )


def _angles_for(bc, verdicts) -> tuple[Optional[float], Optional[float]]:
    from .extensions import Friedrichs, Separated, check_applicability

    check_applicability(bc, verdicts)
    if isinstance(bc, Friedrichs):
        alpha = 0.0 if verdicts.get(LEFT) == LIMIT_CIRCLE else None
        beta = 0.0 if verdicts.get(RIGHT) == LIMIT_CIRCLE else None
        return alpha, beta
    if isinstance(bc, Separated):
        return bc.alpha, bc.beta
    raise DomainArgumentError(
        "eigenvalue search supports separated and Friedrichs conditions"
    )


def _match_point(problem: SLProblem, cfg: SpectralConfig) -> float:
    if cfg.match_x is not None:
        return cfg.match_x
    if not math.isinf(problem.a):
        return problem.a + 1.0
    return 0.0


class _Characteristic:
    """D(lambda) for a separated condition, with a frozen seed offset."""

    def __init__(self, ctx: _Context, alpha, beta, cfg: SpectralConfig, x_trunc):
        self.ctx = ctx
        self.alpha = alpha
        self.beta = beta
        self.cfg = cfg
        self.x_trunc = x_trunc
        self.eps = None
        self.basis_a = ctx.bases[LEFT]
        self.lc_right = ctx.verdicts.get(RIGHT) == LIMIT_CIRCLE
        self.match_x = _match_point(ctx.problem, cfg)

    def calibrate(self, lam: float):
        shot = shoot_with_data(
            self.ctx.problem,
            self.basis_a,
            (-math.sin(self.alpha), math.cos(self.alpha)),
            lam,
            self.cfg,
        )
        self.eps = shot.seed_eps

    def _phi(self, lam: float, eps=None, verify=False):
        return shoot_with_data(
            self.ctx.problem,
            self.basis_a,
            (-math.sin(self.alpha), math.cos(self.alpha)),
            lam,
            self.cfg,
            eps_override=self.eps if eps is None else eps,
            verify=verify,
        )

    def _chi(self, lam: float, x_cut: float):
        problem = self.ctx.problem
        if self.ctx.recessive_seed is not None:
            seed = self.ctx.recessive_seed(lam, x_cut)
        else:
            seed = SolutionState(x_cut, 0.0, 1.0)
        traj = integrate(problem, lam, seed, self.match_x, self.cfg.integrator)
        return traj.final

    def value(self, lam: float, x_trunc=None) -> float:
        phi = self._phi(lam)
        if self.lc_right:
            bv = boundary_values(
                phi, self.ctx.problem, self.ctx.bases[RIGHT], self.cfg.bval
            )
            val = bv.g_tilde * math.cos(self.beta) + bv.g_tilde_prime * math.sin(
                self.beta
            )
        else:
            chi = self._chi(lam, x_trunc if x_trunc is not None else self.x_trunc)
            val = wronskian(phi.at(self.match_x), chi)
        if abs(val.imag) > 1e-6 * (1.0 + abs(val.real)):
            raise SpectralError(f"characteristic value not real at lambda={lam}: {val}")
        return val.real


def _bisect(f, lo, hi, f_lo, f_hi, rel_tol):
    while True:
        width = hi - lo
        if width <= rel_tol * max(1.0, abs(lo), abs(hi)):
            break
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid, 0.0
        if (f_lo < 0.0) != (f_mid < 0.0):
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid
    root = 0.5 * (lo + hi)
    return root, min(abs(f_lo), abs(f_hi))


def eigenvalues(
    problem_or_catalog,
    bc,
    window,
    cfg: SpectralConfig = SpectralConfig(),
) -> Eigenlist:
    """All eigenvalues of the separated/Friedrichs extension inside the
    window, by a sign-change scan of D over `n_panels` panels and bisection
    to `root_rel_tol` relative accuracy.

    Window endpoints sitting (numerically) on an eigenvalue widen the window
    by one panel once; a second collision is an error.  For a limit-point
    right endpoint every root is re-verified at twice the truncation radius.
    """
    ctx = _context(problem_or_catalog, cfg)
    alpha, beta = _angles_for(bc, ctx.verdicts)
    if alpha is None:
        raise SpectralError("eigenvalue search needs a limit-circle left endpoint")
    lam_lo, lam_hi = float(window[0]), float(window[1])
    if not lam_lo < lam_hi:
        raise DomainArgumentError("window must satisfy lo < hi")

    x0 = cfg.truncation_x0
    if not math.isinf(ctx.problem.b):
        x0 = None
    char = _Characteristic(ctx, alpha, beta, cfg, x0)
    char.calibrate(0.5 * (lam_lo + lam_hi))

    history = []
    for attempt in range(2):
        n = cfg.n_panels
        grid = [lam_lo + (lam_hi - lam_lo) * i / n for i in range(n + 1)]
        vals = [char.value(lam) for lam in grid]
        scale = sorted(abs(v) for v in vals)[n // 2] or 1.0
        edge_hit = abs(vals[0]) < 1e-9 * scale or abs(vals[-1]) < 1e-9 * scale
        if not edge_hit:
            break
        pad = (lam_hi - lam_lo) / n
        lam_lo -= pad
        lam_hi += pad
        history.append(f"window widened to [{lam_lo}, {lam_hi}]")
    else:
        raise SpectralError("window endpoints keep hitting an eigenvalue")

    roots = []
    residuals = []
    brackets = []
    for i in range(len(grid) - 1):
        f0, f1 = vals[i], vals[i + 1]
        if f0 == 0.0:
            continue  # handled as a bracket by the neighbouring panel
        if (f0 < 0.0) == (f1 < 0.0):
            continue
        lo, hi = grid[i], grid[i + 1]
        root, res = _bisect(char.value, lo, hi, f0, f1, cfg.root_rel_tol)
        if x0 is not None:
            root, res = _verify_truncated(char, root, res, x0, cfg, history)
        roots.append(root)
        residuals.append(res)
        brackets.append((lo, hi))

    return Eigenlist(
        eigenvalues=tuple(roots),
        characteristic_residuals=tuple(residuals),
        bracket_info={
            "window": (lam_lo, lam_hi),
            "n_panels": cfg.n_panels,
            "brackets": tuple(brackets),
            "history": tuple(history),
        },
    )


def _verify_truncated(char, root, res, x0, cfg, history):
    """Re-locate a root with doubled truncation radius until stable."""
    x = x0
    for _ in range(cfg.max_doublings):
        x2 = 2.0 * x
        w = max(64.0 * cfg.root_rel_tol * max(1.0, abs(root)), 1e-9)
        lo, hi = root - w, root + w
        f = lambda lam: char.value(lam, x_trunc=x2)
        f_lo, f_hi = f(lo), f(hi)
        if (f_lo < 0.0) == (f_hi < 0.0):
            # root drifted outside the small bracket: rescan locally
            lo, hi = root - 64.0 * w, root + 64.0 * w
            f_lo, f_hi = f(lo), f(hi)
            if (f_lo < 0.0) == (f_hi < 0.0):
                raise SpectralError(
                    f"root near {root} unstable under truncation doubling"
                )
        new_root, new_res = _bisect(f, lo, hi, f_lo, f_hi, cfg.root_rel_tol)
        moved = abs(new_root - root)
        root, res = new_root, new_res
        if moved <= 10.0 * cfg.root_rel_tol * max(1.0, abs(root)):
            return root, res
        x = x2
        history.append(f"root near {root}: truncation doubled to {2*x}")
    raise SpectralError(f"truncated root near {root} did not stabilize")


def m_function(
    problem_or_catalog,
    alpha0: float,
    z: complex,
    cfg: SpectralConfig = SpectralConfig(),
    beta0: Optional[float] = None,
) -> MSample:
    """Weyl-Titchmarsh-Kodaira m for the separated extension (alpha0 at the
    left endpoint, beta0 at a limit-circle right endpoint): the coefficient
    making theta + m phi satisfy the right condition."""
    ctx = _context(problem_or_catalog, cfg)
    z = complex(z)
    basis_a = ctx.bases.get(LEFT)
    if basis_a is None:
        raise DomainArgumentError("m-function needs a limit-circle left endpoint")
    phi = shoot_with_data(
        ctx.problem, basis_a, (-math.sin(alpha0), math.cos(alpha0)), z, cfg
    )
    theta = shoot_with_data(
        ctx.problem, basis_a, (math.cos(alpha0), math.sin(alpha0)), z, cfg
    )

    if ctx.verdicts.get(RIGHT) == LIMIT_CIRCLE:
        basis_b = ctx.bases[RIGHT]
        b0 = 0.0 if beta0 is None else beta0
        bv_phi = boundary_values(phi, ctx.problem, basis_b, cfg.bval)
        bv_theta = boundary_values(theta, ctx.problem, basis_b, cfg.bval)
        r_phi = bv_phi.g_tilde * math.cos(b0) + bv_phi.g_tilde_prime * math.sin(b0)
        r_theta = bv_theta.g_tilde * math.cos(b0) + bv_theta.g_tilde_prime * math.sin(
            b0
        )
        if abs(r_phi) < 1e-13 * (1.0 + abs(r_theta)):
            raise PoleError(f"m-function pole: z={z} is an eigenvalue")
        m = -r_theta / r_phi
        est = abs(m) * (
            bv_theta.convergence_estimate / max(abs(r_theta), 1e-300)
            + bv_phi.convergence_estimate / max(abs(r_phi), 1e-300)
        )
        return MSample(z=z, m=m, truncation_radius=None, disk_radius_estimate=est)

    if beta0 is not None:
        raise DomainArgumentError("beta0 given but the right endpoint is limit point")
    x = cfg.truncation_x0
    m_prev = None
    radius_prev = None
    radius = math.inf
    grew = 0
    for _ in range(cfg.max_doublings + 1):
        sp = phi.at(x)
        st = theta.at(x)
        if abs(sp.u) < 1e-300:
            raise PoleError(f"truncated solution vanishes at x={x}")
        m_x = -st.u / sp.u
        if m_prev is not None:
            radius = abs(m_x - m_prev)
            if radius <= cfg.disk_tol * (1.0 + abs(m_x)):
                return MSample(
                    z=z,
                    m=m_x,
                    truncation_radius=x,
                    disk_radius_estimate=radius,
                )
            if radius_prev is not None and radius > radius_prev:
                grew += 1
                if grew >= 2:
                    raise SpectralError(
                        "Weyl disk radius not contracting (is the right endpoint "
                        "really limit point?)"
                    )
            radius_prev = radius
        m_prev = m_x
        x *= 2.0
    raise SpectralError(
        f"truncation did not converge within {cfg.max_doublings} doublings "
        f"(last radius {radius:.2e})"
    )


def mobius_alpha_shift(m: complex, alpha0: float, alpha1: float) -> complex:
    """m under a change of the left boundary angle: the linear fractional
    transformation with rotation alpha1 - alpha0."""
    delta = alpha1 - alpha0
    c, s = math.cos(delta), math.sin(delta)
    den = c + s * complex(m)
    if abs(den) < 1e-14:
        raise PoleError(f"alpha shift hits a pole (denominator {den})")
    return (-s + c * complex(m)) / den
