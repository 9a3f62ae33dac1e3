"""Closed-form references: catalog problems, exact bases, m-functions, spectra.

The catalog carries the Bessel problem on (0,inf) with the inverse-square
coefficient, the Legendre problem on (-1,1), the Laguerre/Kummer problem on
(0,inf) for weight parameter beta in (0,2), and a regular free problem on
(0,1).  Each entry provides the exact normalized principal/nonprincipal pair
frozen at lambda0 = 0 (lambda0 = -1 for the regular problem), the exact
m-function for the distinguished extension where known in closed form, and
the exact spectrum generator.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .classifier import LIMIT_CIRCLE, LIMIT_POINT
from .errors import DomainArgumentError, PoleError
from .model import (
    COEFF_CONST,
    COEFF_INVSQ,
    COEFF_LAGUERRE,
    COEFF_LEGENDRE,
    LEFT,
    RIGHT,
    EndpointAsymptotics,
    SLProblem,
    SolutionState,
)
from .principal import ReferenceBasis
from .quadrature import adaptive_quad
from .solutions import CallableSolution, SolutionHandle
from .specfun import (
    EULER_GAMMA,
    digamma,
    exp_minus_one_integral,
    gamma_fn,
    kummer_f,
    trigamma,
)

_POLE_TOL = 1e-12


# ---------------------------------------------------------------------------
# closed-form m-functions


def _log_cut_positive_axis(z: complex) -> complex:
    """log with branch cut along [0, inf): arg in (0, 2*pi)."""
    if z.imag == 0.0 and z.real >= 0.0:
        raise PoleError(f"m-function branch cut touched at z={z}")
    theta = cmath.phase(z)  # (-pi, pi]
    if theta <= 0.0:
        theta += 2.0 * math.pi
    return math.log(abs(z)) + 1j * theta


def m_bessel(z, gamma: float) -> complex:
    """Weyl m-function of the inverse-square problem, boundary index 0 at the
    origin, for coupling gamma in [0, 1); defined on C minus [0, inf).

    gamma > 0:  -e^{-i pi gamma} 2^{-2 gamma - 1} gamma^{-1}
                [Gamma(1-gamma)/Gamma(1+gamma)] z^gamma,
    gamma = 0:  i pi/2 + ln 2 - gamma_E - (1/2) ln z,

    with z^gamma and ln z taken on the branch with arg z in (0, 2 pi); that
    branch (not the principal one) satisfies m(conj z) = conj m(z).
    """
    z = complex(z)
    log_z = _log_cut_positive_axis(z)
    if gamma == 0.0:
        return 1j * math.pi / 2.0 + math.log(2.0) - EULER_GAMMA - 0.5 * log_z
    if not 0.0 < gamma < 1.0:
        raise DomainArgumentError("m_bessel needs gamma in [0, 1)")
    ratio = (gamma_fn(1.0 - gamma) / gamma_fn(1.0 + gamma)).real
    return (
        -cmath.exp(-1j * math.pi * gamma)
        * 2.0 ** (-2.0 * gamma - 1.0)
        / gamma
        * ratio
        * cmath.exp(gamma * log_z)
    )


def legendre_nu(z) -> complex:
    """nu(z) = (-1 + sqrt(1+4z))/2 with the branch avoiding the negative
    integers (principal square root gives Re nu >= -1/2)."""
    return 0.5 * (-1.0 + cmath.sqrt(1.0 + 4.0 * complex(z)))


def m_legendre(z) -> complex:
    """Friedrichs m-function of the Legendre problem (digamma route):
    -(pi/2) cot(nu pi) - gamma_E - psi(1 + nu), nu = nu(z)."""
    z = complex(z)
    nu = legendre_nu(z)
    s = cmath.sin(math.pi * nu)
    if abs(s) < _POLE_TOL:
        raise PoleError(f"m_legendre: z={z} is at or near an eigenvalue")
    return (
        -(math.pi / 2.0) * cmath.cos(math.pi * nu) / s
        - EULER_GAMMA
        - digamma(1.0 + nu)
    )


def m_legendre_series(z, n_terms: int = 10**4) -> complex:
    """Friedrichs Legendre m by the pole expansion

        -1/(2z) + sum_n [ (n + 1/2)/(n(n+1) - z) - 1/n ],

    summed to n_terms with the integral comparison of the remainder
    (midpoint rule), which contributes ln(N+1/2) - (1/2) ln((N+1)^2 - 1/4 - z).
    """
    z = complex(z)
    if abs(z) < _POLE_TOL:
        raise PoleError("m_legendre_series: z=0 is an eigenvalue")
    total = -0.5 / z
    for n in range(1, n_terms + 1):
        den = n * (n + 1.0) - z
        if abs(den) < _POLE_TOL:
            raise PoleError(f"m_legendre_series: z={z} at eigenvalue n(n+1), n={n}")
        total += (n + 0.5) / den - 1.0 / n
    c = z + 0.25
    nn = float(n_terms)
    total += math.log(nn + 0.5) - 0.5 * cmath.log((nn + 1.0) ** 2 - c)
    return total


def _laguerre_gamma_ratio(z: complex, beta: float) -> complex:
    if beta == 1.0:
        return -digamma(-z) - 2.0 * EULER_GAMMA
    if 0.0 < beta < 1.0:
        return -(
            gamma_fn(beta)
            * gamma_fn(1.0 - beta - z)
            / (gamma_fn(1.0 - beta) * gamma_fn(-z))
        )
    return -(
        gamma_fn(2.0 - beta)
        * gamma_fn(-z)
        / (gamma_fn(beta - 1.0) * gamma_fn(1.0 - beta - z))
    )


def m_laguerre(z, beta: float) -> complex:
    """Friedrichs m-function of the Laguerre problem, by parameter range:

        beta in (0,1): -Gamma(beta) Gamma(1-beta-z) / [Gamma(1-beta) Gamma(-z)]
        beta = 1:      -psi(-z) - 2 gamma_E
        beta in (1,2): -Gamma(2-beta) Gamma(-z) / [Gamma(beta-1) Gamma(1-beta-z)]
    """
    if not 0.0 < beta < 2.0:
        raise DomainArgumentError("m_laguerre needs beta in (0, 2)")
    z = complex(z)
    try:
        return _laguerre_gamma_ratio(z, beta)
    except PoleError as exc:
        raise PoleError(f"m_laguerre: z={z} too close to a pole/zero lattice") from exc


def m_laguerre_product(z, beta: float, n_terms: int = 10**4) -> complex:
    """Product form of the Laguerre m (interlacing zero/pole route), with a
    first-order analytic tail correction for both the constant and the
    z-dependent products.  Valid for beta in (0,2) away from 1."""
    if not 0.0 < beta < 2.0 or beta == 1.0:
        raise DomainArgumentError("product form needs beta in (0,2), beta != 1")
    z = complex(z)
    nn = float(n_terms)
    if 0.0 < beta < 1.0:
        c_partial = 0.0
        prod = complex(0.0)  # log accumulation
        for n in range(1, n_terms + 1):
            c_partial += math.log(n * (n + 1.0)) - math.log((n + beta) * (n + 1.0 - beta))
            num = 1.0 - z / n
            den = 1.0 - z / (n + 1.0 - beta)
            if abs(num) < _POLE_TOL or abs(den) < _POLE_TOL:
                raise PoleError(f"product form at a zero/pole: z={z}")
            prod += cmath.log(num) - cmath.log(den)
        c1 = math.exp(c_partial - beta * (1.0 - beta) / (nn + 1.0))
        tail = z * (digamma(nn + 1.0) - digamma(nn + 2.0 - beta))
        lead = (beta - 1.0) / (beta * gamma_fn(2.0 - beta).real)
        den0 = z - (1.0 - beta)
        if abs(den0) < _POLE_TOL:
            raise PoleError(f"product form at the leading pole: z={z}")
        return c1 * lead * (z / den0) * cmath.exp(prod + tail)
    # beta in (1, 2)
    c_partial = 0.0
    prod = complex(0.0)
    for n in range(1, n_terms + 1):
        c_partial += math.log((n + beta) * (n + 1.0 - beta)) - math.log(n * (n + 1.0))
        num = 1.0 - z / (n + 1.0 - beta)
        den = 1.0 - z / n
        if abs(num) < _POLE_TOL or abs(den) < _POLE_TOL:
            raise PoleError(f"product form at a zero/pole: z={z}")
        prod += cmath.log(num) - cmath.log(den)
    c2 = math.exp(c_partial + beta * (1.0 - beta) / (nn + 1.0))
    tail = z * (digamma(nn + 2.0 - beta) - digamma(nn + 1.0))
    lead = beta * (1.0 - beta) * gamma_fn(2.0 - beta).real
    if abs(z) < _POLE_TOL:
        raise PoleError("product form at the z=0 pole")
    return c2 * lead * ((z - (1.0 - beta)) / z) * cmath.exp(prod + tail)


def gamma_ratio_product(z1, z2, z3, n_terms: int = 10**4) -> complex:
    """Gamma(z1) Gamma(z2) / [Gamma(z1+z3) Gamma(z2-z3)] as the product
    prod_{n>=0} [1 + z3/(n+z1)][1 - z3/(n+z2)], truncated with digamma and
    trigamma tail corrections (the second-order terms of the two factors add
    instead of cancelling, so the trigamma term is required)."""
    z1, z2, z3 = complex(z1), complex(z2), complex(z3)
    acc = complex(0.0)
    for n in range(n_terms + 1):
        f1 = 1.0 + z3 / (n + z1)
        f2 = 1.0 - z3 / (n + z2)
        if abs(f1) < _POLE_TOL or abs(f2) < _POLE_TOL:
            raise PoleError("gamma_ratio_product hit a zero factor")
        acc += cmath.log(f1) + cmath.log(f2)
    nn = float(n_terms)
    acc += z3 * (digamma(nn + 1.0 + z2) - digamma(nn + 1.0 + z1))
    acc -= 0.5 * z3 * z3 * (trigamma(nn + 1.0 + z1) + trigamma(nn + 1.0 + z2))
    return cmath.exp(acc)


@functools.cache
def laguerre_c0() -> float:
    """C0 = int_0^1 t (1 - ln t) e^t dt, the beta=1 normalization constant;
    computed once by adaptive quadrature and cached."""
    val = adaptive_quad(
        lambda t: t * (1.0 - math.log(t)) * math.exp(t), 1e-300, 1.0,
        rel_tol=1e-13, abs_tol=1e-15,
    )
    return float(val.real) if isinstance(val, complex) else float(val)


# ---------------------------------------------------------------------------
# catalog problems


@dataclass(frozen=True)
class CatalogProblem:
    """A fully populated reference problem.

    `bases` maps the limit-circle endpoints to their exact normalized
    reference pair at `lambda0`; `m_exact` is the closed-form m-function of
    the distinguished (boundary index 0) extension with `m_domain` naming its
    validity region; `spectrum` generates the exact Friedrichs spectrum.
    """

    problem: SLProblem
    lower_bound: float
    lambda0: float
    bases: dict[str, ReferenceBasis]
    known_verdicts: dict[str, str]
    m_exact: Optional[Callable[[complex], complex]] = None
    m_domain: str = ""
    spectrum: Optional[Callable[[int], float]] = None
    recessive_seed: Optional[Callable[[complex, float], SolutionState]] = None
    notes: str = ""

    @property
    def name(self) -> str:
        return self.problem.name

    @property
    def params(self) -> dict:
        return self.problem.params


def _basis(endpoint, lambda0, u, u1, uh, uh1, label) -> ReferenceBasis:
    principal = CallableSolution(u, u1, label=f"u({label})")
    nonprincipal = CallableSolution(uh, uh1, label=f"uhat({label})")
    return ReferenceBasis(
        endpoint=endpoint,
        lambda0=lambda0,
        principal=principal,
        nonprincipal=nonprincipal,
        normalization_check=1.0,
        convention="catalog",
    )


def _bessel_catalog(gamma: float) -> CatalogProblem:
    if gamma < 0.0:
        raise DomainArgumentError("bessel catalog needs gamma >= 0")
    c = gamma * gamma - 0.25
    problem = SLProblem(
        a=0.0,
        b=math.inf,
        p=lambda x: 1.0,
        q=lambda x: c / (x * x),
        r=lambda x: 1.0,
        name="bessel",
        params={"gamma": gamma},
        asym_a=EndpointAsymptotics(0.0, 1.0, -2.0 if c != 0.0 else None),
        coeff_kind=COEFF_INVSQ,
        coeff_params=(c,),
    )
    limit_circle = gamma < 1.0
    verdicts = {
        LEFT: LIMIT_CIRCLE if limit_circle else LIMIT_POINT,
        RIGHT: LIMIT_POINT,
    }
    bases: dict[str, ReferenceBasis] = {}
    m_exact = None
    if limit_circle:
        if gamma > 0.0:
            half_p = 0.5 + gamma
            half_m = 0.5 - gamma
            inv2g = 1.0 / (2.0 * gamma)
            bases[LEFT] = _basis(
                LEFT,
                0.0,
                lambda x: x**half_p,
                lambda x: half_p * x ** (half_p - 1.0),
                lambda x: inv2g * x**half_m,
                lambda x: inv2g * half_m * x ** (half_m - 1.0),
                f"bessel gamma={gamma}",
            )
        else:
            bases[LEFT] = _basis(
                LEFT,
                0.0,
                lambda x: math.sqrt(x),
                lambda x: 0.5 / math.sqrt(x),
                lambda x: -math.sqrt(x) * math.log(x),
                lambda x: -0.5 * math.log(x) / math.sqrt(x) - 1.0 / math.sqrt(x),
                "bessel gamma=0",
            )
        m_exact = lambda z: m_bessel(z, gamma)
    return CatalogProblem(
        problem=problem,
        lower_bound=0.0,
        lambda0=0.0,
        bases=bases,
        known_verdicts=verdicts,
        m_exact=m_exact,
        m_domain="C \\ [0, inf)",
        spectrum=None,
        notes="purely continuous Friedrichs spectrum [0, inf)",
    )


def _legendre_catalog() -> CatalogProblem:
    problem = SLProblem(
        a=-1.0,
        b=1.0,
        p=lambda x: 1.0 - x * x,
        q=lambda x: 0.0,
        r=lambda x: 1.0,
        name="legendre",
        params={},
        asym_a=EndpointAsymptotics(1.0, 2.0, None),
        asym_b=EndpointAsymptotics(1.0, 2.0, None),
        coeff_kind=COEFF_LEGENDRE,
        coeff_params=(),
    )

    def uh(x):
        return 0.5 * math.log((1.0 - x) / (1.0 + x))

    bases = {
        side: _basis(
            side,
            0.0,
            lambda x: 1.0,
            lambda x: 0.0,
            uh,
            lambda x: -1.0,
            "legendre",
        )
        for side in (LEFT, RIGHT)
    }
    return CatalogProblem(
        problem=problem,
        lower_bound=0.0,
        lambda0=0.0,
        bases=bases,
        known_verdicts={LEFT: LIMIT_CIRCLE, RIGHT: LIMIT_CIRCLE},
        m_exact=m_legendre,
        m_domain="C \\ {n(n+1)}",
        spectrum=lambda n: float(n * n + n),
    )


def laguerre_y1(z, beta: float) -> SolutionHandle:
    """Kummer solution y1 = F(-z, beta; x) with its quasi-derivative."""
    z = complex(z)

    def val(x):
        return kummer_f(-z, beta, x)

    def qd(x):
        # p y1' = x^beta e^-x (-z/beta) F(1-z, beta+1; x)
        return (
            x**beta
            * math.exp(-x)
            * (-z / beta)
            * kummer_f(1.0 - z, beta + 1.0, x)
        )

    return CallableSolution(val, qd, label=f"y1(z={z})")


def laguerre_y2(z, beta: float) -> SolutionHandle:
    """Second Kummer solution y2 = x^(1-beta) F(1-beta-z, 2-beta; x) for
    beta != 1; for beta = 1 only z = 0 is provided in closed form."""
    z = complex(z)
    if beta == 1.0:
        if z != 0.0:
            raise DomainArgumentError(
                "laguerre_y2 at beta=1 is only available in closed form at z=0"
            )
        e1 = exp_minus_one_integral(1.0)

        def val0(x):
            return -(math.log(x) + exp_minus_one_integral(x) - e1)

        def qd0(x):
            return -1.0

        return CallableSolution(val0, qd0, label="y2(beta=1,z=0)")

    a = 1.0 - beta - z

    def val(x):
        return x ** (1.0 - beta) * kummer_f(a, 2.0 - beta, x)

    def qd(x):
        # p y2' = e^-x [(1-beta) F(a, 2-beta; x) + x a/(2-beta) F(a+1, 3-beta; x)]
        return math.exp(-x) * (
            (1.0 - beta) * kummer_f(a, 2.0 - beta, x)
            + x * a / (2.0 - beta) * kummer_f(a + 1.0, 3.0 - beta, x)
        )

    return CallableSolution(val, qd, label=f"y2(z={z})")


def _laguerre_catalog(beta: float) -> CatalogProblem:
    if not 0.0 < beta < 2.0:
        raise DomainArgumentError("laguerre catalog needs beta in (0, 2)")
    problem = SLProblem(
        a=0.0,
        b=math.inf,
        p=lambda x: x**beta * math.exp(-x),
        q=lambda x: 0.0,
        r=lambda x: x ** (beta - 1.0) * math.exp(-x),
        name="laguerre",
        params={"beta": beta},
        regular_a=beta < 1.0,
        asym_a=EndpointAsymptotics(beta, 1.0, None),
        coeff_kind=COEFF_LAGUERRE,
        coeff_params=(beta,),
    )
    y1_0 = laguerre_y1(0.0, beta)   # constant 1
    y2_0 = laguerre_y2(0.0, beta)
    if beta < 1.0:
        scale = 1.0 / (1.0 - beta)
        principal = CallableSolution(
            lambda x: scale * y2_0.at(x).u,
            lambda x: scale * y2_0.at(x).u1,
            label="u(laguerre)",
        )
        nonprincipal = y1_0
    elif beta == 1.0:
        principal = y1_0
        nonprincipal = y2_0
    else:
        scale = 1.0 / (beta - 1.0)
        principal = CallableSolution(
            lambda x: scale * y1_0.at(x).u,
            lambda x: scale * y1_0.at(x).u1,
            label="u(laguerre)",
        )
        nonprincipal = y2_0
    basis = ReferenceBasis(
        endpoint=LEFT,
        lambda0=0.0,
        principal=principal,
        nonprincipal=nonprincipal,
        normalization_check=1.0,
        convention="catalog",
    )

    if beta < 1.0:
        spectrum = lambda n: float(n + 1.0 - beta)
    else:
        spectrum = lambda n: float(n)

    def recessive_seed(z: complex, x_cut: float) -> SolutionState:
        # the subdominant direction at +inf behaves like x^z: y'/y ~ z/x
        p_cut = x_cut**beta * math.exp(-x_cut)
        return SolutionState(x_cut, 1.0, p_cut * complex(z) / x_cut)

    return CatalogProblem(
        problem=problem,
        lower_bound=0.0,
        lambda0=0.0,
        bases={LEFT: basis},
        known_verdicts={LEFT: LIMIT_CIRCLE, RIGHT: LIMIT_POINT},
        m_exact=lambda z: m_laguerre(z, beta),
        m_domain="C \\ poles",
        spectrum=spectrum,
        recessive_seed=recessive_seed,
    )


def _regular_free_catalog() -> CatalogProblem:
    problem = SLProblem(
        a=0.0,
        b=1.0,
        p=lambda x: 1.0,
        q=lambda x: 0.0,
        r=lambda x: 1.0,
        name="regular_free",
        params={},
        regular_a=True,
        regular_b=True,
        coeff_kind=COEFF_CONST,
        coeff_params=(1.0, 0.0, 1.0),
    )
    # lambda0 = -1: solutions of -u'' = -u
    bases = {
        LEFT: _basis(
            LEFT,
            -1.0,
            math.sinh,
            math.cosh,
            math.cosh,
            math.sinh,
            "regular_free a",
        ),
        RIGHT: _basis(
            RIGHT,
            -1.0,
            lambda x: math.sinh(x - 1.0),
            lambda x: math.cosh(x - 1.0),
            lambda x: math.cosh(x - 1.0),
            lambda x: math.sinh(x - 1.0),
            "regular_free b",
        ),
    }

    def m_exact(z):
        z = complex(z)
        w = cmath.sqrt(z)
        s = cmath.sin(w)
        if abs(s) < _POLE_TOL:
            raise PoleError(f"regular_free m: z={z} at an eigenvalue")
        if abs(w) < 1e-8:
            return -1.0 + w * w / 3.0  # limit of -w cot(w) at w -> 0
        return -w * cmath.cos(w) / s

    return CatalogProblem(
        problem=problem,
        lower_bound=0.0,
        lambda0=-1.0,
        bases=bases,
        known_verdicts={LEFT: LIMIT_CIRCLE, RIGHT: LIMIT_CIRCLE},
        m_exact=m_exact,
        m_domain="C \\ {(n pi)^2}",
        spectrum=lambda n: float(((n + 1) * math.pi) ** 2),
    )


def catalog(name: str, **params) -> CatalogProblem:
    """Look up a fully populated catalog problem.

    Names: "bessel" (gamma >= 0; closed forms only for gamma in [0,1)),
    "legendre", "laguerre" (beta in (0,2)), "regular_free".
    """
    if name == "bessel":
        return _bessel_catalog(float(params.pop("gamma", 0.5)))
    if name == "legendre":
        return _legendre_catalog()
    if name == "laguerre":
        return _laguerre_catalog(float(params.pop("beta", 0.5)))
    if name == "regular_free":
        return _regular_free_catalog()
    raise DomainArgumentError(f"unknown catalog problem {name!r}")


def friedrichs_eigenfunction(cat: CatalogProblem, n: int) -> Optional[SolutionHandle]:
    """Closed-form eigenfunction of the Friedrichs extension, where the
    spectrum is discrete and the eigenfunctions are classical.

    Legendre: the Legendre polynomials (n <= 1 provided here); Laguerre:
    x^(1-beta) F(-n, 2-beta; x) for beta in (0,1) (terminating Kummer series)
    and the generalized Laguerre polynomial F(-n, beta; x) for beta in [1,2).
    """
    name = cat.problem.name
    if name == "legendre":
        if n == 0:
            return CallableSolution(lambda x: 1.0, lambda x: 0.0, label="P0")
        if n == 1:
            return CallableSolution(lambda x: x, lambda x: 1.0 - x * x, label="P1")
        return None
    if name == "laguerre":
        beta = cat.problem.params["beta"]
        lam = cat.spectrum(n)
        if beta < 1.0:
            return laguerre_y2(lam, beta)
        return laguerre_y1(lam, beta)
    return None
