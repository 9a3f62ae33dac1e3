"""Special functions: Gamma, digamma, Bessel J, Kummer F, Legendre P.

Everything is implemented locally (Lanczos approximation, recurrences,
power series); accuracy targets are desk scale (|z| <= 50, x <= 40), which
is all the closed-form reference formulas require.  Real arguments may be
passed anywhere a complex is accepted; complex values are returned.
"""

from __future__ import annotations

import cmath
import math

from .errors import PoleError, SeriesError

EULER_GAMMA = 0.57721566490153286060651209008240243104215933593992

_SQRT_TWO_PI = 2.5066282746310005024157652848110452530069867406099

# Lanczos g = 607/128, 15 coefficients (Godfrey's set)
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)

# -sum B_2k/(2k) for the digamma asymptotic series (coefficients of w^-2k)
_PSI_ASYMP = (
    -1.0 / 12.0,
    1.0 / 120.0,
    -1.0 / 252.0,
    1.0 / 240.0,
    -1.0 / 132.0,
    691.0 / 32760.0,
    -1.0 / 12.0,
)

_POLE_TOL = 1e-13


def _near_nonpositive_integer(z: complex, tol: float) -> bool:
    n = round(z.real)
    return n <= 0 and abs(z - n) < tol


def gamma_fn(z) -> complex:
    """Gamma function via the Lanczos approximation (reflection for
    Re z < 0.5).  Relative error below 1e-12 for |z| <= 50."""
    z = complex(z)
    if _near_nonpositive_integer(z, _POLE_TOL):
        raise PoleError(f"gamma_fn: z={z} within {_POLE_TOL} of a pole")
    if z.real < 0.5:
        # Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return math.pi / (cmath.sin(math.pi * z) * gamma_fn(1.0 - z))
    w = z - 1.0
    x = _LANCZOS_C[0]
    for i in range(1, 15):
        x += _LANCZOS_C[i] / (w + i)
    t = w + _LANCZOS_G + 0.5
    return _SQRT_TWO_PI * t ** (w + 0.5) * cmath.exp(-t) * x


def digamma(z) -> complex:
    """psi(z) = Gamma'(z)/Gamma(z) via reflection, recurrence to |z| >= 12
    and the asymptotic series."""
    z = complex(z)
    if _near_nonpositive_integer(z, _POLE_TOL):
        raise PoleError(f"digamma: z={z} within {_POLE_TOL} of a pole")
    if z.real < 0.5:
        return digamma(1.0 - z) - math.pi / cmath.tan(math.pi * z)
    acc = 0.0
    w = z
    while abs(w) < 12.0:
        acc -= 1.0 / w
        w += 1.0
    w2 = 1.0 / (w * w)
    series = 0.0
    power = w2
    for c in _PSI_ASYMP:
        series += c * power
        power *= w2
    return acc + cmath.log(w) - 0.5 / w + series


def trigamma(z) -> complex:
    """psi'(z) by recurrence to |z| >= 12 and the asymptotic series."""
    z = complex(z)
    if _near_nonpositive_integer(z, _POLE_TOL):
        raise PoleError(f"trigamma: z={z} within {_POLE_TOL} of a pole")
    acc = 0.0
    w = z
    while abs(w) < 12.0 and w.real < 12.0:
        acc += 1.0 / (w * w)
        w += 1.0
    iw = 1.0 / w
    iw2 = iw * iw
    series = iw + 0.5 * iw2 + iw2 * iw * (
        1.0 / 6.0 - iw2 * (1.0 / 30.0 - iw2 * (1.0 / 42.0 - iw2 / 30.0))
    )
    return acc + series


def pochhammer(a, n: int) -> complex:
    """(a)_n = a (a+1) ... (a+n-1)."""
    out = complex(1.0)
    a = complex(a)
    for k in range(n):
        out *= a + k
    return out


def bessel_j(nu: float, x: float) -> float:
    """Bessel J_nu(x) for nu >= 0, x >= 0 by the ascending series.

    Reliable for x up to ~15 (cancellation grows beyond); the reference
    evaluations all sit well inside that range.
    """
    if x < 0.0:
        raise PoleError("bessel_j: x must be >= 0")
    if nu < 0.0:
        raise PoleError("bessel_j: nu must be >= 0")
    if x == 0.0:
        return 1.0 if nu == 0.0 else 0.0
    half = 0.5 * x
    term = half**nu / gamma_fn(nu + 1.0).real
    total = term
    hh = half * half
    for k in range(1, 400):
        term *= -hh / (k * (nu + k))
        total += term
        if abs(term) < 1e-17 * abs(total) and k > half:
            return total
    raise SeriesError(f"bessel_j series did not converge for nu={nu}, x={x}")


def kummer_f(a, b, x: float) -> complex:
    """Confluent hypergeometric F(a, b; x) = sum (a)_k/(b)_k x^k/k!.

    Terminates exactly when a is a nonpositive integer; otherwise the series
    is summed with a term-ratio stop (guard 2000 terms).
    """
    a = complex(a)
    b = complex(b)
    if _near_nonpositive_integer(b, _POLE_TOL):
        raise PoleError(f"kummer_f: lower parameter b={b} at a pole")
    n_stop = None
    if a.imag == 0.0 and a.real <= 0.0 and a.real == round(a.real):
        n_stop = int(-a.real)
    term = complex(1.0)
    total = complex(1.0)
    for k in range(0, 2000):
        if n_stop is not None and k >= n_stop:
            return total
        term *= (a + k) / (b + k) * (x / (k + 1.0))
        total += term
        if abs(term) < 1e-17 * (abs(total) + 1e-300) and k > abs(x):
            return total
    raise SeriesError(f"kummer_f series did not converge for a={a}, b={b}, x={x}")


def exp_minus_one_integral(x: float) -> float:
    """int_0^x (e^t - 1)/t dt = sum_{k>=1} x^k / (k k!)."""
    term = 1.0
    total = 0.0
    for k in range(1, 500):
        term *= x / k
        total += term / k
        if abs(term) < 1e-17 * (abs(total) + 1.0):
            return total
    raise SeriesError(f"exp_minus_one_integral did not converge for x={x}")


def legendre_p(nu, x: float) -> complex:
    """Legendre function P_nu(x) on (-1, 1) by the expansion about x = -1.

    Each term combines sin(pi nu) with digamma values; the product
    sin(pi nu) psi(n - nu) is computed through the reflection
    psi(w) = psi(1-w) - pi cot(pi w) whenever Re(n - nu) <= 1/2, which turns
    it into sin(pi nu) psi(1 - n + nu) + pi cos(pi nu).  That keeps the sum
    finite and accurate through the integer-degree limits, where it reduces
    to the Legendre polynomial.  Convergence slows as x -> 1 (the series
    variable is (1+x)/2); intended for x <= ~0.95.
    """
    nu = complex(nu)
    if not -1.0 < x < 1.0:
        raise PoleError(f"legendre_p: x={x} outside (-1, 1)")
    t = 0.5 * (1.0 + x)
    ln_t = math.log(t)
    sin_nu = cmath.sin(math.pi * nu)
    cos_nu = cmath.cos(math.pi * nu)

    # running pieces: A_n, psi(1+n), psi(n+1+nu); psi values for S_n are
    # accumulated in each branch separately
    a_n = complex(1.0)
    psi_1n = -EULER_GAMMA
    psi_b = digamma(1.0 + nu)
    psi_refl = digamma(1.0 + nu)  # psi(1 + nu - n), maintained while in use
    psi_dir = None  # psi(n - nu), created when the direct branch starts

    total = complex(0.0)
    small_run = 0
    for n in range(0, 6000):
        w_re = n - nu.real
        if w_re > 0.5:
            if psi_dir is None:
                psi_dir = digamma(n - nu)
            s_n = sin_nu * psi_dir
        else:
            s_n = sin_nu * psi_refl + math.pi * cos_nu
        term = a_n * (t**n) * (
            sin_nu * (2.0 * psi_1n - psi_b - ln_t) - s_n
        )
        total += term

        if abs(term) < 1e-16 * (abs(total) + 1e-30) and n >= 4:
            small_run += 1
            if small_run >= 3:
                return total * (-1.0 / math.pi)
        else:
            small_run = 0

        # advance the recurrences to n+1
        a_n *= (n - nu) * (n + 1.0 + nu) / ((n + 1.0) * (n + 1.0))
        psi_1n += 1.0 / (n + 1.0)
        psi_b += 1.0 / (nu + n + 1.0)
        if psi_dir is not None:
            psi_dir += 1.0 / (n - nu)  # psi(n+1-nu) = psi(n-nu) + 1/(n-nu)
        elif (n + 1) - nu.real <= 0.5:
            psi_refl -= 1.0 / (nu - n)  # psi(1+nu-(n+1)) = psi(1+nu-n) - 1/(nu-n)
    raise SeriesError(f"legendre_p series did not converge for nu={nu}, x={x}")


def legendre_p_tilde_constants(nu) -> tuple[complex, complex]:
    """The generalized boundary values of P_nu at x = -1 against the
    log-type reference pair: (Ptilde(-1), Ptilde'(-1)) =
    (-2 sin(nu pi)/pi, cos(nu pi) + 2 sin(nu pi) [gamma_E + psi(1+nu)]/pi)."""
    nu = complex(nu)
    s = cmath.sin(math.pi * nu)
    c = cmath.cos(math.pi * nu)
    first = -2.0 * s / math.pi
    second = c + 2.0 * s * (EULER_GAMMA + digamma(1.0 + nu)) / math.pi
    return first, second
