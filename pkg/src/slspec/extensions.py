"""Self-adjoint boundary conditions on the generalized boundary values.

Variants: separated (alpha, beta), coupled (phase and an SL(2,R) matrix),
a general 2x2 matrix pair (A, B) subject to rank(A B) = 2 and
A J A* = B J B*, and the Friedrichs condition gtilde = 0.  Components at a
limit-point endpoint are dropped; constructing a condition that imposes
data at a limit-point endpoint is rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .bvals import BoundaryValuePair
from .classifier import LIMIT_CIRCLE, LIMIT_POINT
from .errors import DomainArgumentError
from .model import LEFT, RIGHT

_J = np.array([[0.0, -1.0], [1.0, 0.0]], dtype=complex)


@dataclass(frozen=True)
class Separated:
    """gtilde(a) cos(alpha) + gtilde'(a) sin(alpha) = 0 (and likewise beta
    at b); a None angle means the endpoint is limit point and the condition
    there is dropped."""

    alpha: Optional[float]
    beta: Optional[float]

    def __post_init__(self):
        for ang in (self.alpha, self.beta):
            if ang is not None and not 0.0 <= ang < math.pi:
                raise DomainArgumentError(f"angle {ang} outside [0, pi)")


@dataclass(frozen=True)
class Coupled:
    """(gtilde(b), gtilde'(b))^T = e^{i phi} R (gtilde(a), gtilde'(a))^T with
    R in SL(2, R); needs limit circle at both endpoints."""

    phi: float
    R: tuple[tuple[float, float], tuple[float, float]]

    def __post_init__(self):
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise DomainArgumentError(f"phi={self.phi} outside [0, 2 pi)")

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.R, dtype=float)


@dataclass(frozen=True)
class MatrixPair:
    """A (gtilde(a), gtilde'(a))^T = B (gtilde(b), gtilde'(b))^T."""

    A: tuple[tuple[complex, complex], tuple[complex, complex]]
    B: tuple[tuple[complex, complex], tuple[complex, complex]]

    @property
    def matrix_a(self) -> np.ndarray:
        return np.array(self.A, dtype=complex)

    @property
    def matrix_b(self) -> np.ndarray:
        return np.array(self.B, dtype=complex)


@dataclass(frozen=True)
class Friedrichs:
    """gtilde = 0 at every limit-circle endpoint."""

    applies_a: bool = True
    applies_b: bool = True


BoundaryCondition = Union[Separated, Coupled, MatrixPair, Friedrichs]


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    reason: str = ""
    defects: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.valid


def matrix_pair_from_separated(bc: Separated) -> MatrixPair:
    """Embed a fully separated condition as a matrix pair."""
    if bc.alpha is None or bc.beta is None:
        raise DomainArgumentError("matrix embedding needs both endpoints retained")
    a = np.array(
        [
            [math.cos(bc.alpha), math.sin(bc.alpha)],
            [0.0, 0.0],
        ],
        dtype=complex,
    )
    b = np.array(
        [
            [0.0, 0.0],
            [-math.cos(bc.beta), -math.sin(bc.beta)],
        ],
        dtype=complex,
    )
    return MatrixPair(tuple(map(tuple, a)), tuple(map(tuple, b)))


def matrix_pair_from_coupled(bc: Coupled) -> MatrixPair:
    """A = e^{i phi} R, B = I."""
    a = np.exp(1j * bc.phi) * bc.matrix.astype(complex)
    b = np.eye(2, dtype=complex)
    return MatrixPair(tuple(map(tuple, a)), tuple(map(tuple, b)))


def validate(bc: BoundaryCondition, tol: float = 1e-10) -> ValidityReport:
    """Self-adjointness test.

    Separated, Coupled (det R = 1 within 1e-12) and Friedrichs conditions
    are valid by construction; matrix pairs must satisfy rank(A B) = 2 and
    A J A* = B J B*, compared entrywise at `tol` after normalizing the pair
    by its largest entry magnitude.
    """
    if isinstance(bc, (Separated, Friedrichs)):
        return ValidityReport(True)
    if isinstance(bc, Coupled):
        det = float(np.linalg.det(bc.matrix))
        if abs(det - 1.0) > 1e-12:
            return ValidityReport(False, f"det(R) = {det} != 1", ("det",))
        return ValidityReport(True)
    if isinstance(bc, MatrixPair):
        a = bc.matrix_a
        b = bc.matrix_b
        scale = max(np.abs(a).max(), np.abs(b).max())
        if scale == 0.0:
            return ValidityReport(False, "zero pair", ("rank",))
        a = a / scale
        b = b / scale
        defects = []
        block = np.hstack([a, b])
        if np.linalg.matrix_rank(block, tol=1e-10) != 2:
            defects.append("rank")
        lhs = a @ _J @ a.conj().T
        rhs = b @ _J @ b.conj().T
        if np.abs(lhs - rhs).max() > tol:
            defects.append("symplectic")
        if defects:
            return ValidityReport(
                False, "matrix pair fails " + " and ".join(defects), tuple(defects)
            )
        return ValidityReport(True)
    raise DomainArgumentError(f"unknown boundary condition {bc!r}")


def friedrichs(problem, classifications: dict[str, str]) -> Friedrichs:
    """The Friedrichs condition for the given endpoint verdicts: gtilde = 0
    imposed at each limit-circle endpoint, nothing at limit-point ones."""
    return Friedrichs(
        applies_a=classifications.get(LEFT) == LIMIT_CIRCLE,
        applies_b=classifications.get(RIGHT) == LIMIT_CIRCLE,
    )


def check_applicability(bc: BoundaryCondition, classifications: dict[str, str]):
    """Reject conditions that impose data at a limit-point endpoint."""

    def lp(side):
        return classifications.get(side) == LIMIT_POINT

    if isinstance(bc, Separated):
        if bc.alpha is not None and lp(LEFT):
            raise DomainArgumentError("separated condition at a limit-point left endpoint")
        if bc.beta is not None and lp(RIGHT):
            raise DomainArgumentError("separated condition at a limit-point right endpoint")
    elif isinstance(bc, (Coupled, MatrixPair)):
        if lp(LEFT) or lp(RIGHT):
            raise DomainArgumentError(
                "coupled/matrix conditions need limit circle at both endpoints"
            )
    elif isinstance(bc, Friedrichs):
        if bc.applies_a and lp(LEFT):
            raise DomainArgumentError("Friedrichs component at a limit-point endpoint")
        if bc.applies_b and lp(RIGHT):
            raise DomainArgumentError("Friedrichs component at a limit-point endpoint")


def residual(
    bc: BoundaryCondition,
    bvals_a: Optional[BoundaryValuePair],
    bvals_b: Optional[BoundaryValuePair],
) -> np.ndarray:
    """Defect of the boundary condition on the supplied boundary values;
    zero exactly when the element lies in the extension's domain."""

    def need(side, pair):
        if pair is None:
            raise DomainArgumentError(
                f"boundary values at the {side} endpoint are required"
            )
        return pair

    if isinstance(bc, Separated):
        out = []
        if bc.alpha is not None:
            pa = need(LEFT, bvals_a)
            out.append(
                pa.g_tilde * math.cos(bc.alpha) + pa.g_tilde_prime * math.sin(bc.alpha)
            )
        if bc.beta is not None:
            pb = need(RIGHT, bvals_b)
            out.append(
                pb.g_tilde * math.cos(bc.beta) + pb.g_tilde_prime * math.sin(bc.beta)
            )
        return np.array(out, dtype=complex)
    if isinstance(bc, Coupled):
        pa = need(LEFT, bvals_a)
        pb = need(RIGHT, bvals_b)
        va = np.array([pa.g_tilde, pa.g_tilde_prime], dtype=complex)
        vb = np.array([pb.g_tilde, pb.g_tilde_prime], dtype=complex)
        return vb - np.exp(1j * bc.phi) * (bc.matrix @ va)
    if isinstance(bc, MatrixPair):
        pa = need(LEFT, bvals_a)
        pb = need(RIGHT, bvals_b)
        va = np.array([pa.g_tilde, pa.g_tilde_prime], dtype=complex)
        vb = np.array([pb.g_tilde, pb.g_tilde_prime], dtype=complex)
        return bc.matrix_a @ va - bc.matrix_b @ vb
    if isinstance(bc, Friedrichs):
        out = []
        if bc.applies_a:
            out.append(need(LEFT, bvals_a).g_tilde)
        if bc.applies_b:
            out.append(need(RIGHT, bvals_b).g_tilde)
        return np.array(out, dtype=complex)
    raise DomainArgumentError(f"unknown boundary condition {bc!r}")
