"""Exception hierarchy for slspec.

``SlspecError`` is the common base.  ``SpecError`` marks bad run
specifications (CLI exit code 1); everything else is a numerical failure
(CLI exit code 2).
"""

from __future__ import annotations


class SlspecError(Exception):
    """Base class for all slspec errors."""


class SpecError(SlspecError):
    """Invalid run specification (syntax or semantics)."""


class DomainArgumentError(SlspecError):
    """Arguments violate an operation's precondition."""


class IntegrationError(SlspecError):
    """ODE integration failed; carries the last good state when available."""

    def __init__(self, message, last_state=None, n_steps=0):
        super().__init__(message)
        self.last_state = last_state
        self.n_steps = n_steps


class QuadratureError(SlspecError):
    """Quadrature did not converge (or the integral diverges)."""


class BoundaryDivergenceError(SlspecError):
    """Boundary-value extrapolation did not converge; the element is not in
    the maximal domain near the endpoint (or the probe is too shallow)."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class InconclusiveError(SlspecError):
    """An endpoint classification needed by the caller is Inconclusive."""


class OscillationError(SlspecError):
    """The equation is oscillatory at the endpoint for the requested lambda."""


class PoleError(SlspecError):
    """Evaluation too close to a pole of a special function or m-function."""


class SeriesError(SlspecError):
    """A series evaluation failed to converge within its term budget."""


class SpectralError(SlspecError):
    """Eigenvalue search or m-function evaluation failed."""
