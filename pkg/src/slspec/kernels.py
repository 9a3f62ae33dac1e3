"""Kernel backend selection.

The compiled Cython kernel is used when it was built; setting the
environment variable SLSPEC_PURE_PYTHON to a nonempty value forces the
pure-Python twin.  Both backends expose the same `integrate_kernel`.
"""

from __future__ import annotations

import os

from . import _kernel_py

if os.environ.get("SLSPEC_PURE_PYTHON"):
    _backend = _kernel_py
else:
    try:
        from . import _kernel_cy as _backend  # type: ignore[no-redef]
    except ImportError:
        _backend = _kernel_py

BACKEND_NAME = _backend.BACKEND_NAME
integrate_kernel = _backend.integrate_kernel

OK = _kernel_py.OK
MAX_STEPS = _kernel_py.MAX_STEPS
STEP_UNDERFLOW = _kernel_py.STEP_UNDERFLOW
BAD_COEFFICIENT = _kernel_py.BAD_COEFFICIENT
OVERFLOW = _kernel_py.OVERFLOW


def backend_for(name: str):
    """Return a specific backend module ('python' or 'cython'); used by the
    equivalence tests and the benchmark."""
    if name == "python":
        return _kernel_py
    if name == "cython":
        from . import _kernel_cy

        return _kernel_cy
    raise ValueError(f"unknown kernel backend {name!r}")
