"""Kernel backend selection.

Imports the compiled extension when present, otherwise the numpy fallback.
Set ``NHLS_PURE_PYTHON=1`` to force the fallback (used by the benchmark and
by tests that compare the two implementations).
"""
from __future__ import annotations

import os

if os.environ.get("NHLS_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

matvec_banded = _impl.matvec_banded
rk4_evolve = _impl.rk4_evolve
BACKEND: str = _impl.BACKEND


def backend_name() -> str:
    return BACKEND
