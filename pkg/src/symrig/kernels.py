"""Kernel selection: compiled extension when built, pure Python otherwise.

Set ``SYMRIG_PURE_PYTHON=1`` to force the fallback (used by the benchmark
and by the parity tests).
"""

import os

from . import _kernels_py

BACKEND = "python"
first_violator = _kernels_py.first_violator

if not os.environ.get("SYMRIG_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        BACKEND = "compiled"
        first_violator = _compiled.first_violator

__all__ = ["BACKEND", "first_violator"]
