"""Pick the compiled kernels when importable, else the numpy fallback.

Set ``KERRQD_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

kernels = _kernels_py
if not os.environ.get("KERRQD_PURE_PYTHON"):
    try:
        from . import _kernels as kernels  # noqa: F811
    except ImportError:
        pass

BACKEND = kernels.BACKEND
wigner_points = kernels.wigner_points
hermite_functions = kernels.hermite_functions
