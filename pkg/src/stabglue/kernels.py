"""GF(p) kernel selection: the compiled extension when built, else pure Python.

Set STABGLUE_PURE=1 to force the fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
if os.environ.get("STABGLUE_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _gfkernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
else:
    _impl = _kernels_py

rref_mod_p = _impl.rref_mod_p
enumerate_subobjects = _impl.enumerate_subobjects
contains = _impl.contains
BudgetExceeded = _kernels_py.BudgetExceeded

__all__ = ["BACKEND", "rref_mod_p", "enumerate_subobjects", "contains", "BudgetExceeded"]
