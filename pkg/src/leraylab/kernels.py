"""Dispatch to the compiled kernels when available, else the numpy versions.

Set ``LERAYLAB_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
thomas_batched = _kernels_py.thomas_batched
log_mean_powers = _kernels_py.log_mean_powers
muscl_tendency = _kernels_py.muscl_tendency

if not os.environ.get("LERAYLAB_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        thomas_batched = _compiled.thomas_batched
        log_mean_powers = _compiled.log_mean_powers
        muscl_tendency = _compiled.muscl_tendency

FORM_ONE_PLUS_ABS = _kernels_py.FORM_ONE_PLUS_ABS
FORM_ONE_PLUS_SQ_HALF = _kernels_py.FORM_ONE_PLUS_SQ_HALF

__all__ = ["BACKEND", "thomas_batched", "log_mean_powers", "muscl_tendency"]
