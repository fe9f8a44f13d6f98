"""Kernel dispatch.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``FUZZYOLS_PURE_PYTHON`` is set to a non-empty value, the
NumPy implementations are used. ``BACKEND`` names the active one.
"""
import os

from . import _kernels_py

STOP_VARIANCE = _kernels_py.STOP_VARIANCE
STOP_MAX_RULES = _kernels_py.STOP_MAX_RULES
STOP_EXHAUSTED = _kernels_py.STOP_EXHAUSTED
STOP_RANK = _kernels_py.STOP_RANK

_compiled = None
if not os.environ.get("FUZZYOLS_PURE_PYTHON"):
    try:
        from . import _kernels_cy as _compiled
    except ImportError:
        _compiled = None

_impl = _compiled if _compiled is not None else _kernels_py
BACKEND = "cython" if _compiled is not None else "python"

kmeans_lloyd = _impl.kmeans_lloyd
mgs_select = _impl.mgs_select
fired_premises = _impl.fired_premises


def available_backends():
    """Mapping of backend name to kernel module, compiled first when present."""
    out = {}
    if _compiled is not None:
        out["cython"] = _compiled
    elif not os.environ.get("FUZZYOLS_PURE_PYTHON"):
        try:
            from . import _kernels_cy
        except ImportError:
            pass
        else:
            out["cython"] = _kernels_cy
    out["python"] = _kernels_py
    return out
