"""Kernel backend selection.

The recurrent forward/backward passes and planning rollouts are written once
in numba-compatible numpy and jitted at import time. Set ``AEPLAN_BACKEND=numpy``
to force the pure-numpy fallback, ``=numba`` to require the jitted path
(raises if numba is missing). The default ``auto`` uses numba when importable.
"""

import os
import warnings

ENV_VAR = "AEPLAN_BACKEND"


def _resolve() -> str:
    choice = os.environ.get(ENV_VAR, "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(f"{ENV_VAR} must be 'auto', 'numba' or 'numpy', got {choice!r}")
    if choice == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if choice == "numba":
            raise
        warnings.warn("numba not importable; falling back to pure-numpy kernels")
        return "numpy"
    return "numba"


BACKEND = _resolve()


def jit_kernel(fn):
    """Compile a hot kernel with numba, or return it unchanged on the numpy backend."""
    if BACKEND == "numba":
        import numba

        return numba.njit(cache=True)(fn)
    return fn


def plain(fn):
    """The un-jitted python implementation of a kernel (same object on the numpy backend)."""
    return getattr(fn, "py_func", fn)
