"""Kernel backend selection.

The hot loops (skip-count dynamic programs, subspace satisfaction
sweeps, encoder-table scans) are written once as plain Python over
numpy arrays and wrapped with ``numba.njit`` when available.  Set
``PLIC_BACKEND=python`` to force the interpreted fallback, or
``PLIC_BACKEND=numba`` to insist on compilation.
"""

from __future__ import annotations

import os
import warnings

ENV_VAR = "PLIC_BACKEND"


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def _resolve() -> str:
    value = os.environ.get(ENV_VAR, "auto").strip().lower()
    if value in ("", "auto"):
        return "numba" if _numba_available() else "python"
    if value == "python":
        return "python"
    if value == "numba":
        if _numba_available():
            return "numba"
        warnings.warn(
            f"{ENV_VAR}=numba requested but numba is not importable; "
            "falling back to the python backend",
            stacklevel=2,
        )
        return "python"
    raise ValueError(f"{ENV_VAR} must be 'numba', 'python', or 'auto', got {value!r}")


BACKEND = _resolve()


def jit_kernel(fn):
    """Compile ``fn`` under the numba backend; return it unchanged otherwise."""
    if BACKEND == "numba":
        from numba import njit

        return njit(cache=True)(fn)
    return fn
