"""Backend selection for the hot RK4 loop.

The compiled extension is used when importable; set ``OSCNET_PURE_PYTHON=1``
to force the NumPy fallback. The compiled loop is a plain O(n^2) matvec, which
loses to BLAS on large graphs, so systems above ``COMPILED_MAX_N`` nodes go
through NumPy either way (see benchmarks/bench_rk4.py).
"""
import os

from . import _rk4_py

COMPILED_MAX_N = 48

_compiled = None
if not os.environ.get("OSCNET_PURE_PYTHON"):
    try:
        from ._rk4 import rk4_advance as _compiled
    except ImportError:
        pass

BACKEND = "cython" if _compiled is not None else "python"


def rk4_advance(L, X, V, h, nsteps):
    """Advance (X, V) in place by ``nsteps`` RK4 steps of ``x'' = -L x``."""
    if _compiled is not None and X.shape[0] <= COMPILED_MAX_N:
        return _compiled(L, X, V, h, nsteps)
    return _rk4_py.rk4_advance(L, X, V, h, nsteps)


__all__ = ["rk4_advance", "BACKEND", "COMPILED_MAX_N"]
