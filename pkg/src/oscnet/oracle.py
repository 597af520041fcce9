"""Brute-force RK4 integration of the wave equation ``x'' = -L x``.

This is the reference the closed-form propagators are checked against, so it
deliberately uses nothing from :mod:`oscnet.spectral` or :mod:`oscnet.dynamics`
beyond the trajectory container.
"""
from __future__ import annotations

import numpy as np

from . import kernels
from .dynamics import TrajectoryRecord
from .errors import DimensionMismatch, InvalidParams, UnstableStep


def estimate_omega_max(L: np.ndarray, iters: int = 200, seed: int = 0) -> float:
    """Upper estimate of the largest oscillation frequency.

    Power iteration on ``L^T L`` gives the largest singular value of L, which
    bounds every eigenvalue modulus; the frequency is its square root.
    """
    L = np.asarray(L, dtype=float)
    if not np.any(L):
        return 0.0
    M = L.T @ L
    v = np.random.default_rng(seed).standard_normal(L.shape[0])
    sigma2 = 0.0
    for _ in range(iters):
        w = M @ v
        norm = np.linalg.norm(w)
        if norm == 0:
            return 0.0
        v = w / norm
        sigma2 = norm
    # a few percent margin for incomplete convergence
    return float(np.sqrt(np.sqrt(sigma2) * 1.05))


def integrate_wave(L, x0, v0, times, dt_internal: float = 1e-3, omega_max: float | None = None) -> TrajectoryRecord:
    """Integrate from t = 0 and sample at ``times``.

    Each sample interval is split into equal substeps no longer than
    ``dt_internal``. Complex states are integrated as independent real and
    imaginary columns.

    Raises
    ------
    UnstableStep
        If ``dt_internal > 0.1 / omega_max``.
    """
    L = np.ascontiguousarray(L, dtype=float)
    n = L.shape[0]
    x0 = np.asarray(x0, dtype=complex)
    v0 = np.asarray(v0, dtype=complex)
    if L.shape != (n, n) or x0.shape != (n,) or v0.shape != (n,):
        raise DimensionMismatch("L must be n x n and x0, v0 length n")
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if times.size == 0 or times[0] < 0 or np.any(np.diff(times) <= 0):
        raise InvalidParams("times must be nonnegative and strictly increasing")
    if not dt_internal > 0:
        raise InvalidParams("dt_internal must be positive")
    if omega_max is None:
        omega_max = estimate_omega_max(L)
    if omega_max > 0 and dt_internal > 0.1 / omega_max:
        raise UnstableStep(
            f"dt_internal={dt_internal:.3g} exceeds stability bound 0.1/omega_max={0.1 / omega_max:.3g}"
        )

    X = np.ascontiguousarray(np.stack([x0.real, x0.imag], axis=1))
    V = np.ascontiguousarray(np.stack([v0.real, v0.imag], axis=1))
    xs = np.empty((len(times), n), dtype=complex)
    vs = np.empty((len(times), n), dtype=complex)
    t_prev = 0.0
    for k, t in enumerate(times):
        span = t - t_prev
        if span > 0:
            steps = int(np.ceil(span / dt_internal - 1e-9))
            kernels.rk4_advance(L, X, V, span / steps, steps)
        xs[k] = X[:, 0] + 1j * X[:, 1]
        vs[k] = V[:, 0] + 1j * V[:, 1]
        t_prev = t
    return TrajectoryRecord(
        times=times,
        projected=xs,
        velocities=vs,
        meta={
            "solver": "oracle-rk4",
            "backend": kernels.BACKEND,
            "dt_internal": dt_internal,
            "omega_max": omega_max,
        },
    )
