# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 stepper for x'' = -L x on a block of real columns."""
import numpy as np


cdef inline void _accel(const double[:, ::1] L, double[:, ::1] X, double[:, ::1] out,
                        Py_ssize_t n, Py_ssize_t m) noexcept nogil:
    cdef Py_ssize_t i, j, c
    cdef double lij
    for i in range(n):
        for c in range(m):
            out[i, c] = 0.0
        for j in range(n):
            lij = L[i, j]
            if lij != 0.0:
                for c in range(m):
                    out[i, c] -= lij * X[j, c]


def rk4_advance(const double[:, ::1] L, double[:, ::1] X, double[:, ::1] V,
                double h, Py_ssize_t nsteps):
    """Advance (X, V) in place by ``nsteps`` RK4 steps of size ``h``."""
    cdef Py_ssize_t n = X.shape[0], m = X.shape[1]
    cdef Py_ssize_t s, i, c
    cdef double h2 = 0.5 * h, h6 = h / 6.0
    cdef double[:, ::1] tmp = np.empty((n, m))
    cdef double[:, ::1] a1 = np.empty((n, m))
    cdef double[:, ::1] a2 = np.empty((n, m))
    cdef double[:, ::1] a3 = np.empty((n, m))
    cdef double[:, ::1] a4 = np.empty((n, m))
    cdef double k2x, k3x, k4x
    with nogil:
        for s in range(nsteps):
            _accel(L, X, a1, n, m)
            for i in range(n):
                for c in range(m):
                    tmp[i, c] = X[i, c] + h2 * V[i, c]
            _accel(L, tmp, a2, n, m)
            for i in range(n):
                for c in range(m):
                    tmp[i, c] = X[i, c] + h2 * (V[i, c] + h2 * a1[i, c])
            _accel(L, tmp, a3, n, m)
            for i in range(n):
                for c in range(m):
                    tmp[i, c] = X[i, c] + h * (V[i, c] + h2 * a2[i, c])
            _accel(L, tmp, a4, n, m)
            for i in range(n):
                for c in range(m):
                    k2x = V[i, c] + h2 * a1[i, c]
                    k3x = V[i, c] + h2 * a2[i, c]
                    k4x = V[i, c] + h * a3[i, c]
                    X[i, c] += h6 * (V[i, c] + 2.0 * k2x + 2.0 * k3x + k4x)
                    V[i, c] += h6 * (a1[i, c] + 2.0 * a2[i, c] + 2.0 * a3[i, c] + a4[i, c])
