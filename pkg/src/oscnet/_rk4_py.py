"""NumPy RK4 stepper, used when the compiled extension is unavailable."""
import numpy as np


def rk4_advance(L, X, V, h, nsteps):
    """Advance (X, V) in place by ``nsteps`` RK4 steps of size ``h``."""
    h2 = 0.5 * h
    h6 = h / 6.0
    negL = -np.asarray(L)
    x = X.copy()
    v = V.copy()
    for _ in range(int(nsteps)):
        a1 = negL @ x
        a2 = negL @ (x + h2 * v)
        k2x = v + h2 * a1
        a3 = negL @ (x + h2 * k2x)
        k3x = v + h2 * a2
        a4 = negL @ (x + h * k3x)
        k4x = v + h * a3
        x = x + h6 * (v + 2.0 * k2x + 2.0 * k3x + k4x)
        v = v + h6 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
    X[...] = x
    V[...] = v
