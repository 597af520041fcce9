"""Closed-form propagators for the first-order fundamental equations.

Two solutions are provided:

* ``solve_fermionic`` evaluates ``exp(-i H_hat t) x_hat(0)`` through the
  four-term cos/sin expansion in the Laplacian eigenbasis. The zero modes are
  handled with ``Mho`` (0 in the kernel slots), so the expansion carries no
  linear-in-t drift; initial states whose zero-mode velocity vanishes (see
  :func:`remove_zero_mode_velocity`) are propagated exactly.
* ``solve_bosonic`` evaluates ``x+-(t) = P exp(-+i Omega t) P^-1 x+-(0)``.

Every sample time is evaluated independently from the initial state.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvalidParams, Unsupported
from .hamiltonian import A_HAT, AB, B_HAT, BA, Hamiltonian
from .spectral import SpectralDecomposition, sqrt_laplacian


@dataclass
class TrajectoryRecord:
    """Time samples of a solution.

    ``states`` holds doubled states (T x 2n, complex) for the closed-form
    solvers and is ``None`` for the wave-equation oracle, which fills
    ``velocities`` instead. ``projected`` is always the T x n node signal.
    """

    times: np.ndarray
    projected: np.ndarray
    states: np.ndarray | None = None
    velocities: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.projected) != len(self.times):
            raise DimensionMismatch("states and times differ in length")

    def plus(self) -> np.ndarray:
        return self.states[:, 0::2]

    def minus(self) -> np.ndarray:
        return self.states[:, 1::2]


def time_grid(t_max: float, dt: float) -> np.ndarray:
    """Uniform grid ``0, dt, 2 dt, ...`` up to ``t_max`` (inclusive within rounding)."""
    if not dt > 0 or t_max < 0:
        raise InvalidParams(f"need dt > 0 and t_max >= 0, got dt={dt}, t_max={t_max}")
    steps = int(np.floor(t_max / dt + 1e-9))
    return dt * np.arange(steps + 1)


def _check_times(times) -> np.ndarray:
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if times.ndim != 1 or times.size == 0:
        raise InvalidParams("times must be a nonempty 1-D grid")
    if np.any(times < 0) or np.any(np.diff(times) <= 0):
        raise InvalidParams("times must be nonnegative and strictly increasing")
    return times


def interleave(x_plus, x_minus) -> np.ndarray:
    x_plus = np.asarray(x_plus, dtype=complex)
    x_minus = np.asarray(x_minus, dtype=complex)
    if x_plus.shape != x_minus.shape:
        raise DimensionMismatch("x+ and x- must have the same shape")
    out = np.empty(x_plus.shape[:-1] + (2 * x_plus.shape[-1],), dtype=complex)
    out[..., 0::2] = x_plus
    out[..., 1::2] = x_minus
    return out


def project(x_hat) -> np.ndarray:
    """``(I (x) (1, 1)) x_hat``: sum each node's (+, -) pair. Works on stacks."""
    x_hat = np.asarray(x_hat)
    if x_hat.shape[-1] % 2:
        raise DimensionMismatch("doubled state must have even length")
    return x_hat[..., 0::2] + x_hat[..., 1::2]


def initial_velocity(ham: Hamiltonian, x_hat_0) -> np.ndarray:
    """Velocity of the projected signal at t = 0: ``project(-i H_hat x_hat(0))``."""
    return project(-1j * (ham.H_hat @ np.asarray(x_hat_0, dtype=complex)))


def remove_zero_mode_velocity(ham: Hamiltonian, dec: SpectralDecomposition, x_hat_0) -> np.ndarray:
    """Adjust the minus branch so the projected initial velocity has no kernel component.

    The projected velocity is ``-i sqrt(D) (x+ - x-)``; its kernel part is
    removed by shifting ``x-``. The position ``project(x_hat)`` changes too,
    but no zero-mode drift is left for the closed form to miss.
    """
    x = np.asarray(x_hat_0, dtype=complex)
    xp, xm = x[0::2], x[1::2]
    sd = np.sqrt(ham.source_bundle.degrees)
    w = sd * (xp - xm)
    w = w - dec.zero_mode_projector() @ w
    return interleave(xp, xp - w / sd)


def zero_mode_velocity(ham: Hamiltonian, dec: SpectralDecomposition, x_hat_0) -> float:
    """Size of the kernel component of the projected initial velocity."""
    v = initial_velocity(ham, x_hat_0)
    return float(np.max(np.abs(dec.zero_mode_projector() @ v), initial=0.0))


def _meta(solver, graph, **extra) -> dict:
    meta = {"solver": solver}
    if graph is not None:
        meta["graph_hash"] = graph.digest()
    meta.update(extra)
    return meta


def solve_fermionic(ham: Hamiltonian, dec: SpectralDecomposition, x_hat_0, times) -> TrajectoryRecord:
    times = _check_times(times)
    n = ham.n
    X0 = np.asarray(x_hat_0, dtype=complex)
    if X0.shape != (2 * n,):
        raise DimensionMismatch(f"x_hat(0) must have length {2 * n}, got {X0.shape}")
    if not np.all(np.isfinite(X0)):
        raise InvalidParams("x_hat(0) must be finite")
    X0 = X0.reshape(n, 2)
    sd = np.sqrt(ham.source_bundle.degrees)
    P, Pi = dec.P, dec.P_inv
    # (M (x) m) x_hat == M X m^T in the (n, 2) view
    c_ab = Pi @ (sd[:, None] * X0 @ AB.T)
    c_ba = Pi @ (X0 @ BA.T)
    c_a = Pi @ (X0 @ A_HAT.T)
    c_b = Pi @ (sd[:, None] * X0 @ B_HAT.T)

    w = dec.omegas
    wt = np.outer(times, w)
    cos, sin = np.cos(wt), np.sin(wt)
    scaled = (
        np.einsum("im,tm,mc->tic", P, cos, c_ab)
        - 1j * np.einsum("im,tm,mc->tic", P, w * sin, c_a)
    ) / sd[None, :, None]
    plain = np.einsum("im,tm,mc->tic", P, cos, c_ba) - 1j * np.einsum(
        "im,tm,mc->tic", P, dec.inv_omegas * sin, c_b
    )
    states = (scaled + plain).reshape(len(times), 2 * n)
    return TrajectoryRecord(
        times=times,
        projected=project(states),
        states=states,
        meta=_meta("fermionic", ham.source_bundle.graph),
    )


def solve_bosonic(dec: SpectralDecomposition, x_plus_0, x_minus_0, times, graph=None) -> TrajectoryRecord:
    times = _check_times(times)
    xp = np.asarray(x_plus_0, dtype=complex)
    xm = np.asarray(x_minus_0, dtype=complex)
    if xp.shape != (dec.n,) or xm.shape != (dec.n,):
        raise DimensionMismatch(f"branch states must have length {dec.n}")
    phase = np.exp(-1j * np.outer(times, dec.omegas))
    cp = dec.P_inv @ xp
    cm = dec.P_inv @ xm
    plus = (phase * cp[None, :]) @ dec.P.T
    minus = (np.conj(phase) * cm[None, :]) @ dec.P.T
    states = interleave(plus, minus)
    return TrajectoryRecord(
        times=times,
        projected=plus + minus,
        states=states,
        meta=_meta("bosonic", graph),
    )


def fundamental_residual(dec: SpectralDecomposition, trajectory: TrajectoryRecord, branch: str = "plus") -> float:
    """Max relative residual of ``+-i dx/dt = sqrt(L) x`` using central differences."""
    if branch not in ("plus", "minus"):
        raise InvalidParams(f"branch must be 'plus' or 'minus', got {branch!r}")
    x = trajectory.plus() if branch == "plus" else trajectory.minus()
    t = trajectory.times
    if len(t) < 3:
        raise InvalidParams("residual needs at least three samples")
    sign = 1.0 if branch == "plus" else -1.0
    S = sqrt_laplacian(dec).S
    deriv = (x[2:] - x[:-2]) / (t[2:] - t[:-2])[:, None]
    mid = x[1:-1]
    num = np.linalg.norm(sign * 1j * deriv - mid @ S.T, axis=1)
    den = np.linalg.norm(mid, axis=1)
    ratio = np.where(den > 0, num / np.where(den > 0, den, 1.0), num)
    return float(ratio.max())


def total_energy(L: np.ndarray, x, v) -> float:
    """``1/2 |v|^2 + 1/2 Re(x^H L x)``; real and imaginary parts add independently."""
    L = np.asarray(L)
    if not np.allclose(L, L.T, rtol=0, atol=1e-12 * max(np.max(np.abs(L)), 1.0)):
        raise Unsupported("energy is only defined here for symmetric Laplacians")
    x = np.asarray(x)
    v = np.asarray(v)
    return float(0.5 * np.vdot(v, v).real + 0.5 * np.vdot(x, L @ x).real)


# --- export ---------------------------------------------------------------

def trajectory_csv(traj: TrajectoryRecord) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    n = traj.projected.shape[1]
    header = ["t"]
    for i in range(n):
        header += [f"re(x_{i})", f"im(x_{i})"]
    writer.writerow(header)
    for t, row in zip(traj.times, np.asarray(traj.projected, dtype=complex)):
        out = [repr(float(t))]
        for z in row:
            out += [repr(float(z.real)), repr(float(z.imag))]
        writer.writerow(out)
    return buf.getvalue()


def parse_trajectory_csv(text: str) -> tuple[np.ndarray, np.ndarray]:
    rows = list(csv.reader(io.StringIO(text)))
    data = np.array([[float(v) for v in r] for r in rows[1:]])
    if data.size == 0:
        return np.empty(0), np.empty((0, (len(rows[0]) - 1) // 2), dtype=complex)
    return data[:, 0], data[:, 1::2] + 1j * data[:, 2::2]


def trajectory_json(traj: TrajectoryRecord) -> str:
    z = np.asarray(traj.projected, dtype=complex)
    payload = {
        "meta": traj.meta,
        "times": [float(t) for t in traj.times],
        "projected": [[[float(c.real), float(c.imag)] for c in row] for row in z],
    }
    return json.dumps(payload, sort_keys=True) + "\n"


def parse_trajectory_json(text: str) -> tuple[dict, np.ndarray, np.ndarray]:
    payload = json.loads(text)
    proj = np.array(payload["projected"], dtype=float)
    z = proj[..., 0] + 1j * proj[..., 1] if proj.size else np.empty((0, 0), dtype=complex)
    return payload["meta"], np.array(payload["times"]), z
