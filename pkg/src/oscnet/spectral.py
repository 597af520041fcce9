"""Eigendecomposition of graph Laplacians and the principal square root.

Only real, nonnegative, diagonalizable spectra are accepted; the frequency
matrices built here (``Omega = sqrt(Lambda)`` and its pseudo-inverse ``Mho``)
have no meaning otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ComplexSpectrum,
    DimensionMismatch,
    NegativeEigenvalue,
    NotDiagonalizable,
)


def _maxabs(M: np.ndarray) -> float:
    return float(np.max(np.abs(M))) if M.size else 0.0


def _scaled(rel: float, M: np.ndarray, floor: float = 1e-12) -> float:
    norm = _maxabs(M)
    return rel * norm if norm > 0 else floor


@dataclass(frozen=True)
class SpectralDecomposition:
    L: np.ndarray
    P: np.ndarray
    P_inv: np.ndarray
    eigenvalues: np.ndarray
    zero_tol: float
    condition: float
    reconstruction_error: float
    orthogonal: bool

    @property
    def n(self) -> int:
        return self.L.shape[0]

    @property
    def omegas(self) -> np.ndarray:
        return np.sqrt(self.eigenvalues)

    @property
    def inv_omegas(self) -> np.ndarray:
        """Diagonal of Mho: 1/omega, with 0 in every zero-mode slot."""
        w = self.omegas
        out = np.zeros_like(w)
        nz = w > 0
        out[nz] = 1.0 / w[nz]
        return out

    @property
    def Lambda(self) -> np.ndarray:
        return np.diag(self.eigenvalues)

    @property
    def Omega(self) -> np.ndarray:
        return np.diag(self.omegas)

    @property
    def Mho(self) -> np.ndarray:
        return np.diag(self.inv_omegas)

    @property
    def zero_modes(self) -> np.ndarray:
        """Indices of eigenvalues clamped to zero."""
        return np.flatnonzero(self.eigenvalues == 0.0)

    @property
    def zero_mode_count(self) -> int:
        return int(self.zero_modes.size)

    def zero_mode_projector(self) -> np.ndarray:
        """Spectral projector onto the kernel, ``P E0 P^-1``."""
        idx = self.zero_modes
        return self.P[:, idx] @ self.P_inv[idx, :]

    def function(self, values: np.ndarray) -> np.ndarray:
        """``P diag(values) P^-1`` for a per-mode weight vector."""
        return (self.P * values[None, :]) @ self.P_inv


def _real_eigvecs(V: np.ndarray) -> np.ndarray:
    # rotate each column so its largest entry is real, then drop the imaginary part
    if not np.iscomplexobj(V):
        return V
    k = np.argmax(np.abs(V), axis=0)
    pivot = V[k, np.arange(V.shape[1])]
    phase = np.conj(pivot) / np.abs(pivot)
    return (V * phase[None, :]).real


def decompose(
    L: np.ndarray,
    zero_tol: float | None = None,
    complex_tol: float | None = None,
    cond_max: float = 1e12,
    tol_reconstruct: float | None = None,
) -> SpectralDecomposition:
    """Diagonalize ``L = P Lambda P^-1`` with eigenvalues sorted ascending.

    Symmetric inputs go through ``eigh`` and yield an orthogonal ``P``.
    Eigenvalues within ``zero_tol`` of zero are set to exactly zero.

    Raises
    ------
    ComplexSpectrum, NotDiagonalizable, NegativeEigenvalue
    """
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise DimensionMismatch(f"Laplacian must be square, got shape {L.shape}")
    n = L.shape[0]
    if zero_tol is None:
        zero_tol = _scaled(1e-9, L)
    if complex_tol is None:
        complex_tol = _scaled(1e-9, L)
    if tol_reconstruct is None:
        tol_reconstruct = _scaled(1e-8 * n, L)

    symmetric = np.array_equal(L, L.T)
    if symmetric:
        lam, P = np.linalg.eigh(L)
        P_inv = P.T.copy()
        cond = 1.0
    else:
        lam_c, V = np.linalg.eig(L)
        worst = float(np.max(np.abs(lam_c.imag)))
        if worst > complex_tol:
            raise ComplexSpectrum(
                f"eigenvalue with imaginary part {worst:.3g} exceeds complex_tol {complex_tol:.3g}"
            )
        lam = lam_c.real
        P = _real_eigvecs(V)
        P = P / np.linalg.norm(P, axis=0)[None, :]
        cond = float(np.linalg.cond(P))
        if not np.isfinite(cond) or cond > cond_max:
            raise NotDiagonalizable(f"eigenvector condition number {cond:.3g} exceeds {cond_max:.3g}")
        P_inv = np.linalg.inv(P)

    order = np.argsort(lam, kind="stable")
    lam = lam[order].copy()
    P = P[:, order]
    P_inv = P_inv[order, :]

    if lam.size and lam[0] < -zero_tol:
        raise NegativeEigenvalue(f"eigenvalue {lam[0]:.6g} below -zero_tol {-zero_tol:.3g}")
    lam[np.abs(lam) <= zero_tol] = 0.0

    err = _maxabs((P * lam[None, :]) @ P_inv - L)
    if err > tol_reconstruct:
        raise NotDiagonalizable(
            f"reconstruction error {err:.3g} exceeds tol_reconstruct {tol_reconstruct:.3g}"
        )
    return SpectralDecomposition(
        L=L,
        P=P,
        P_inv=P_inv,
        eigenvalues=lam,
        zero_tol=float(zero_tol),
        condition=cond,
        reconstruction_error=err,
        orthogonal=symmetric,
    )


def default_pattern_tol(L: np.ndarray) -> float:
    return _scaled(1e-8, L)


def pattern_matches(M: np.ndarray, L: np.ndarray, pattern_tol: float | None = None) -> bool:
    """True iff every off-diagonal structural zero of ``L`` is also a zero of ``M``."""
    M = np.asarray(M)
    L = np.asarray(L)
    if M.shape != L.shape or M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"shapes {M.shape} and {L.shape} differ or are not square")
    if pattern_tol is None:
        pattern_tol = default_pattern_tol(L)
    offdiag = ~np.eye(L.shape[0], dtype=bool)
    holes = offdiag & (np.abs(L) <= pattern_tol)
    return bool(np.all(np.abs(M[holes]) <= pattern_tol))


@dataclass(frozen=True)
class SqrtLaplacian:
    S: np.ndarray
    pattern_dense: bool
    pattern_tol: float


def sqrt_laplacian(dec: SpectralDecomposition, pattern_tol: float | None = None) -> SqrtLaplacian:
    """Principal square root ``P Omega P^-1``; flags links absent from L."""
    S = dec.function(dec.omegas)
    if pattern_tol is None:
        pattern_tol = default_pattern_tol(dec.L)
    return SqrtLaplacian(
        S=S,
        pattern_dense=not pattern_matches(S, dec.L, pattern_tol),
        pattern_tol=pattern_tol,
    )
