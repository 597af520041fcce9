"""The 2n x 2n Hamiltonian and its 2x2 generator algebra.

Doubled states use the interleaved layout: entries ``2i`` and ``2i+1`` hold
node ``i``'s (+, -) pair, so ``np.kron(M, m)`` puts the 2x2 block ``M[i, j] * m``
at block position (i, j).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import LaplacianBundle
from .spectral import default_pattern_tol

A_HAT = 0.5 * np.array([[1.0, 1.0], [-1.0, -1.0]])
B_HAT = 0.5 * np.array([[1.0, -1.0], [1.0, -1.0]])
E_HAT = np.eye(2)
AB = A_HAT @ B_HAT
BA = B_HAT @ A_HAT
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


def anticommutator(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    return X @ Y + Y @ X


def algebra_checks() -> dict[str, bool]:
    """Exact (bitwise) checks of the generator identities."""
    a, b, e = A_HAT, B_HAT, E_HAT
    zero = np.zeros((2, 2))
    return {
        "anticommutator_ab_is_e": np.array_equal(anticommutator(a, b), e),
        "a_squared_zero": np.array_equal(a @ a, zero),
        "b_squared_zero": np.array_equal(b @ b, zero),
        "aba_is_a": np.array_equal(a @ b @ a, a),
        "bab_is_b": np.array_equal(b @ a @ b, b),
        "ab_idempotent": np.array_equal(AB @ AB, AB),
        "ba_idempotent": np.array_equal(BA @ BA, BA),
    }


def block_pattern(M: np.ndarray, tol: float = 0.0) -> np.ndarray:
    """n x n boolean map of 2x2 blocks of ``M`` with any entry above ``tol``."""
    n = M.shape[0] // 2
    blocks = np.abs(M).reshape(n, 2, n, 2).max(axis=(1, 3))
    return blocks > tol


@dataclass(frozen=True)
class Hamiltonian:
    H_hat: np.ndarray
    block_pattern: np.ndarray
    source_bundle: LaplacianBundle
    form_discrepancy: float

    @property
    def n(self) -> int:
        return self.source_bundle.L.shape[0]


def hamiltonian_from_links(bundle: LaplacianBundle) -> np.ndarray:
    """sqrt(D) (x) sigma_z - (D^-1/2 A) (x) a_hat."""
    return np.kron(bundle.sqrt_D, SIGMA_Z) - np.kron(bundle.inv_sqrt_D @ bundle.A, A_HAT)


def hamiltonian_from_generators(bundle: LaplacianBundle) -> np.ndarray:
    """H (x) a_hat + sqrt(D) (x) b_hat."""
    return np.kron(bundle.H, A_HAT) + np.kron(bundle.sqrt_D, B_HAT)


def build_hamiltonian(bundle: LaplacianBundle) -> Hamiltonian:
    H_hat = hamiltonian_from_links(bundle)
    other = hamiltonian_from_generators(bundle)
    scale = float(np.max(np.abs(H_hat)))
    discrepancy = float(np.max(np.abs(H_hat - other))) / scale
    pattern = block_pattern(H_hat)
    np.fill_diagonal(pattern, True)
    return Hamiltonian(H_hat, pattern, bundle, discrepancy)


def link_pattern(L: np.ndarray) -> np.ndarray:
    """Nonzero pattern of ``L`` with the diagonal forced on."""
    pattern = L != 0
    np.fill_diagonal(pattern, True)
    return pattern


def hamiltonian_power(bundle: LaplacianBundle, k: int) -> np.ndarray:
    """Closed-form ``H_hat**k`` from powers of the n x n Laplacian.

    Even powers ``2m`` give ``D^-1/2 L^m D^1/2 (x) ab + L^m (x) ba``; odd powers
    ``2m+1`` give ``H L^m (x) a + L^m D^1/2 (x) b``.
    """
    if k < 0 or int(k) != k:
        raise ValueError(f"exponent must be a nonnegative integer, got {k}")
    m, odd = divmod(int(k), 2)
    Lm = np.linalg.matrix_power(bundle.L, m)
    d = bundle.degrees
    if odd:
        return np.kron(bundle.H @ Lm, A_HAT) + np.kron(Lm * np.sqrt(d)[None, :], B_HAT)
    conj = Lm * np.sqrt(d)[None, :] / np.sqrt(d)[:, None]
    return np.kron(conj, AB) + np.kron(Lm, BA)


def pauli_check(ham: Hamiltonian, tol: float | None = None) -> dict[str, bool]:
    """Link-structure checks on H_hat and H_hat^2.

    ``square_within_L2`` is the containment of the block pattern of H_hat^2 in
    that of L^2 (plus diagonal); ``square_within_L`` is the stricter reading
    that H_hat^2 adds no link outside L at all.
    """
    L = ham.source_bundle.L
    if tol is None:
        tol = default_pattern_tol(L)
    sq = block_pattern(ham.H_hat @ ham.H_hat, tol)
    L2 = link_pattern(np.where(np.abs(L @ L) > tol, 1.0, 0.0))
    L1 = link_pattern(L)
    return {
        "pattern_equals_L": bool(np.array_equal(ham.block_pattern, L1)),
        "square_within_L2": bool(np.all(~sq | L2)),
        "square_within_L": bool(np.all(~sq | L1)),
    }


def hamiltonian_pattern_matches(ham: Hamiltonian) -> bool:
    return bool(np.array_equal(ham.block_pattern, link_pattern(ham.source_bundle.L)))
