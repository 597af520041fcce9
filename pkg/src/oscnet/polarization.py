"""Symmetry breaking on networks: potential, fragmentation scenario, spring demo."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import TrajectoryRecord, solve_fermionic
from .errors import (
    InvalidB,
    InvalidParams,
    NegativeSqNorm,
    SingularSystem,
    ValidationError,
)
from .graph import (
    WeightedDigraph,
    fragment,
    laplacian_bundle,
    laplacian_matrix,
    weakly_connected_components,
)
from .hamiltonian import build_hamiltonian
from .spectral import SpectralDecomposition, decompose, pattern_matches, sqrt_laplacian


# --- Mexican-hat potential ----------------------------------------------------

@dataclass(frozen=True)
class PotentialParams:
    a: float
    b: float

    def __post_init__(self):
        if not self.b > 0:
            raise InvalidB(f"quartic coefficient must be positive, got b={self.b}")

    @property
    def c0(self) -> float:
        """Offset that puts the minimum of the potential at 0."""
        return self.a * self.a / (4 * self.b) if self.a < 0 else 0.0

    @property
    def broken(self) -> bool:
        return self.a < 0


def potential(params: PotentialParams, sq_norm: float) -> float:
    if sq_norm < 0:
        raise NegativeSqNorm(f"|psi|^2 must be nonnegative, got {sq_norm}")
    return params.a * sq_norm + params.b * sq_norm * sq_norm + params.c0


def ground_state(params: PotentialParams) -> float:
    """Modulus |psi| at the potential minimum: 0, or sqrt(|a| / 2b) when a < 0."""
    if not params.b > 0:
        raise InvalidB(f"quartic coefficient must be positive, got b={params.b}")
    if params.a >= 0:
        return 0.0
    return math.sqrt(abs(params.a) / (2 * params.b))


@dataclass(frozen=True)
class ModeAmplitude:
    psi_plus: complex
    psi_minus: complex

    @property
    def sq_norm(self) -> float:
        return abs(self.psi_plus) ** 2 + abs(self.psi_minus) ** 2


def mode_amplitudes(dec: SpectralDecomposition, x_plus, x_minus) -> list[ModeAmplitude]:
    """Per-mode amplitudes ``(P^-1 x+)_mu, (P^-1 x-)_mu``."""
    cp = dec.P_inv @ np.asarray(x_plus, dtype=complex)
    cm = dec.P_inv @ np.asarray(x_minus, dtype=complex)
    return [ModeAmplitude(complex(p), complex(m)) for p, m in zip(cp, cm)]


# --- bosonic admissibility and zero modes ---------------------------------------

def bosonic_existence(g: WeightedDigraph, pattern_tol: float | None = None, dec=None) -> bool:
    """True iff sqrt(L) adds no interaction between unlinked nodes."""
    if dec is None:
        dec = decompose(laplacian_bundle(g).L)
    return pattern_matches(sqrt_laplacian(dec).S, dec.L, pattern_tol)


def ng_mode_extract(dec: SpectralDecomposition, zero_tol: float | None = None) -> list[np.ndarray]:
    """Unit-norm eigenvectors spanning the kernel of L."""
    tol = dec.zero_tol if zero_tol is None else zero_tol
    idx = np.flatnonzero(np.abs(dec.eigenvalues) <= tol)
    return [dec.P[:, k] / np.linalg.norm(dec.P[:, k]) for k in idx]


def kernel_alignment(modes: list[np.ndarray], components: list[tuple[int, ...]], n: int) -> list[float]:
    """Norm of each normalized component indicator after projecting onto span(modes).

    A value of 1 means the indicator lies in the kernel; the kernel basis may be
    any rotation of the indicators.
    """
    if not modes:
        return [0.0 for _ in components]
    Q, _ = np.linalg.qr(np.column_stack(modes))
    out = []
    for comp in components:
        u = np.zeros(n)
        u[list(comp)] = 1.0 / math.sqrt(len(comp))
        out.append(float(np.linalg.norm(Q.T @ u)))
    return out


# --- scenario ---------------------------------------------------------------------

@dataclass
class ComponentResult:
    nodes: tuple[int, ...]
    bosonic_exists: bool | None
    frequencies: list[float]
    equilibrium: float
    equilibrium_shift: float
    trajectory: TrajectoryRecord | None = None


@dataclass
class PolarizationReport:
    pre_graph: WeightedDigraph
    post_graph: WeightedDigraph
    components: list[tuple[int, ...]]
    cut_edges: list
    zero_modes_pre: int
    zero_modes_post: int
    ng_modes: list[np.ndarray]
    ng_alignment: list[float]
    sqrt_pattern_pre: bool
    sqrt_pattern_post: list[bool | None]
    frequencies_pre: list[float]
    equilibrium_pre: float
    equilibrium_shift: list[float]
    skipped_singletons: list[int]
    phase: dict | None = None
    pre_trajectory: TrajectoryRecord | None = None
    post_trajectories: list[TrajectoryRecord | None] = field(default_factory=list)
    component_results: list[ComponentResult] = field(default_factory=list)

    def to_dict(self) -> dict:
        def flt(xs):
            return [float(x) for x in xs]

        return {
            "pre_graph": self.pre_graph.to_dict(),
            "post_graph": self.post_graph.to_dict(),
            "components": [list(c) for c in self.components],
            "cut_edges": [list(e) for e in self.cut_edges],
            "zero_modes_pre": self.zero_modes_pre,
            "zero_modes_post": self.zero_modes_post,
            "ng_modes": [flt(v) for v in self.ng_modes],
            "ng_alignment": flt(self.ng_alignment),
            "sqrt_pattern_pre": self.sqrt_pattern_pre,
            "sqrt_pattern_post": self.sqrt_pattern_post,
            "bosonic_existence_pre": self.sqrt_pattern_pre,
            "bosonic_existence_post": self.sqrt_pattern_post,
            "frequencies_pre": flt(self.frequencies_pre),
            "frequencies_post": [flt(c.frequencies) for c in self.component_results],
            "equilibrium_pre": float(self.equilibrium_pre),
            "equilibrium_shift": flt(self.equilibrium_shift),
            "skipped_singletons": self.skipped_singletons,
            "phase": self.phase,
        }


def _invariant_mean(dec: SpectralDecomposition, x: np.ndarray) -> float:
    """Rest level of a connected graph's wave dynamics: the conserved
    left-kernel average of the projected state (plain mean for symmetric L)."""
    row = dec.P_inv[dec.zero_modes[0]]
    return float((row @ x).real / row.sum())


def run_polarization_scenario(
    g: WeightedDigraph,
    threshold: float,
    clique_weight: float,
    x_hat_0,
    times,
    potential_params: PotentialParams | None = None,
    pattern_tol: float | None = None,
) -> PolarizationReport:
    """Solve before the split, fragment and complete, then solve each component.

    Singleton components are reported but get no dynamics.
    """
    if len(weakly_connected_components(g)) != 1:
        raise ValidationError("pre-split graph must be connected")
    x_hat_0 = np.asarray(x_hat_0, dtype=complex)
    if x_hat_0.shape != (2 * g.n,):
        raise InvalidParams(f"initial state must have length {2 * g.n}")

    bundle = laplacian_bundle(g)
    dec = decompose(bundle.L)
    ham = build_hamiltonian(bundle)
    pre_traj = solve_fermionic(ham, dec, x_hat_0, times)
    x0 = x_hat_0[0::2] + x_hat_0[1::2]
    eq_pre = _invariant_mean(dec, x0)

    frag = fragment(g, threshold, clique_weight)
    post = frag.completed_graph
    post_dec = decompose(laplacian_matrix(post))
    modes = ng_mode_extract(post_dec)

    results = []
    for comp in frag.components:
        nodes = list(comp)
        mean = float(np.mean(x0[nodes]).real)
        if len(comp) == 1:
            results.append(ComponentResult(comp, None, [0.0], mean, mean - eq_pre))
            continue
        sub = post.subgraph(nodes)
        sub_bundle = laplacian_bundle(sub)
        sub_dec = decompose(sub_bundle.L)
        idx = np.ravel([[2 * i, 2 * i + 1] for i in nodes])
        traj = solve_fermionic(build_hamiltonian(sub_bundle), sub_dec, x_hat_0[idx], times)
        results.append(
            ComponentResult(
                nodes=comp,
                bosonic_exists=bosonic_existence(sub, pattern_tol, dec=sub_dec),
                frequencies=list(sub_dec.omegas),
                equilibrium=mean,
                equilibrium_shift=mean - eq_pre,
                trajectory=traj,
            )
        )

    phase = None
    if potential_params is not None:
        phase = {
            "a": potential_params.a,
            "b": potential_params.b,
            "broken": potential_params.broken,
            "ground_state": ground_state(potential_params),
        }
    return PolarizationReport(
        pre_graph=g,
        post_graph=post,
        components=frag.components,
        cut_edges=frag.cut_edges,
        zero_modes_pre=dec.zero_mode_count,
        zero_modes_post=post_dec.zero_mode_count,
        ng_modes=modes,
        ng_alignment=kernel_alignment(modes, frag.components, g.n),
        sqrt_pattern_pre=bosonic_existence(g, pattern_tol, dec=dec),
        sqrt_pattern_post=[r.bosonic_exists for r in results],
        frequencies_pre=list(dec.omegas),
        equilibrium_pre=eq_pre,
        equilibrium_shift=[r.equilibrium_shift for r in results],
        skipped_singletons=list(frag.singletons),
        phase=phase,
        pre_trajectory=pre_traj,
        post_trajectories=[r.trajectory for r in results],
        component_results=results,
    )


# --- spring chain -------------------------------------------------------------------

@dataclass(frozen=True)
class SpringChain:
    """Masses on a line between walls at 0 and ``wall_gap``.

    ``spring_constants`` and ``natural_lengths`` describe the n - 1 links
    between neighbouring masses; each end mass is tied to its wall by a spring
    of stiffness ``wall_stiffness`` and rest length ``wall_length``.
    """

    n: int
    spring_constants: tuple[float, ...]
    natural_lengths: tuple[float, ...]
    wall_stiffness: float = 1.0
    wall_gap: float = 1.0
    wall_length: float = 1.0

    def __post_init__(self):
        if self.n < 2:
            raise InvalidParams("spring chain needs at least two masses")
        if len(self.spring_constants) != self.n - 1 or len(self.natural_lengths) != self.n - 1:
            raise InvalidParams("need n - 1 link stiffnesses and natural lengths")
        if min(self.spring_constants) <= 0 or self.wall_stiffness <= 0:
            raise InvalidParams("all stiffnesses must be positive")
        if min(self.natural_lengths) <= 0 or self.wall_length <= 0:
            raise InvalidParams("natural lengths must be positive")
        if self.wall_gap <= 0:
            raise InvalidParams("wall gap must be positive")

    @classmethod
    def uniform(cls, n, k=1.0, length=1.0, wall_gap=None, wall_stiffness=1.0, wall_length=None):
        wall_length = length if wall_length is None else wall_length
        if wall_gap is None:
            wall_gap = (n - 1) * length + 2 * wall_length
        return cls(n, (k,) * (n - 1), (length,) * (n - 1), wall_stiffness, wall_gap, wall_length)


@dataclass(frozen=True)
class SpringEquilibrium:
    positions: np.ndarray
    uncut_positions: np.ndarray
    segments: list[tuple[int, ...]]
    mean_displacement: list[float]


def _solve_segment(k_links, l_links, masses, left_anchor, right_anchor, chain):
    """Force balance for consecutive masses; anchors are (wall position, sign) or None."""
    m = len(masses)
    K = np.zeros((m, m))
    f = np.zeros(m)
    for a in range(m - 1):
        k, ell = k_links[masses[a]], l_links[masses[a]]
        K[a, a] += k
        K[a + 1, a + 1] += k
        K[a, a + 1] -= k
        K[a + 1, a] -= k
        f[a] -= k * ell
        f[a + 1] += k * ell
    kw, lw = chain.wall_stiffness, chain.wall_length
    if left_anchor:
        K[0, 0] += kw
        f[0] += kw * lw
    if right_anchor:
        K[-1, -1] += kw
        f[-1] += kw * (chain.wall_gap - lw)
    if np.linalg.matrix_rank(K) < m:
        raise SingularSystem("segment is not anchored to any wall")
    return np.linalg.solve(K, f)


def spring_equilibrium(chain: SpringChain, cut_after: int | None = None) -> SpringEquilibrium:
    """Equilibrium positions, optionally after removing link ``cut_after``.

    Link ``k`` joins masses ``k`` and ``k + 1``; after a cut the left segment
    hangs on the left wall and the right segment on the right wall.
    """
    ks, ls = chain.spring_constants, chain.natural_lengths
    masses = list(range(chain.n))
    uncut = _solve_segment(ks, ls, masses, True, True, chain)
    if cut_after is None:
        return SpringEquilibrium(uncut, uncut, [tuple(masses)], [0.0])
    if not 0 <= cut_after < chain.n - 1:
        raise InvalidParams(f"cut index must be in [0, {chain.n - 2}], got {cut_after}")
    left = masses[: cut_after + 1]
    right = masses[cut_after + 1:]
    pos = np.concatenate(
        [
            _solve_segment(ks, ls, left, True, False, chain),
            _solve_segment(ks, ls, right, False, True, chain),
        ]
    )
    shift = pos - uncut
    return SpringEquilibrium(
        positions=pos,
        uncut_positions=uncut,
        segments=[tuple(left), tuple(right)],
        mean_displacement=[float(shift[left].mean()), float(shift[right].mean())],
    )
