"""Spectral oscillation dynamics on weighted digraphs and a polarization model
built on graph fragmentation."""
from .errors import (
    ComplexSpectrum,
    NegativeEigenvalue,
    NotDiagonalizable,
    NumericalError,
    OscnetError,
    SolverInapplicable,
    UnstableStep,
    ValidationError,
    ZeroOutDegree,
)
from .graph import (
    FragmentationResult,
    LaplacianBundle,
    WeightedDigraph,
    build_graph,
    complete_graph,
    fragment,
    laplacian_bundle,
    laplacian_matrix,
    load_graph,
    weakly_connected_components,
)
from .spectral import SpectralDecomposition, SqrtLaplacian, decompose, pattern_matches, sqrt_laplacian
from .hamiltonian import (
    A_HAT,
    AB,
    B_HAT,
    BA,
    E_HAT,
    Hamiltonian,
    algebra_checks,
    anticommutator,
    build_hamiltonian,
    hamiltonian_power,
)
from .dynamics import (
    TrajectoryRecord,
    fundamental_residual,
    project,
    solve_bosonic,
    solve_fermionic,
    time_grid,
    total_energy,
)
from .oracle import integrate_wave
from .polarization import (
    PolarizationReport,
    PotentialParams,
    SpringChain,
    bosonic_existence,
    ground_state,
    ng_mode_extract,
    potential,
    run_polarization_scenario,
    spring_equilibrium,
)

__version__ = "0.1.0"
