"""quenchlab: exact free-fermion laboratory for entanglement growth after an Ising quench.

The package solves the critical transverse-field Ising quench three
independent ways (Majorana correlation matrices, a dense state-vector
oracle, and MPS/TEBD), computes block entanglement entropies, and checks
the closed-form growth, continuity and bond-dimension bounds against the
exact numbers.
"""

__version__ = "0.1.0"

from ._accel import NUMBA_ENABLED, PerformanceWarning
from .bessel import (
    BesselRow,
    bessel_j,
    bessel_j_row,
    cubic_sum_lower_bound,
    cubic_sum_tail_bound,
    j0_j1_lower_bound,
    weighted_cubic_sum,
)
from .bounds import (
    EPSILON_THRESHOLD,
    ApproxEntropyBound,
    AudenaertBound,
    BondDimBound,
    BoundHypotheses,
    BoundViolationError,
    approx_entropy_lower_bound,
    audenaert_bound,
    bond_dim_lower_bound,
    entropy_growth_bound,
    growth_hypotheses_hold,
    nats_to_bits,
    verify_entropy_bound,
)
from .ed_oracle import (
    StateVector,
    build_spin_hamiltonian,
    density_entropy,
    evolve_state,
    initial_state,
    jw_correlation_matrix,
    jw_correlation_matrices,
    majorana_operator,
    parity_expectation,
    partial_trace_first,
    random_density_matrix,
    reduced_entropy,
    spectral_decomposition,
    trace_distance,
)
from .entropy import (
    BlockSpectrum,
    BoundChainReport,
    binary_entropy_h,
    block_entropy,
    block_submatrix,
    bound_chain,
    cm_block_entropy,
    normal_modes,
    renyi_entropy,
)
from .ising_exact import (
    ORDER_MODEWISE,
    ORDER_POSITION_MOMENTUM,
    CorrelationMatrix,
    ModeBlock,
    QuenchParams,
    evolve_direct,
    export_correlation_csv,
    f_n_finite,
    f_n_infinite,
    g_n_finite,
    g_n_infinite,
    gamma_initial,
    gamma_t_fourier,
    hamiltonian_matrix,
    mode_blocks,
    mode_tables,
    quadrature_error_bound,
    quadrature_error_envelope,
)
from .mps_tebd import (
    MatrixProductState,
    QuenchSample,
    TrotterPlan,
    TruncationPolicy,
    TruncationPolicyError,
    init_product_mps,
    make_trotter_plan,
    mps_cut_entropy,
    run_quench,
    tebd_step,
)
