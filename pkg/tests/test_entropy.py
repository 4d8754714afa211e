import math

import numpy as np
import pytest

from quenchlab.ed_oracle import (
    build_spin_hamiltonian,
    evolve_state,
    initial_state,
    reduced_entropy,
)
from quenchlab.entropy import (
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
from quenchlab.ising_exact import QuenchParams, gamma_initial, gamma_t_fourier

# frozen: -(0.75 log2 0.75 + 0.25 log2 0.25)
H_OF_HALF = 0.8112781244591328


def test_block_submatrix_basics():
    cm = gamma_t_fourier(9, 1.2)
    assert np.array_equal(block_submatrix(cm, 9), cm.data)
    blk = block_submatrix(gamma_t_fourier(9, 0.0), 3)
    want = np.kron(np.eye(3), [[0.0, -1.0], [1.0, 0.0]])
    assert np.max(np.abs(blk - want)) < 1e-14
    with pytest.raises(ValueError):
        block_submatrix(gamma_initial(9), 3)  # wrong ordering
    with pytest.raises(ValueError):
        block_submatrix(cm, 10)


def test_normal_modes_trivial():
    assert np.array_equal(normal_modes(np.array([[0.0, 1.0], [-1.0, 0.0]])).lambdas, [1.0])
    assert np.array_equal(normal_modes(np.zeros((2, 2))).lambdas, [0.0])
    spec = normal_modes(block_submatrix(gamma_t_fourier(9, 0.0), 4))
    assert np.max(np.abs(spec.lambdas - 1.0)) < 1e-14


def test_normal_modes_recovers_planted_spectrum():
    rng = np.random.default_rng(11)
    lam = np.sort(rng.uniform(0.0, 1.0, size=6))[::-1]
    canon = np.zeros((12, 12))
    for j, v in enumerate(lam):
        canon[2 * j, 2 * j + 1] = v
        canon[2 * j + 1, 2 * j] = -v
    q, _ = np.linalg.qr(rng.standard_normal((12, 12)))
    a = q @ canon @ q.T
    got = normal_modes(a).lambdas
    assert np.max(np.abs(got - lam)) < 1e-10


def test_normal_modes_error_paths():
    with pytest.raises(ValueError):
        normal_modes(np.ones((4, 4)))  # not antisymmetric
    bad = 1.1 * np.array([[0.0, 1.0], [-1.0, 0.0]])
    with pytest.raises(ValueError):
        normal_modes(bad)  # mode beyond 1 by more than the clamp tolerance
    with pytest.raises(ValueError):
        normal_modes(np.zeros((3, 3)))


def test_binary_entropy_values():
    assert binary_entropy_h(1.0) == 0.0
    assert binary_entropy_h(0.0) == 1.0
    assert abs(binary_entropy_h(0.5) - H_OF_HALF) < 1e-15
    with pytest.raises(ValueError):
        binary_entropy_h(1.5)
    with pytest.raises(ValueError):
        binary_entropy_h(-0.2)


def test_binary_entropy_parabola_lower_bound():
    x = np.arange(0.0, 1.0 + 1e-12, 1e-3)
    assert np.all(binary_entropy_h(x) >= 1.0 - x**2 - 1e-12)


def test_block_entropy_trivials():
    assert block_entropy(BlockSpectrum(np.ones(5))) == 0.0
    assert block_entropy(BlockSpectrum(np.zeros(4))) == 4.0


def test_block_entropy_matches_state_vector_oracle():
    n, L, t = 9, 4, 1.0
    h = build_spin_hamiltonian(n, "periodic")
    psi = evolve_state(initial_state(n), h, t)
    s_cm = cm_block_entropy(gamma_t_fourier(n, t), L)
    assert abs(s_cm - reduced_entropy(psi, L)) < 1e-8


def test_renyi_entropy():
    spec = normal_modes(block_submatrix(gamma_t_fourier(21, 2.0), 5))
    s1 = block_entropy(spec)
    # two-sided check at alpha = 1 +/- 1e-4: the symmetric mean cancels the
    # first-order term of the alpha-expansion
    mean = 0.5 * (renyi_entropy(spec, 1.0 + 1e-4) + renyi_entropy(spec, 1.0 - 1e-4))
    assert abs(mean - s1) < 1e-6
    for alpha in (0.5, 2.0, 3.0):
        assert renyi_entropy(BlockSpectrum(np.ones(4)), alpha) == 0.0
    assert abs(renyi_entropy(BlockSpectrum(np.zeros(1)), 2.0) - 1.0) < 1e-15
    with pytest.raises(ValueError):
        renyi_entropy(spec, 1.0)
    with pytest.raises(ValueError):
        renyi_entropy(spec, -0.5)


def test_entropy_bounds_and_complementarity():
    cm = gamma_t_fourier(21, 2.0)
    for L in (1, 4, 8, 10):
        s = cm_block_entropy(cm, L)
        assert 0.0 <= s <= L
        assert abs(s - cm_block_entropy(cm, 21 - L)) < 1e-8


def test_entropy_saturates_in_block_length():
    # at fixed t the entropy stops changing once the block outruns the front
    t = 2.5
    cm = gamma_t_fourier(101, t)
    base = cm_block_entropy(cm, 10)  # L = 4t
    for L in (13, 18, 30, 40):
        assert abs(cm_block_entropy(cm, L) - base) <= 1e-6


def test_bound_chain_at_t_zero():
    report = bound_chain(gamma_t_fourier(21, 0.0), QuenchParams(N=21, L=8, t=0.0))
    assert report.s_exact <= 1e-12  # product state, zero up to rounding in h
    assert report.parabola_bound <= 1e-12
    assert report.c_norm_bound <= 1e-12
    assert report.corner_bound <= 1e-12
    assert report.growth_bound == -math.inf
    assert not report.hypotheses_ok
    assert math.isnan(report.bessel_bound)


def test_bound_chain_applicable_point():
    report = bound_chain(gamma_t_fourier(101, 6.0), QuenchParams(N=101, L=20, t=6.0))
    assert report.hypotheses_ok
    assert report.s_exact >= report.parabola_bound
    assert report.identity_gap <= 1e-9
    assert report.c_norm_bound >= report.corner_bound - 1e-12
    assert report.corner_bound >= report.bessel_bound - 0.3
    growth = 4.0 / (3.0 * math.pi) * 6.0 - 0.5 * math.log(6.0) - 1.0
    assert abs(report.growth_bound - growth) < 1e-15
    assert report.s_exact >= report.growth_bound
    assert report.corner_error_budget <= 0.3


def test_bound_chain_validation():
    cm = gamma_t_fourier(21, 1.0)
    with pytest.raises(ValueError):
        bound_chain(cm, QuenchParams(N=21, L=11, t=1.0))  # corner needs L <= N/2
    with pytest.raises(ValueError):
        bound_chain(cm, QuenchParams(N=23, L=5, t=1.0))  # size mismatch
    with pytest.raises(ValueError):
        bound_chain(cm.to_position_momentum(), QuenchParams(N=21, L=5, t=1.0))


def test_report_serialization():
    report = bound_chain(gamma_t_fourier(21, 1.0), QuenchParams(N=21, L=8, t=1.0))
    header_cols = BoundChainReport.CSV_COLUMNS.split(",")
    row_cols = report.to_csv_row().split(",")
    assert len(header_cols) == len(row_cols)
    doc = report.to_json_dict()
    assert doc["n_sites"] == 21
    assert doc["bessel_bound"] is None  # hypotheses fail at t = 1
    assert isinstance(report.to_json(), str)
