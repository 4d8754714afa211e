"""Brute-force state-vector oracle for small chains.

Everything here is dense linear algebra on the full 2^N-dimensional Hilbert
space, deliberately simple so it can arbitrate between the fancier paths.

Conventions (fixed once, asserted by the tests):

* Basis index: site 0 is the most significant bit, so
  index = sum_j b_j 2^(N-1-j) with b_j in {0, 1}.
* Pauli matrices are the standard ones, sigma_z = diag(+1, -1); the local
  basis state with bit b has sigma_z eigenvalue (-1)^b.
* The quench starts from ``initial_state``, the all-bits-one product state
  (basis index 2^N - 1), i.e. every site polarized with sigma_z = -1.  For
  odd N this state lies in the -1 eigenspace of the parity operator
  Pi = prod_j sigma_z^(j), and its Jordan-Wigner correlation matrix is
  exactly ``gamma_initial(N)``.
* Jordan-Wigner Majorana pairs: c_n = (prod_{l<n} sigma_z^l) sigma_x^n and
  c_{n+N} = (prod_{l<n} sigma_z^l) sigma_y^n for n = 0..N-1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ising_exact import ORDER_POSITION_MOMENTUM, CorrelationMatrix

MAX_DENSE_SITES = 14
MAX_JW_SITES = 12

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@dataclass(frozen=True)
class StateVector:
    """Complex amplitudes over the 2^N computational basis states."""

    N: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (2**self.N,):
            raise ValueError(
                f"amplitude vector has shape {self.amplitudes.shape}, expected (2^{self.N},)"
            )

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def initial_state(N: int) -> StateVector:
    """The all-bits-one product state |1...1> the quench starts from."""
    amps = np.zeros(2**N, dtype=complex)
    amps[-1] = 1.0
    return StateVector(N=N, amplitudes=amps)


def _site_bits(N: int) -> np.ndarray:
    """bits[i, j] = bit of site j in basis index i (site 0 most significant)."""
    idx = np.arange(2**N)
    shifts = N - 1 - np.arange(N)
    return (idx[:, None] >> shifts[None, :]) & 1


def build_spin_hamiltonian(N: int, boundary: str = "periodic") -> np.ndarray:
    """Dense real symmetric matrix of -(1/2) sum_j [sx_j sx_{j+1} + sz_j].

    ``boundary`` is "periodic" (the x-coupling wraps from site N-1 to 0) or
    "open" (no wrap).  Guarded at N <= 14: the dense matrix is the point.
    """
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    if N > MAX_DENSE_SITES:
        raise ValueError(f"dense construction guarded at N <= {MAX_DENSE_SITES}, got {N}")
    if boundary not in ("periodic", "open"):
        raise ValueError(f"boundary must be 'periodic' or 'open', got {boundary!r}")
    dim = 2**N
    idx = np.arange(dim)
    bits = _site_bits(N)
    h = np.zeros((dim, dim))
    # field term: diagonal, sigma_z eigenvalue (-1)^b per site
    sz_total = (1 - 2 * bits).sum(axis=1)
    h[idx, idx] = -0.5 * sz_total
    # coupling term: sx_j sx_k flips the two bits
    couplings = range(N) if boundary == "periodic" else range(N - 1)
    for j in couplings:
        k = (j + 1) % N
        flipped = idx ^ (1 << (N - 1 - j)) ^ (1 << (N - 1 - k))
        h[flipped, idx] += -0.5
    return h


def spectral_decomposition(H: np.ndarray):
    """Eigen-decomposition (w, V) of a real symmetric H, for reuse across times."""
    return np.linalg.eigh(H)


def evolve_state(psi: StateVector, H: np.ndarray, t: float, decomposition=None) -> StateVector:
    """psi(t) = exp(-i H t) psi via full eigendecomposition.

    Pass ``decomposition=spectral_decomposition(H)`` to amortize the eigh
    over many times; norm and energy are conserved to ~1e-12.
    """
    if H.shape != (len(psi.amplitudes),) * 2:
        raise ValueError(f"dimension mismatch: H {H.shape} vs state of length {len(psi.amplitudes)}")
    w, v = decomposition if decomposition is not None else spectral_decomposition(H)
    phases = np.exp(-1j * w * t)
    amps = v @ (phases * (v.conj().T @ psi.amplitudes))
    return StateVector(N=psi.N, amplitudes=amps)


def reduced_entropy(psi: StateVector, L: int) -> float:
    """Entanglement entropy (bits) of the first L sites of a pure state."""
    if not 1 <= L < psi.N:
        raise ValueError(f"L must lie in [1, N-1], got L={L}, N={psi.N}")
    block = psi.amplitudes.reshape(2**L, 2 ** (psi.N - L))
    s = np.linalg.svd(block, compute_uv=False)
    p = s**2
    p = p[p > 1e-16]
    return max(0.0, float(-(p * np.log2(p)).sum()))


def majorana_operator(k: int, N: int) -> np.ndarray:
    """Dense matrix of the Majorana operator c_k, k = 0..2N-1."""
    if not 0 <= k < 2 * N:
        raise ValueError(f"k must lie in [0, 2N), got k={k}, N={N}")
    n = k % N
    op = PAULI_X if k < N else PAULI_Y
    out = np.eye(1, dtype=complex)
    for site in range(N):
        if site < n:
            out = np.kron(out, PAULI_Z)
        elif site == n:
            out = np.kron(out, op)
        else:
            out = np.kron(out, np.eye(2, dtype=complex))
    return out


def jw_correlation_matrices(states: list[StateVector]) -> list[CorrelationMatrix]:
    """Correlation matrices of several states over one pass of operator builds.

    Gamma_kl = -(i/2) <[c_k, c_l]> reduces to -i <c_k c_l> off the diagonal;
    each dense c_k is built once and applied to every state.  Real parts of
    <c_k c_l> beyond 1e-10 signal a convention mismatch and raise.
    """
    if not states:
        return []
    N = states[0].N
    if N > MAX_JW_SITES:
        raise ValueError(f"Jordan-Wigner extraction guarded at N <= {MAX_JW_SITES}, got {N}")
    if any(s.N != N for s in states):
        raise ValueError("all states must share the same N")
    psis = np.column_stack([s.amplitudes for s in states])
    applied = np.empty((2 * N, 2**N, len(states)), dtype=complex)
    for k in range(2 * N):
        applied[k] = majorana_operator(k, N) @ psis
    out = []
    for j in range(len(states)):
        v = applied[:, :, j]
        gram = v.conj() @ v.T
        resid = float(np.max(np.abs(gram.real - np.eye(2 * N))))
        if resid > 1e-10:
            raise ArithmeticError(f"correlation matrix has real residual {resid:.3e}")
        gamma = gram.imag
        np.fill_diagonal(gamma, 0.0)
        out.append(CorrelationMatrix(gamma, ORDER_POSITION_MOMENTUM))
    return out


def jw_correlation_matrix(psi: StateVector) -> CorrelationMatrix:
    """Majorana correlation matrix of one state (position-momentum ordering)."""
    return jw_correlation_matrices([psi])[0]


def parity_expectation(psi: StateVector) -> float:
    """<Pi> with Pi = prod_j sigma_z^(j); diagonal, so a weighted sign sum."""
    bits = _site_bits(psi.N)
    signs = 1 - 2 * (bits.sum(axis=1) % 2)
    return float(np.real(np.sum(signs * np.abs(psi.amplitudes) ** 2)))


# ---------------------------------------------------------------------------
# density-matrix helpers for the continuity-bound checks
# ---------------------------------------------------------------------------

def random_density_matrix(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Mixed state induced by a uniformly random pure state on a dim x dim bipartition."""
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


def density_entropy(rho: np.ndarray) -> float:
    """Von Neumann entropy -tr[rho log2 rho] in bits."""
    p = np.linalg.eigvalsh(rho)
    p = p[p > 1e-15]
    return float(-(p * np.log2(p)).sum())


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Half trace norm (1/2) ||rho - sigma||_1 for Hermitian arguments."""
    return float(0.5 * np.abs(np.linalg.eigvalsh(rho - sigma)).sum())


def partial_trace_first(rho: np.ndarray, keep_dim: int) -> np.ndarray:
    """Trace out the trailing factor, keeping the leading keep_dim-dimensional one."""
    dim = rho.shape[0]
    if dim % keep_dim:
        raise ValueError(f"keep_dim {keep_dim} does not divide dimension {dim}")
    rest = dim // keep_dim
    return np.einsum("ijkj->ik", rho.reshape(keep_dim, rest, keep_dim, rest))
