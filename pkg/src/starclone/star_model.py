"""XXZ spin-star Hamiltonian: dense matrix form and analytic 2x2 sectors.

One central qubit couples identically to M outer qubits:

    H = (1/2) sum_{i=1..M} (sx_0 sx_i + sy_0 sy_i + lam * sz_0 sz_i)
        + (B/2) sum_{i=0..M} sz_i

with the exchange coupling fixed to 1, so times and fields are
dimensionless.  H conserves total magnetization.  On the maximal outer
multiplet j = M/2 it splits into 2x2 blocks spanned by
{ |0>|j, m-1>, |1>|j, m> } plus two stationary edge states, and the block
eigensystem is known in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, FormulaInconsistencyError
from .hilbert import StateVector, prepare_initial

__all__ = [
    "DEFAULT_MAX_QUBITS",
    "ModelParams",
    "FullHamiltonian",
    "SectorBlock",
    "BlockEigensystem",
    "EdgeState",
    "build_full_hamiltonian",
    "sector_block",
    "block_eigensystem",
    "edge_eigenstate",
]

# Dense 2^15 x 2^15 complex is the desk-scale ceiling (M = 14 outer spins).
DEFAULT_MAX_QUBITS = 15


@dataclass(frozen=True)
class ModelParams:
    """Star-network parameters: M outer spins, anisotropy lam, field B (J = 1)."""

    M: int
    lam: float
    B: float

    def __post_init__(self) -> None:
        if not isinstance(self.M, (int, np.integer)) or self.M < 1:
            raise ValueError(f"M must be an integer >= 1, got {self.M!r}")
        object.__setattr__(self, "M", int(self.M))
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "B", float(self.B))
        if not (math.isfinite(self.lam) and math.isfinite(self.B)):
            raise ValueError("lam and B must be finite")

    @property
    def n_qubits(self) -> int:
        return self.M + 1

    @property
    def j_outer(self) -> float:
        """Total spin of the symmetric outer multiplet, j = M/2."""
        return self.M / 2.0


@dataclass(frozen=True, eq=False)
class FullHamiltonian:
    """Dense Hermitian matrix of the star Hamiltonian over 2**(M+1) states."""

    params: ModelParams
    matrix: np.ndarray

    def __post_init__(self) -> None:
        self.matrix.setflags(write=False)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class SectorBlock:
    """One 2x2 invariant block over { |0>|j, m-1>, |1>|j, m> }.

    h01 = sqrt((j+m)(j-m+1)) is the collective flip-flop element; the
    diagonal entries collect the Ising and field terms on the two basis kets.
    """

    j: float
    m: float
    h00: float
    h01: float
    h11: float

    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.h00, self.h01], [self.h01, self.h11]], dtype=np.float64
        )

    def gap(self) -> float:
        """Eigenvalue splitting sqrt((h00 - h11)^2 + 4 h01^2)."""
        return math.hypot(self.h00 - self.h11, 2.0 * self.h01)


@dataclass(frozen=True, eq=False)
class BlockEigensystem:
    """Eigenvalues and orthonormal eigenvectors of a sector block."""

    e_plus: float
    e_minus: float
    vec_plus: np.ndarray
    vec_minus: np.ndarray

    def __post_init__(self) -> None:
        self.vec_plus.setflags(write=False)
        self.vec_minus.setflags(write=False)


@dataclass(frozen=True)
class EdgeState:
    """Stationary one-dimensional sector at the top or bottom of the ladder.

    top: |0>|j, j>  (central |0>, all outer spins up, k = M)
    bottom: |1>|j, -j>  (central |1>, all outer spins down, k = 0)
    """

    params: ModelParams
    which: str
    central_bit: int
    k: int
    energy: float

    def expand(self) -> StateVector:
        alpha, beta = (1.0, 0.0) if self.central_bit == 0 else (0.0, 1.0)
        return prepare_initial(alpha, beta, self.params.M, self.k)


def build_full_hamiltonian(
    params: ModelParams, max_qubits: int = DEFAULT_MAX_QUBITS
) -> FullHamiltonian:
    """Assemble the dense Hamiltonian; magnetization blocks stay exactly zero.

    Raises CapacityError when M + 1 exceeds ``max_qubits``.
    """
    n = params.n_qubits
    if n > max_qubits:
        raise CapacityError(
            f"{n} qubits exceed the dense cap of {max_qubits} "
            f"(dimension 2**{n})"
        )
    dim = 1 << n
    idx = np.arange(dim)
    bits = (idx[:, None] >> np.arange(n)[None, :]) & 1
    z = 1.0 - 2.0 * bits  # sigma^z eigenvalue of each qubit, +1 for bit 0
    matrix = np.zeros((dim, dim), dtype=np.complex128)
    matrix[idx, idx] = 0.5 * params.lam * z[:, 0] * z[:, 1:].sum(axis=1) + (
        0.5 * params.B * z.sum(axis=1)
    )
    for i in range(1, n):
        differ = bits[:, 0] != bits[:, i]
        src = idx[differ]
        matrix[src ^ (1 | (1 << i)), src] += 1.0  # central-outer flip-flop
    return FullHamiltonian(params, matrix)


def sector_block(params: ModelParams, m: float) -> SectorBlock:
    """The 2x2 block labelled by m on the j = M/2 multiplet.

    Valid for -j + 1 <= m <= j (both basis kets exist); the one-dimensional
    extremes are covered by edge_eigenstate instead.
    """
    j = params.j_outer
    m = float(m)
    if abs((m + j) - round(m + j)) > 1e-9:
        raise ValueError(f"m = {m!r} is not a valid magnetization for j = {j!r}")
    if not (-j + 1.0 <= m <= j):
        raise ValueError(
            f"m = {m!r} outside the two-dimensional range [{-j + 1.0}, {j}]"
        )
    eps = math.sqrt((j + m) * (j - m + 1.0))
    h00 = params.lam * (m - 1.0) + params.B * (m - 0.5)
    h11 = -params.lam * m + params.B * (m - 0.5)
    return SectorBlock(j=j, m=m, h00=h00, h01=eps, h11=h11)


def block_eigensystem(block: SectorBlock, lam: float, B: float) -> BlockEigensystem:
    """Closed-form eigenpairs of a sector block.

    E_pm = ( -lam + (2m-1) B  +-  sqrt(lam^2 (2m-1)^2 + 4 h01^2) ) / 2,
    with eigenvectors proportional to (1, a_pm),
    a_pm = (lam - 2 m lam +- sqrt(lam^2 (2m-1)^2 + 4 h01^2)) / (2 h01),
    normalized to unit length.
    """
    eps = block.h01
    if eps <= 0.0:
        raise FormulaInconsistencyError(
            "sector block with vanishing off-diagonal element: "
            "cannot happen for in-range m on the maximal multiplet"
        )
    m = block.m
    disc = math.sqrt(lam * lam * (2.0 * m - 1.0) ** 2 + 4.0 * eps * eps)
    e_plus = 0.5 * (-lam + (2.0 * m - 1.0) * B + disc)
    e_minus = 0.5 * (-lam + (2.0 * m - 1.0) * B - disc)
    a_plus = (lam - 2.0 * m * lam + disc) / (2.0 * eps)
    a_minus = (lam - 2.0 * m * lam - disc) / (2.0 * eps)
    vec_plus = np.array([1.0, a_plus]) / math.hypot(1.0, a_plus)
    vec_minus = np.array([1.0, a_minus]) / math.hypot(1.0, a_minus)
    return BlockEigensystem(e_plus, e_minus, vec_plus, vec_minus)


def edge_eigenstate(params: ModelParams, which: str) -> EdgeState:
    """Stationary edge state and its energy: 'top' or 'bottom' of the ladder."""
    j = params.j_outer
    if which == "top":
        energy = j * params.lam + (j + 0.5) * params.B
        return EdgeState(params, "top", central_bit=0, k=params.M, energy=energy)
    if which == "bottom":
        energy = j * params.lam - (j + 0.5) * params.B
        return EdgeState(params, "bottom", central_bit=1, k=0, energy=energy)
    raise ValueError(f"which must be 'top' or 'bottom', got {which!r}")
