"""Free time evolution by two independent routes.

The analytic route propagates the two invariant 2x2 blocks that carry the
cloning initial state and returns the four transition amplitudes
(f1, f2, g1, g2).  The oracle route exponentiates the full Hamiltonian by
dense eigendecomposition.  Both use the common phase convention
exp(-i H t): no global phase is stripped, because the relative phase
between the two blocks enters the cloning fidelity.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import OracleInconsistencyError
from .hilbert import StateVector, prepare_initial
from .star_model import (
    DEFAULT_MAX_QUBITS,
    ModelParams,
    block_eigensystem,
    build_full_hamiltonian,
    edge_eigenstate,
    sector_block,
)

__all__ = [
    "ORACLE_RESIDUAL_TOL",
    "BlockAmplitudes",
    "evolve_analytic",
    "evolve_brute_force",
    "amplitudes_from_brute_force",
]

ORACLE_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class BlockAmplitudes:
    """Transition amplitudes of the evolved star state at time t.

    Starting from (alpha|0> + beta|1>)|S(M, k)>, the alpha component evolves
    into f1|0>|S(M,k)> + f2|1>|S(M,k+1)> and the beta component into
    g1|0>|S(M,k-1)> + g2|1>|S(M,k)>.  Each pair is unitary:
    |f1|^2 + |f2|^2 = |g1|^2 + |g2|^2 = 1.
    """

    params: ModelParams
    k: int
    t: float
    f1: complex
    f2: complex
    g1: complex
    g2: complex

    def unitarity_defect(self) -> float:
        """Largest deviation of the two pair norms from 1."""
        f_norm = abs(self.f1) ** 2 + abs(self.f2) ** 2
        g_norm = abs(self.g1) ** 2 + abs(self.g2) ** 2
        return max(abs(f_norm - 1.0), abs(g_norm - 1.0))


def _block_propagator(params: ModelParams, m: float, t: float) -> np.ndarray:
    """exp(-i H t) restricted to the 2x2 sector labelled by m."""
    eig = block_eigensystem(sector_block(params, m), params.lam, params.B)
    proj_plus = np.outer(eig.vec_plus, eig.vec_plus)
    proj_minus = np.outer(eig.vec_minus, eig.vec_minus)
    return np.exp(-1j * eig.e_plus * t) * proj_plus + (
        np.exp(-1j * eig.e_minus * t) * proj_minus
    )


def evolve_analytic(params: ModelParams, k: int, t: float) -> BlockAmplitudes:
    """Block-propagated amplitudes for the initial state (.)|S(M, k)>.

    k = M and k = 0 route through the stationary edge states, where the
    respective partner amplitude vanishes identically.
    """
    if not 0 <= k <= params.M:
        raise ValueError(f"k must lie in [0, {params.M}], got {k}")
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t!r}")
    if t == 0.0:
        return BlockAmplitudes(params, k, 0.0, 1 + 0j, 0j, 0j, 1 + 0j)
    half_m = params.M / 2.0
    if k == params.M:
        f1 = complex(np.exp(-1j * edge_eigenstate(params, "top").energy * t))
        f2 = 0j
    else:
        prop = _block_propagator(params, k + 1 - half_m, t)
        f1, f2 = complex(prop[0, 0]), complex(prop[1, 0])
    if k == 0:
        g1 = 0j
        g2 = complex(np.exp(-1j * edge_eigenstate(params, "bottom").energy * t))
    else:
        prop = _block_propagator(params, k - half_m, t)
        g1, g2 = complex(prop[0, 1]), complex(prop[1, 1])
    return BlockAmplitudes(params, k, float(t), f1, f2, g1, g2)


@lru_cache(maxsize=128)
def _dense_eigensystem(
    params: ModelParams, max_qubits: int
) -> tuple[np.ndarray, np.ndarray]:
    """Cached full eigendecomposition; reused across evolution times."""
    ham = build_full_hamiltonian(params, max_qubits=max_qubits)
    evals, evecs = np.linalg.eigh(ham.matrix)
    evals.setflags(write=False)
    evecs.setflags(write=False)
    return evals, evecs


def evolve_brute_force(
    params: ModelParams,
    psi0: StateVector,
    t: float,
    max_qubits: int = DEFAULT_MAX_QUBITS,
) -> StateVector:
    """psi(t) = exp(-i H t) psi0 through the dense eigendecomposition."""
    if psi0.n_qubits != params.n_qubits:
        raise ValueError(
            f"state has {psi0.n_qubits} qubits but the model needs "
            f"{params.n_qubits}"
        )
    evals, evecs = _dense_eigensystem(params, max_qubits)
    phases = np.exp(-1j * evals * t)
    amplitudes = evecs @ (phases * (evecs.conj().T @ psi0.amplitudes))
    return StateVector(psi0.n_qubits, amplitudes)


def amplitudes_from_brute_force(
    params: ModelParams,
    k: int,
    t: float,
    max_qubits: int = DEFAULT_MAX_QUBITS,
) -> BlockAmplitudes:
    """Amplitudes recovered by projecting dense evolution onto the block basis.

    Evolves the unit-alpha and unit-beta initial states separately and takes
    inner products with the four allowed product states.  Any weight left
    outside those states (beyond ORACLE_RESIDUAL_TOL) raises
    OracleInconsistencyError, since magnetization conservation forbids it.
    """
    if not 0 <= k <= params.M:
        raise ValueError(f"k must lie in [0, {params.M}], got {k}")
    M = params.M

    psi_f = evolve_brute_force(params, prepare_initial(1, 0, M, k), t, max_qubits)
    f1 = prepare_initial(1, 0, M, k).overlap(psi_f)
    f2 = prepare_initial(0, 1, M, k + 1).overlap(psi_f) if k < M else 0j
    residual = abs(psi_f.norm_squared() - abs(f1) ** 2 - abs(f2) ** 2)
    if residual > ORACLE_RESIDUAL_TOL:
        raise OracleInconsistencyError(
            f"alpha-branch weight {residual!r} outside the block basis "
            f"(M={M}, k={k}, t={t!r})"
        )

    psi_g = evolve_brute_force(params, prepare_initial(0, 1, M, k), t, max_qubits)
    g1 = prepare_initial(1, 0, M, k - 1).overlap(psi_g) if k > 0 else 0j
    g2 = prepare_initial(0, 1, M, k).overlap(psi_g)
    residual = abs(psi_g.norm_squared() - abs(g1) ** 2 - abs(g2) ** 2)
    if residual > ORACLE_RESIDUAL_TOL:
        raise OracleInconsistencyError(
            f"beta-branch weight {residual!r} outside the block basis "
            f"(M={M}, k={k}, t={t!r})"
        )
    return BlockAmplitudes(params, k, float(t), f1, f2, g1, g2)
