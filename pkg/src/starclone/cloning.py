"""Cloning fidelities, bounds and preset parameter sets for the spin star.

After free evolution the reduced state of one outer qubit depends only on
the four block amplitudes, and the equatorial fidelity depends only on the
two interference terms Re(f1* g1) and Re(f2* g2).  The closed-form
specialization is expressed through the two block gaps

    eta1 = sqrt(4 (M-k)(k+1) + (M-2k-1)^2 lam^2)
    eta2 = sqrt(4 k (M-k+1) + (M-2k+1)^2 lam^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import (
    BlockAmplitudes,
    amplitudes_from_brute_force,
    evolve_analytic,
    evolve_brute_force,
)
from .errors import FormulaInconsistencyError
from .hilbert import QubitDensityMatrix, fidelity_pure, prepare_initial, reduce_qubit
from .star_model import DEFAULT_MAX_QUBITS, ModelParams

__all__ = [
    "ETA_GUARD",
    "CloneReport",
    "PresetSpec",
    "reduced_outer",
    "reduced_central",
    "pcc_fidelity",
    "fidelity_closed_form",
    "state_bound",
    "optimal_pcc_bound",
    "xx_fidelity",
    "heisenberg_max_fidelity",
    "kM_fidelity",
    "preset_optimal",
    "preset_ancilla_free",
    "preset_k_equals_m",
    "universal_preset",
    "universal_clone_matrix",
    "bloch_amplitudes",
    "make_clone_report",
]

# Below this, a block gap is treated as degenerate and the closed form
# delegates to block propagation (both chi and eta vanish together there).
ETA_GUARD = 1e-12

_METHODS = ("analytic", "closed-form", "brute")


def bloch_amplitudes(theta: float, phi: float) -> tuple[complex, complex]:
    """(alpha, beta) = (cos(theta/2), e^{i phi} sin(theta/2))."""
    return (
        complex(math.cos(theta / 2.0)),
        complex(math.cos(phi), math.sin(phi)) * math.sin(theta / 2.0),
    )


def reduced_outer(
    amp: BlockAmplitudes, alpha: complex, beta: complex
) -> QubitDensityMatrix:
    """Reduced density matrix of one outer qubit from the block amplitudes.

    All M outer qubits share this matrix by permutation symmetry of the
    initial state and the couplings.
    """
    M, k = amp.params.M, amp.k
    wa, wb = abs(alpha) ** 2, abs(beta) ** 2
    af1, af2 = abs(amp.f1) ** 2, abs(amp.f2) ** 2
    ag1, ag2 = abs(amp.g1) ** 2, abs(amp.g2) ** 2
    rho00 = (wa * (k * af1 + (k + 1) * af2) + wb * ((k - 1) * ag1 + k * ag2)) / M
    rho11 = (
        wa * ((M - k) * af1 + (M - k - 1) * af2)
        + wb * ((M - k + 1) * ag1 + (M - k) * ag2)
    ) / M
    rho01 = (
        alpha
        * np.conj(beta)
        * (
            math.sqrt(k * (M - k + 1)) * amp.f1 * np.conj(amp.g1)
            + math.sqrt((k + 1) * (M - k)) * amp.f2 * np.conj(amp.g2)
        )
        / M
    )
    trace = rho00 + rho11
    if abs(trace - 1.0) > 1e-9:
        raise FormulaInconsistencyError(
            f"outer reduced matrix has trace {trace!r}"
        )
    return QubitDensityMatrix(rho00, rho01, rho11)


def reduced_central(
    amp: BlockAmplitudes, alpha: complex, beta: complex
) -> QubitDensityMatrix:
    """Reduced density matrix of the central qubit from the block amplitudes."""
    rho00 = abs(alpha * amp.f1) ** 2 + abs(beta * amp.g1) ** 2
    rho11 = abs(alpha * amp.f2) ** 2 + abs(beta * amp.g2) ** 2
    rho01 = alpha * np.conj(beta) * amp.f1 * np.conj(amp.g2)
    trace = rho00 + rho11
    if abs(trace - 1.0) > 1e-9:
        raise FormulaInconsistencyError(
            f"central reduced matrix has trace {trace!r}"
        )
    return QubitDensityMatrix(rho00, rho01, rho11)


def pcc_fidelity(amp: BlockAmplitudes) -> float:
    """Equatorial-input fidelity of one outer clone.

    F = (1/4) { 2 + (sqrt(k(M-k+1))/M) 2 Re(f1* g1)
                  + (sqrt((M-k)(k+1))/M) 2 Re(f2* g2) },
    independent of the equatorial phase.
    """
    M, k = amp.params.M, amp.k
    term1 = math.sqrt(k * (M - k + 1)) / M * 2.0 * (np.conj(amp.f1) * amp.g1).real
    term2 = math.sqrt((M - k) * (k + 1)) / M * 2.0 * (np.conj(amp.f2) * amp.g2).real
    return 0.25 * (2.0 + term1 + term2)


def fidelity_closed_form(M: int, k: int, lam: float, B: float, t):
    """Closed-form equatorial fidelity of the XXZ star.

    F = 1/2 + (k(M-k+1) chi1 - (M-k)(k+1) chi2) / (M eta1 eta2) with

      chi1 = eta1 cos(eta1 t/2) sin(B t) sin(eta2 t/2)
             - lam (M-2k-1) sin(eta1 t/2) cos(B t) sin(eta2 t/2)
      chi2 = eta2 cos(eta2 t/2) sin(B t) sin(eta1 t/2)
             - lam (M-2k+1) sin(eta2 t/2) cos(B t) sin(eta1 t/2).

    Accepts a scalar or array t.  When a gap degenerates (eta below
    ETA_GUARD, which requires lam = 0 with k = 0 or k = M) the 0/0 form is
    avoided by delegating to block propagation.
    """
    if not 0 <= k <= M:
        raise ValueError(f"k must lie in [0, {M}], got {k}")
    eta1 = math.sqrt(4.0 * (M - k) * (k + 1) + (M - 2 * k - 1) ** 2 * lam * lam)
    eta2 = math.sqrt(4.0 * k * (M - k + 1) + (M - 2 * k + 1) ** 2 * lam * lam)
    if eta1 < ETA_GUARD or eta2 < ETA_GUARD:
        params = ModelParams(M, lam, B)
        if np.ndim(t) == 0:
            return pcc_fidelity(evolve_analytic(params, k, float(t)))
        return np.array(
            [pcc_fidelity(evolve_analytic(params, k, float(ti))) for ti in t]
        )
    t = np.asarray(t, dtype=np.float64) if np.ndim(t) else float(t)
    s1, c1 = np.sin(eta1 * t / 2.0), np.cos(eta1 * t / 2.0)
    s2, c2 = np.sin(eta2 * t / 2.0), np.cos(eta2 * t / 2.0)
    sb, cb = np.sin(B * t), np.cos(B * t)
    chi1 = eta1 * c1 * sb * s2 - lam * (M - 2 * k - 1) * s1 * cb * s2
    chi2 = eta2 * c2 * sb * s1 - lam * (M - 2 * k + 1) * s2 * cb * s1
    return 0.5 + (k * (M - k + 1) * chi1 - (M - k) * (k + 1) * chi2) / (
        M * eta1 * eta2
    )


def state_bound(M: int, k: int) -> float:
    """Interference bound on the equatorial fidelity for initial weight k.

    F <= 1/2 + max(sqrt(k(M-k+1)), sqrt((M-k)(k+1))) / (2M).
    """
    if not 0 <= k <= M:
        raise ValueError(f"k must lie in [0, {M}], got {k}")
    return 0.5 + max(
        math.sqrt(k * (M - k + 1)), math.sqrt((M - k) * (k + 1))
    ) / (2.0 * M)


def optimal_pcc_bound(M: int) -> float:
    """Best equatorial cloning fidelity over all symmetric initial states.

    1/2 + sqrt(M(M+2))/(4M) for even M, 1/2 + (M+1)/(4M) for odd M.
    """
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    if M % 2 == 0:
        return 0.5 + math.sqrt(M * (M + 2)) / (4.0 * M)
    return 0.5 + (M + 1) / (4.0 * M)


def xx_fidelity(M: int, k: int, B, t):
    """Equatorial fidelity of the isotropic-plane (lam = 0) star.

    F = 1/2 + (gamma1 sin(gamma2 t) + gamma2 sin(gamma1 t)) sin(B t) / (4M)
    with gamma1/2 = sqrt(k(M-k+1)) +- sqrt((k+1)(M-k)).  Vectorized in B
    and t.
    """
    if not 0 <= k <= M:
        raise ValueError(f"k must lie in [0, {M}], got {k}")
    root_a = math.sqrt(k * (M - k + 1))
    root_b = math.sqrt((k + 1) * (M - k))
    gamma1, gamma2 = root_a + root_b, root_a - root_b
    return 0.5 + (gamma1 * np.sin(gamma2 * t) + gamma2 * np.sin(gamma1 * t)) * (
        np.sin(B * t) / (4.0 * M)
    )


def heisenberg_max_fidelity(M: int, k: int) -> float:
    """Best equatorial fidelity of the isotropic (lam = 1) star.

    Attained at B = 0, t = pi/(M+1):
    F = 1/2 + 1/(M+1) - 2k(M-k) / (M (M+1)^2).
    """
    if not 0 <= k <= M:
        raise ValueError(f"k must lie in [0, {M}], got {k}")
    return 0.5 + 1.0 / (M + 1) - 2.0 * k * (M - k) / (M * (M + 1) ** 2)


def kM_fidelity(M: int, lam: float, B, t):
    """Equatorial fidelity for the fully polarized initial register (k = M).

    With R = sqrt(4M + (M-1)^2 lam^2),
    F = 1/2 + { cos[(2B + (1+M)lam - R) t/2] - cos[(2B + (1+M)lam + R) t/2] }
              / (2R).
    Its maximum over (lam, B, t) is 1/2 + 1/(2 sqrt(M)), reached at lam = 0,
    B = sqrt(M), t = pi/(2 sqrt(M)).  Vectorized in B and t.
    """
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    root = math.sqrt(4.0 * M + (M - 1) ** 2 * lam * lam)
    shift = 2.0 * np.asarray(B, dtype=np.float64) + (1 + M) * lam
    shift = shift if np.ndim(B) else float(shift)
    return 0.5 + (
        np.cos((shift - root) * t / 2.0) - np.cos((shift + root) * t / 2.0)
    ) / (2.0 * root)


@dataclass(frozen=True)
class PresetSpec:
    """A named parameter set together with the fidelity it is claimed to reach."""

    name: str
    M: int
    k: int
    lam: float
    B: float
    t: float
    fidelity: float
    copies: int

    def params(self) -> ModelParams:
        return ModelParams(self.M, self.lam, self.B)


def preset_optimal(M: int) -> PresetSpec:
    """Parameter set achieving the optimal equatorial bound for M copies.

    even M: k = M/2, lam = sqrt(M(M+2)), B = 0, t = pi/sqrt(2M(M+2))
    odd M:  k = (M-1)/2, lam = sqrt(3(M+1)^2/4 + 1), B = (M+1)/2,
            t = pi/(M+1).
    """
    if M < 2:
        raise ValueError(f"M must be >= 2, got {M}")
    if M % 2 == 0:
        return PresetSpec(
            name="pcc_even",
            M=M,
            k=M // 2,
            lam=math.sqrt(M * (M + 2)),
            B=0.0,
            t=math.pi / math.sqrt(2.0 * M * (M + 2)),
            fidelity=optimal_pcc_bound(M),
            copies=M,
        )
    return PresetSpec(
        name="pcc_odd",
        M=M,
        k=(M - 1) // 2,
        lam=math.sqrt(0.75 * (M + 1) ** 2 + 1.0),
        B=(M + 1) / 2.0,
        t=math.pi / (M + 1),
        fidelity=optimal_pcc_bound(M),
        copies=M,
    )


def preset_ancilla_free(M_outer: int) -> PresetSpec:
    """Parameter set turning the central qubit into an extra clone.

    For an even number of outer spins, k = M/2, lam = M + 2, B = 0 and
    t = pi/sqrt(2(M+1)(M+2)) leave all M + 1 single-qubit reduced matrices
    equal, with common equatorial fidelity 1/2 + (M+2)/(4(M+1)): the optimal
    bound for M + 1 copies.
    """
    if M_outer < 2 or M_outer % 2 != 0:
        raise ValueError(f"M_outer must be an even count >= 2, got {M_outer}")
    return PresetSpec(
        name="ancilla_free",
        M=M_outer,
        k=M_outer // 2,
        lam=float(M_outer + 2),
        B=0.0,
        t=math.pi / math.sqrt(2.0 * (M_outer + 1) * (M_outer + 2)),
        fidelity=0.5 + (M_outer + 2) / (4.0 * (M_outer + 1)),
        copies=M_outer + 1,
    )


def preset_k_equals_m(M: int) -> PresetSpec:
    """Best parameter set for the easy-to-prepare fully polarized register.

    lam = 0, B = sqrt(M), t = pi/(2 sqrt(M)) maximize the k = M family at
    F = 1/2 + 1/(2 sqrt(M)).
    """
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    return PresetSpec(
        name="kM_xx",
        M=M,
        k=M,
        lam=0.0,
        B=math.sqrt(M),
        t=math.pi / (2.0 * math.sqrt(M)),
        fidelity=0.5 + 0.5 / math.sqrt(M),
        copies=M,
    )


def universal_preset() -> PresetSpec:
    """Two-copy cloning that is optimal for every pure input state.

    M = 2, k = 1, lam = 2, B = 0, t = pi/(2 sqrt(3)) produce two clones with
    F = 5/6 regardless of the input Bloch vector.
    """
    return PresetSpec(
        name="universal_1to2",
        M=2,
        k=1,
        lam=2.0,
        B=0.0,
        t=math.pi / (2.0 * math.sqrt(3.0)),
        fidelity=5.0 / 6.0,
        copies=2,
    )


def universal_clone_matrix(alpha: complex, beta: complex) -> QubitDensityMatrix:
    """Outer-qubit state produced by the universal preset:

    rho = (1/6) [[5|a|^2 + |b|^2, 4 a b*], [4 a* b, |a|^2 + 5|b|^2]].
    """
    wa, wb = abs(alpha) ** 2, abs(beta) ** 2
    return QubitDensityMatrix(
        (5.0 * wa + wb) / 6.0,
        4.0 * alpha * np.conj(beta) / 6.0,
        (wa + 5.0 * wb) / 6.0,
    )


@dataclass(frozen=True)
class CloneReport:
    """Per-qubit cloning fidelities for one parameter point and input state."""

    params: ModelParams
    k: int
    t: float
    theta: float
    phi: float
    method: str
    equatorial_fidelity: float
    input_fidelity: float
    per_qubit_fidelities: tuple[float, ...]
    amplitudes: BlockAmplitudes


def make_clone_report(
    params: ModelParams,
    k: int,
    t: float,
    theta: float = math.pi / 2.0,
    phi: float = 0.0,
    method: str = "analytic",
    max_qubits: int = DEFAULT_MAX_QUBITS,
) -> CloneReport:
    """Evaluate one cloning run and collect every per-qubit fidelity.

    method 'analytic' uses block propagation, 'closed-form' additionally
    sources the equatorial fidelity from the closed form (equatorial inputs
    only), 'brute' evolves the full register and partial-traces every qubit.
    Index 0 of per_qubit_fidelities is the central spin.
    """
    if method not in _METHODS:
        raise ValueError(f"method must be one of {_METHODS}, got {method!r}")
    alpha, beta = bloch_amplitudes(theta, phi)
    if method == "brute":
        psi = evolve_brute_force(
            params, prepare_initial(alpha, beta, params.M, k), t, max_qubits
        )
        per_qubit = tuple(
            fidelity_pure(reduce_qubit(psi, q), alpha, beta)
            for q in range(params.n_qubits)
        )
        amp = amplitudes_from_brute_force(params, k, t, max_qubits)
        equatorial = pcc_fidelity(amp)
        outer_fidelity = per_qubit[1]
    else:
        amp = evolve_analytic(params, k, t)
        outer_fidelity = fidelity_pure(reduced_outer(amp, alpha, beta), alpha, beta)
        central = fidelity_pure(reduced_central(amp, alpha, beta), alpha, beta)
        per_qubit = (central,) + (outer_fidelity,) * params.M
        if method == "closed-form":
            if abs(theta - math.pi / 2.0) > 1e-12:
                raise ValueError(
                    "closed-form method covers equatorial inputs only "
                    "(theta = pi/2)"
                )
            equatorial = float(fidelity_closed_form(params.M, k, params.lam, params.B, t))
        else:
            equatorial = pcc_fidelity(amp)
    return CloneReport(
        params=params,
        k=k,
        t=float(t),
        theta=float(theta),
        phi=float(phi),
        method=method,
        equatorial_fidelity=equatorial,
        input_fidelity=outer_fidelity,
        per_qubit_fidelities=per_qubit,
        amplitudes=amp,
    )
