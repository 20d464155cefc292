"""
Erasure by thermalisation: heat baths, Boltzmann states and the entropy
ledger of apparatus plus bath.

Units: k_B = 1, temperatures appear only as the inverse temperature beta,
entropies are in nats. The bath Hamiltonian is gauge-fixed to
H = -(1/beta) ln(omega), so the partition function of H is exactly 1.
"""
import logging
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

import numpy as np

from erasure.conf import erasure_settings
from erasure.entropy import holevo_chi, mean_letter_entropy, von_neumann_entropy
from erasure.exceptions import DomainError, InternalInconsistency, RankDeficientBath
from erasure.operators import (
    ZERO_CUTOFF,
    HermitianOperator,
    check_dims,
    eigh,
    matrix_function,
    trace_product,
)
from erasure.states import DensityMatrix, Ensemble, average_state

logger = logging.getLogger(__name__)

BOLTZMANN_TOL = 1e-9
LEDGER_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Bath:
    """
    A heat bath whose equilibrium state for the apparatus is ``omega``.

    ``partition_function`` is 1 for baths built from a state; baths built
    from a Hamiltonian keep Z of the Hamiltonian they were given.
    """
    omega: DensityMatrix
    beta: float
    hamiltonian: HermitianOperator
    partition_function: float = 1.0

    def boltzmann_state(self) -> np.ndarray:
        weights = matrix_function(self.hamiltonian, lambda energies: np.exp(-self.beta * energies))
        return weights.matrix / weights.trace()


@dataclass(frozen=True)
class ErasureLedger:
    """Entropy changes of one erasure step, in nats."""
    d_s_apparatus: float
    d_s_bath: float
    d_s_total: float

    def __post_init__(self) -> None:
        if self.residual > LEDGER_TOL:
            raise InternalInconsistency(
                f'ledger does not add up: total {self.d_s_total!r} vs '
                f'{self.d_s_apparatus!r} + {self.d_s_bath!r}'
            )

    @property
    def residual(self) -> float:
        return abs(self.d_s_total - self.d_s_apparatus - self.d_s_bath)


class LandauerCheck(NamedTuple):
    erased_information: float
    d_s_total: float
    slack: float


def bath_from_state(omega: DensityMatrix, beta: float) -> Bath:
    """The bath at inverse temperature ``beta`` that thermalises to ``omega``."""
    if not beta > 0:
        raise DomainError(f'beta must be positive, got {beta!r}')
    smallest = float(omega.spectrum.eigenvalues[-1])
    if smallest <= ZERO_CUTOFF:
        raise RankDeficientBath(
            f'bath state has eigenvalue {smallest:.3e}; mix it with the identity first'
        )
    hamiltonian = matrix_function(omega.op, lambda values: -np.log(values) / beta)
    bath = Bath(omega=omega, beta=float(beta), hamiltonian=hamiltonian)

    error = float(np.max(np.abs(bath.boltzmann_state() - omega.matrix)))
    if error > BOLTZMANN_TOL:
        raise InternalInconsistency(f'Boltzmann state misses omega by {error:.3e}')
    logger.debug('bath dim=%d beta=%g min eigenvalue=%.3e', omega.dim, beta, smallest)
    return bath


def bath_from_hamiltonian(hamiltonian: HermitianOperator, beta: float) -> Bath:
    """omega = exp(-beta H) / Z for a given Hamiltonian."""
    if not beta > 0:
        raise DomainError(f'beta must be positive, got {beta!r}')
    spectrum = eigh(hamiltonian)
    ground = float(spectrum.eigenvalues[-1])
    weights = np.exp(-beta * (spectrum.eigenvalues - ground))
    shifted_z = float(weights.sum())
    vectors = spectrum.eigenvectors
    omega = DensityMatrix.from_array((vectors * (weights / shifted_z)) @ vectors.conj().T)
    partition_function = shifted_z * float(np.exp(-beta * ground))
    return replace(bath_from_state(omega, beta), partition_function=partition_function)


def mix_with_identity(rho: DensityMatrix, epsilon: float) -> DensityMatrix:
    """(1 - epsilon) rho + epsilon I / dim."""
    if not 0 <= epsilon <= 1:
        raise DomainError(f'epsilon must lie in [0, 1], got {epsilon!r}')
    identity = np.eye(rho.dim, dtype=complex) / rho.dim
    return DensityMatrix.from_array((1 - epsilon) * rho.matrix + epsilon * identity)


def thermal_bath(
    target: DensityMatrix,
    beta: float = 1.0,
    epsilon_mix: bool = False,
    epsilon: Optional[float] = None,
) -> Bath:
    """
    ``bath_from_state``, optionally after mixing the target with the
    identity. Mixing only happens when asked for.
    """
    if epsilon_mix:
        epsilon = erasure_settings.EPSILON_MIX if epsilon is None else epsilon
        logger.debug('mixing bath target with identity, epsilon=%g', epsilon)
        target = mix_with_identity(target, epsilon)
    return bath_from_state(target, beta)


def heat_to_bath(initial: Ensemble, bath: Bath) -> float:
    """tr{H (rho_bar - omega)}, the heat the bath absorbs (k_B T dS_B)."""
    check_dims(initial.states[0].op, bath.omega.op)
    return trace_product(bath.hamiltonian, average_state(initial).op - bath.omega.op)


def erasure_ledger(initial: Ensemble, bath: Bath) -> ErasureLedger:
    """
    Entropy bookkeeping for thermalising ``initial`` to the bath state.

    With rho_bar the average initial state and S_init = sum_i p_i S(rho_i):
      apparatus: S(omega) - S_init
      bath:      beta tr{H (rho_bar - omega)} = -tr{(rho_bar - omega) ln omega}
      total:     -tr{rho_bar ln omega} - S_init
    For pure initial states S_init = 0.
    """
    check_dims(initial.states[0].op, bath.omega.op)
    rho_bar = average_state(initial)
    s_initial = mean_letter_entropy(initial)

    d_s_apparatus = von_neumann_entropy(bath.omega) - s_initial
    d_s_bath = bath.beta * heat_to_bath(initial, bath)
    # beta H = -ln omega
    d_s_total = bath.beta * trace_product(rho_bar.op, bath.hamiltonian) - s_initial
    return ErasureLedger(d_s_apparatus=d_s_apparatus, d_s_bath=d_s_bath, d_s_total=d_s_total)


def landauer_check(initial: Ensemble, bath: Bath) -> LandauerCheck:
    """
    Compare the information erased with the entropy generated.

    The erased information is the Holevo quantity of ``initial``, which is
    S(rho_bar) when all initial states are pure. The slack equals
    S(rho_bar || omega).
    """
    ledger = erasure_ledger(initial, bath)
    erased = holevo_chi(initial)
    return LandauerCheck(
        erased_information=erased,
        d_s_total=ledger.d_s_total,
        slack=ledger.d_s_total - erased,
    )
