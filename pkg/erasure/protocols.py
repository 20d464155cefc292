"""
The two ways of erasing an encoded message, and single-copy measurements.

Alice sends letter i (probability p_i) as pure state phi_alpha^i with
probability r_alpha^i. The message can be erased directly with a bath in
the average state rho_bar, or in two steps: first with a bath in rho_i for
each letter, then with a bath in rho_bar. The second step is the erasure
of what Bob holds, and it costs exactly the Holevo quantity.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.stats

from erasure.entropy import classical_mutual_information, holevo_chi
from erasure.exceptions import (
    DimensionMismatch,
    InternalInconsistency,
    InvalidPOVM,
    InvalidRank,
    ValidationError,
)
from erasure.operators import HermitianOperator, eigh, trace_product
from erasure.states import (
    RECONSTRUCTION_TOL,
    DensityMatrix,
    Ensemble,
    PureDecomposition,
    PureState,
    PureTerms,
    average_state,
    pure_decompose,
    random_unitary,
)
from erasure.thermo import ErasureLedger, erasure_ledger, thermal_bath

logger = logging.getLogger(__name__)

POVM_POSITIVITY_TOL = 1e-9
POVM_COMPLETENESS_TOL = 1e-8
PROBABILITY_CLIP_TOL = 1e-10
CONSISTENCY_TOL = 1e-9
DUAL_COMPUTATION_TOL = 1e-8
BOUND_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class EncodedMessage:
    ensemble: Ensemble
    decomposition: PureDecomposition

    def __post_init__(self) -> None:
        if len(self.decomposition) != len(self.ensemble):
            raise ValidationError(
                'decomposition',
                f'{len(self.decomposition)} decompositions for {len(self.ensemble)} letters',
            )
        for index, rho in enumerate(self.ensemble.states):
            if any(state.dim != rho.dim for _, state in self.decomposition.letters[index]):
                raise ValidationError('decomposition', f'letter {index} has a state of the wrong dimension')
            error = self.decomposition.reconstruction_error(index, rho)
            if error > RECONSTRUCTION_TOL:
                raise ValidationError(
                    'decomposition', f'letter {index} is reconstructed to within {error:.3e} only',
                )

    def letter_ensemble(self, letter: int) -> Ensemble:
        """The pure states used for one letter, weighted by r_alpha."""
        terms = self.decomposition.letters[letter]
        return Ensemble(tuple((r, state.projector()) for r, state in terms))

    def flattened(self) -> Ensemble:
        """All pure states with their joint weights p_i r_alpha^i."""
        members = []
        for p, terms in zip(self.ensemble.probabilities, self.decomposition.letters):
            members.extend((p * r, state.projector()) for r, state in terms)
        return Ensemble(tuple(members))


@dataclass(frozen=True, eq=False)
class POVM:
    elements: tuple[HermitianOperator, ...]

    def __post_init__(self) -> None:
        elements = tuple(self.elements)
        if not elements:
            raise InvalidPOVM('a POVM needs at least one element')
        dims = {element.dim for element in elements}
        if len(dims) != 1:
            raise InvalidPOVM(f'elements have dimensions {sorted(dims)}')
        for index, element in enumerate(elements):
            smallest = float(eigh(element).eigenvalues[-1])
            if smallest < -POVM_POSITIVITY_TOL:
                raise InvalidPOVM(f'element {index} has eigenvalue {smallest:.3e}')
        total = sum(element.matrix for element in elements)
        defect = float(np.max(np.abs(total - np.eye(dims.pop()))))
        if defect > POVM_COMPLETENESS_TOL:
            raise InvalidPOVM(f'elements sum to the identity only within {defect:.3e}')
        object.__setattr__(self, 'elements', elements)

    @classmethod
    def from_basis(cls, vectors: np.ndarray) -> 'POVM':
        """Rank-1 projectors onto the columns of ``vectors``."""
        return cls(tuple(HermitianOperator.projector(column) for column in np.asarray(vectors).T))

    @property
    def dim(self) -> int:
        return self.elements[0].dim

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class BoundReport:
    chi: float
    erasure_bob: float
    measured_info: Optional[float] = None

    @property
    def slack_holevo(self) -> Optional[float]:
        """chi - I, when a measurement was made."""
        if self.measured_info is None:
            return None
        return self.chi - self.measured_info


@dataclass(frozen=True)
class ErasureReport:
    """Entropies of the erasure procedures plus their consistency residuals."""
    direct: ErasureLedger
    first_step: tuple[ErasureLedger, ...]
    probabilities: tuple[float, ...]
    bob: ErasureLedger
    chi: float

    @property
    def direct_erasure(self) -> float:
        return self.direct.d_s_total

    @property
    def two_step_first(self) -> float:
        return float(sum(p * ledger.d_s_total for p, ledger in zip(self.probabilities, self.first_step)))

    @property
    def bob_erasure(self) -> float:
        return self.bob.d_s_total

    @property
    def protocol_residual(self) -> float:
        return abs(self.direct_erasure - self.two_step_first - self.bob_erasure)

    @property
    def holevo_residual(self) -> float:
        return abs(self.bob_erasure - self.chi)

    @property
    def ledger_residual(self) -> float:
        ledgers = (self.direct, self.bob, *self.first_step)
        return max(ledger.residual for ledger in ledgers)


def encoded_message(
    ensemble: Ensemble,
    decompositions: Optional[Sequence[Optional[PureTerms]]] = None,
) -> EncodedMessage:
    """
    Pair an ensemble with pure decompositions of its letters. Letters
    without a supplied decomposition use their eigendecomposition.
    """
    decompositions = decompositions or [None] * len(ensemble)
    letters = tuple(
        terms if terms is not None else pure_decompose(rho).letters[0]
        for terms, rho in zip(decompositions, ensemble.states)
    )
    return EncodedMessage(ensemble, PureDecomposition(letters))


def _direct_ledger(message: EncodedMessage, epsilon_mix: bool) -> ErasureLedger:
    bath = thermal_bath(average_state(message.ensemble), 1.0, epsilon_mix)
    return erasure_ledger(message.flattened(), bath)


def _first_step_ledgers(message: EncodedMessage, epsilon_mix: bool) -> tuple[ErasureLedger, ...]:
    return tuple(
        erasure_ledger(message.letter_ensemble(index), thermal_bath(rho, 1.0, epsilon_mix))
        for index, rho in enumerate(message.ensemble.states)
    )


def _bob_ledger(ensemble: Ensemble, epsilon_mix: bool) -> ErasureLedger:
    # Bob's systems are mixed: the ledger starts from {(p_i, rho_i)}.
    bath = thermal_bath(average_state(ensemble), 1.0, epsilon_mix)
    return erasure_ledger(ensemble, bath)


def direct_erasure(message: EncodedMessage, epsilon_mix: bool = False) -> float:
    """Entropy of erasing every pure state with one bath in rho_bar; equals S(rho_bar)."""
    return _direct_ledger(message, epsilon_mix).d_s_total


def two_step_first(message: EncodedMessage, epsilon_mix: bool = False) -> float:
    """Entropy of the per-letter erasure to rho_i; equals sum_i p_i S(rho_i)."""
    ledgers = _first_step_ledgers(message, epsilon_mix)
    return float(sum(p * ledger.d_s_total for p, ledger in zip(message.ensemble.probabilities, ledgers)))


def erasure_report(message: EncodedMessage, epsilon_mix: bool = False) -> ErasureReport:
    report = ErasureReport(
        direct=_direct_ledger(message, epsilon_mix),
        first_step=_first_step_ledgers(message, epsilon_mix),
        probabilities=tuple(message.ensemble.probabilities),
        bob=_bob_ledger(message.ensemble, epsilon_mix),
        chi=holevo_chi(message.ensemble),
    )
    if report.protocol_residual > DUAL_COMPUTATION_TOL:
        raise InternalInconsistency(
            f'direct erasure minus first step differs from the mixed-state ledger '
            f'by {report.protocol_residual:.3e}'
        )
    return report


def bob_erasure(ensemble: Ensemble, epsilon_mix: bool = False) -> float:
    """
    Entropy of erasing Bob's mixed systems with a bath in rho_bar.

    Computed twice: as direct erasure minus the first step of the two-step
    procedure, and straight from the mixed-state ledger. The two must agree.
    """
    message = encoded_message(ensemble)
    difference = direct_erasure(message, epsilon_mix) - two_step_first(message, epsilon_mix)
    direct = _bob_ledger(ensemble, epsilon_mix).d_s_total
    if abs(difference - direct) > DUAL_COMPUTATION_TOL:
        raise InternalInconsistency(
            f'Bob erasure: difference form {difference!r} vs ledger {direct!r}'
        )
    return direct


def conditional_probabilities(ensemble: Ensemble, povm: POVM) -> np.ndarray:
    """Matrix of tr{rho_i E_j}, clipped to [0, 1] and renormalized per letter."""
    if povm.dim != ensemble.dim:
        raise DimensionMismatch(f'POVM acts on dimension {povm.dim}, states on {ensemble.dim}')
    table = np.array([
        [trace_product(rho.op, element) for element in povm.elements]
        for rho in ensemble.states
    ])
    if np.any(table < -PROBABILITY_CLIP_TOL) or np.any(table > 1 + PROBABILITY_CLIP_TOL):
        raise InvalidPOVM('outcome probabilities fall outside [0, 1]')
    table = np.clip(table, 0.0, 1.0)
    return table / table.sum(axis=1, keepdims=True)


def measurement_mutual_info(ensemble: Ensemble, povm: POVM) -> float:
    """Mutual information between the letter and the outcome of ``povm``."""
    joint = ensemble.probabilities[:, None] * conditional_probabilities(ensemble, povm)
    return classical_mutual_information(joint / joint.sum())


def holevo_bound_check(
    ensemble: Ensemble,
    measurements: Sequence[POVM] = (),
    epsilon_mix: bool = False,
) -> BoundReport:
    """
    Holevo quantity, Bob's erasure entropy and the best information any
    of ``measurements`` extracts. The measured information may never
    exceed the erasure entropy.
    """
    chi = holevo_chi(ensemble)
    erasure = bob_erasure(ensemble, epsilon_mix)
    if abs(erasure - chi) > CONSISTENCY_TOL:
        raise InternalInconsistency(f'Bob erasure {erasure!r} differs from chi {chi!r}')
    measured = max((measurement_mutual_info(ensemble, povm) for povm in measurements), default=None)
    if measured is not None and measured > chi + BOUND_TOL:
        raise InternalInconsistency(f'measured information {measured!r} exceeds chi {chi!r}')
    return BoundReport(chi=chi, erasure_bob=erasure, measured_info=measured)


def random_projective_povm(dim: int, rng: np.random.Generator) -> POVM:
    """Projectors onto the eigenbasis of a random Hermitian matrix."""
    return POVM.from_basis(random_unitary(dim, rng))


def random_redecomposition(rho: DensityMatrix, n_terms: int, rng: np.random.Generator) -> PureTerms:
    """
    Another pure decomposition of ``rho`` with ``n_terms`` terms.

    Every decomposition has the form psi_alpha = sum_k U_alpha,k sqrt(lambda_k) e_k
    for eigenpairs (lambda_k, e_k) and a matrix U with orthonormal columns.
    """
    values = rho.eigenvalues
    support = values > 0
    vectors = rho.spectrum.eigenvectors[:, support] * np.sqrt(values[support])
    rank = vectors.shape[1]
    if n_terms < rank:
        raise InvalidRank(f'{n_terms} terms cannot decompose a rank-{rank} state')
    seed = int(rng.integers(2**63))
    unitary = scipy.stats.unitary_group.rvs(n_terms, random_state=seed) if n_terms > 1 else np.ones((1, 1))
    unnormalized = vectors @ unitary[:, :rank].T
    terms = []
    for column in unnormalized.T:
        weight = float(np.vdot(column, column).real)
        if weight > 1e-15:
            terms.append((weight, PureState.normalized(column)))
    total = sum(weight for weight, _ in terms)
    return tuple((weight / total, state) for weight, state in terms)


def overlap_family(theta: float) -> Ensemble:
    """{(1/2, |0>), (1/2, cos(theta)|0> + sin(theta)|1>)}."""
    tilted = PureState(np.array([math.cos(theta), math.sin(theta)], dtype=complex))
    return Ensemble.from_states([0.5, 0.5], [PureState.basis(2, 0).projector(), tilted.projector()])
