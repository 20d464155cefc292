"""
Quantum states and Alice's code: density matrices, pure states, ensembles,
pure-state decompositions, and seeded random generation.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional, Sequence

import numpy as np

from erasure.exceptions import InvalidRank, ValidationError
from erasure.operators import (
    ZERO_CUTOFF,
    HermitianOperator,
    Spectrum,
    clip_eigenvalues,
    eigh,
)

logger = logging.getLogger(__name__)

TRACE_TOL = 1e-9
POSITIVITY_TOL = 1e-9
NORM_TOL = 1e-10
PROBABILITY_TOL = 1e-9
RECONSTRUCTION_TOL = 1e-8
# Below this drift a value is left untouched, so re-validating is a no-op.
_RENORMALIZE_EPS = 4 * np.finfo(float).eps


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """
    A counter-based (Philox) generator for ``stream`` under ``seed``.

    The same (seed, stream) pair always yields the same sequence, whatever
    else has been drawn, so trials can be replayed one at a time.
    """
    sequence = np.random.SeedSequence(seed, spawn_key=tuple(stream))
    return np.random.Generator(np.random.Philox(sequence))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A positive semidefinite, unit-trace Hermitian operator."""
    op: HermitianOperator

    def __post_init__(self) -> None:
        spectrum = eigh(self.op)
        smallest = float(spectrum.eigenvalues[-1])
        if smallest < -POSITIVITY_TOL:
            raise ValidationError('positivity', f'eigenvalue {smallest:.3e} is negative')
        trace = self.op.trace()
        if abs(trace - 1.0) > TRACE_TOL:
            raise ValidationError('trace', f'trace is {trace!r}')
        if abs(trace - 1.0) > _RENORMALIZE_EPS * self.op.dim:
            object.__setattr__(self, 'op', self.op.scaled(1.0 / trace))
        else:
            self.__dict__['spectrum'] = spectrum

    @classmethod
    def from_array(cls, matrix: np.ndarray) -> 'DensityMatrix':
        return cls(HermitianOperator(matrix))

    @classmethod
    def maximally_mixed(cls, dim: int) -> 'DensityMatrix':
        return cls(HermitianOperator(np.eye(dim, dtype=complex) / dim))

    @property
    def matrix(self) -> np.ndarray:
        return self.op.matrix

    @property
    def dim(self) -> int:
        return self.op.dim

    @cached_property
    def spectrum(self) -> Spectrum:
        return eigh(self.op)

    @property
    def eigenvalues(self) -> np.ndarray:
        """Descending eigenvalues with round-off zeros clipped."""
        return np.maximum(clip_eigenvalues(self.spectrum.eigenvalues), 0.0)

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.eigenvalues > ZERO_CUTOFF))

    def is_full_rank(self) -> bool:
        return self.rank == self.dim


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amplitudes = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amplitudes.size == 0:
            raise ValidationError('dimension', 'empty state vector')
        norm = float(np.linalg.norm(amplitudes))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError('normalization', f'norm is {norm!r}')
        if abs(norm - 1.0) > _RENORMALIZE_EPS:
            amplitudes = amplitudes / norm
        amplitudes.setflags(write=False)
        object.__setattr__(self, 'amplitudes', amplitudes)

    @classmethod
    def normalized(cls, vector: np.ndarray) -> 'PureState':
        vector = np.asarray(vector, dtype=complex)
        return cls(vector / np.linalg.norm(vector))

    @classmethod
    def basis(cls, dim: int, index: int) -> 'PureState':
        vector = np.zeros(dim, dtype=complex)
        vector[index] = 1.0
        return cls(vector)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def projector(self) -> DensityMatrix:
        return DensityMatrix(HermitianOperator.projector(self.amplitudes))


def _check_distribution(weights: np.ndarray, invariant: str) -> np.ndarray:
    if weights.size == 0:
        raise ValidationError(invariant, 'no entries')
    if not np.all(np.isfinite(weights)) or np.any(weights < 0):
        raise ValidationError(invariant, f'negative or non-finite entry in {weights.tolist()}')
    total = float(weights.sum())
    if abs(total - 1.0) > PROBABILITY_TOL:
        raise ValidationError(invariant, f'entries sum to {total!r}')
    if abs(total - 1.0) > _RENORMALIZE_EPS * weights.size:
        weights = weights / total
    return weights


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Letters i with probability p_i encoded in states rho_i."""
    members: tuple[tuple[float, DensityMatrix], ...]

    def __post_init__(self) -> None:
        members = tuple(self.members)
        if not members:
            raise ValidationError('nonempty', 'an ensemble needs at least one letter')
        dims = {state.dim for _, state in members}
        if len(dims) != 1:
            raise ValidationError('dimension', f'letters have dimensions {sorted(dims)}')
        probabilities = _check_distribution(
            np.array([float(p) for p, _ in members]), 'probabilities',
        )
        object.__setattr__(
            self, 'members',
            tuple((float(p), state) for p, (_, state) in zip(probabilities, members)),
        )

    @classmethod
    def from_states(
        cls, probabilities: Sequence[float], states: Sequence[DensityMatrix],
    ) -> 'Ensemble':
        if len(probabilities) != len(states):
            raise ValidationError('probabilities', 'one probability per state is required')
        return cls(tuple(zip(probabilities, states)))

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([p for p, _ in self.members])

    @property
    def states(self) -> tuple[DensityMatrix, ...]:
        return tuple(state for _, state in self.members)

    @property
    def dim(self) -> int:
        return self.members[0][1].dim

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[tuple[float, DensityMatrix]]:
        return iter(self.members)


PureTerms = tuple[tuple[float, PureState], ...]


@dataclass(frozen=True, eq=False)
class PureDecomposition:
    """
    For every letter, weights r_alpha and pure states phi_alpha with
    rho_i = sum_alpha r_alpha |phi_alpha><phi_alpha|.
    """
    letters: tuple[PureTerms, ...]

    def __post_init__(self) -> None:
        letters = []
        for index, terms in enumerate(self.letters):
            terms = tuple((float(r), state) for r, state in terms)
            if not terms:
                raise ValidationError('decomposition', f'letter {index} has no terms')
            _check_distribution(np.array([r for r, _ in terms]), 'decomposition')
            if len({state.dim for _, state in terms}) != 1:
                raise ValidationError('decomposition', f'letter {index} mixes dimensions')
            letters.append(terms)
        object.__setattr__(self, 'letters', tuple(letters))

    def __len__(self) -> int:
        return len(self.letters)

    def reconstruct(self, letter: int) -> np.ndarray:
        return sum(
            r * np.outer(state.amplitudes, state.amplitudes.conj())
            for r, state in self.letters[letter]
        )

    def reconstruction_error(self, letter: int, rho: DensityMatrix) -> float:
        return float(np.max(np.abs(self.reconstruct(letter) - rho.matrix)))


def average_state(ensemble: Ensemble) -> DensityMatrix:
    """The barred state sum_i p_i rho_i."""
    matrix = sum(p * state.matrix for p, state in ensemble)
    return DensityMatrix.from_array(matrix)


def pure_decompose(rho: DensityMatrix) -> PureDecomposition:
    """The eigendecomposition of ``rho`` as a single-letter pure decomposition."""
    spectrum = rho.spectrum
    values = rho.eigenvalues
    terms = tuple(
        (float(value), PureState.normalized(spectrum.eigenvectors[:, k]))
        for k, value in enumerate(values)
        if value > ZERO_CUTOFF
    )
    return PureDecomposition((terms,))


def random_pure_state(dim: int, rng: np.random.Generator) -> PureState:
    """Haar-random: ``dim`` complex standard normals, normalized."""
    if dim < 1:
        raise ValidationError('dimension', f'dim must be >= 1, got {dim}')
    vector = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState.normalized(vector)


def random_density_matrix(dim: int, rank: int, rng: np.random.Generator) -> DensityMatrix:
    """A flat-Dirichlet mixture of ``rank`` Haar pure states."""
    if not 1 <= rank <= dim:
        raise InvalidRank(f'rank must lie in [1, {dim}], got {rank}')
    weight_rng, *state_rngs = rng.spawn(rank + 1)
    weights = weight_rng.dirichlet(np.ones(rank))
    matrix = np.zeros((dim, dim), dtype=complex)
    for weight, state_rng in zip(weights, state_rngs):
        psi = random_pure_state(dim, state_rng).amplitudes
        matrix += weight * np.outer(psi, psi.conj())
    return DensityMatrix.from_array(matrix)


def random_ensemble(
    dim: int,
    n_letters: int,
    max_rank: Optional[int],
    rng: np.random.Generator,
) -> Ensemble:
    """
    Dirichlet letter probabilities and independent random states, each of
    rank drawn uniformly from 1..max_rank (``None`` means up to ``dim``).
    """
    if n_letters < 1:
        raise ValidationError('nonempty', 'n_letters must be >= 1')
    max_rank = dim if max_rank is None else max_rank
    if not 1 <= max_rank <= dim:
        raise InvalidRank(f'max_rank must lie in [1, {dim}], got {max_rank}')
    probability_rng, rank_rng, *letter_rngs = rng.spawn(n_letters + 2)
    probabilities = probability_rng.dirichlet(np.ones(n_letters))
    ranks = rank_rng.integers(1, max_rank + 1, size=n_letters)
    states = [
        random_density_matrix(dim, int(rank), letter_rng)
        for rank, letter_rng in zip(ranks, letter_rngs)
    ]
    return Ensemble.from_states(probabilities, states)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Eigenvectors of a random Hermitian matrix, as a unitary."""
    gaussian = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return eigh(HermitianOperator((gaussian + gaussian.conj().T) / 2)).eigenvectors
