"""
Dense Hermitian linear algebra: validation, eigendecomposition, spectral
matrix functions and traces of products.
"""
import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from erasure.exceptions import (
    ConvergenceFailure,
    DimensionMismatch,
    DomainError,
    InternalInconsistency,
    NonHermitianInput,
)

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-9
# Eigenvalues in [CLIP_BELOW, ZERO_CUTOFF] are treated as exact zeros.
CLIP_BELOW = -1e-9
ZERO_CUTOFF = 1e-12
IMAG_TRACE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """
    A dense complex self-adjoint matrix.

    The stored matrix is exactly Hermitian: the strict upper triangle is
    mirrored into the lower one and the diagonal is made real.
    """
    matrix: np.ndarray

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] == 0:
            raise DimensionMismatch(f'expected a non-empty square matrix, got shape {matrix.shape}')
        if not np.all(np.isfinite(matrix)):
            raise DomainError('matrix has non-finite entries')

        scale = max(1.0, float(np.max(np.abs(matrix))))
        asymmetry = float(np.max(np.abs(matrix - matrix.conj().T)))
        if asymmetry > SYMMETRY_TOL * scale:
            raise NonHermitianInput(f'|A - A^dagger|_max = {asymmetry:.3e}')

        upper = np.triu(matrix, 1)
        matrix = upper + upper.conj().T + np.diag(matrix.diagonal().real)
        matrix.setflags(write=False)
        object.__setattr__(self, 'matrix', matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def identity(cls, dim: int) -> 'HermitianOperator':
        return cls(np.eye(dim, dtype=complex))

    @classmethod
    def projector(cls, vector: np.ndarray) -> 'HermitianOperator':
        vector = np.asarray(vector, dtype=complex)
        return cls(np.outer(vector, vector.conj()))

    def trace(self) -> float:
        return float(self.matrix.diagonal().real.sum())

    def __add__(self, other: 'HermitianOperator') -> 'HermitianOperator':
        check_dims(self, other)
        return HermitianOperator(self.matrix + other.matrix)

    def __sub__(self, other: 'HermitianOperator') -> 'HermitianOperator':
        check_dims(self, other)
        return HermitianOperator(self.matrix - other.matrix)

    def scaled(self, factor: float) -> 'HermitianOperator':
        return HermitianOperator(factor * self.matrix)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues in descending order with orthonormal eigenvector columns."""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T


def check_dims(a: HermitianOperator, b: HermitianOperator) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(f'dimensions {a.dim} and {b.dim} differ')


def eigh(a: HermitianOperator) -> Spectrum:
    try:
        values, vectors = scipy.linalg.eigh(a.matrix)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ConvergenceFailure(f'eigensolver failed on a {a.dim}x{a.dim} operator') from exc
    # LAPACK returns ascending order
    return Spectrum(values[::-1].copy(), vectors[:, ::-1].copy())


def clip_eigenvalues(values: np.ndarray) -> np.ndarray:
    """Set eigenvalues in [-1e-9, 1e-12] to exactly zero; leave the rest."""
    values = np.array(values, dtype=float)
    values[(values >= CLIP_BELOW) & (values <= ZERO_CUTOFF)] = 0.0
    return values


def matrix_function(
    a: HermitianOperator,
    f: Callable[[np.ndarray], np.ndarray],
    support_only: bool = False,
) -> HermitianOperator:
    """
    Return V diag(f(lambda)) V^dagger.

    ``f`` is applied to the whole (clipped) eigenvalue array at once, so
    numpy ufuncs such as ``np.log`` work directly. With ``support_only``
    the zero eigenvalues are skipped and map to zero, which gives the
    logarithm restricted to the support.
    """
    spectrum = eigh(a)
    values = clip_eigenvalues(spectrum.eigenvalues)
    mapped = np.zeros_like(values)
    mask = values != 0.0 if support_only else np.ones(values.shape, dtype=bool)
    with np.errstate(all='ignore'):
        mapped[mask] = np.asarray(f(values[mask]), dtype=float)
    if not np.all(np.isfinite(mapped)):
        bad = values[~np.isfinite(mapped)]
        raise DomainError(f'function undefined at eigenvalue(s) {bad.tolist()}')
    vectors = spectrum.eigenvectors
    return HermitianOperator((vectors * mapped) @ vectors.conj().T)


def support_projector(a: HermitianOperator) -> HermitianOperator:
    """Projector onto the span of the eigenvectors with nonzero (clipped) eigenvalue."""
    spectrum = eigh(a)
    vectors = spectrum.eigenvectors[:, clip_eigenvalues(spectrum.eigenvalues) != 0.0]
    return HermitianOperator(vectors @ vectors.conj().T)


def trace_product(a: HermitianOperator, b: HermitianOperator) -> float:
    """Re tr(AB); the imaginary part must vanish to 1e-10."""
    check_dims(a, b)
    value = complex(np.sum(a.matrix * b.matrix.T))
    if abs(value.imag) >= IMAG_TRACE_TOL:
        raise InternalInconsistency(f'tr(AB) has imaginary part {value.imag:.3e}')
    return value.real
