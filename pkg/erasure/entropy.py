"""
Entropy functionals in nats: von Neumann, relative, Shannon, classical
mutual information and the Holevo quantity.

Values are plain floats; ``math.inf`` marks an infinite relative entropy.
Conversion to bits happens only when reports are rendered.
"""
import logging
import math
from typing import Sequence

import numpy as np
import scipy.special

from erasure.exceptions import InternalInconsistency, InvalidDistribution
from erasure.operators import (
    ZERO_CUTOFF,
    HermitianOperator,
    check_dims,
    matrix_function,
    support_projector,
    trace_product,
)
from erasure.states import DensityMatrix, Ensemble, average_state

logger = logging.getLogger(__name__)

ROUND_OFF_TOL = 1e-10
DISTRIBUTION_TOL = 1e-9
LN2 = math.log(2.0)


def to_bits(nats: float) -> float:
    return nats / LN2


def clip_round_off(value: float, what: str) -> float:
    """Clip small negative round-off to zero; anything larger is a bug."""
    if value < -ROUND_OFF_TOL:
        raise InternalInconsistency(f'{what} came out negative: {value:.3e}')
    return max(value, 0.0)


def check_distribution(p: Sequence[float], shape_ndim: int = 1) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != shape_ndim or p.size == 0:
        raise InvalidDistribution(f'expected a non-empty {shape_ndim}-d array, got shape {p.shape}')
    if not np.all(np.isfinite(p)) or np.any(p < 0):
        raise InvalidDistribution('entries must be finite and non-negative')
    total = float(p.sum())
    if abs(total - 1.0) > DISTRIBUTION_TOL:
        raise InvalidDistribution(f'entries sum to {total!r}, not 1')
    return p


def von_neumann_entropy(rho: DensityMatrix) -> float:
    value = float(np.sum(scipy.special.entr(rho.eigenvalues)))
    return clip_round_off(value, 'von Neumann entropy')


def relative_entropy(rho: DensityMatrix, omega: DensityMatrix) -> float:
    """
    S(rho||omega) = tr{rho ln rho} - tr{rho ln omega}, or ``math.inf`` when
    rho has weight outside the support of omega.
    """
    check_dims(rho.op, omega.op)
    kernel = HermitianOperator.identity(omega.dim) - support_projector(omega.op)
    leaked = trace_product(rho.op, kernel)
    if leaked > ZERO_CUTOFF:
        return math.inf
    log_omega = matrix_function(omega.op, np.log, support_only=True)
    value = -von_neumann_entropy(rho) - trace_product(rho.op, log_omega)
    return clip_round_off(value, 'relative entropy')


def shannon_entropy(p: Sequence[float]) -> float:
    p = check_distribution(p)
    return clip_round_off(float(np.sum(scipy.special.entr(p))), 'Shannon entropy')


def classical_mutual_information(joint: np.ndarray) -> float:
    """I(X;Y) of a joint distribution given as a matrix p(i, j)."""
    joint = check_distribution(joint, shape_ndim=2)
    product = np.outer(joint.sum(axis=1), joint.sum(axis=0))
    terms = scipy.special.xlogy(joint, joint) - scipy.special.xlogy(joint, product)
    return clip_round_off(float(terms.sum()), 'mutual information')


def mean_letter_entropy(ensemble: Ensemble) -> float:
    """sum_i p_i S(rho_i)."""
    return float(sum(p * von_neumann_entropy(state) for p, state in ensemble))


def holevo_chi(ensemble: Ensemble) -> float:
    """S(sum_i p_i rho_i) - sum_i p_i S(rho_i)."""
    value = von_neumann_entropy(average_state(ensemble)) - mean_letter_entropy(ensemble)
    return clip_round_off(value, 'Holevo quantity')


def letter_divergences(ensemble: Ensemble) -> np.ndarray:
    """S(rho_i || rho_bar) for every letter, including those with p_i = 0."""
    rho_bar = average_state(ensemble)
    return np.array([relative_entropy(state, rho_bar) for state in ensemble.states])


def chi_via_relative_entropy(ensemble: Ensemble) -> float:
    """sum_i p_i S(rho_i || rho_bar) over the letters with p_i above the zero cutoff."""
    divergences = letter_divergences(ensemble)
    probabilities = ensemble.probabilities
    support = probabilities > ZERO_CUTOFF
    if np.any(np.isinf(divergences[support])):
        raise InternalInconsistency(
            'a letter with p_i above the zero cutoff lies outside the support of the average state'
        )
    return float(np.dot(probabilities[support], divergences[support]))
