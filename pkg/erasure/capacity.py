"""
Maximisation of the Holevo quantity over the input distribution for a
fixed set of letter states.

The optimiser is the classical-quantum analogue of Blahut-Arimoto:

    p_i <- p_i exp(S(rho_i || rho_bar)) / normaliser

started from the uniform distribution. Its fixed points are exactly the
points where S(rho_i || rho_bar) = chi on the support and <= chi off it,
so the distance from that condition (the KKT residual) is the stopping
rule.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.special

from erasure.conf import erasure_settings
from erasure.entropy import check_distribution, holevo_chi, letter_divergences, von_neumann_entropy
from erasure.exceptions import DomainError, InternalInconsistency, NotConverged, SupportError
from erasure.states import DensityMatrix, Ensemble

logger = logging.getLogger(__name__)

SUPPORT_CUTOFF = 1e-12
MONOTONICITY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CapacityResult:
    p_star: np.ndarray
    chi_star: float
    kkt_residual: float
    iterations: int
    converged: bool
    chi_history: tuple[float, ...] = field(default=())


def _ensemble(states: Sequence[DensityMatrix], p: Sequence[float]) -> Ensemble:
    p = check_distribution(p)
    if len(p) != len(states):
        raise DomainError(f'{len(p)} probabilities for {len(states)} states')
    return Ensemble.from_states(p, states)


def chi_of_distribution(states: Sequence[DensityMatrix], p: Sequence[float]) -> float:
    """chi(p) for the fixed letter states."""
    return holevo_chi(_ensemble(states, p))


def chi_gradient(states: Sequence[DensityMatrix], p: Sequence[float]) -> np.ndarray:
    """d chi / d p_i = S(rho_i || rho_bar) - 1, for strictly positive p."""
    ensemble = _ensemble(states, p)
    if np.any(ensemble.probabilities <= SUPPORT_CUTOFF):
        raise SupportError('the gradient is only provided in the interior of the simplex')
    return letter_divergences(ensemble) - 1.0


def projected_finite_difference(
    states: Sequence[DensityMatrix],
    p: Sequence[float],
    step: float = 1e-5,
) -> np.ndarray:
    """
    Central differences of chi along e_i - (1/n) 1, the simplex tangent
    directions. Compare with ``g - g.mean()`` for an analytic gradient g.
    """
    p = check_distribution(p)
    n = len(p)
    result = np.empty(n)
    for i in range(n):
        direction = -np.full(n, 1.0 / n)
        direction[i] += 1.0
        forward = chi_of_distribution(states, p + step * direction)
        backward = chi_of_distribution(states, p - step * direction)
        result[i] = (forward - backward) / (2 * step)
    return result


def _kkt(ensemble: Ensemble) -> tuple[float, float, np.ndarray]:
    divergences = letter_divergences(ensemble)
    support = ensemble.probabilities > SUPPORT_CUTOFF
    chi = float(np.dot(ensemble.probabilities[support], divergences[support]))
    residual = float(np.max(divergences)) - chi
    if residual < -MONOTONICITY_TOL:
        raise InternalInconsistency(f'KKT residual {residual!r} is negative')
    return max(residual, 0.0), chi, divergences


def kkt_residual(states: Sequence[DensityMatrix], p: Sequence[float]) -> float:
    """max_i S(rho_i || rho_bar) - chi(p); zero exactly at an optimum."""
    residual, _, _ = _kkt(_ensemble(states, p))
    return residual


def optimize_input_distribution(
    states: Sequence[DensityMatrix],
    tol: float = 1e-9,
    max_iter: Optional[int] = None,
    raise_on_failure: bool = False,
) -> CapacityResult:
    """
    Run the fixed-point iteration from the uniform distribution until the
    KKT residual drops below ``tol``.

    When ``max_iter`` runs out the best iterate comes back with
    ``converged=False``, or inside ``NotConverged`` if ``raise_on_failure``.
    """
    if not states:
        raise DomainError('at least one state is required')
    if not tol > 0:
        raise DomainError(f'tol must be positive, got {tol!r}')
    max_iter = erasure_settings.MAX_ITER if max_iter is None else max_iter
    if max_iter < 1:
        raise DomainError(f'max_iter must be >= 1, got {max_iter!r}')

    p = np.full(len(states), 1.0 / len(states))
    residual, chi, divergences = _kkt(Ensemble.from_states(p, states))
    history = [chi]
    iterations = 0
    while residual >= tol and iterations < max_iter:
        # letters outside the support of rho_bar cannot occur at p_i > 0
        exponents = np.where(np.isinf(divergences), 0.0, divergences)
        weights = p * np.exp(exponents - exponents.max())
        p = weights / weights.sum()
        residual, new_chi, divergences = _kkt(Ensemble.from_states(p, states))
        if new_chi < chi - MONOTONICITY_TOL:
            raise InternalInconsistency(f'chi decreased from {chi!r} to {new_chi!r}')
        chi = new_chi
        history.append(chi)
        iterations += 1
        logger.debug('iteration %d chi=%.12g kkt=%.3e', iterations, chi, residual)

    result = CapacityResult(
        p_star=p,
        chi_star=chi_of_distribution(states, p),
        kkt_residual=residual,
        iterations=iterations,
        converged=residual < tol,
        chi_history=tuple(history),
    )
    if not result.converged:
        logger.warning('capacity iteration stopped after %d steps, KKT residual %.3e', iterations, residual)
        if raise_on_failure:
            raise NotConverged(f'KKT residual {residual:.3e} after {iterations} iterations', result)
    return result


def grid_maximum(states: Sequence[DensityMatrix], step: float = 1e-3) -> tuple[float, float]:
    """
    Brute-force max of chi over p = (t, 1 - t) on a grid, for two states.
    Returns (t, chi).
    """
    if len(states) != 2:
        raise DomainError('the grid search handles exactly two states')
    grid = np.linspace(0.0, 1.0, int(round(1.0 / step)) + 1)
    first, second = states[0].matrix, states[1].matrix
    mixtures = grid[:, None, None] * first + (1 - grid)[:, None, None] * second
    mixture_entropy = scipy.special.entr(np.clip(np.linalg.eigvalsh(mixtures), 0.0, None)).sum(axis=1)
    letter_entropy = grid * von_neumann_entropy(states[0]) + (1 - grid) * von_neumann_entropy(states[1])
    values = mixture_entropy - letter_entropy
    best = int(np.argmax(values))
    return float(grid[best]), float(values[best])
