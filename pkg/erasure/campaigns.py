"""
Randomized verification campaigns behind ``manage.py verify``.

Each suite runs ``trials`` independent trials. Trial ``t`` of suite ``s``
draws from ``make_rng(seed, s, t)``, so any failure can be replayed alone
and the order trials run in never changes the outcome.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from erasure.capacity import (
    chi_gradient,
    grid_maximum,
    optimize_input_distribution,
    projected_finite_difference,
)
from erasure.entropy import chi_via_relative_entropy, holevo_chi, relative_entropy, shannon_entropy
from erasure.exceptions import ErasureChiError
from erasure.protocols import (
    POVM,
    encoded_message,
    erasure_report,
    measurement_mutual_info,
    random_projective_povm,
)
from erasure.states import (
    Ensemble,
    PureState,
    PureTerms,
    average_state,
    make_rng,
    random_density_matrix,
    random_ensemble,
    random_unitary,
)
from erasure.thermo import bath_from_state, erasure_ledger, landauer_check, thermal_bath

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrialContext:
    dims: tuple[int, ...]
    letters: int
    epsilon_mix: bool = True


# A trial returns the size of its worst violation; zero means it passed.
Trial = Callable[[np.random.Generator, int, TrialContext], float]


@dataclass
class SuiteResult:
    name: str
    trials: int = 0
    failures: int = 0
    max_violation: float = 0.0
    first_failure: Optional[int] = None
    first_error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, trial: int, violation: float, error: Optional[str], seed: Optional[int] = None) -> None:
        self.trials += 1
        if violation <= 0:
            return
        self.failures += 1
        self.max_violation = max(self.max_violation, violation)
        if self.first_failure is None:
            self.first_failure = trial
            self.first_error = error
            logger.warning('suite %s failed at seed=%s trial=%d (%s)', self.name, seed, trial, error or violation)


@dataclass
class CampaignReport:
    seed: int
    trials: int
    dims: tuple[int, ...]
    letters: int
    suites: list[SuiteResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(suite.passed for suite in self.suites)


def _letters(rng: np.random.Generator, context: TrialContext) -> int:
    return int(rng.integers(1, context.letters + 1))


def _landauer(rng: np.random.Generator, dim: int, context: TrialContext) -> float:
    """Pure-state erasure against a random full-rank bath, then against rho_bar."""
    ensemble_rng, bath_rng = rng.spawn(2)
    ensemble = random_ensemble(dim, _letters(ensemble_rng, context), 1, ensemble_rng)
    bath = bath_from_state(random_density_matrix(dim, dim, bath_rng), 1.0)
    check = landauer_check(ensemble, bath)
    rho_bar = average_state(ensemble)
    identity_gap = abs(check.slack - relative_entropy(rho_bar, bath.omega))

    optimal = landauer_check(ensemble, thermal_bath(rho_bar, 1.0, context.epsilon_mix))
    optimal_gap = abs(optimal.d_s_total - optimal.erased_information)
    return max(
        max(0.0, -check.slack - 1e-10),
        max(0.0, identity_gap - 1e-9),
        max(0.0, optimal_gap - 1e-9),
    )


def _ledger_additivity(rng: np.random.Generator, dim: int, context: TrialContext) -> float:
    ensemble_rng, bath_rng = rng.spawn(2)
    ensemble = random_ensemble(dim, _letters(ensemble_rng, context), None, ensemble_rng)
    bath = bath_from_state(random_density_matrix(dim, dim, bath_rng), float(bath_rng.uniform(0.1, 10.0)))
    return max(0.0, erasure_ledger(ensemble, bath).residual - 1e-10)


def _protocols(rng: np.random.Generator, dim: int, context: TrialContext) -> float:
    """Direct = first step + Bob, and Bob = chi."""
    ensemble = random_ensemble(dim, _letters(rng, context), None, rng)
    report = erasure_report(encoded_message(ensemble), context.epsilon_mix)
    return max(
        max(0.0, report.protocol_residual - 1e-9),
        max(0.0, report.holevo_residual - 1e-9),
        max(0.0, report.ledger_residual - 1e-10),
    )


def _holevo_bound(rng: np.random.Generator, dim: int, context: TrialContext) -> float:
    """I <= chi for a random projective measurement; I = chi for orthogonal letters."""
    ensemble_rng, povm_rng, basis_rng = rng.spawn(3)
    ensemble = random_ensemble(dim, _letters(ensemble_rng, context), None, ensemble_rng)
    measured = measurement_mutual_info(ensemble, random_projective_povm(dim, povm_rng))
    excess = measured - holevo_chi(ensemble)

    basis = random_unitary(dim, basis_rng)
    n_letters = int(basis_rng.integers(1, dim + 1))
    probabilities = basis_rng.dirichlet(np.ones(n_letters))
    orthogonal = Ensemble.from_states(
        probabilities, [PureState.normalized(basis[:, k]).projector() for k in range(n_letters)],
    )
    saturation = abs(
        measurement_mutual_info(orthogonal, POVM.from_basis(basis)) - holevo_chi(orthogonal)
    )
    expected = abs(holevo_chi(orthogonal) - shannon_entropy(probabilities))
    return max(max(0.0, excess - 1e-9), max(0.0, saturation - 1e-9), max(0.0, expected - 1e-9))


def _chi_identity(rng: np.random.Generator, dim: int, context: TrialContext) -> float:
    ensemble = random_ensemble(dim, _letters(rng, context), None, rng)
    return max(0.0, abs(holevo_chi(ensemble) - chi_via_relative_entropy(ensemble)) - 1e-9)


def _gradient(rng: np.random.Generator, dim: int, context: TrialContext) -> float:
    """Analytic simplex gradient against central differences, at interior points."""
    n_states = max(2, _letters(rng, context))
    state_rngs = rng.spawn(n_states)
    states = [random_density_matrix(dim, dim, state_rng) for state_rng in state_rngs]
    p = 0.5 * rng.dirichlet(np.ones(n_states)) + 0.5 / n_states
    analytic = chi_gradient(states, p)
    analytic = analytic - analytic.mean()
    numeric = projected_finite_difference(states, p, step=1e-5)
    scale = np.maximum(1.0, np.abs(analytic))
    return float(np.max(np.maximum(0.0, np.abs(analytic - numeric) / scale - 1e-5)))


def _capacity(rng: np.random.Generator, dim: int, context: TrialContext) -> float:
    """Two-state optimum against a p-grid, KKT residual and monotone iterates."""
    state_rngs = rng.spawn(2)
    states = [
        random_density_matrix(dim, int(state_rng.integers(1, dim + 1)), state_rng)
        for state_rng in state_rngs
    ]
    result = optimize_input_distribution(states)
    _, grid_chi = grid_maximum(states, step=1e-3)
    decrease = float(np.max(-np.diff(result.chi_history), initial=0.0))
    return max(
        0.0 if result.converged else math.inf,
        max(0.0, abs(result.chi_star - grid_chi) - 1e-4),
        max(0.0, result.kkt_residual - 1e-6),
        max(0.0, grid_chi - result.chi_star - result.kkt_residual - 1e-12),
        max(0.0, decrease - 1e-12),
    )


SUITES: Sequence[tuple[str, Trial]] = (
    ('landauer', _landauer),
    ('ledger_additivity', _ledger_additivity),
    ('protocols', _protocols),
    ('holevo_bound', _holevo_bound),
    ('chi_identity', _chi_identity),
    ('gradient', _gradient),
    ('capacity', _capacity),
)


def run_suite(
    index: int,
    name: str,
    trial: Trial,
    seed: int,
    trials: int,
    context: TrialContext,
) -> SuiteResult:
    result = SuiteResult(name=name)
    for t in range(trials):
        dim = context.dims[t % len(context.dims)]
        try:
            violation, error = trial(make_rng(seed, index, t), dim, context), None
        except ErasureChiError as exc:
            violation, error = math.inf, f'{type(exc).__name__}: {exc}'
        result.record(t, violation, error, seed)
    return result


def run_campaign(
    seed: int,
    trials: int,
    dims: Sequence[int],
    letters: int,
    epsilon_mix: bool = True,
    suites: Optional[Sequence[str]] = None,
) -> CampaignReport:
    context = TrialContext(dims=tuple(dims), letters=letters, epsilon_mix=epsilon_mix)
    report = CampaignReport(seed=seed, trials=trials, dims=context.dims, letters=letters)
    for index, (name, trial) in enumerate(SUITES):
        if suites is not None and name not in suites:
            continue
        logger.debug('suite %s: %d trials', name, trials)
        report.suites.append(run_suite(index, name, trial, seed, trials, context))
    return report


def _ensemble_violation(
    ensemble: Ensemble,
    decompositions: Optional[Sequence[Optional[PureTerms]]],
) -> float:
    rho_bar = average_state(ensemble)
    optimal = landauer_check(ensemble, thermal_bath(rho_bar, 1.0, True))
    report = erasure_report(encoded_message(ensemble, decompositions), True)
    identity_gap = abs(holevo_chi(ensemble) - chi_via_relative_entropy(ensemble))
    return max(
        max(0.0, -optimal.slack - 1e-10),
        max(0.0, abs(optimal.d_s_total - optimal.erased_information) - 1e-9),
        max(0.0, report.protocol_residual - 1e-9),
        max(0.0, report.holevo_residual - 1e-9),
        max(0.0, report.ledger_residual - 1e-10),
        max(0.0, identity_gap - 1e-9),
    )


def check_ensemble(
    ensemble: Ensemble,
    decompositions: Optional[Sequence[Optional[PureTerms]]] = None,
) -> SuiteResult:
    """
    Run the per-ensemble checks of the campaign on one given ensemble: erasure
    against a bath in rho_bar, protocol consistency and the chi identity.
    Bath targets are always mixed with the identity.
    """
    result = SuiteResult(name='input')
    try:
        violation, error = _ensemble_violation(ensemble, decompositions), None
    except ErasureChiError as exc:
        violation, error = math.inf, f'{type(exc).__name__}: {exc}'
    result.record(0, violation, error)
    return result
