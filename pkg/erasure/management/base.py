"""
Shared plumbing for the analysis commands: the common options, the run
configuration built from them, and the mapping from library errors to
exit statuses.
"""
import logging
from dataclasses import dataclass
from typing import Any, Optional

from django.core.management.base import BaseCommand, CommandError

from erasure.conf import erasure_settings
from erasure.exceptions import (
    ErasureChiError,
    InternalInconsistency,
    ParseError,
    RankDeficientBath,
    ValidationError,
)
from erasure.reports import Report, render
from erasure.serializers import EnsembleDocument, load_ensemble_file

logger = logging.getLogger(__name__)

MAX_SEED = 2**64

# exit statuses
SUITE_FAILURE = 1
BAD_INPUT = 2


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: Optional[str]
    seed: int
    dims: tuple[int, ...]
    letters: int
    trials: int
    tol: float
    units: str
    format: str
    epsilon_mix: bool

    def __post_init__(self) -> None:
        if not 0 <= self.seed < MAX_SEED:
            raise CommandError(f'--seed must be an unsigned 64-bit integer, got {self.seed}', returncode=BAD_INPUT)
        if not self.dims or any(dim < 2 for dim in self.dims):
            raise CommandError(f'--dims must list dimensions >= 2, got {list(self.dims)}', returncode=BAD_INPUT)
        if self.letters < 1:
            raise CommandError(f'--letters must be >= 1, got {self.letters}', returncode=BAD_INPUT)
        if self.trials < 1:
            raise CommandError(f'--trials must be >= 1, got {self.trials}', returncode=BAD_INPUT)
        if not self.tol > 0:
            raise CommandError(f'--tol must be positive, got {self.tol}', returncode=BAD_INPUT)


def parse_dims(value: Any) -> tuple[int, ...]:
    if isinstance(value, str):
        try:
            return tuple(int(part) for part in value.split(',') if part.strip())
        except ValueError:
            raise CommandError(f'--dims expects a comma separated list of integers, got {value!r}', returncode=BAD_INPUT) from None
    return tuple(int(dim) for dim in value)


class ErasureCommand(BaseCommand):
    """
    Base class for ``entropy``, ``chi``, ``erase``, ``verify``, ``capacity``
    and ``sweep``. Subclasses implement ``run(config)`` and return a Report.
    """
    requires_system_checks: list[str] = []

    def add_arguments(self, parser):
        parser.add_argument(
            '--input',
            help='Ensemble JSON file',
        )
        parser.add_argument(
            '--seed',
            type=int,
            default=None,
            help='Master seed (default: ERASURE_CHI_SEED or 0)',
        )
        parser.add_argument(
            '--dims',
            default=None,
            help='Comma separated dimensions (default: 2,3,4)',
        )
        parser.add_argument(
            '--letters',
            type=int,
            default=None,
            help='Maximum number of letters per random ensemble',
        )
        parser.add_argument(
            '--trials',
            type=int,
            default=None,
            help='Trials per verification suite',
        )
        parser.add_argument(
            '--tol',
            type=float,
            default=None,
            help='Convergence tolerance',
        )
        parser.add_argument(
            '--units',
            choices=['nats', 'bits'],
            default='nats',
            help='Entropy units (default: nats)',
        )
        parser.add_argument(
            '--format',
            choices=['table', 'json', 'csv'],
            default='table',
            help='Report format (default: table)',
        )
        parser.add_argument(
            '--epsilon-mix',
            action='store_true',
            help='Mix rank-deficient bath targets with the identity',
        )

    def get_config(self, options: dict[str, Any]) -> RunConfig:
        def given(name: str, default: Any) -> Any:
            return default if options.get(name) is None else options[name]

        return RunConfig(
            command=self.name,
            input=options.get('input'),
            seed=given('seed', erasure_settings.DEFAULT_SEED),
            dims=parse_dims(given('dims', erasure_settings.DEFAULT_DIMS)),
            letters=given('letters', erasure_settings.DEFAULT_LETTERS),
            trials=given('trials', erasure_settings.DEFAULT_TRIALS),
            tol=given('tol', erasure_settings.DEFAULT_TOL),
            units=given('units', 'nats'),
            format=given('format', 'table'),
            epsilon_mix=bool(options.get('epsilon_mix')),
        )

    @property
    def name(self) -> str:
        return self.__module__.rsplit('.', 1)[-1]

    def input_path(self, config: RunConfig) -> str:
        if config.input is None:
            raise CommandError(f'{config.command} needs --input PATH', returncode=BAD_INPUT)
        return config.input

    def load_input(self, config: RunConfig) -> EnsembleDocument:
        return load_ensemble_file(self.input_path(config))

    def run(self, config: RunConfig) -> Report:
        raise NotImplementedError('subclasses of ErasureCommand must provide a run() method')

    def emit(self, report: Report, config: RunConfig) -> None:
        self.stdout.write(render(report, config.format, config.units), ending='')

    def check(self, report: Report, config: RunConfig) -> None:
        """Called after the report is written; raise CommandError to fail the run."""

    def handle(self, *args, **options):
        config = self.get_config(options)
        logger.debug('running %s', config)
        try:
            report = self.run(config)
        except ParseError as exc:
            raise CommandError(f'ParseError: {exc}', returncode=BAD_INPUT) from exc
        except ValidationError as exc:
            raise CommandError(f'ValidationError({exc.invariant}): {exc}', returncode=BAD_INPUT) from exc
        except RankDeficientBath as exc:
            raise CommandError(
                f'RankDeficientBath: {exc} (rerun with --epsilon-mix)', returncode=BAD_INPUT,
            ) from exc
        except InternalInconsistency as exc:
            raise CommandError(f'InternalInconsistency: {exc}', returncode=SUITE_FAILURE) from exc
        except ErasureChiError as exc:
            raise CommandError(f'{type(exc).__name__}: {exc}', returncode=BAD_INPUT) from exc
        self.emit(report, config)
        self.check(report, config)
