from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from erasure.conf import erasure_settings
from erasure.exceptions import ErasureChiError
from erasure.management.base import BAD_INPUT, MAX_SEED
from erasure.serializers import save_ensemble
from erasure.states import make_rng, pure_decompose, random_ensemble


class Command(BaseCommand):
    help = 'Write a random ensemble in the ensemble file format, for trying out the other commands'
    requires_system_checks: list[str] = []

    def add_arguments(self, parser):
        parser.add_argument(
            '--dim',
            type=int,
            default=2,
            help='Hilbert space dimension (default: 2)',
        )
        parser.add_argument(
            '--letters',
            type=int,
            default=None,
            help='Number of letters (default: 3)',
        )
        parser.add_argument(
            '--max-rank',
            type=int,
            default=None,
            help='Largest rank of a letter state (default: full rank)',
        )
        parser.add_argument(
            '--seed',
            type=int,
            default=None,
            help='Master seed (default: ERASURE_CHI_SEED or 0)',
        )
        parser.add_argument(
            '--with-decomposition',
            action='store_true',
            help="Include each letter's eigendecomposition",
        )
        parser.add_argument(
            '--output',
            help='Write to this file instead of standard output',
        )

    def handle(self, *args, **options):
        dim = options['dim']
        letters = erasure_settings.DEFAULT_LETTERS if options['letters'] is None else options['letters']
        seed = erasure_settings.DEFAULT_SEED if options['seed'] is None else options['seed']
        max_rank = options['max_rank']
        if letters < 1:
            raise CommandError(f'--letters must be >= 1, got {letters}', returncode=BAD_INPUT)
        if not 0 <= seed < MAX_SEED:
            raise CommandError(f'--seed must be an unsigned 64-bit integer, got {seed}', returncode=BAD_INPUT)

        try:
            ensemble = random_ensemble(dim, letters, max_rank, make_rng(seed))
        except ErasureChiError as exc:
            raise CommandError(f'{type(exc).__name__}: {exc}', returncode=BAD_INPUT) from exc

        decompositions = None
        if options['with_decomposition']:
            decompositions = tuple(pure_decompose(rho).letters[0] for rho in ensemble.states)
        data = save_ensemble(ensemble, decompositions)

        if options['output'] is None:
            self.stdout.write(data.decode('utf-8'))
            return
        Path(options['output']).write_bytes(data)
        self.stdout.write(
            self.style.SUCCESS(f'Wrote {letters} letters in dimension {dim} to {options["output"]} (seed {seed})')
        )
