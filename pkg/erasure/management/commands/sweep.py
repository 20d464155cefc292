import math

import numpy as np
from django.core.management.base import CommandError

from erasure.entropy import holevo_chi, von_neumann_entropy
from erasure.management.base import BAD_INPUT, ErasureCommand, RunConfig
from erasure.protocols import POVM, measurement_mutual_info, overlap_family
from erasure.reports import Report
from erasure.states import average_state


class Command(ErasureCommand):
    help = (
        'Tabulate chi and the information a computational-basis measurement recovers '
        'for {|0>, cos(theta)|0> + sin(theta)|1>} on a grid of theta in (0, pi/2]'
    )

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            '--points',
            type=int,
            default=50,
            help='Number of theta values (default: 50)',
        )

    def handle(self, *args, **options):
        self.points = options['points']
        if self.points < 1:
            raise CommandError(f'--points must be >= 1, got {self.points}', returncode=BAD_INPUT)
        super().handle(*args, **options)

    def run(self, config: RunConfig) -> Report:
        thetas = [k * (math.pi / 2) / self.points for k in range(1, self.points + 1)]
        computational = POVM.from_basis(np.eye(2, dtype=complex))
        chis, averages, measured = [], [], []
        for theta in thetas:
            ensemble = overlap_family(theta)
            chis.append(holevo_chi(ensemble))
            averages.append(von_neumann_entropy(average_state(ensemble)))
            measured.append(measurement_mutual_info(ensemble, computational))
        report = Report(config.command, columnar=True)
        return (
            report
            .add('theta', thetas)
            .add('overlap', [math.cos(theta) for theta in thetas])
            .entropy('chi', chis)
            .entropy('average_entropy', averages)
            .entropy('measured_info', measured)
        )
