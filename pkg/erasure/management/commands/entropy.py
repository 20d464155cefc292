from erasure.entropy import mean_letter_entropy, von_neumann_entropy
from erasure.management.base import ErasureCommand, RunConfig
from erasure.reports import Report
from erasure.states import average_state


class Command(ErasureCommand):
    help = 'Per-letter entropies, the entropy of the average state and the mean letter entropy'

    def run(self, config: RunConfig) -> Report:
        ensemble = self.load_input(config).ensemble
        return (
            Report(config.command)
            .entropy('letter_entropy', [von_neumann_entropy(rho) for rho in ensemble.states])
            .entropy('average_entropy', von_neumann_entropy(average_state(ensemble)))
            .entropy('mean_letter_entropy', mean_letter_entropy(ensemble))
        )
