from erasure.entropy import chi_via_relative_entropy, holevo_chi, letter_divergences
from erasure.management.base import ErasureCommand, RunConfig
from erasure.reports import Report


class Command(ErasureCommand):
    help = 'Holevo quantity of an ensemble, with the per-letter S(rho_i || rho_bar) certificate'

    def run(self, config: RunConfig) -> Report:
        ensemble = self.load_input(config).ensemble
        return (
            Report(config.command)
            .entropy('chi', holevo_chi(ensemble))
            .entropy('letter_divergence', list(letter_divergences(ensemble)))
            .entropy('chi_via_relative_entropy', chi_via_relative_entropy(ensemble))
        )
