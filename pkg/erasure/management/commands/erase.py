from erasure.management.base import ErasureCommand, RunConfig
from erasure.protocols import encoded_message, erasure_report
from erasure.reports import Report


class Command(ErasureCommand):
    help = (
        'Entropy of the direct erasure, of the first step of the two-step erasure and of '
        "Bob's erasure, with the consistency residuals. Letters without a decomposition "
        'in the file use their eigendecomposition.'
    )

    def run(self, config: RunConfig) -> Report:
        document = self.load_input(config)
        message = encoded_message(document.ensemble, document.decompositions)
        report = erasure_report(message, config.epsilon_mix)
        return (
            Report(config.command)
            .entropy('direct_erasure', report.direct_erasure)
            .entropy('two_step_first', report.two_step_first)
            .entropy('bob_erasure', report.bob_erasure)
            .entropy('chi', report.chi)
            .entropy('protocol_residual', report.protocol_residual)
            .entropy('holevo_residual', report.holevo_residual)
            .add('epsilon_mix', config.epsilon_mix)
        )
