from erasure.capacity import optimize_input_distribution
from erasure.entropy import to_bits
from erasure.management.base import ErasureCommand, RunConfig
from erasure.reports import Report
from erasure.serializers import load_states_file


class Command(ErasureCommand):
    help = (
        'Maximise the Holevo quantity over the input distribution of the letter states '
        'in --input (their probabilities are ignored and may be left out). Running out '
        'of iterations is reported with converged=false.'
    )

    def run(self, config: RunConfig) -> Report:
        states = load_states_file(self.input_path(config))
        result = optimize_input_distribution(states, tol=config.tol)
        return (
            Report(config.command)
            .add('p_star', [float(p) for p in result.p_star])
            .add('chi_star_nats', result.chi_star)
            .add('chi_star_bits', to_bits(result.chi_star))
            .entropy('kkt_residual', result.kkt_residual)
            .add('iterations', result.iterations)
            .add('converged', result.converged)
        )
