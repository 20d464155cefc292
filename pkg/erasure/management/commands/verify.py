from django.core.management.base import CommandError

from erasure.campaigns import CampaignReport, check_ensemble, run_campaign
from erasure.management.base import SUITE_FAILURE, ErasureCommand, RunConfig
from erasure.reports import Report


class Command(ErasureCommand):
    help = (
        'Run the randomized verification suites: Landauer slack, ledger additivity, '
        'erasure protocol consistency, the Holevo bound under measurement, the chi '
        'identity, the capacity gradient and the capacity optimiser. With --input the '
        'ensemble in that file is checked as well. Exits with status 1 if any suite fails.'
    )

    def run(self, config: RunConfig) -> Report:
        document = self.load_input(config) if config.input is not None else None
        # random letters are rank deficient, so bath targets are always mixed
        campaign = run_campaign(config.seed, config.trials, config.dims, config.letters, epsilon_mix=True)
        if document is not None:
            campaign.suites.append(check_ensemble(document.ensemble, document.decompositions))
        self.campaign = campaign
        return campaign_report(config.command, campaign)

    def check(self, report: Report, config: RunConfig) -> None:
        if self.campaign.passed:
            return
        failed = [suite for suite in self.campaign.suites if not suite.passed]
        first = failed[0]
        if first.name == 'input':
            message = f'the ensemble in {config.input} fails: {first.first_error or first.max_violation}'
        else:
            message = f'replay {first.name} with --seed {config.seed}, trial {first.first_failure}'
        raise CommandError(f'{len(failed)} suite(s) failed; {message}', returncode=SUITE_FAILURE)


def campaign_report(command: str, campaign: CampaignReport) -> Report:
    report = (
        Report(command)
        .add('seed', campaign.seed)
        .add('trials', campaign.trials)
        .add('dims', list(campaign.dims))
        .add('letters', campaign.letters)
    )
    for suite in campaign.suites:
        report.add(f'{suite.name}_trials', suite.trials)
        report.add(f'{suite.name}_failures', suite.failures)
        report.add(f'{suite.name}_max_violation', suite.max_violation)
        report.add(f'{suite.name}_first_failure', suite.first_failure)
        report.add(f'{suite.name}_passed', suite.passed)
    return report.add('passed', campaign.passed)
