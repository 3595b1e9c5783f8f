from apps.core.exceptions import EXIT_AXIOM_FAILED, EXIT_OK
from apps.reports.services import ReportService
from ._base import ReportCommand


class Command(ReportCommand):
    help = 'Recover the distortion of the portfolio core and check its Choquet representation.'
    failure_message = 'The core is not the Choquet integral of its recovered distortion.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--scenario', help='Scenario id; the first scenario by default.')
        parser.add_argument('--grid', type=int, help='Grid resolution k, levels j/k; the atom count by default.')
        parser.add_argument('--trials', type=int, help='Random losses compared against the Choquet integral.')

    def run(self, portfolio, **options):
        report, _, check = ReportService.recover(
            portfolio,
            options.get('scenario'),
            options.get('grid'),
            trials=options.get('trials'),
            seed=options.get('seed'),
            tol=options.get('tolerance'),
        )
        self.emit(report, options)
        return EXIT_OK if check.passed else EXIT_AXIOM_FAILED
