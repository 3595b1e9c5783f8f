from apps.core.exceptions import EXIT_AXIOM_FAILED, EXIT_OK
from apps.reports.services import ReportService, parse_axiom_list
from ._base import ReportCommand


class Command(ReportCommand):
    help = 'Search a counterexample to one axiom of the portfolio core; exits 1 when one is found.'
    failure_message = 'Witness found; the axiom fails.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--axioms', required=True, help='The one axiom id to target.')
        parser.add_argument('--trials', type=int, help='Search budget in trials.')

    def run(self, portfolio, **options):
        target = ReportService.single_axiom(parse_axiom_list(options['axioms']))
        report, result = ReportService.witness(
            portfolio,
            target,
            budget=options.get('trials'),
            seed=options.get('seed'),
            tol=options.get('tolerance'),
        )
        self.emit(report, options)
        return EXIT_AXIOM_FAILED if result.found else EXIT_OK
