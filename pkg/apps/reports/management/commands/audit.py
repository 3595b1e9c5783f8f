from apps.core.exceptions import EXIT_AXIOM_FAILED, EXIT_OK
from apps.reports.services import ReportService, parse_axiom_list
from ._base import ReportCommand


class Command(ReportCommand):
    help = 'Audit axioms of the portfolio measure; exits 1 when any requested axiom fails.'
    failure_message = 'At least one axiom failed; the witness is in the report.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--axioms', help='Comma-separated axiom ids; A1,A2,A3,STD by default.')
        parser.add_argument('--trials', type=int, help='Random trials per check.')

    def run(self, portfolio, **options):
        report, audit = ReportService.audit(
            portfolio,
            parse_axiom_list(options.get('axioms')),
            trials=options.get('trials'),
            seed=options.get('seed'),
            tol=options.get('tolerance'),
        )
        self.emit(report, options)
        return EXIT_AXIOM_FAILED if audit.failed_axioms else EXIT_OK
