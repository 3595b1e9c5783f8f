"""Shared plumbing of the report commands."""
import json
import logging

from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ValidationError

from apps.core.exceptions import EXIT_OK, RiskMeasureError, exit_code_for, format_error
from apps.reports.services import ReportService

logger = logging.getLogger(__name__)


class ReportCommand(BaseCommand):
    """
    Base class for commands that read a portfolio file and write a report.

    Subclasses implement run() and return an exit code. Input and evaluation
    errors are printed to stderr as the error envelope and end the command
    with the exit code of the error.
    """
    failure_message = 'Check failed.'

    def add_arguments(self, parser):
        parser.add_argument('--input', required=True, help='Portfolio file (JSON, "format": 1).')
        parser.add_argument('--output', help='Report file; the report goes to stdout when omitted.')
        parser.add_argument('--seed', type=int, help='Seed of the random instance families.')
        parser.add_argument('--tolerance', type=float, help='Numerical tolerance of the checks.')

    def run(self, portfolio, **options) -> int:
        raise NotImplementedError

    def emit(self, report: dict, options) -> None:
        ReportService.write(report, options.get('output'), self.stdout)

    def handle(self, *args, **options):
        try:
            portfolio = ReportService.load_portfolio(options['input'])
            code = self.run(portfolio, **options)
        except (RiskMeasureError, ValidationError) as exc:
            envelope = format_error(exc)
            self.stderr.write(json.dumps(envelope, sort_keys=True))
            logger.warning(f"Command failed ({envelope['data']['code']}): {envelope['message']}")
            raise CommandError(envelope['message'], returncode=exit_code_for(exc))
        if code != EXIT_OK:
            raise CommandError(self.failure_message, returncode=code)
