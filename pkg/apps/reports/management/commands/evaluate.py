from apps.core.exceptions import EXIT_OK
from apps.reports.services import ReportService
from ._base import ReportCommand


class Command(ReportCommand):
    help = 'Evaluate Psi(X|Q) for every position of a portfolio file.'

    def run(self, portfolio, **options):
        self.emit(ReportService.evaluate(portfolio), options)
        return EXIT_OK
