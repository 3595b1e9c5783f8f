"""Services of the reports app."""
from .report_service import ReportService, parse_axiom_list

__all__ = ['ReportService', 'parse_axiom_list']
