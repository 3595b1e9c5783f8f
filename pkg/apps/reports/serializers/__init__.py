"""Serializers package for the reports app."""
from .fields import ExtendedFloatField, MassField, json_ready
from .portfolio_serializers import (
    AggregatorSerializer,
    CoreSerializer,
    MeasureSerializer,
    PortfolioFileSerializer,
    ScenarioEntrySerializer,
)
from .report_serializers import PositionResultSerializer, ReportFileSerializer

__all__ = [
    'MassField',
    'ExtendedFloatField',
    'json_ready',
    'ScenarioEntrySerializer',
    'CoreSerializer',
    'AggregatorSerializer',
    'MeasureSerializer',
    'PortfolioFileSerializer',
    'PositionResultSerializer',
    'ReportFileSerializer',
]
