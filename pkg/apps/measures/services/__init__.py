"""Services of the measures app."""
from . import formulas
from .formulas import choquet, es, kl_divergence, var
from .core_service import CoreService
from .aggregator_service import AggregatorService

__all__ = [
    'formulas',
    'var',
    'es',
    'choquet',
    'kl_divergence',
    'CoreService',
    'AggregatorService',
]
