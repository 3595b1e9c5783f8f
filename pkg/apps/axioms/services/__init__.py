from .axiom_service import AxiomService
from .checks import AXIOM_CHECKS, as_measure
from .generators import InstanceFamily
from .witness_search import WitnessSearchService

__all__ = [
    'AxiomService',
    'WitnessSearchService',
    'InstanceFamily',
    'AXIOM_CHECKS',
    'as_measure',
]
