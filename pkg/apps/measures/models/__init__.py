"""Specifications of cores, aggregators and generalized risk measures."""
from .distortion import Distortion, DistortionKind
from .utility import UtilityFunction, UtilityKind
from .penalty import PenaltyFunction, PenaltyKind
from .core_spec import CoreSpec, CoreVariant
from .aggregator_spec import (
    AggregatorSpec,
    AggregatorVariant,
    MisspecificationCost,
    Ordering,
    SIGN_ALIASES,
    VariationalSign,
    resolve_sign,
)
from .measure import GeneralizedRiskMeasure

__all__ = [
    'Distortion',
    'DistortionKind',
    'UtilityFunction',
    'UtilityKind',
    'PenaltyFunction',
    'PenaltyKind',
    'CoreSpec',
    'CoreVariant',
    'AggregatorSpec',
    'AggregatorVariant',
    'MisspecificationCost',
    'Ordering',
    'SIGN_ALIASES',
    'VariationalSign',
    'resolve_sign',
    'GeneralizedRiskMeasure',
]
