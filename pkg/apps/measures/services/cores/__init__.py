"""Single-scenario core implementations."""
from apps.core.exceptions import InvalidSpecError
from apps.measures.models import CoreSpec, CoreVariant
from .base import BaseCore
from .black_box import BlackBoxCore
from .distortion_core import DistortionCore
from .expectation_cores import ExpectationCore, LossPenalizedMeanCore, PenalizedMeanCore
from .quantile_cores import ESCore, VaRCore
from .utility_cores import CertaintyEquivalentCore, ExpectedUtilityCore


def get_core(spec) -> BaseCore:
    """Factory function building the core described by a CoreSpec."""
    if isinstance(spec, BaseCore):
        return spec
    if callable(spec) and not isinstance(spec, CoreSpec):
        return BlackBoxCore(spec, name=getattr(spec, '__name__', 'black_box'))
    if not isinstance(spec, CoreSpec):
        raise InvalidSpecError(f'Cannot build a core from {spec!r}.')

    if spec.variant == CoreVariant.EXPECTATION:
        return ExpectationCore()
    if spec.variant == CoreVariant.VAR:
        return VaRCore(spec.alpha)
    if spec.variant == CoreVariant.ES:
        return ESCore(spec.alpha)
    if spec.variant == CoreVariant.DISTORTION:
        return DistortionCore(spec.distortion)
    if spec.variant == CoreVariant.PENALIZED_MEAN:
        return PenalizedMeanCore(spec.penalty)
    if spec.variant == CoreVariant.LOSS_PENALIZED_MEAN:
        return LossPenalizedMeanCore(spec.beta)
    if spec.variant == CoreVariant.EXPECTED_UTILITY:
        return ExpectedUtilityCore(spec.utility)
    return CertaintyEquivalentCore(spec.utility)


__all__ = [
    'BaseCore',
    'BlackBoxCore',
    'DistortionCore',
    'ExpectationCore',
    'PenalizedMeanCore',
    'LossPenalizedMeanCore',
    'VaRCore',
    'ESCore',
    'ExpectedUtilityCore',
    'CertaintyEquivalentCore',
    'get_core',
]
