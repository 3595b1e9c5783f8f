from dataclasses import dataclass, field
from typing import Union

from .aggregator_spec import AggregatorSpec, AggregatorVariant
from .core_spec import CoreSpec


@dataclass(frozen=True)
class GeneralizedRiskMeasure:
    """
    Psi(X|Q): a core evaluated per scenario and an aggregator over the set.

    core is a CoreSpec or any BaseCore instance (black-box cores included).
    Multi-prior, misspecification and imprecise aggregators read the utility
    of the aggregator and ignore the core.
    """
    core: Union[CoreSpec, object] = field(default_factory=CoreSpec.expectation)
    aggregator: AggregatorSpec = field(default_factory=AggregatorSpec.worst_case)
    name: str = ''

    @property
    def uses_core(self) -> bool:
        return self.aggregator.variant not in (
            AggregatorVariant.MULTI_PRIOR,
            AggregatorVariant.MISSPECIFICATION,
            AggregatorVariant.IMPRECISE,
        )

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        core_label = getattr(self.core, 'label', None) or getattr(self.core, 'name', 'core')
        if not self.uses_core:
            return f'{self.aggregator.label}[{self.aggregator.utility.label}]'
        return f'{self.aggregator.label}[{core_label}]'

    def evaluate(self, X, Q) -> float:
        """Psi(X|Q) for a scenario set, a single scenario or an iterable of scenarios."""
        from apps.measures.services import AggregatorService
        return AggregatorService.evaluate(self, X, Q)

    def core_value(self, X, P) -> float:
        from apps.measures.services import CoreService
        return CoreService.evaluate_core(self.core, X, P)

    def __call__(self, X, Q) -> float:
        return self.evaluate(X, Q)
