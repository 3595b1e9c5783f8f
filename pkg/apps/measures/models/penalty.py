import math
from dataclasses import dataclass, field
from typing import Mapping, Optional

from django.db import models

from apps.core.exceptions import InvalidSpecError, UnknownScenarioError
from apps.scenarios.models import Scenario


class PenaltyKind(models.TextChoices):
    ZERO = 'zero', 'Zero'
    TABLE = 'table', 'Table over scenario ids'
    KL_TO_REFERENCE = 'kl_to_reference', 'KL divergence to a reference scenario'


@dataclass(frozen=True)
class PenaltyFunction:
    """
    gamma(P) with values in (-inf, inf].

    Tables are keyed by scenario id so that two scenarios with equal masses can
    carry different penalties.
    """
    kind: str = PenaltyKind.ZERO
    table: Mapping[str, float] = field(default_factory=dict)
    reference: Optional[Scenario] = None

    def __post_init__(self):
        if self.kind not in PenaltyKind.values:
            raise InvalidSpecError(f'Unknown penalty kind {self.kind!r}.')
        if self.kind == PenaltyKind.KL_TO_REFERENCE and self.reference is None:
            raise InvalidSpecError('KL penalty needs a reference scenario.')
        table = {str(key): float(value) for key, value in dict(self.table).items()}
        for key, value in table.items():
            if math.isnan(value) or value == -math.inf:
                raise InvalidSpecError(f'Penalty for {key!r} must lie in (-inf, inf], got {value}.')
        object.__setattr__(self, 'table', table)

    @classmethod
    def zero(cls) -> 'PenaltyFunction':
        return cls(PenaltyKind.ZERO)

    @classmethod
    def from_table(cls, table: Mapping[str, float]) -> 'PenaltyFunction':
        return cls(PenaltyKind.TABLE, table)

    @classmethod
    def kl_to_reference(cls, reference: Scenario) -> 'PenaltyFunction':
        return cls(PenaltyKind.KL_TO_REFERENCE, reference=reference)

    @property
    def is_zero(self) -> bool:
        return self.kind == PenaltyKind.ZERO

    def __call__(self, P: Scenario) -> float:
        if self.kind == PenaltyKind.ZERO:
            return 0.0
        if self.kind == PenaltyKind.KL_TO_REFERENCE:
            from apps.measures.services.formulas import kl_divergence
            return kl_divergence(P, self.reference)
        if P.id is None or P.id not in self.table:
            raise UnknownScenarioError(
                f'Penalty table has no entry for scenario {P.id!r}.',
                scenario=P.id,
            )
        return self.table[P.id]

    @property
    def label(self) -> str:
        if self.kind == PenaltyKind.KL_TO_REFERENCE:
            return f'kl_to_reference({self.reference.id})'
        return self.kind
