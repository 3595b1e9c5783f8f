import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

from django.db import models

from apps.core.exceptions import InvalidSpecError, WeightMismatchError
from apps.scenarios.models import ScenarioSet
from .penalty import PenaltyFunction
from .utility import UtilityFunction


class AggregatorVariant(models.TextChoices):
    WORST_CASE = 'worst_case', 'Worst case'
    AVERAGE = 'average', 'Weighted average'
    MULTI_PRIOR = 'multi_prior', 'Multi-prior expected utility'
    VARIATIONAL = 'variational', 'Variational'
    SMOOTH = 'smooth', 'Smooth ambiguity'
    MISSPECIFICATION = 'misspecification', 'Model misspecification'
    IMPRECISE = 'imprecise', 'Imprecise information'


class VariationalSign(models.TextChoices):
    UTILITY_MIN = 'utility_min', 'min of utility minus penalty'
    RISK_SUP = 'risk_sup', 'sup of core value minus penalty'


# Older spellings accepted on input.
SIGN_ALIASES = {'paper_verbatim': VariationalSign.UTILITY_MIN}


def resolve_sign(sign: str) -> str:
    sign = SIGN_ALIASES.get(sign, sign)
    if sign not in VariationalSign.values:
        raise InvalidSpecError(f'Unknown variational sign {sign!r}.')
    return sign


class MisspecificationCost(models.TextChoices):
    KL = 'kl', 'Kullback-Leibler'
    ZERO = 'zero', 'Zero'


@dataclass(frozen=True)
class AggregatorSpec:
    """
    How per-scenario values are combined over a scenario set.

    weights are keyed by scenario id; a missing mapping means uniform weights.
    candidates is the misspecification grid, either explicit or generated from
    candidate_steps on the evaluated space.
    """
    variant: str = AggregatorVariant.WORST_CASE
    weights: Optional[Mapping[str, float]] = None
    utility: UtilityFunction = field(default_factory=UtilityFunction.identity)
    phi: UtilityFunction = field(default_factory=UtilityFunction.identity)
    penalty: PenaltyFunction = field(default_factory=PenaltyFunction.zero)
    sign: str = VariationalSign.RISK_SUP
    cost: str = MisspecificationCost.KL
    candidates: Optional[ScenarioSet] = None
    candidate_steps: Optional[int] = None
    selector: Optional[Callable[[ScenarioSet], ScenarioSet]] = None

    def __post_init__(self):
        if self.variant not in AggregatorVariant.values:
            raise InvalidSpecError(f'Unknown aggregator variant {self.variant!r}.')
        object.__setattr__(self, 'sign', resolve_sign(self.sign))
        if self.cost not in MisspecificationCost.values:
            raise InvalidSpecError(f'Unknown misspecification cost {self.cost!r}.')
        if self.weights is not None:
            weights = {str(key): float(value) for key, value in dict(self.weights).items()}
            if any(value < 0 or not math.isfinite(value) for value in weights.values()):
                raise WeightMismatchError('Aggregation weights must be finite and nonnegative.')
            object.__setattr__(self, 'weights', weights)
        if self.variant == AggregatorVariant.MISSPECIFICATION:
            if self.candidates is None and not self.candidate_steps:
                raise InvalidSpecError('Misspecification needs candidates or a candidate grid size.')

    @classmethod
    def worst_case(cls) -> 'AggregatorSpec':
        return cls(AggregatorVariant.WORST_CASE)

    @classmethod
    def average(cls, weights: Optional[Mapping[str, float]] = None) -> 'AggregatorSpec':
        return cls(AggregatorVariant.AVERAGE, weights=weights)

    @classmethod
    def multi_prior(cls, u: UtilityFunction = None) -> 'AggregatorSpec':
        return cls(AggregatorVariant.MULTI_PRIOR, utility=u or UtilityFunction.identity())

    @classmethod
    def variational(cls, gamma: PenaltyFunction, u: UtilityFunction = None,
                    sign: str = VariationalSign.RISK_SUP) -> 'AggregatorSpec':
        return cls(AggregatorVariant.VARIATIONAL, utility=u or UtilityFunction.identity(),
                   penalty=gamma, sign=sign)

    @classmethod
    def smooth(cls, u: UtilityFunction = None, phi: UtilityFunction = None,
               weights: Optional[Mapping[str, float]] = None) -> 'AggregatorSpec':
        return cls(AggregatorVariant.SMOOTH, weights=weights,
                   utility=u or UtilityFunction.identity(), phi=phi or UtilityFunction.identity())

    @classmethod
    def misspecification(cls, u: UtilityFunction = None, cost: str = MisspecificationCost.KL,
                         candidates: Optional[ScenarioSet] = None,
                         candidate_steps: Optional[int] = None) -> 'AggregatorSpec':
        return cls(AggregatorVariant.MISSPECIFICATION, utility=u or UtilityFunction.identity(),
                   cost=cost, candidates=candidates, candidate_steps=candidate_steps)

    @classmethod
    def imprecise(cls, u: UtilityFunction = None, selector=None) -> 'AggregatorSpec':
        return cls(AggregatorVariant.IMPRECISE, utility=u or UtilityFunction.identity(), selector=selector)

    @property
    def label(self) -> str:
        if self.variant == AggregatorVariant.VARIATIONAL:
            return f'variational({self.sign}, {self.penalty.label})'
        if self.variant == AggregatorVariant.MISSPECIFICATION:
            return f'misspecification({self.cost})'
        return self.variant


class Ordering(models.TextChoices):
    LESS = 'less', 'Less'
    EQUAL = 'equal', 'Equal'
    GREATER = 'greater', 'Greater'
