"""Expected-utility and certainty-equivalent cores."""
from apps.measures.models import UtilityFunction
from apps.scenarios.models import common_space
from .base import BaseCore


class ExpectedUtilityCore(BaseCore):
    """E^P[u(X)]."""
    name = 'expected_utility'

    def __init__(self, utility: UtilityFunction):
        self.utility = utility

    def evaluate(self, X, P):
        common_space(X, P)
        return P.expectation(self.utility(X.values))

    @property
    def label(self):
        return f'{self.name}({self.utility.label})'


class CertaintyEquivalentCore(ExpectedUtilityCore):
    """u^{-1}(E^P[u(X)])."""
    name = 'certainty_equivalent'

    def evaluate(self, X, P):
        if X.is_constant:
            return float(X.values[0])
        if self.utility.is_identity:
            return P.expectation(X.values)
        return float(self.utility.inverse(super().evaluate(X, P)))
