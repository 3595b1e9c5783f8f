"""Mean-based cores: plain, scenario-penalized and loss-penalized expectation."""
import numpy as np

from apps.core.exceptions import SpaceMismatchError
from apps.measures.models import PenaltyFunction
from apps.measures.services import formulas
from .base import BaseCore


class ExpectationCore(BaseCore):
    name = 'expectation'

    def evaluate(self, X, P):
        return formulas.expectation(X, P)


class PenalizedMeanCore(BaseCore):
    """E^P[X] - gamma(P)."""
    name = 'penalized_mean'

    def __init__(self, penalty: PenaltyFunction):
        self.penalty = penalty

    def evaluate(self, X, P):
        return formulas.expectation(X, P) - self.penalty(P)

    @property
    def label(self):
        return f'penalized_mean({self.penalty.label})'


class LossPenalizedMeanCore(BaseCore):
    """E^P[X] - <beta, X>; the penalty depends on the loss, not on P."""
    name = 'loss_penalized_mean'

    def __init__(self, beta):
        self.beta = np.asarray(beta, dtype=float)

    def evaluate(self, X, P):
        if self.beta.size != X.n:
            raise SpaceMismatchError(
                f'beta has {self.beta.size} entries for a loss on {X.n} atoms.',
                expected=X.n,
                actual=self.beta.size,
            )
        return formulas.expectation(X, P) - float(np.dot(self.beta, X.values))
