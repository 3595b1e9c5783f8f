"""Base class for single-scenario cores."""
from abc import ABC, abstractmethod
from typing import Optional

from apps.scenarios.models import RandomVariable, Scenario


class BaseCore(ABC):
    """Abstract base class for cores Psi(X|P)."""
    name = 'core'
    # Quantile level of the core, when it has one; audits restrict
    # concavity-in-P checks to alpha <= 1 - 1/n.
    alpha: Optional[float] = None

    @abstractmethod
    def evaluate(self, X: RandomVariable, P: Scenario) -> float:
        """
        Value of the core for loss X under scenario P.

        Args:
            X: Loss on the outcome space of P
            P: Scenario

        Returns:
            Real value; cores never return infinities
        """
        pass

    def in_regime(self, n: int) -> bool:
        """Whether the core's quantile level satisfies alpha <= 1 - 1/n."""
        return self.alpha is None or self.alpha <= 1.0 - 1.0 / n + 1e-12

    @property
    def label(self) -> str:
        return self.name

    def __call__(self, X: RandomVariable, P: Scenario) -> float:
        return self.evaluate(X, P)

    def __repr__(self):
        return f'{self.__class__.__name__}({self.label})'
