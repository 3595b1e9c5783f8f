"""Arbitrary callables wrapped as cores."""
from typing import Callable, Optional

from apps.scenarios.models import RandomVariable, Scenario
from .base import BaseCore


class BlackBoxCore(BaseCore):
    """
    Core backed by any function (X, P) -> real.

    Audits and verifiers treat it like a built-in core; nothing about its
    shape is assumed.
    """

    def __init__(self, func: Callable[[RandomVariable, Scenario], float],
                 name: str = 'black_box', alpha: Optional[float] = None):
        self.func = func
        self.name = name
        self.alpha = alpha

    def evaluate(self, X, P):
        return float(self.func(X, P))
