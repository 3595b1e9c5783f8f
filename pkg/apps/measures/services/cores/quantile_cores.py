"""VaR and ES cores."""
from apps.measures.services import formulas
from .base import BaseCore


class VaRCore(BaseCore):
    name = 'var'

    def __init__(self, alpha: float):
        self.alpha = alpha

    def evaluate(self, X, P):
        return formulas.var(X, P, self.alpha)

    @property
    def label(self):
        return f'var({self.alpha:g})'


class ESCore(BaseCore):
    name = 'es'

    def __init__(self, alpha: float):
        self.alpha = alpha

    def evaluate(self, X, P):
        return formulas.es(X, P, self.alpha)

    @property
    def label(self):
        return f'es({self.alpha:g})'
