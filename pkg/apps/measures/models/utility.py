from dataclasses import dataclass
from typing import Optional

import numpy as np
from django.db import models

from apps.core.exceptions import InvalidSpecError


class UtilityKind(models.TextChoices):
    IDENTITY = 'identity', 'Identity'
    EXPONENTIAL = 'exponential', 'Exponential'
    POWER = 'power', 'Power'


@dataclass(frozen=True)
class UtilityFunction:
    """
    Strictly increasing function with a closed-form inverse.

    exponential(a): u(x) = (1 - exp(-a x)) / a, any a != 0.
    power(r): u(x) = sign(x) |x|^r, any r > 0, odd-extended so it is
    increasing on the whole real line.
    """
    kind: str = UtilityKind.IDENTITY
    param: Optional[float] = None

    def __post_init__(self):
        if self.kind not in UtilityKind.values:
            raise InvalidSpecError(f'Unknown utility kind {self.kind!r}.')
        if self.kind == UtilityKind.EXPONENTIAL and not self.param:
            raise InvalidSpecError('Exponential utility needs a nonzero coefficient a.')
        if self.kind == UtilityKind.POWER and not (self.param is not None and self.param > 0):
            raise InvalidSpecError('Power utility needs an exponent r > 0.')

    @classmethod
    def identity(cls) -> 'UtilityFunction':
        return cls(UtilityKind.IDENTITY)

    @classmethod
    def exponential(cls, a: float) -> 'UtilityFunction':
        return cls(UtilityKind.EXPONENTIAL, float(a))

    @classmethod
    def power(cls, r: float) -> 'UtilityFunction':
        return cls(UtilityKind.POWER, float(r))

    @property
    def is_identity(self) -> bool:
        return self.kind == UtilityKind.IDENTITY

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == UtilityKind.EXPONENTIAL:
            result = -np.expm1(-self.param * x) / self.param
        elif self.kind == UtilityKind.POWER:
            result = np.sign(x) * np.power(np.abs(x), self.param)
        else:
            result = x
        return float(result) if result.ndim == 0 else result

    def inverse(self, y):
        y = np.asarray(y, dtype=float)
        if self.kind == UtilityKind.EXPONENTIAL:
            # Defined while 1 - a*y > 0, which holds on the range of u.
            with np.errstate(invalid='ignore', divide='ignore'):
                result = -np.log1p(-self.param * y) / self.param
        elif self.kind == UtilityKind.POWER:
            result = np.sign(y) * np.power(np.abs(y), 1.0 / self.param)
        else:
            result = y
        return float(result) if result.ndim == 0 else result

    @property
    def label(self) -> str:
        return self.kind if self.param is None else f'{self.kind}({self.param:g})'
