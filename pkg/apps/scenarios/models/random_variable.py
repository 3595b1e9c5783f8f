from dataclasses import dataclass
from numbers import Real
from typing import Iterable, Optional

import numpy as np

from apps.core.exceptions import InvalidSpecError
from .outcome_space import OutcomeSpace, common_space, frozen_vector


@dataclass(frozen=True, eq=False)
class RandomVariable:
    """Loss per atom of a finite outcome space."""
    values: np.ndarray
    id: Optional[str] = None

    def __post_init__(self):
        values = frozen_vector(self.values)
        if values.size == 0:
            raise InvalidSpecError('A random variable needs at least one atom.')
        if not np.all(np.isfinite(values)):
            raise InvalidSpecError(f'Random variable {self.id or "X"} has non-finite values.')
        object.__setattr__(self, 'values', values)

    @classmethod
    def constant(cls, space: OutcomeSpace, value: float) -> 'RandomVariable':
        return cls(np.full(space.n, float(value)))

    @classmethod
    def indicator(cls, space: OutcomeSpace, atoms: Iterable[int]) -> 'RandomVariable':
        values = np.zeros(space.n)
        values[list(atoms)] = 1.0
        return cls(values)

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def space(self) -> OutcomeSpace:
        return OutcomeSpace(self.n)

    @property
    def is_constant(self) -> bool:
        return bool(np.all(self.values == self.values[0]))

    def map(self, func) -> 'RandomVariable':
        return RandomVariable([func(value) for value in self.values])

    def __add__(self, other):
        if isinstance(other, RandomVariable):
            common_space(self, other)
            return RandomVariable(self.values + other.values)
        if isinstance(other, Real):
            return RandomVariable(self.values + float(other))
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, RandomVariable):
            common_space(self, other)
            return RandomVariable(self.values - other.values)
        if isinstance(other, Real):
            return RandomVariable(self.values - float(other))
        return NotImplemented

    def __mul__(self, scalar):
        if isinstance(scalar, Real):
            return RandomVariable(self.values * float(scalar))
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return RandomVariable(-self.values)

    def __le__(self, other):
        """Pointwise dominance."""
        common_space(self, other)
        return bool(np.all(self.values <= other.values))

    def __eq__(self, other):
        if not isinstance(other, RandomVariable):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash(self.values.tobytes())

    def __repr__(self):
        label = f'id={self.id!r}, ' if self.id else ''
        return f'RandomVariable({label}values={self.values.tolist()})'
