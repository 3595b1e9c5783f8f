from dataclasses import dataclass

import numpy as np

from apps.core.conf import risk_setting
from apps.core.exceptions import BadLambdaError, InvalidSpecError
from .outcome_space import frozen_vector


@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    """Law with finite support: strictly increasing points, positive masses."""
    support: np.ndarray
    mass: np.ndarray

    def __post_init__(self):
        support = frozen_vector(self.support)
        mass = frozen_vector(self.mass)
        if support.size == 0 or support.size != mass.size:
            raise InvalidSpecError('Support and mass must be nonempty and of equal length.')
        if np.any(np.diff(support) <= 0):
            raise InvalidSpecError('Support must be strictly increasing.')
        if np.any(mass <= 0):
            raise InvalidSpecError('Distribution masses must be positive.')
        if abs(float(mass.sum()) - 1.0) > risk_setting('MASS_TOLERANCE'):
            raise InvalidSpecError(f'Distribution masses sum to {float(mass.sum())!r}, not 1.')
        object.__setattr__(self, 'support', support)
        object.__setattr__(self, 'mass', mass)

    @classmethod
    def point_mass(cls, value: float) -> 'DiscreteDistribution':
        return cls(np.array([float(value)]), np.array([1.0]))

    @property
    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.mass)

    def mixture(self, other: 'DiscreteDistribution', lam: float) -> 'DiscreteDistribution':
        """lam * self + (1 - lam) * other, mass-wise."""
        if not 0.0 <= lam <= 1.0:
            raise BadLambdaError(f'Mixture weight {lam} is outside [0, 1].')
        support = np.union1d(self.support, other.support)
        mass = np.zeros(support.size)
        mass[np.searchsorted(support, self.support)] += lam * self.mass
        mass[np.searchsorted(support, other.support)] += (1.0 - lam) * other.mass
        keep = mass > 0
        return DiscreteDistribution(support[keep], mass[keep])

    def is_close(self, other: 'DiscreteDistribution', tol: float = None) -> bool:
        tol = risk_setting('MASS_TOLERANCE') if tol is None else tol
        return (
            self.support.size == other.support.size
            and np.array_equal(self.support, other.support)
            and bool(np.all(np.abs(self.mass - other.mass) <= tol))
        )

    def __eq__(self, other):
        if not isinstance(other, DiscreteDistribution):
            return NotImplemented
        return self.is_close(other)

    __hash__ = None

    def __repr__(self):
        pairs = ', '.join(f'{x!r}: {p!r}' for x, p in zip(self.support.tolist(), self.mass.tolist()))
        return f'DiscreteDistribution({{{pairs}}})'
