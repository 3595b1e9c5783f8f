from dataclasses import dataclass

import numpy as np

from apps.core.exceptions import InvalidSpecError, SpaceMismatchError


def frozen_vector(values) -> np.ndarray:
    """Copy values into a read-only float64 vector."""
    vector = np.array(values, dtype=float).reshape(-1)
    vector.setflags(write=False)
    return vector


@dataclass(frozen=True)
class OutcomeSpace:
    """Finite outcome space with atoms 0..n-1."""
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InvalidSpecError(f'Outcome space needs at least one atom, got n={self.n}.')

    @property
    def atoms(self) -> range:
        return range(self.n)

    def check(self, *objects) -> None:
        """Raise SpaceMismatchError unless every object has length n."""
        for obj in objects:
            if obj.n != self.n:
                raise SpaceMismatchError(
                    f'Expected an object on {self.n} atoms, got {obj.n}.',
                    expected=self.n,
                    actual=obj.n,
                )


def common_space(*objects) -> OutcomeSpace:
    """Outcome space shared by all objects."""
    space = OutcomeSpace(objects[0].n)
    space.check(*objects[1:])
    return space
