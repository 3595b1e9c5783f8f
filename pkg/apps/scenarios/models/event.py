from dataclasses import dataclass
from typing import FrozenSet

from apps.core.exceptions import InvalidSpecError
from .outcome_space import OutcomeSpace
from .random_variable import RandomVariable


@dataclass(frozen=True)
class Event:
    """Subset of the atoms of an outcome space."""
    atoms: FrozenSet[int]
    n: int

    def __post_init__(self):
        atoms = frozenset(int(atom) for atom in self.atoms)
        if any(atom < 0 or atom >= self.n for atom in atoms):
            raise InvalidSpecError(f'Event atoms {sorted(atoms)} are not all in 0..{self.n - 1}.')
        object.__setattr__(self, 'atoms', atoms)

    @property
    def space(self) -> OutcomeSpace:
        return OutcomeSpace(self.n)

    @property
    def is_trivial(self) -> bool:
        return not self.atoms or len(self.atoms) == self.n

    def indicator(self) -> RandomVariable:
        return RandomVariable.indicator(self.space, sorted(self.atoms))

    def sorted_atoms(self):
        return sorted(self.atoms)
