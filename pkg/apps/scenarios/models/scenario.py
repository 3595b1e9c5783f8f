import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Tuple

import numpy as np

from apps.core.conf import risk_setting
from apps.core.exceptions import (
    DuplicateScenarioIdError,
    EmptyScenarioSetError,
    NegativeMassError,
    NotNormalizedError,
)
from .outcome_space import OutcomeSpace, common_space, frozen_vector


@dataclass(frozen=True, eq=False)
class Scenario:
    """
    Probability vector over a finite outcome space.

    Masses are validated and stored exactly as given: a vector that does not
    sum to one is rejected, never renormalized.
    """
    mass: np.ndarray
    id: Optional[str] = None

    def __post_init__(self):
        mass = frozen_vector(self.mass)
        label = self.id or 'scenario'
        if mass.size == 0:
            raise NotNormalizedError(f'Scenario {label} has no atoms.', scenario=label)
        if not np.all(np.isfinite(mass)):
            raise NotNormalizedError(f'Scenario {label} has non-finite masses.', scenario=label)
        if np.any(mass < 0):
            atom = int(np.argmax(mass < 0))
            raise NegativeMassError(
                f'Scenario {label} has negative mass {mass[atom]} at atom {atom}.',
                scenario=label,
                atom=atom,
            )
        total = float(mass.sum())
        if abs(total - 1.0) > risk_setting('MASS_TOLERANCE'):
            raise NotNormalizedError(
                f'Scenario {label} masses sum to {total!r}, not 1.',
                scenario=label,
            )
        object.__setattr__(self, 'mass', mass)

    @property
    def n(self) -> int:
        return int(self.mass.size)

    @property
    def space(self) -> OutcomeSpace:
        return OutcomeSpace(self.n)

    def probability(self, atoms: Iterable[int]) -> float:
        """P(A) for an event given by its atom indices."""
        atoms = list(atoms)
        if not atoms:
            return 0.0
        return float(self.mass[atoms].sum())

    def expectation(self, values) -> float:
        return float(np.dot(self.mass, np.asarray(values, dtype=float)))

    def with_id(self, scenario_id: Optional[str]) -> 'Scenario':
        return Scenario(self.mass, scenario_id)

    def __eq__(self, other):
        if not isinstance(other, Scenario):
            return NotImplemented
        return self.id == other.id and np.array_equal(self.mass, other.mass)

    def __hash__(self):
        return hash((self.id, self.mass.tobytes()))

    def __repr__(self):
        return f'Scenario(id={self.id!r}, mass={self.mass.tolist()})'


@dataclass(frozen=True)
class ScenarioSet:
    """Nonempty ordered collection of labelled scenarios on one outcome space."""
    scenarios: Tuple[Scenario, ...] = field(default_factory=tuple)

    def __post_init__(self):
        scenarios = tuple(self.scenarios)
        if not scenarios:
            raise EmptyScenarioSetError()
        labelled = tuple(
            scenario if scenario.id is not None else scenario.with_id(f'P{index + 1}')
            for index, scenario in enumerate(scenarios)
        )
        ids = [scenario.id for scenario in labelled]
        if len(set(ids)) != len(ids):
            duplicate = next(label for label in ids if ids.count(label) > 1)
            raise DuplicateScenarioIdError(f'Scenario id {duplicate!r} is used twice.', scenario=duplicate)
        common_space(*labelled)
        object.__setattr__(self, 'scenarios', labelled)

    @classmethod
    def coerce(cls, scenarios) -> 'ScenarioSet':
        """Accept a ScenarioSet, a single Scenario or any iterable of scenarios."""
        if isinstance(scenarios, ScenarioSet):
            return scenarios
        if isinstance(scenarios, Scenario):
            return cls((scenarios,))
        return cls(tuple(scenarios))

    @property
    def ids(self) -> Tuple[str, ...]:
        return tuple(scenario.id for scenario in self.scenarios)

    @property
    def n(self) -> int:
        return self.scenarios[0].n

    @property
    def space(self) -> OutcomeSpace:
        return OutcomeSpace(self.n)

    def get(self, scenario_id: str) -> Scenario:
        for scenario in self.scenarios:
            if scenario.id == scenario_id:
                return scenario
        raise KeyError(scenario_id)

    def subset(self, ids: Iterable[str]) -> 'ScenarioSet':
        """Sub-collection in this set's order."""
        wanted = set(ids)
        return ScenarioSet(tuple(s for s in self.scenarios if s.id in wanted))

    def nonempty_subsets(self) -> Iterator['ScenarioSet']:
        """Every nonempty sub-collection, smallest first."""
        for size in range(1, len(self.scenarios) + 1):
            for combo in itertools.combinations(self.scenarios, size):
                yield ScenarioSet(combo)

    def __iter__(self):
        return iter(self.scenarios)

    def __len__(self):
        return len(self.scenarios)

    def __contains__(self, scenario):
        return scenario in self.scenarios
