from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Tuple

import numpy as np

from apps.measures.models import GeneralizedRiskMeasure
from apps.scenarios.models import RandomVariable, Scenario, ScenarioSet

FORMAT_VERSION = 1


@dataclass(frozen=True)
class ScenarioEntry:
    """A scenario as written in the file; masses keep their exact rational value."""
    id: str
    mass: Tuple[Fraction, ...]

    def to_scenario(self) -> Scenario:
        return Scenario(np.array([float(mass) for mass in self.mass]), self.id)


@dataclass(frozen=True)
class Portfolio:
    """Validated content of a portfolio file."""
    n: int
    scenario_entries: Tuple[ScenarioEntry, ...]
    positions: Tuple[RandomVariable, ...]
    measure: GeneralizedRiskMeasure
    format: int = FORMAT_VERSION

    @cached_property
    def scenarios(self) -> ScenarioSet:
        return ScenarioSet(tuple(entry.to_scenario() for entry in self.scenario_entries))

    @property
    def space(self) -> dict:
        return {'n': self.n}
