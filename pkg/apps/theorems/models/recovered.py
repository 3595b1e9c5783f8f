from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from apps.measures.models import Distortion
from apps.scenarios.models import Scenario


@dataclass(frozen=True, eq=False)
class RecoveredDistortion:
    """
    Grid values h(t) = core(1_A | P) read off events A with P(A) = t.

    blocks holds the increments of the event chain when the events are
    nested; a loss constant on each block has all of its level-set masses
    on the grid.
    """
    grid: np.ndarray
    h_values: np.ndarray
    scenario: Scenario
    monotone: bool
    concavity_certificate: bool
    normalized: bool
    blocks: Optional[Tuple[Tuple[int, ...], ...]] = None
    events: Tuple[Tuple[int, ...], ...] = field(default_factory=tuple)

    @property
    def nested(self) -> bool:
        return self.blocks is not None

    def as_distortion(self) -> Distortion:
        """Linear interpolation of the grid, endpoints pinned to 0 and 1."""
        h_values = np.array(self.h_values, dtype=float)
        h_values[0], h_values[-1] = 0.0, 1.0
        return Distortion.grid(self.grid, h_values)

    def to_dict(self) -> dict:
        return {
            'scenario': self.scenario.id,
            'grid': self.grid.tolist(),
            'h': self.h_values.tolist(),
            'monotone': bool(self.monotone),
            'concave': bool(self.concavity_certificate),
            'normalized': bool(self.normalized),
            'nested': self.nested,
            'events': [list(event) for event in self.events],
        }
