from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, Mapping, Sequence, Tuple

from apps.core.conf import risk_setting
from apps.core.exceptions import IncompleteTableError, InvalidSpecError
from apps.scenarios.models import RandomVariable, ScenarioSet

TableKey = Tuple[str, FrozenSet[str]]


def _check_universe(universe: ScenarioSet) -> None:
    limit = risk_setting('MAX_UNIVERSE')
    if len(universe) > limit:
        raise InvalidSpecError(
            f'A Psi table enumerates every subset; the universe is capped at {limit} scenarios, got {len(universe)}.'
        )


def _label_positions(positions: Sequence[RandomVariable]) -> Tuple[RandomVariable, ...]:
    labelled = []
    for index, X in enumerate(positions):
        labelled.append(X if X.id else RandomVariable(X.values, f'X{index + 1}'))
    ids = [X.id for X in labelled]
    if len(set(ids)) != len(ids):
        raise InvalidSpecError(f'Position ids must be distinct, got {ids}.')
    return tuple(labelled)


@dataclass(frozen=True)
class PsiTable:
    """
    Values Psi(X|R) for every position X and every nonempty subset R of a
    finite scenario universe.

    Entries are keyed by (position id, frozenset of scenario ids).
    """
    universe: ScenarioSet
    positions: Tuple[RandomVariable, ...]
    values: Dict[TableKey, float] = field(default_factory=dict)

    @classmethod
    def from_measure(cls, measure, universe, positions: Sequence[RandomVariable]) -> 'PsiTable':
        universe = ScenarioSet.coerce(universe)
        _check_universe(universe)
        positions = _label_positions(positions)
        values = {}
        for subset in universe.nonempty_subsets():
            for X in positions:
                values[(X.id, frozenset(subset.ids))] = float(measure.evaluate(X, subset))
        return cls(universe, positions, values)

    @classmethod
    def from_values(cls, universe, positions: Sequence[RandomVariable], entries: Mapping) -> 'PsiTable':
        """Hand-built table; keys are (position id, iterable of scenario ids)."""
        universe = ScenarioSet.coerce(universe)
        _check_universe(universe)
        values = {(key[0], frozenset(key[1])): float(value) for key, value in entries.items()}
        return cls(universe, _label_positions(positions), values)

    @property
    def position_ids(self) -> Tuple[str, ...]:
        return tuple(X.id for X in self.positions)

    def subsets(self) -> Iterator[FrozenSet[str]]:
        for subset in self.universe.nonempty_subsets():
            yield frozenset(subset.ids)

    def get(self, position_id: str, ids) -> float:
        key = (position_id, frozenset(ids))
        if key not in self.values:
            raise IncompleteTableError(
                f'No entry for position {position_id} on {sorted(key[1])}.',
                position=position_id,
                subset=sorted(key[1]),
            )
        return self.values[key]

    def check_complete(self) -> None:
        for ids in self.subsets():
            for position_id in self.position_ids:
                self.get(position_id, ids)

    def __len__(self):
        return len(self.values)
