"""Seeded random instances for axiom audits."""
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

import numpy as np

from apps.scenarios.models import RandomVariable, Scenario, ScenarioSet

# Mixture weights tried by the concavity checks before random ones.
LAMBDA_GRID = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)


@dataclass(frozen=True)
class InstanceFamily:
    """
    Distribution of audit instances.

    Masses are multiples of 1/mass_denominator and losses are integers in
    [low, high], so sums, mixtures and law comparisons stay exact. A family
    built from a portfolio draws scenarios from its pool and, half of the
    time, losses from its positions.
    """
    min_atoms: int = 2
    max_atoms: int = 6
    max_scenarios: int = 3
    mass_denominator: int = 16
    low: int = -5
    high: int = 10
    scenario_ids: Tuple[str, ...] = ('P1', 'P2', 'P3', 'P4')
    pool: Optional[ScenarioSet] = None
    positions: Tuple[RandomVariable, ...] = ()

    @classmethod
    def from_portfolio(cls, scenarios: ScenarioSet, positions: Sequence[RandomVariable] = ()) -> 'InstanceFamily':
        scenarios = ScenarioSet.coerce(scenarios)
        return cls(
            min_atoms=scenarios.n,
            max_atoms=scenarios.n,
            max_scenarios=len(scenarios),
            scenario_ids=scenarios.ids,
            pool=scenarios,
            positions=tuple(positions),
        )

    def with_pool(self, scenarios: ScenarioSet) -> 'InstanceFamily':
        scenarios = ScenarioSet.coerce(scenarios)
        return replace(self, min_atoms=scenarios.n, max_atoms=scenarios.n, pool=scenarios)

    @staticmethod
    def rng(seed: int, trial: int, stream: int = 0) -> np.random.Generator:
        """Generator for one trial; depends only on (seed, stream, trial)."""
        return np.random.default_rng([int(seed), int(stream), int(trial)])

    def atoms(self, rng: np.random.Generator) -> int:
        if self.pool is not None:
            return self.pool.n
        return int(rng.integers(self.min_atoms, self.max_atoms + 1))

    def scenario(self, rng: np.random.Generator, n: int, scenario_id: Optional[str] = None) -> Scenario:
        """Random scenario with masses k/mass_denominator; Dirichlet draws leave some atoms empty."""
        weights = rng.dirichlet(np.full(n, 0.7))
        counts = rng.multinomial(self.mass_denominator, weights / weights.sum())
        return Scenario(counts / self.mass_denominator, scenario_id)

    def scenario_id(self, rng: np.random.Generator, exclude: Optional[str] = None) -> str:
        choices = [label for label in self.scenario_ids if label != exclude]
        if not choices:
            return f'{exclude}_alt'
        return choices[int(rng.integers(len(choices)))]

    def scenario_pair(self, rng: np.random.Generator, n: int) -> Tuple[Scenario, Scenario]:
        """Two scenarios with distinct ids, drawn from the pool when there is one."""
        if self.pool is not None and len(self.pool) >= 2:
            first, second = rng.choice(len(self.pool), size=2, replace=False)
            return self.pool.scenarios[int(first)], self.pool.scenarios[int(second)]
        first = self.scenario_id(rng)
        second = self.scenario_id(rng, exclude=first)
        return self.scenario(rng, n, first), self.scenario(rng, n, second)

    def coupled_pair(self, rng: np.random.Generator, n: int) -> Tuple[Scenario, Scenario]:
        """
        Scenario pair for law-transfer checks: half of the draws relabel the
        atoms of P, which always admits a coupling.
        """
        if rng.random() < 0.5:
            P = self.single_scenario(rng, n)
            Q = Scenario(P.mass[rng.permutation(P.n)], self.scenario_id(rng, exclude=P.id))
            return P, Q
        return self.scenario_pair(rng, n)

    def single_scenario(self, rng: np.random.Generator, n: int) -> Scenario:
        if self.pool is not None:
            return self.pool.scenarios[int(rng.integers(len(self.pool)))]
        return self.scenario(rng, n, self.scenario_id(rng))

    def universe(self, rng: np.random.Generator, n: int) -> ScenarioSet:
        """The pool, or a fresh set over the first max_scenarios ids."""
        if self.pool is not None:
            return self.pool
        size = min(self.max_scenarios, len(self.scenario_ids))
        return ScenarioSet(tuple(self.scenario(rng, n, label) for label in self.scenario_ids[:size]))

    def scenario_set(self, rng: np.random.Generator, n: int) -> ScenarioSet:
        """Random nonempty subset of the universe."""
        universe = self.universe(rng, n)
        size = int(rng.integers(1, len(universe) + 1))
        chosen = sorted(rng.choice(len(universe), size=size, replace=False).tolist())
        return ScenarioSet(tuple(universe.scenarios[index] for index in chosen))

    def evaluation_set(self, rng: np.random.Generator, n: int) -> ScenarioSet:
        """The fixed pool when there is one, a random set otherwise."""
        if self.pool is not None:
            return self.pool
        return self.scenario_set(rng, n)

    def nested_ids(self, rng: np.random.Generator, universe: ScenarioSet) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
        """Ids of Q and R with Q a nonempty subset of R."""
        ids = universe.ids
        outer_size = int(rng.integers(1, len(ids) + 1))
        outer = sorted(rng.choice(len(ids), size=outer_size, replace=False).tolist())
        inner_size = int(rng.integers(1, outer_size + 1))
        inner = sorted(rng.choice(outer, size=inner_size, replace=False).tolist())
        return tuple(ids[i] for i in inner), tuple(ids[i] for i in outer)

    def loss(self, rng: np.random.Generator, n: int) -> RandomVariable:
        if self.positions and rng.random() < 0.5:
            return self.positions[int(rng.integers(len(self.positions)))]
        return RandomVariable(rng.integers(self.low, self.high + 1, size=n).astype(float))

    def dominating(self, rng: np.random.Generator, X: RandomVariable) -> RandomVariable:
        """X plus a nonnegative integer loss."""
        return X + RandomVariable(rng.integers(0, 4, size=X.n).astype(float))

    def constant(self, rng: np.random.Generator) -> float:
        return float(rng.integers(self.low, self.high + 1))

    def lam(self, rng: np.random.Generator, trial: int) -> float:
        """Grid weights first, then uniform draws in (0, 1)."""
        if trial < len(LAMBDA_GRID):
            return LAMBDA_GRID[trial]
        return float(rng.uniform(0.05, 0.95))
