"""Service for scenarios, laws and the couplings used by axiom tests."""
import logging
from typing import Callable, List, Optional, Tuple

import numpy as np

from apps.core.conf import risk_setting
from apps.core.exceptions import (
    BadAlphaError,
    BadLambdaError,
    InfeasibleCouplingError,
    NotMonotoneError,
)
from apps.scenarios.models import (
    DiscreteDistribution,
    Event,
    OutcomeSpace,
    RandomVariable,
    Scenario,
    common_space,
)

logger = logging.getLogger(__name__)

# Nodes visited by the partition search before a coupling is declared infeasible.
PARTITION_NODE_BUDGET = 200_000


def mixture_id(P: Scenario, Q: Scenario, lam: float) -> str:
    return f'mix({P.id or "?"},{Q.id or "?"};{lam:g})'


class SpaceService:
    @staticmethod
    def make_scenario(space: OutcomeSpace, mass, scenario_id: Optional[str] = None) -> Scenario:
        """Validate a mass vector against the space; rejects rather than repairs."""
        scenario = Scenario(mass, scenario_id)
        space.check(scenario)
        return scenario

    @staticmethod
    def mix_scenarios(P: Scenario, Q: Scenario, lam: float) -> Scenario:
        """
        lam * P + (1 - lam) * Q, entrywise.

        A proper mixture gets its own id, "mix(P,Q;lam)", so that id-keyed
        lookups such as penalty tables do not mistake it for a named scenario.
        """
        if not 0.0 <= lam <= 1.0:
            raise BadLambdaError(f'Mixture weight {lam} is outside [0, 1].')
        common_space(P, Q)
        if lam == 1.0:
            return P
        if lam == 0.0:
            return Q
        return Scenario(lam * P.mass + (1.0 - lam) * Q.mass, mixture_id(P, Q, lam))

    @staticmethod
    def distribution_of(X: RandomVariable, P: Scenario) -> DiscreteDistribution:
        """Law of X under P, zero-mass values dropped, support ascending."""
        common_space(X, P)
        charged = P.mass > 0
        support, inverse = np.unique(X.values[charged], return_inverse=True)
        mass = np.bincount(inverse, weights=P.mass[charged], minlength=support.size)
        return DiscreteDistribution(support, mass)

    @staticmethod
    def quantile(F: DiscreteDistribution, alpha: float) -> float:
        """Left quantile: smallest support point whose cumulative mass reaches alpha."""
        if not 0.0 < alpha <= 1.0:
            raise BadAlphaError(f'Quantile level {alpha} is outside (0, 1].')
        cumulative = F.cumulative
        index = int(np.searchsorted(cumulative, alpha - risk_setting('MASS_TOLERANCE'), side='left'))
        return float(F.support[min(index, F.support.size - 1)])

    @staticmethod
    def make_identically_distributed_pair(
        X: RandomVariable,
        P: Scenario,
        Q: Scenario,
        rng: Optional[np.random.Generator] = None,
    ) -> RandomVariable:
        """
        Find Y with the Q-law of Y equal to the P-law of X.

        Q's charged atoms are partitioned into one group per support point of the
        target law, each group carrying exactly that point's mass. Without an rng
        atoms are taken heaviest first and groups largest value first; with an rng
        ties and group order are randomized so repeated calls explore different Y.

        Raises:
            InfeasibleCouplingError: no partition realizes the law, or the search
                budget ran out before one was found.
        """
        common_space(X, P, Q)
        target = SpaceService.distribution_of(X, P)
        values = target.support[::-1]
        capacity = target.mass[::-1].copy()
        if rng is not None:
            order = rng.permutation(values.size)
            values, capacity = values[order], capacity[order]

        atoms = np.arange(Q.n)
        if rng is not None:
            atoms = rng.permutation(atoms)
        atoms = atoms[np.argsort(-Q.mass[atoms], kind='stable')]
        charged = [int(atom) for atom in atoms if Q.mass[atom] > 0]
        idle = [int(atom) for atom in atoms if Q.mass[atom] == 0]

        tol = risk_setting('MASS_TOLERANCE')
        assignment = {}
        nodes = 0

        def place(position: int) -> bool:
            nonlocal nodes
            if position == len(charged):
                return bool(np.all(np.abs(capacity) <= tol))
            atom = charged[position]
            weight = Q.mass[atom]
            tried = set()
            for group in range(values.size):
                remaining = capacity[group]
                if remaining < weight - tol or remaining in tried:
                    continue
                tried.add(remaining)
                nodes += 1
                if nodes > PARTITION_NODE_BUDGET:
                    return False
                capacity[group] -= weight
                assignment[atom] = group
                if place(position + 1):
                    return True
                capacity[group] += weight
                del assignment[atom]
            return False

        if not place(0):
            reason = 'search budget exhausted' if nodes > PARTITION_NODE_BUDGET else 'no atom partition exists'
            logger.debug(f'Coupling infeasible on {Q.n} atoms: {reason}')
            raise InfeasibleCouplingError(
                f'Cannot realize the target law under scenario {Q.id or "Q"}: {reason}.',
                scenario=Q.id,
            )

        result = np.empty(Q.n)
        for atom, group in assignment.items():
            result[atom] = values[group]
        for atom in idle:
            result[atom] = values[0]
        return RandomVariable(result)

    @staticmethod
    def is_comonotone(X: RandomVariable, Y: RandomVariable, tol: float = 0.0) -> bool:
        """(X(w) - X(w'))(Y(w) - Y(w')) >= 0 for every pair of atoms."""
        common_space(X, Y)
        dx = X.values[:, None] - X.values[None, :]
        dy = Y.values[:, None] - Y.values[None, :]
        return bool(np.all(dx * dy >= -tol))

    @staticmethod
    def make_comonotone_pair(
        Z: RandomVariable,
        f: Callable[[float], float],
        g: Callable[[float], float],
    ) -> Tuple[RandomVariable, RandomVariable]:
        """(f(Z), g(Z)), verified comonotone."""
        X = Z.map(f)
        Y = Z.map(g)
        if not SpaceService.is_comonotone(X, Y):
            raise NotMonotoneError('f(Z) and g(Z) are not comonotone; f or g is not nondecreasing.')
        return X, Y

    @staticmethod
    def make_scenario_with_same_law(
        X: RandomVariable,
        P: Scenario,
        rng: np.random.Generator,
        scenario_id: Optional[str] = None,
        resolution: int = 8,
    ) -> Scenario:
        """
        Scenario Q with the Q-law of X equal to its P-law.

        The P-mass of every level set of X is spread over that level set with
        weights k/resolution, so dyadic P stay dyadic.
        """
        common_space(X, P)
        mass = np.zeros(P.n)
        for value in np.unique(X.values):
            level = np.flatnonzero(X.values == value)
            total = P.mass[level].sum()
            weights = rng.multinomial(resolution, np.full(level.size, 1.0 / level.size)) / resolution
            mass[level] = total * weights
        return Scenario(mass, scenario_id)

    @staticmethod
    def find_event(P: Scenario, target: float, within: Optional[List[int]] = None) -> Optional[Event]:
        """Some event A (inside `within` when given) with P(A) = target, or None."""
        tol = risk_setting('MASS_TOLERANCE')
        atoms = list(range(P.n)) if within is None else list(within)
        atoms.sort(key=lambda atom: -P.mass[atom])
        weights = [float(P.mass[atom]) for atom in atoms]
        suffix = np.concatenate([np.cumsum(weights[::-1])[::-1], [0.0]])
        chosen: List[int] = []
        nodes = 0

        def search(position: int, remaining: float) -> bool:
            nonlocal nodes
            nodes += 1
            if abs(remaining) <= tol:
                return True
            if position == len(atoms) or remaining < -tol or suffix[position] < remaining - tol:
                return False
            if nodes > PARTITION_NODE_BUDGET:
                return False
            chosen.append(atoms[position])
            if search(position + 1, remaining - weights[position]):
                return True
            chosen.pop()
            return search(position + 1, remaining)

        if search(0, float(target)):
            return Event(frozenset(chosen), P.n)
        return None

    @staticmethod
    def unambiguous_events(
        P: Scenario,
        Q: Scenario,
        limit: int = 64,
        rng: Optional[np.random.Generator] = None,
        samples: int = 4096,
    ) -> List[Event]:
        """
        Nontrivial events A with P(A) = Q(A).

        Exhaustive over all subsets up to EXHAUSTIVE_EVENT_ATOMS atoms, random
        subsets beyond that.
        """
        common_space(P, Q)
        tol = risk_setting('MASS_TOLERANCE')
        difference = P.mass - Q.mass
        n = P.n
        events: List[Event] = []
        if n <= risk_setting('EXHAUSTIVE_EVENT_ATOMS'):
            sums = np.zeros(1)
            for weight in difference:
                sums = np.concatenate([sums, sums + weight])
            full = (1 << n) - 1
            for code in np.flatnonzero(np.abs(sums) <= tol):
                code = int(code)
                if code in (0, full):
                    continue
                events.append(Event(frozenset(i for i in range(n) if code >> i & 1), n))
                if len(events) >= limit:
                    break
            return events

        rng = rng if rng is not None else np.random.default_rng(0)
        seen = set()
        for _ in range(samples):
            members = rng.random(n) < 0.5
            if members.all() or not members.any():
                continue
            key = members.tobytes()
            if key in seen:
                continue
            seen.add(key)
            if abs(float(difference[members].sum())) <= tol:
                events.append(Event(frozenset(np.flatnonzero(members).tolist()), n))
                if len(events) >= limit:
                    break
        return events
