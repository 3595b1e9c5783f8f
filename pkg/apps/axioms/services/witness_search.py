"""Targeted search for minimal counterexamples to a single axiom."""
import itertools
import logging
from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

from apps.core.conf import risk_setting
from apps.core.exceptions import RiskMeasureError, UnsupportedAxiomError
from apps.axioms.models import SCENARIO_AXIOMS, AxiomId, SearchResult, Witness
from apps.measures.services import AggregatorService
from apps.scenarios.models import RandomVariable, Scenario, ScenarioSet
from apps.scenarios.services import SpaceService
from .axiom_service import CHECK_STREAMS, AxiomService, _Tally
from .checks import AxiomCheck, SkipTrial, as_measure, checks_for, core_of
from .codec import LOSS_KEYS, SCENARIO_KEYS, decode_inputs, instance_size
from .generators import InstanceFamily

logger = logging.getLogger(__name__)

DEFAULT_SEARCH_BUDGET = 10_000
SMALL_ATOMS = 3
SMALL_VALUES = (0.0, 1.0, 2.0, 3.0)
MAX_SHRINK_ROUNDS = 50


def _uniform(n: int, label: str = 'P1') -> Scenario:
    return Scenario(np.full(n, 1.0 / n), label)


def _half_grid(n: int, label: str):
    return [scenario.with_id(label) for scenario in AggregatorService.candidate_grid(n, 2)]


def _losses(n: int) -> Iterator[RandomVariable]:
    for values in itertools.product(SMALL_VALUES, repeat=n):
        yield RandomVariable(np.array(values))


def _same_law(X, P, Y, Q) -> bool:
    return SpaceService.distribution_of(X, P) == SpaceService.distribution_of(Y, Q)


def _small_instances(check: AxiomCheck, n: int) -> Iterator[dict]:
    """Instances on n atoms with values in SMALL_VALUES, in a fixed order."""
    single = ScenarioSet((_uniform(n),))
    name = check.name

    if name == 'STD':
        for value in SMALL_VALUES:
            yield {'X': RandomVariable(np.full(n, value)), 'scenarios': single}
    elif name in ('C0', 'C4', 'C1', 'C5', 'CONVEX_X'):
        for X in _losses(n):
            for Y in _losses(n):
                if name == 'C1' and not X <= Y:
                    continue
                if name == 'C5' and not SpaceService.is_comonotone(X, Y):
                    continue
                inputs = {'X': X, 'Y': Y, 'scenarios': single}
                if name == 'CONVEX_X':
                    inputs['lam'] = 0.5
                yield inputs
    elif name == 'C2':
        for X in _losses(n):
            for shift in (1.0, -1.0, 0.5):
                yield {'X': X, 'shift': shift, 'scenarios': single}
    elif name == 'C3':
        for X in _losses(n):
            for scale in (2.0, 0.5, 3.0):
                yield {'X': X, 'scale': scale, 'scenarios': single}
    elif name in ('B4', 'CONCAVE_P'):
        for X in _losses(n):
            for P in _half_grid(n, 'P1'):
                for Q in _half_grid(n, 'P2'):
                    yield {'X': X, 'P': P, 'Q': Q, 'lam': 0.5}
    elif name == 'B4_EVENT':
        for P in _half_grid(n, 'P1'):
            for Q in _half_grid(n, 'P2'):
                for event in SpaceService.unambiguous_events(P, Q):
                    yield {'P': P, 'Q': Q, 'event': event, 'lam': 0.5}
    elif name == 'B2':
        P = _uniform(n)
        for X in _losses(n):
            for values in sorted(set(itertools.permutations(X.values.tolist()))):
                yield {'X': X, 'Y': RandomVariable(np.array(values)), 'P': P}
    elif name == 'B3':
        for X in _losses(n):
            for P in _half_grid(n, 'P1'):
                for Q in _half_grid(n, 'P2'):
                    if _same_law(X, P, X, Q):
                        yield {'X': X, 'P': P, 'Q': Q}
    elif name == 'B1':
        for X in _losses(n):
            for P in _half_grid(n, 'P1'):
                for Q in _half_grid(n, 'P2'):
                    for values in sorted(set(itertools.permutations(X.values.tolist()))):
                        Y = RandomVariable(np.array(values))
                        if _same_law(X, P, Y, Q):
                            yield {'X': X, 'P': P, 'Y': Y, 'Q': Q}


def _snap(mass: np.ndarray, steps: int) -> np.ndarray:
    """Largest-remainder rounding of a probability vector to multiples of 1/steps."""
    scaled = mass * steps
    counts = np.floor(scaled)
    remainder = int(round(steps - counts.sum()))
    order = np.argsort(-(scaled - counts), kind='stable')
    counts[order[:remainder]] += 1
    return counts / steps


def _map_scenarios(inputs: dict, func) -> Optional[dict]:
    """Apply func to every mass vector; None when a result is not a probability."""
    result = dict(inputs)
    for key in SCENARIO_KEYS:
        if key in inputs:
            mass = func(inputs[key].mass)
            if mass is None:
                return None
            result[key] = Scenario(mass, inputs[key].id)
    if 'scenarios' in inputs:
        rebuilt = []
        for scenario in inputs['scenarios']:
            mass = func(scenario.mass)
            if mass is None:
                return None
            rebuilt.append(Scenario(mass, scenario.id))
        result['scenarios'] = ScenarioSet(tuple(rebuilt))
    return result


def _drop_atom(inputs: dict, atom: int) -> Optional[dict]:
    def drop(mass):
        kept = np.delete(mass, atom)
        total = kept.sum()
        return kept / total if total > 0 else None

    result = _map_scenarios(inputs, drop)
    if result is None:
        return None
    for key in LOSS_KEYS:
        if key in inputs:
            result[key] = RandomVariable(np.delete(inputs[key].values, atom))
    return result


def _shrink_candidates(inputs: dict) -> Iterator[dict]:
    if 'event' in inputs or 'subset' in inputs:
        return
    n = instance_size(inputs)
    if n > 1:
        for atom in range(n):
            candidate = _drop_atom(inputs, atom)
            if candidate is not None:
                yield candidate
    losses = [key for key in LOSS_KEYS if key in inputs]
    for chosen in [losses] + [[key] for key in losses]:
        candidate = dict(inputs)
        for key in chosen:
            candidate[key] = RandomVariable(np.trunc(inputs[key].values / 2.0))
        yield candidate
    for steps in (2, 4, 8):
        candidate = _map_scenarios(inputs, lambda mass: _snap(mass, steps))
        if candidate is not None:
            yield candidate


def _complexity(witness: Witness):
    n = instance_size(decode_inputs(witness.inputs))
    values = sum(abs(value) for key in LOSS_KEYS for value in witness.inputs.get(key, ()))
    masses = []
    for key in SCENARIO_KEYS:
        if key in witness.inputs:
            masses.extend(witness.inputs[key]['mass'])
    for scenario in witness.inputs.get('scenarios', ()):
        masses.extend(scenario['mass'])
    denominators = sum(Fraction(mass).limit_denominator(1 << 20).denominator for mass in masses)
    return n, values, denominators


class WitnessSearchService:
    @staticmethod
    def _in_regime(core, n: int) -> bool:
        return core is None or core.in_regime(n)

    @staticmethod
    def _try(measure, core, check: AxiomCheck, inputs: dict, tol: float, tally: _Tally) -> Optional[Witness]:
        if not WitnessSearchService._in_regime(core, instance_size(inputs)):
            return None
        AxiomService.run_check(measure, check, inputs, tol, tally)
        return tally.witness

    @staticmethod
    def shrink(measure, check: AxiomCheck, witness: Witness, tol: float) -> Witness:
        """Greedily drop atoms, halve values and coarsen masses while the violation persists."""
        core = core_of(measure)
        best = witness
        for _ in range(MAX_SHRINK_ROUNDS):
            improved = False
            for candidate in _shrink_candidates(decode_inputs(best.inputs)):
                found = WitnessSearchService._try(measure, core, check, candidate, tol, _Tally(best.axiom))
                if found is not None and _complexity(found) < _complexity(best):
                    best, improved = found, True
                    break
            if not improved:
                break
        return best

    @staticmethod
    def search_witness(
        target,
        core,
        budget: Optional[int] = None,
        seed: Optional[int] = None,
        family: Optional[InstanceFamily] = None,
        tol: Optional[float] = None,
    ) -> SearchResult:
        """
        Look for a counterexample to one axiom.

        Every instance on up to SMALL_ATOMS atoms with uniform or half-grid
        scenarios and values in SMALL_VALUES is tried first, smallest space
        first, so a witness found there is minimal in the number of atoms.
        Random instances from the family follow until the budget is spent;
        a witness found there is shrunk before it is returned. Instances with
        alpha > 1 - 1/n are never tried.

        Raises:
            UnsupportedAxiomError: target is unknown or concerns scenario sets
        """
        label = str(target).strip().upper()
        if label not in AxiomId.values or label in SCENARIO_AXIOMS[:3]:
            raise UnsupportedAxiomError(f'Axiom {target!r} cannot be targeted by a witness search.', axiom=target)
        budget = DEFAULT_SEARCH_BUDGET if budget is None else int(budget)
        seed = risk_setting('DEFAULT_SEED') if seed is None else int(seed)
        tol = risk_setting('AUDIT_TOLERANCE') if tol is None else float(tol)
        family = family or InstanceFamily()
        measure = as_measure(core)
        guard = core_of(measure)
        checks = checks_for(label)
        used = 0
        guarded = 0
        evaluated = 0

        for n in range(1, SMALL_ATOMS + 1):
            if not WitnessSearchService._in_regime(guard, n):
                guarded += 1
                continue
            for check in checks:
                for inputs in _small_instances(check, n):
                    if used >= budget:
                        break
                    used += 1
                    evaluated += 1
                    witness = WitnessSearchService._try(measure, guard, check, inputs, tol, _Tally(label))
                    if witness is not None:
                        logger.info(f'{label} witness for {measure.label} on {n} atoms after {used} trials')
                        return SearchResult(label, True, witness, used, exhaustive=True)

        trial = 0
        while used < budget:
            for check in checks:
                if used >= budget:
                    break
                used += 1
                rng = family.rng(seed, trial, CHECK_STREAMS[check.name])
                try:
                    inputs = check.build(family, rng, trial)
                except (SkipTrial, RiskMeasureError) as exc:
                    logger.debug(f'Skipped {check.name} trial {trial}: {exc}')
                    continue
                if not WitnessSearchService._in_regime(guard, instance_size(inputs)):
                    guarded += 1
                    continue
                evaluated += 1
                witness = WitnessSearchService._try(measure, guard, check, inputs, tol, _Tally(label))
                if witness is not None:
                    witness = WitnessSearchService.shrink(measure, check, witness, tol)
                    logger.info(f'{label} witness for {measure.label} after {used} trials')
                    return SearchResult(label, True, witness, used)
            trial += 1

        note = f'No witness within {budget} trials; this does not prove the axiom holds.'
        if guarded and not evaluated:
            note = (
                f'The regime guard (alpha > 1 - 1/n) excluded every instance within {budget} trials; '
                'no instance was evaluated.'
            )
            logger.warning(f'{label} search for {measure.label}: every instance excluded by the regime guard')
        return SearchResult(label, False, trials_used=used, note=note)
