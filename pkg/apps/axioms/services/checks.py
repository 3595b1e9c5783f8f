"""
Registry of axiom checks.

Each check knows how to draw an instance from an InstanceFamily, whether the
instance meets the axiom's premise, and how to compute the two sides of the
axiom's relation for a measure. Audits, witness search and witness replay
all go through this registry so a reported witness is always evaluated by
the same code that found it.
"""
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from apps.core.exceptions import InfeasibleCouplingError, InvalidSpecError
from apps.measures.models import AggregatorSpec, GeneralizedRiskMeasure
from apps.measures.services.cores import get_core
from apps.scenarios.models import RandomVariable, ScenarioSet
from apps.scenarios.services import SpaceService
from apps.axioms.models import AxiomId, Relation
from .generators import InstanceFamily

Inputs = Dict[str, Any]


class SkipTrial(Exception):
    """Raised by a builder when a trial yields no usable instance."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    axiom: str
    relation: str
    build: Callable[[InstanceFamily, np.random.Generator, int], Inputs]
    evaluate: Callable[[GeneralizedRiskMeasure, Inputs], Tuple[float, float]]
    premise: Optional[Callable[[GeneralizedRiskMeasure, Inputs, float], bool]] = None
    # Restrict to alpha <= 1 - 1/n for cores with a quantile level.
    regime: bool = False


def as_measure(subject) -> GeneralizedRiskMeasure:
    """
    Wrap a core as a worst-case measure; on a single scenario its value is
    the core value, so one code path serves both measure and core audits.
    """
    if isinstance(subject, GeneralizedRiskMeasure):
        return subject
    return GeneralizedRiskMeasure(core=subject, aggregator=AggregatorSpec.worst_case())


def core_of(measure: GeneralizedRiskMeasure):
    if not measure.uses_core:
        return None
    try:
        return get_core(measure.core)
    except InvalidSpecError:
        return None


def _psi(measure: GeneralizedRiskMeasure, X: RandomVariable, scenarios) -> float:
    return float(measure.evaluate(X, scenarios))


def _same_law(X, P, Y, Q) -> bool:
    return SpaceService.distribution_of(X, P) == SpaceService.distribution_of(Y, Q)


def _couple(X, P, Q, rng) -> RandomVariable:
    try:
        return SpaceService.make_identically_distributed_pair(X, P, Q, rng=rng)
    except InfeasibleCouplingError:
        raise SkipTrial('coupling infeasible')


def _mixture(inputs: Inputs):
    return SpaceService.mix_scenarios(inputs['P'], inputs['Q'], inputs['lam'])


# Builders

def _build_a1(family, rng, trial):
    n = family.atoms(rng)
    universe = family.universe(rng, n)
    subset, superset = family.nested_ids(rng, universe)
    return {'X': family.loss(rng, n), 'scenarios': universe, 'subset': subset, 'superset': superset}


def _build_a2(family, rng, trial):
    n = family.atoms(rng)
    X = family.loss(rng, n)
    Y = family.dominating(rng, X) if trial % 2 == 0 else family.loss(rng, n)
    return {'X': X, 'Y': Y, 'scenarios': family.scenario_set(rng, n)}


def _build_a3(family, rng, trial):
    n = family.atoms(rng)
    return {'X': family.loss(rng, n), 'scenarios': family.scenario_set(rng, n)}


def _build_standardness(family, rng, trial):
    n = family.atoms(rng)
    value = 0.0 if trial == 0 else family.constant(rng)
    return {'X': RandomVariable(np.full(n, value)), 'scenarios': family.scenario_set(rng, n)}


def _build_b1(family, rng, trial):
    n = family.atoms(rng)
    X = family.loss(rng, n)
    P, Q = family.coupled_pair(rng, n)
    return {'X': X, 'P': P, 'Y': _couple(X, P, Q, rng), 'Q': Q}


def _build_b2(family, rng, trial):
    n = family.atoms(rng)
    X = family.loss(rng, n)
    P = family.single_scenario(rng, n)
    return {'X': X, 'Y': _couple(X, P, P, rng), 'P': P}


def _build_b3(family, rng, trial):
    n = family.atoms(rng)
    X = family.loss(rng, n)
    P = family.single_scenario(rng, n)
    Q = SpaceService.make_scenario_with_same_law(X, P, rng, family.scenario_id(rng, exclude=P.id))
    return {'X': X, 'P': P, 'Q': Q}


def _build_mixture(family, rng, trial):
    n = family.atoms(rng)
    P, Q = family.scenario_pair(rng, n)
    return {'X': family.loss(rng, n), 'P': P, 'Q': Q, 'lam': family.lam(rng, trial)}


def _build_event(family, rng, trial):
    n = family.atoms(rng)
    P, Q = family.scenario_pair(rng, n)
    events = SpaceService.unambiguous_events(P, Q, limit=16, rng=rng)
    if not events:
        raise SkipTrial('no unambiguous event')
    event = events[int(rng.integers(len(events)))]
    return {'P': P, 'Q': Q, 'event': event, 'lam': family.lam(rng, trial)}


def _build_b5(family, rng, trial):
    n = family.atoms(rng)
    P, Q = family.coupled_pair(rng, n)
    X = family.loss(rng, n)
    Z = family.loss(rng, n)
    return {'X': X, 'Y': _couple(X, P, Q, rng), 'Z': Z, 'W': _couple(Z, P, Q, rng), 'P': P, 'Q': Q}


def _build_single_pair(family, rng, trial):
    n = family.atoms(rng)
    S = family.evaluation_set(rng, n)
    P = S.scenarios[int(rng.integers(len(S)))]
    return {'X': family.loss(rng, n), 'Y': family.loss(rng, n), 'scenarios': ScenarioSet((P,))}


def _build_pair(family, rng, trial):
    n = family.atoms(rng)
    return {'X': family.loss(rng, n), 'Y': family.loss(rng, n), 'scenarios': family.evaluation_set(rng, n)}


def _build_monotone(family, rng, trial):
    n = family.atoms(rng)
    X = family.loss(rng, n)
    return {'X': X, 'Y': family.dominating(rng, X), 'scenarios': family.evaluation_set(rng, n)}


def _build_shift(family, rng, trial):
    n = family.atoms(rng)
    shift = float(rng.integers(-5, 6)) + (0.5 if rng.random() < 0.5 else 0.0)
    return {'X': family.loss(rng, n), 'shift': shift, 'scenarios': family.evaluation_set(rng, n)}


SCALES = (0.25, 0.5, 1.5, 2.0, 3.0)


def _build_scale(family, rng, trial):
    n = family.atoms(rng)
    scale = SCALES[int(rng.integers(len(SCALES)))]
    return {'X': family.loss(rng, n), 'scale': scale, 'scenarios': family.evaluation_set(rng, n)}


def _comonotone_maps(rng, Z: RandomVariable):
    level = float(rng.choice(Z.values))
    return [
        lambda z: z,
        lambda z: 2.0 * z,
        lambda z: z + 3.0,
        lambda z: max(z - level, 0.0),
        lambda z: min(z, level),
        lambda z: float(np.floor(z / 2.0)),
    ]


def _build_comonotone(family, rng, trial):
    n = family.atoms(rng)
    Z = family.loss(rng, n)
    maps = _comonotone_maps(rng, Z)
    f, g = (maps[int(index)] for index in rng.integers(len(maps), size=2))
    X, Y = SpaceService.make_comonotone_pair(Z, f, g)
    return {'X': X, 'Y': Y, 'scenarios': family.evaluation_set(rng, n)}


def _build_convex(family, rng, trial):
    n = family.atoms(rng)
    P = family.single_scenario(rng, n)
    return {
        'X': family.loss(rng, n),
        'Y': family.loss(rng, n),
        'scenarios': ScenarioSet((P,)),
        'lam': family.lam(rng, trial),
    }


# Premises

def _premise_a2(measure, inputs, tol):
    return all(
        _psi(measure, inputs['X'], P) <= _psi(measure, inputs['Y'], P) + tol
        for P in inputs['scenarios']
    )


def _premise_constant(measure, inputs, tol):
    return inputs['X'].is_constant


def _premise_b1(measure, inputs, tol):
    return _same_law(inputs['X'], inputs['P'], inputs['Y'], inputs['Q'])


def _premise_b2(measure, inputs, tol):
    return _same_law(inputs['X'], inputs['P'], inputs['Y'], inputs['P'])


def _premise_b3(measure, inputs, tol):
    return _same_law(inputs['X'], inputs['P'], inputs['X'], inputs['Q'])


def _premise_event(measure, inputs, tol):
    atoms = inputs['event'].sorted_atoms()
    return abs(inputs['P'].probability(atoms) - inputs['Q'].probability(atoms)) <= 1e-12


def _premise_b5(measure, inputs, tol):
    return (
        _same_law(inputs['X'], inputs['P'], inputs['Y'], inputs['Q'])
        and _same_law(inputs['Z'], inputs['P'], inputs['W'], inputs['Q'])
    )


def _premise_dominance(measure, inputs, tol):
    return inputs['X'] <= inputs['Y']


def _premise_comonotone(measure, inputs, tol):
    return SpaceService.is_comonotone(inputs['X'], inputs['Y'])


# Sides of each relation

def _eval_a1(measure, inputs):
    universe = inputs['scenarios']
    return (
        _psi(measure, inputs['X'], universe.subset(inputs['subset'])),
        _psi(measure, inputs['X'], universe.subset(inputs['superset'])),
    )


def _eval_a2(measure, inputs):
    return _psi(measure, inputs['X'], inputs['scenarios']), _psi(measure, inputs['Y'], inputs['scenarios'])


def _eval_a3(measure, inputs):
    X = inputs['X']
    return _psi(measure, X, inputs['scenarios']), max(_psi(measure, X, P) for P in inputs['scenarios'])


def _eval_standardness(measure, inputs):
    X = inputs['X']
    return _psi(measure, X, inputs['scenarios']), float(X.values[0])


def _eval_b1(measure, inputs):
    return _psi(measure, inputs['X'], inputs['P']), _psi(measure, inputs['Y'], inputs['Q'])


def _eval_b2(measure, inputs):
    return _psi(measure, inputs['X'], inputs['P']), _psi(measure, inputs['Y'], inputs['P'])


def _eval_b3(measure, inputs):
    return _psi(measure, inputs['X'], inputs['P']), _psi(measure, inputs['X'], inputs['Q'])


def _eval_mixture(measure, inputs):
    X, lam = inputs['X'], inputs['lam']
    mixed = _psi(measure, X, _mixture(inputs))
    blended = lam * _psi(measure, X, inputs['P']) + (1.0 - lam) * _psi(measure, X, inputs['Q'])
    return blended, mixed


def _eval_event(measure, inputs):
    indicator, lam = inputs['event'].indicator(), inputs['lam']
    mixed = _psi(measure, indicator, _mixture(inputs))
    blended = lam * _psi(measure, indicator, inputs['P']) + (1.0 - lam) * _psi(measure, indicator, inputs['Q'])
    return mixed, blended


def _eval_b5(measure, inputs):
    P, Q = inputs['P'], inputs['Q']
    return (
        _psi(measure, inputs['X'], P) - _psi(measure, inputs['Y'], Q),
        _psi(measure, inputs['Z'], P) - _psi(measure, inputs['W'], Q),
    )


def _eval_additive(measure, inputs):
    X, Y, S = inputs['X'], inputs['Y'], inputs['scenarios']
    return _psi(measure, X + Y, S), _psi(measure, X, S) + _psi(measure, Y, S)


def _eval_shift(measure, inputs):
    X, m, S = inputs['X'], inputs['shift'], inputs['scenarios']
    return _psi(measure, X + m, S), _psi(measure, X, S) + m


def _eval_scale(measure, inputs):
    X, c, S = inputs['X'], inputs['scale'], inputs['scenarios']
    return _psi(measure, c * X, S), c * _psi(measure, X, S)


def _eval_convex(measure, inputs):
    X, Y, S, lam = inputs['X'], inputs['Y'], inputs['scenarios'], inputs['lam']
    blended_loss = lam * X + (1.0 - lam) * Y
    return _psi(measure, blended_loss, S), lam * _psi(measure, X, S) + (1.0 - lam) * _psi(measure, Y, S)


AXIOM_CHECKS: Dict[str, AxiomCheck] = {
    check.name: check for check in (
        AxiomCheck('A1', AxiomId.A1, Relation.LE, _build_a1, _eval_a1),
        AxiomCheck('A2', AxiomId.A2, Relation.LE, _build_a2, _eval_a2, _premise_a2),
        AxiomCheck('A3', AxiomId.A3, Relation.LE, _build_a3, _eval_a3),
        AxiomCheck('STD', AxiomId.STD, Relation.EQ, _build_standardness, _eval_standardness, _premise_constant),
        AxiomCheck('B1', AxiomId.B1, Relation.EQ, _build_b1, _eval_b1, _premise_b1),
        AxiomCheck('B2', AxiomId.B2, Relation.EQ, _build_b2, _eval_b2, _premise_b2),
        AxiomCheck('B3', AxiomId.B3, Relation.EQ, _build_b3, _eval_b3, _premise_b3),
        AxiomCheck('B4', AxiomId.B4, Relation.LE, _build_mixture, _eval_mixture, regime=True),
        AxiomCheck('B4_EVENT', AxiomId.B4, Relation.EQ, _build_event, _eval_event, _premise_event, regime=True),
        AxiomCheck('B5', AxiomId.B5, Relation.EQ, _build_b5, _eval_b5, _premise_b5),
        AxiomCheck('C0', AxiomId.C0, Relation.EQ, _build_single_pair, _eval_additive),
        AxiomCheck('C1', AxiomId.C1, Relation.LE, _build_monotone, _eval_a2, _premise_dominance),
        AxiomCheck('C2', AxiomId.C2, Relation.EQ, _build_shift, _eval_shift),
        AxiomCheck('C3', AxiomId.C3, Relation.EQ, _build_scale, _eval_scale),
        AxiomCheck('C4', AxiomId.C4, Relation.LE, _build_pair, _eval_additive),
        AxiomCheck('C5', AxiomId.C5, Relation.EQ, _build_comonotone, _eval_additive, _premise_comonotone),
        AxiomCheck('CONVEX_X', AxiomId.CONVEX_X, Relation.LE, _build_convex, _eval_convex),
        AxiomCheck('CONCAVE_P', AxiomId.CONCAVE_P, Relation.LE, _build_mixture, _eval_mixture, regime=True),
    )
}


def checks_for(axiom) -> Tuple[AxiomCheck, ...]:
    return tuple(check for check in AXIOM_CHECKS.values() if check.axiom == str(axiom))


def out_of_regime(measure: GeneralizedRiskMeasure, check: AxiomCheck, n: int) -> bool:
    if not check.regime:
        return False
    core = core_of(measure)
    return core is not None and not core.in_regime(n)
