"""Service for aggregating core values over a scenario set."""
import itertools
import logging
import math
from math import comb
from typing import Callable, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import rel_entr

from apps.core.conf import risk_setting
from apps.core.exceptions import (
    AllExcludedError,
    InvalidSpecError,
    WeightMismatchError,
)
from apps.measures.models import (
    AggregatorVariant,
    GeneralizedRiskMeasure,
    MisspecificationCost,
    Ordering,
    PenaltyFunction,
    UtilityFunction,
    VariationalSign,
    resolve_sign,
)
from apps.measures.services import formulas
from apps.measures.services.cores import ExpectationCore, get_core
from apps.scenarios.models import RandomVariable, Scenario, ScenarioSet, common_space

logger = logging.getLogger(__name__)

# Largest candidate grid candidate_grid will build.
MAX_GRID_CANDIDATES = 250_000

Weights = Union[Sequence[float], Mapping[str, float], None]


def _strict_weights(weights: Weights, Q: ScenarioSet) -> np.ndarray:
    """Weights as a vector aligned with Q; must already form a probability over Q."""
    if weights is None:
        return np.full(len(Q), 1.0 / len(Q))
    if isinstance(weights, Mapping):
        if set(weights) != set(Q.ids):
            raise WeightMismatchError(
                f'Weights are given for {sorted(weights)} but the scenario set is {list(Q.ids)}.'
            )
        vector = np.array([float(weights[scenario_id]) for scenario_id in Q.ids])
    else:
        vector = np.asarray(weights, dtype=float).reshape(-1)
        if vector.size != len(Q):
            raise WeightMismatchError(f'{vector.size} weights for {len(Q)} scenarios.')
    if np.any(vector < 0) or not np.all(np.isfinite(vector)):
        raise WeightMismatchError('Aggregation weights must be finite and nonnegative.')
    if abs(float(vector.sum()) - 1.0) > risk_setting('MASS_TOLERANCE'):
        raise WeightMismatchError(f'Aggregation weights sum to {float(vector.sum())!r}, not 1.')
    return vector


def _certainty_equivalents(u: UtilityFunction, X: RandomVariable, Q: ScenarioSet) -> np.ndarray:
    utilities = u(X.values)
    return np.array([float(u.inverse(P.expectation(utilities))) for P in Q])


class AggregatorService:
    @staticmethod
    def worst_case_argmax(core, X: RandomVariable, Q) -> Tuple[float, Scenario]:
        """Largest core value over Q and the first scenario attaining it."""
        Q = ScenarioSet.coerce(Q)
        core = get_core(core)
        best_value, best_scenario = -math.inf, None
        for P in Q:
            value = core.evaluate(X, P)
            if value > best_value:
                best_value, best_scenario = value, P
        return best_value, best_scenario

    @staticmethod
    def worst_case_eval(core, X: RandomVariable, Q) -> float:
        """max over P in Q of Psi(X|P)."""
        return AggregatorService.worst_case_argmax(core, X, Q)[0]

    @staticmethod
    def average_eval(core, X: RandomVariable, Q, weights: Weights = None) -> float:
        """sum_P w_P Psi(X|P); weights must match Q and sum to 1."""
        Q = ScenarioSet.coerce(Q)
        vector = _strict_weights(weights, Q)
        core = get_core(core)
        values = np.array([core.evaluate(X, P) for P in Q])
        charged = vector > 0
        return float(np.dot(vector[charged], values[charged]))

    @staticmethod
    def multi_prior_argmin(u: UtilityFunction, X: RandomVariable, Q) -> Tuple[float, Scenario]:
        """Smallest expected utility over Q and the first scenario attaining it."""
        Q = ScenarioSet.coerce(Q)
        common_space(X, *Q)
        utilities = u(X.values)
        expected = [P.expectation(utilities) for P in Q]
        index = int(np.argmin(expected))
        return expected[index], Q.scenarios[index]

    @staticmethod
    def multi_prior_eval(u: UtilityFunction, X: RandomVariable, Q) -> float:
        """u^{-1}(min over P in Q of E^P[u(X)])."""
        if X.is_constant:
            return float(X.values[0])
        worst, _ = AggregatorService.multi_prior_argmin(u, X, Q)
        return float(u.inverse(worst))

    @staticmethod
    def variational_eval(
        u: UtilityFunction,
        gamma: PenaltyFunction,
        X: RandomVariable,
        Q,
        sign: str = VariationalSign.RISK_SUP,
        core=None,
    ) -> float:
        """
        Penalized extremum over Q.

        utility_min: min over P of E^P[u(X)] - gamma(P).
        risk_sup: max over P of psi(X|P) - gamma(P), psi the core (expectation
        by default).
        Scenarios with gamma = +inf are skipped.

        Raises:
            AllExcludedError: every scenario carries an infinite penalty.
        """
        Q = ScenarioSet.coerce(Q)
        sign = resolve_sign(sign)
        psi = get_core(core) if core is not None else ExpectationCore()
        utilities = u(X.values)
        values = []
        for P in Q:
            penalty = gamma(P)
            if penalty == math.inf:
                logger.debug(f'Scenario {P.id} excluded by an infinite penalty')
                continue
            if sign == VariationalSign.UTILITY_MIN:
                values.append(P.expectation(utilities) - penalty)
            else:
                values.append(psi.evaluate(X, P) - penalty)
        if not values:
            raise AllExcludedError(scenarios=','.join(Q.ids))
        return float(min(values) if sign == VariationalSign.UTILITY_MIN else max(values))

    @staticmethod
    def smooth_ambiguity_eval(
        u: UtilityFunction,
        phi: UtilityFunction,
        X: RandomVariable,
        Q,
        weights: Weights = None,
    ) -> float:
        """phi^{-1}(sum_P w_P phi(u^{-1}(E^P[u(X)])))."""
        Q = ScenarioSet.coerce(Q)
        vector = _strict_weights(weights, Q)
        common_space(X, *Q)
        if X.is_constant:
            return float(X.values[0])
        second_stage = phi(_certainty_equivalents(u, X, Q))
        return float(phi.inverse(float(np.dot(vector, second_stage))))

    @staticmethod
    def candidate_grid(n: int, steps: int) -> ScenarioSet:
        """Every scenario on n atoms whose masses are multiples of 1/steps."""
        if n < 1 or steps < 1:
            raise InvalidSpecError(f'Candidate grid needs n >= 1 and steps >= 1, got {n}, {steps}.')
        count = comb(steps + n - 1, n - 1)
        if count > MAX_GRID_CANDIDATES:
            raise InvalidSpecError(
                f'Candidate grid with {count} scenarios exceeds the limit of {MAX_GRID_CANDIDATES}.'
            )
        scenarios = []
        # Stars and bars: bar positions split `steps` units over n atoms.
        for index, bars in enumerate(itertools.combinations(range(steps + n - 1), n - 1)):
            edges = np.array((-1,) + bars + (steps + n - 1,))
            counts = np.diff(edges) - 1
            scenarios.append(Scenario(counts / steps, f'C{index + 1}'))
        return ScenarioSet(tuple(scenarios))

    @staticmethod
    def kl_misspecification_value(X: RandomVariable, Q) -> float:
        """
        Exact min over all scenarios P of E^P[X] + min over Q' in Q of KL(P||Q').

        Every candidate grid value upper-bounds it.
        """
        Q = ScenarioSet.coerce(Q)
        return min(formulas.kl_robust_expectation(X, reference) for reference in Q)

    @staticmethod
    def misspecification_eval(
        u: UtilityFunction,
        cost: str,
        X: RandomVariable,
        Q,
        candidates,
    ) -> float:
        """
        min over candidates P of E^P[u(X)] + min over Q' in Q of c(P, Q').

        With the identity utility and KL cost the grid value is compared with
        kl_misspecification_value and the gap logged.
        """
        Q = ScenarioSet.coerce(Q)
        candidates = ScenarioSet.coerce(candidates)
        common_space(X, Q.scenarios[0], candidates.scenarios[0])
        grid = np.vstack([P.mass for P in candidates])
        totals = grid @ np.asarray(u(X.values), dtype=float)
        if cost == MisspecificationCost.KL:
            references = np.vstack([P.mass for P in Q])
            divergences = rel_entr(grid[:, None, :], references[None, :, :]).sum(axis=2)
            totals = totals + divergences.min(axis=1)
        elif cost != MisspecificationCost.ZERO:
            raise InvalidSpecError(f'Unknown misspecification cost {cost!r}.')
        value = float(np.min(totals))
        if cost == MisspecificationCost.KL and u.is_identity:
            exact = AggregatorService.kl_misspecification_value(X, Q)
            logger.debug(f'KL misspecification over {len(candidates)} candidates: {value:.12g}, exact {exact:.12g}')
            if value < exact - risk_setting('AUDIT_TOLERANCE'):
                logger.warning(f'Candidate grid value {value:.12g} falls below the exact KL value {exact:.12g}')
        return value

    @staticmethod
    def imprecise_eval(
        u: UtilityFunction,
        X: RandomVariable,
        Q,
        selector: Optional[Callable[[ScenarioSet], ScenarioSet]] = None,
    ) -> float:
        """Multi-prior value over selector(Q); the identity selector by default."""
        Q = ScenarioSet.coerce(Q)
        selected = ScenarioSet.coerce(selector(Q)) if selector is not None else Q
        return AggregatorService.multi_prior_eval(u, X, selected)

    @staticmethod
    def compare_multi_prior(u: UtilityFunction, X1: RandomVariable, Q1, X2: RandomVariable, Q2) -> str:
        """Order (X1, Q1) against (X2, Q2) by their worst expected utility."""
        first, _ = AggregatorService.multi_prior_argmin(u, X1, Q1)
        second, _ = AggregatorService.multi_prior_argmin(u, X2, Q2)
        tol = risk_setting('EQUALITY_TOLERANCE') * max(1.0, abs(first), abs(second))
        if abs(first - second) <= tol:
            return Ordering.EQUAL
        return Ordering.LESS if first < second else Ordering.GREATER

    @staticmethod
    def weights_for(weights: Optional[Mapping[str, float]], Q: ScenarioSet) -> np.ndarray:
        """
        Per-id weights restricted to Q and renormalized; uniform when None.

        Raises:
            WeightMismatchError: the restricted weights are all zero.
        """
        if weights is None:
            return np.full(len(Q), 1.0 / len(Q))
        vector = np.array([float(weights.get(scenario_id, 0.0)) for scenario_id in Q.ids])
        total = float(vector.sum())
        if total <= 0:
            raise WeightMismatchError(f'No positive weight on scenarios {list(Q.ids)}.')
        return vector / total

    @staticmethod
    def evaluate(measure: GeneralizedRiskMeasure, X: RandomVariable, Q) -> float:
        """Psi(X|Q) for a generalized risk measure."""
        Q = ScenarioSet.coerce(Q)
        spec = measure.aggregator
        variant = spec.variant

        if variant == AggregatorVariant.WORST_CASE:
            return AggregatorService.worst_case_eval(measure.core, X, Q)
        if variant == AggregatorVariant.AVERAGE:
            weights = AggregatorService.weights_for(spec.weights, Q)
            return AggregatorService.average_eval(measure.core, X, Q, weights)
        if variant == AggregatorVariant.MULTI_PRIOR:
            return AggregatorService.multi_prior_eval(spec.utility, X, Q)
        if variant == AggregatorVariant.VARIATIONAL:
            return AggregatorService.variational_eval(
                spec.utility, spec.penalty, X, Q, sign=spec.sign, core=measure.core,
            )
        if variant == AggregatorVariant.SMOOTH:
            weights = AggregatorService.weights_for(spec.weights, Q)
            return AggregatorService.smooth_ambiguity_eval(spec.utility, spec.phi, X, Q, weights)
        if variant == AggregatorVariant.MISSPECIFICATION:
            candidates = spec.candidates
            if candidates is None:
                candidates = AggregatorService.candidate_grid(Q.n, spec.candidate_steps)
            return AggregatorService.misspecification_eval(spec.utility, spec.cost, X, Q, candidates)
        return AggregatorService.imprecise_eval(spec.utility, X, Q, spec.selector)
