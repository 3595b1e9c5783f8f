"""Tests for AggregatorService and GeneralizedRiskMeasure."""
import itertools
import math

import numpy as np
from django.test import SimpleTestCase

from apps.core.exceptions import (
    AllExcludedError,
    EmptyScenarioSetError,
    InvalidSpecError,
    WeightMismatchError,
)
from apps.core.test_utils import (
    make_rv,
    make_scenario,
    make_scenario_set,
    random_dyadic_scenario,
    random_integer_rv,
    uniform_scenario,
    worked_example_set,
)
from apps.measures.models import (
    AggregatorSpec,
    CoreSpec,
    GeneralizedRiskMeasure,
    MisspecificationCost,
    Ordering,
    PenaltyFunction,
    UtilityFunction,
    VariationalSign,
)
from apps.measures.services import AggregatorService
from apps.scenarios.models import ScenarioSet

IDENTITY = UtilityFunction.identity()


class WorstCaseTests(SimpleTestCase):
    """Tests for worst_case_eval."""

    def test_worst_case_es(self):
        """Test max(4, 10) on the two-scenario example."""
        value = AggregatorService.worst_case_eval(CoreSpec.es(0.5), make_rv(0, 10), worked_example_set())
        self.assertAlmostEqual(value, 10.0, places=12)

    def test_singleton(self):
        """Test a singleton set gives the core value."""
        value = AggregatorService.worst_case_eval(CoreSpec.es(0.5), make_rv(0, 10), make_scenario(0.8, 0.2))
        self.assertAlmostEqual(value, 4.0, places=12)

    def test_constant(self):
        """Test standardness over a set."""
        value = AggregatorService.worst_case_eval(CoreSpec.var(0.9), make_rv(3, 3), worked_example_set())
        self.assertEqual(value, 3.0)

    def test_empty_set(self):
        """Test an empty set raises EmptyScenarioSetError."""
        with self.assertRaises(EmptyScenarioSetError):
            AggregatorService.worst_case_eval(CoreSpec.expectation(), make_rv(0, 1), [])

    def test_argmax_ties_keep_input_order(self):
        """Test the first maximizing scenario is reported."""
        scenarios = make_scenario_set((0.5, 0.5), (0.5, 0.5))
        _, scenario = AggregatorService.worst_case_argmax(CoreSpec.expectation(), make_rv(0, 2), scenarios)
        self.assertEqual(scenario.id, 'P1')

    def test_monotone_in_scenario_set(self):
        """Test value(Q) <= value(R) whenever Q is a subset of R."""
        rng = np.random.default_rng(11)
        core = CoreSpec.es(0.25)
        for trial in range(50):
            scenarios = ScenarioSet(tuple(random_dyadic_scenario(rng, 4) for _ in range(3)))
            X = random_integer_rv(rng, 4)
            values = {s.ids: AggregatorService.worst_case_eval(core, X, s) for s in scenarios.nonempty_subsets()}
            for small, large in itertools.permutations(values, 2):
                if set(small) <= set(large):
                    self.assertLessEqual(values[small], values[large])


class AverageTests(SimpleTestCase):
    """Tests for average_eval."""

    def test_equal_weights(self):
        """Test (4 + 10) / 2 = 7."""
        value = AggregatorService.average_eval(CoreSpec.es(0.5), make_rv(0, 10), worked_example_set(), [0.5, 0.5])
        self.assertAlmostEqual(value, 7.0, places=12)

    def test_degenerate_weights(self):
        """Test all weight on one scenario gives its value."""
        value = AggregatorService.average_eval(CoreSpec.es(0.5), make_rv(0, 10), worked_example_set(), {'P1': 1, 'P2': 0})
        self.assertAlmostEqual(value, 4.0, places=12)

    def test_constant(self):
        """Test standardness of the average."""
        value = AggregatorService.average_eval(CoreSpec.es(0.5), make_rv(2, 2), worked_example_set(), [0.25, 0.75])
        self.assertEqual(value, 2.0)

    def test_weight_mismatch(self):
        """Test wrong length, negative and unnormalized weights are rejected."""
        for weights in ([1.0], [0.7, 0.7], [1.5, -0.5], {'P1': 1.0}):
            with self.assertRaises(WeightMismatchError):
                AggregatorService.average_eval(CoreSpec.es(0.5), make_rv(0, 10), worked_example_set(), weights)

    def test_monotonicity_in_scenario_set_fails(self):
        """Test the average drops from 10 to 7 when P2 is added."""
        measure = GeneralizedRiskMeasure(CoreSpec.es(0.5), AggregatorSpec.average())
        scenarios = make_scenario_set((0.4, 0.6), (0.8, 0.2))
        X = make_rv(0, 10)
        self.assertAlmostEqual(measure.evaluate(X, scenarios.subset(['P1'])), 10.0, places=12)
        self.assertAlmostEqual(measure.evaluate(X, scenarios), 7.0, places=12)

    def test_measure_weights_renormalize_on_subsets(self):
        """Test per-id weights are restricted to the evaluated subset."""
        measure = GeneralizedRiskMeasure(CoreSpec.expectation(), AggregatorSpec.average({'P1': 0.25, 'P2': 0.75}))
        scenarios = make_scenario_set((1, 0), (0, 1))
        X = make_rv(0, 4)
        self.assertEqual(measure.evaluate(X, scenarios), 3.0)
        self.assertEqual(measure.evaluate(X, scenarios.subset(['P2'])), 4.0)


class MultiPriorTests(SimpleTestCase):
    """Tests for multi-prior, imprecise and the comparator."""

    def setUp(self):
        self.X = make_rv(0, 10)
        self.scenarios = make_scenario_set((0.5, 0.5), (0.9, 0.1))

    def test_identity_utility(self):
        """Test min(5, 1) = 1."""
        self.assertAlmostEqual(AggregatorService.multi_prior_eval(IDENTITY, self.X, self.scenarios), 1.0, places=12)

    def test_singleton_is_certainty_equivalent(self):
        """Test a singleton set gives u^{-1}(E^P[u(X)])."""
        u = UtilityFunction.exponential(0.2)
        P = uniform_scenario(2)
        expected = u.inverse(0.5 * (u(0.0) + u(10.0)))
        self.assertAlmostEqual(AggregatorService.multi_prior_eval(u, self.X, P), expected, places=12)

    def test_constant(self):
        """Test a constant is returned unchanged."""
        u = UtilityFunction.exponential(0.2)
        self.assertEqual(AggregatorService.multi_prior_eval(u, make_rv(3, 3), self.scenarios), 3.0)

    def test_attained_by_a_scenario(self):
        """Test the minimum is attained by a member of the set."""
        value, scenario = AggregatorService.multi_prior_argmin(IDENTITY, self.X, self.scenarios)
        self.assertEqual(scenario.id, 'P2')
        self.assertAlmostEqual(value, scenario.expectation(self.X.values), places=15)

    def test_monotone_in_loss(self):
        """Test pointwise larger losses have larger values."""
        u = UtilityFunction.exponential(0.3)
        self.assertLessEqual(
            AggregatorService.multi_prior_eval(u, make_rv(0, 5), self.scenarios),
            AggregatorService.multi_prior_eval(u, self.X, self.scenarios),
        )

    def test_imprecise_identity_selector(self):
        """Test the imprecise criterion equals multi-prior by default."""
        self.assertEqual(
            AggregatorService.imprecise_eval(IDENTITY, self.X, self.scenarios),
            AggregatorService.multi_prior_eval(IDENTITY, self.X, self.scenarios),
        )

    def test_imprecise_selector(self):
        """Test the selector narrows the set first."""
        value = AggregatorService.imprecise_eval(IDENTITY, self.X, self.scenarios, lambda s: s.subset(['P1']))
        self.assertAlmostEqual(value, 5.0, places=12)

    def test_compare(self):
        """Test the comparator orders by worst expected utility."""
        one = make_scenario_set((0.5, 0.5))
        two = make_scenario_set((0.9, 0.1))
        self.assertEqual(AggregatorService.compare_multi_prior(IDENTITY, self.X, one, self.X, two), Ordering.GREATER)
        self.assertEqual(AggregatorService.compare_multi_prior(IDENTITY, self.X, two, self.X, one), Ordering.LESS)
        self.assertEqual(AggregatorService.compare_multi_prior(IDENTITY, self.X, one, self.X, one), Ordering.EQUAL)

    def test_compare_superset_is_not_preferred(self):
        """Test adding scenarios never improves the worst expected utility."""
        one = make_scenario_set((0.5, 0.5))
        ordering = AggregatorService.compare_multi_prior(IDENTITY, self.X, self.scenarios, self.X, one)
        self.assertIn(ordering, (Ordering.LESS, Ordering.EQUAL))

    def test_compare_is_total_preorder(self):
        """Test completeness and transitivity on a random family."""
        rng = np.random.default_rng(5)
        u = UtilityFunction.exponential(0.1)
        family = [
            (random_integer_rv(rng, 3), ScenarioSet(tuple(random_dyadic_scenario(rng, 3) for _ in range(2))))
            for _ in range(8)
        ]

        def at_most(a, b):
            return AggregatorService.compare_multi_prior(u, *a, *b) in (Ordering.LESS, Ordering.EQUAL)

        for a, b in itertools.product(family, repeat=2):
            self.assertTrue(at_most(a, b) or at_most(b, a))
        for a, b, c in itertools.product(family, repeat=3):
            if at_most(a, b) and at_most(b, c):
                self.assertTrue(at_most(a, c))


class VariationalTests(SimpleTestCase):
    """Tests for variational_eval."""

    def setUp(self):
        self.X = make_rv(0, 10)
        self.scenarios = make_scenario_set((0.5, 0.5), (0.1, 0.9))

    def test_zero_penalty_is_multi_prior(self):
        """Test the utility-signed form with gamma = 0 is the worst expectation."""
        value = AggregatorService.variational_eval(
            IDENTITY, PenaltyFunction.zero(), self.X, self.scenarios, sign=VariationalSign.UTILITY_MIN,
        )
        self.assertEqual(value, AggregatorService.multi_prior_eval(IDENTITY, self.X, self.scenarios))

    def test_risk_sup(self):
        """Test max(5 - 0, 9 - 3) = 6."""
        gamma = PenaltyFunction.from_table({'P1': 0.0, 'P2': 3.0})
        value = AggregatorService.variational_eval(IDENTITY, gamma, self.X, self.scenarios)
        self.assertAlmostEqual(value, 6.0, places=12)

    def test_sign_alias(self):
        """Test the older utility-signed spelling selects the same form."""
        gamma = PenaltyFunction.from_table({'P1': 0.0, 'P2': 3.0})
        aliased = AggregatorService.variational_eval(IDENTITY, gamma, self.X, self.scenarios, sign='paper_verbatim')
        value = AggregatorService.variational_eval(
            IDENTITY, gamma, self.X, self.scenarios, sign=VariationalSign.UTILITY_MIN,
        )
        self.assertEqual(aliased, value)
        self.assertEqual(value, 5.0)
        spec = AggregatorSpec.variational(gamma, sign='paper_verbatim')
        self.assertEqual(spec.sign, VariationalSign.UTILITY_MIN)

    def test_unknown_sign(self):
        """Test an unknown sign is rejected rather than read as risk_sup."""
        with self.assertRaises(InvalidSpecError):
            AggregatorService.variational_eval(IDENTITY, PenaltyFunction.zero(), self.X, self.scenarios, sign='maximin')

    def test_infinite_penalty_excludes(self):
        """Test gamma = inf drops P2."""
        gamma = PenaltyFunction.from_table({'P1': 0.0, 'P2': math.inf})
        value = AggregatorService.variational_eval(IDENTITY, gamma, self.X, self.scenarios)
        self.assertEqual(value, 5.0)

    def test_all_excluded(self):
        """Test every scenario excluded raises AllExcludedError."""
        gamma = PenaltyFunction.from_table({'P1': math.inf, 'P2': math.inf})
        with self.assertRaises(AllExcludedError):
            AggregatorService.variational_eval(IDENTITY, gamma, self.X, self.scenarios)

    def test_measure_uses_core_for_risk_sup(self):
        """Test the measure passes its core as psi."""
        gamma = PenaltyFunction.from_table({'P1': 0.0, 'P2': 3.0})
        measure = GeneralizedRiskMeasure(CoreSpec.es(0.25), AggregatorSpec.variational(gamma))
        self.assertEqual(measure.evaluate(self.X, self.scenarios), 7.0)


class SmoothAmbiguityTests(SimpleTestCase):
    """Tests for smooth_ambiguity_eval."""

    def test_identity_stages(self):
        """Test (5 + 1) / 2 = 3."""
        scenarios = make_scenario_set((0.5, 0.5), (0.9, 0.1))
        value = AggregatorService.smooth_ambiguity_eval(IDENTITY, IDENTITY, make_rv(0, 10), scenarios, [0.5, 0.5])
        self.assertAlmostEqual(value, 3.0, places=12)

    def test_identity_phi_averages_certainty_equivalents(self):
        """Test phi = identity weights the per-scenario certainty equivalents."""
        u = UtilityFunction.exponential(0.4)
        scenarios = make_scenario_set((0.5, 0.5), (0.9, 0.1))
        X = make_rv(0, 10)
        expected = 0.25 * u.inverse(0.5 * u(0.0) + 0.5 * u(10.0)) + 0.75 * u.inverse(0.9 * u(0.0) + 0.1 * u(10.0))
        value = AggregatorService.smooth_ambiguity_eval(u, IDENTITY, X, scenarios, [0.25, 0.75])
        self.assertAlmostEqual(value, expected, places=12)

    def test_singleton(self):
        """Test a singleton gives the certainty equivalent."""
        u = UtilityFunction.power(0.5)
        phi = UtilityFunction.exponential(1.0)
        P = make_scenario(0.25, 0.75)
        X = make_rv(1, 9)
        expected = u.inverse(0.25 * u(1.0) + 0.75 * u(9.0))
        self.assertAlmostEqual(AggregatorService.smooth_ambiguity_eval(u, phi, X, P, [1.0]), expected, places=10)

    def test_weight_mismatch(self):
        """Test weights must sum to one."""
        with self.assertRaises(WeightMismatchError):
            AggregatorService.smooth_ambiguity_eval(IDENTITY, IDENTITY, make_rv(0, 1), worked_example_set(), [0.2, 0.2])


class MisspecificationTests(SimpleTestCase):
    """Tests for candidate_grid and misspecification_eval."""

    def test_candidate_grid_size(self):
        """Test the grid holds every composition of steps into n parts."""
        grid = AggregatorService.candidate_grid(3, 4)
        self.assertEqual(len(grid), 15)
        for scenario in grid:
            self.assertAlmostEqual(float(scenario.mass.sum()), 1.0, places=12)

    def test_zero_cost(self):
        """Test free misspecification is the smallest candidate expectation."""
        candidates = make_scenario_set((0.5, 0.5), (0.9, 0.1), prefix='C')
        value = AggregatorService.misspecification_eval(
            IDENTITY, MisspecificationCost.ZERO, make_rv(0, 10), uniform_scenario(2), candidates,
        )
        self.assertAlmostEqual(value, 1.0, places=12)

    def test_candidates_equal_reference_set(self):
        """Test the value never exceeds the worst expectation over Q."""
        scenarios = make_scenario_set((0.5, 0.5), (0.9, 0.1))
        X = make_rv(0, 10)
        value = AggregatorService.misspecification_eval(IDENTITY, MisspecificationCost.KL, X, scenarios, scenarios)
        self.assertLessEqual(value, AggregatorService.multi_prior_eval(IDENTITY, X, scenarios) + 1e-12)

    def test_dense_grid_approaches_closed_form(self):
        """Test a 10^4 grid lands just above -log E^Q[exp(-X)]."""
        X = make_rv(0, math.log(2))
        target = -math.log(0.75)
        measure = GeneralizedRiskMeasure(aggregator=AggregatorSpec.misspecification(candidate_steps=10_000))
        value = measure.evaluate(X, uniform_scenario(2, 'Q'))
        self.assertGreaterEqual(value, target - 1e-12)
        self.assertLess(value - target, 1e-3)

    def test_exact_kl_value(self):
        """Test the exact KL value is -log E^Q[exp(-X)] minimized over the references."""
        X = make_rv(0, math.log(2))
        self.assertAlmostEqual(
            AggregatorService.kl_misspecification_value(X, uniform_scenario(2, 'Q')), -math.log(0.75), places=12,
        )
        references = make_scenario_set((0.5, 0.5), (1.0, 0.0))
        self.assertAlmostEqual(AggregatorService.kl_misspecification_value(X, references), 0.0, places=12)

    def test_grid_value_bounded_by_exact_kl_value(self):
        """Test every candidate grid stays above the exact KL value."""
        X = make_rv(0, 3, 1)
        references = make_scenario_set((0.2, 0.3, 0.5), (0.5, 0.25, 0.25))
        exact = AggregatorService.kl_misspecification_value(X, references)
        for steps in (2, 8, 32):
            candidates = AggregatorService.candidate_grid(3, steps)
            value = AggregatorService.misspecification_eval(IDENTITY, MisspecificationCost.KL, X, references, candidates)
            self.assertGreaterEqual(value, exact - 1e-12)
