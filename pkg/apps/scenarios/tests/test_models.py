"""Tests for scenario, random variable and distribution types."""
import numpy as np
from django.test import SimpleTestCase

from apps.core.exceptions import (
    BadLambdaError,
    DuplicateScenarioIdError,
    EmptyScenarioSetError,
    InvalidSpecError,
    NegativeMassError,
    NotNormalizedError,
    SpaceMismatchError,
)
from apps.core.test_utils import make_rv, make_scenario, make_scenario_set, uniform_scenario
from apps.scenarios.models import (
    DiscreteDistribution,
    Event,
    OutcomeSpace,
    RandomVariable,
    Scenario,
    ScenarioSet,
)


class OutcomeSpaceTests(SimpleTestCase):
    """Tests for OutcomeSpace."""

    def test_rejects_empty_space(self):
        """Test a space needs at least one atom."""
        with self.assertRaises(InvalidSpecError):
            OutcomeSpace(0)

    def test_check_raises_on_length_mismatch(self):
        """Test objects of another length are rejected."""
        with self.assertRaises(SpaceMismatchError):
            OutcomeSpace(3).check(make_rv(1, 2))


class ScenarioTests(SimpleTestCase):
    """Tests for Scenario validation."""

    def test_negative_mass_rejected(self):
        """Test negative masses raise NegativeMassError."""
        with self.assertRaises(NegativeMassError) as ctx:
            make_scenario(0.7, -0.2)
        self.assertEqual(ctx.exception.context['atom'], 1)

    def test_unnormalized_mass_rejected(self):
        """Test masses summing away from one are rejected, not rescaled."""
        with self.assertRaises(NotNormalizedError):
            make_scenario(0.6, 0.6)

    def test_masses_are_read_only(self):
        """Test stored masses cannot be mutated."""
        scenario = uniform_scenario(4)
        with self.assertRaises(ValueError):
            scenario.mass[0] = 1.0

    def test_probability_of_event(self):
        """Test P(A) sums the masses of A."""
        scenario = make_scenario(0.5, 0.25, 0.25)
        self.assertEqual(scenario.probability([1, 2]), 0.5)
        self.assertEqual(scenario.probability([]), 0.0)

    def test_equal_masses_different_ids_are_distinct(self):
        """Test scenarios are identified by id and masses."""
        self.assertNotEqual(uniform_scenario(2, 'A'), uniform_scenario(2, 'B'))
        self.assertEqual(uniform_scenario(2, 'A'), uniform_scenario(2, 'A'))


class ScenarioSetTests(SimpleTestCase):
    """Tests for ScenarioSet."""

    def test_empty_set_rejected(self):
        """Test an empty collection raises EmptyScenarioSetError."""
        with self.assertRaises(EmptyScenarioSetError):
            ScenarioSet(())

    def test_missing_ids_are_labelled(self):
        """Test unlabelled scenarios get P1, P2, ..."""
        scenarios = ScenarioSet((uniform_scenario(2), make_scenario(1.0, 0.0)))
        self.assertEqual(scenarios.ids, ('P1', 'P2'))

    def test_duplicate_ids_rejected(self):
        """Test ids must be distinct."""
        with self.assertRaises(DuplicateScenarioIdError):
            ScenarioSet((uniform_scenario(2, 'A'), make_scenario(1.0, 0.0, scenario_id='A')))

    def test_mixed_spaces_rejected(self):
        """Test all scenarios share one outcome space."""
        with self.assertRaises(SpaceMismatchError):
            ScenarioSet((uniform_scenario(2), uniform_scenario(3)))

    def test_subset_keeps_order(self):
        """Test subset follows the set's order, not the request's."""
        scenarios = make_scenario_set((1, 0), (0, 1), (0.5, 0.5))
        self.assertEqual(scenarios.subset(['P3', 'P1']).ids, ('P1', 'P3'))

    def test_nonempty_subsets_count(self):
        """Test every nonempty sub-collection is produced once."""
        scenarios = make_scenario_set((1, 0), (0, 1), (0.5, 0.5))
        subsets = list(scenarios.nonempty_subsets())
        self.assertEqual(len(subsets), 7)
        self.assertEqual(len(subsets[0]), 1)
        self.assertEqual(len(subsets[-1]), 3)

    def test_get_unknown_id(self):
        """Test get raises KeyError for unknown ids."""
        with self.assertRaises(KeyError):
            make_scenario_set((1, 0)).get('nope')


class RandomVariableTests(SimpleTestCase):
    """Tests for RandomVariable arithmetic."""

    def test_non_finite_values_rejected(self):
        """Test NaN and infinities are rejected."""
        with self.assertRaises(InvalidSpecError):
            make_rv(0.0, float('nan'))

    def test_arithmetic(self):
        """Test addition, scaling and negation act atomwise."""
        X = make_rv(1, 2)
        Y = make_rv(3, -1)
        self.assertEqual(X + Y, make_rv(4, 1))
        self.assertEqual(X + 1, make_rv(2, 3))
        self.assertEqual(2 * X, make_rv(2, 4))
        self.assertEqual(X - Y, make_rv(-2, 3))
        self.assertEqual(-X, make_rv(-1, -2))

    def test_pointwise_dominance(self):
        """Test <= compares atom by atom."""
        self.assertTrue(make_rv(0, 1) <= make_rv(0, 2))
        self.assertFalse(make_rv(0, 3) <= make_rv(1, 2))

    def test_constant_and_indicator(self):
        """Test constant and indicator builders."""
        space = OutcomeSpace(3)
        self.assertTrue(RandomVariable.constant(space, 4.0).is_constant)
        self.assertEqual(RandomVariable.indicator(space, [0, 2]), make_rv(1, 0, 1))

    def test_event_indicator(self):
        """Test an event's indicator marks its atoms."""
        self.assertEqual(Event(frozenset({1}), 3).indicator(), make_rv(0, 1, 0))
        self.assertTrue(Event(frozenset(), 3).is_trivial)


class DiscreteDistributionTests(SimpleTestCase):
    """Tests for DiscreteDistribution."""

    def test_support_must_increase(self):
        """Test unsorted support is rejected."""
        with self.assertRaises(InvalidSpecError):
            DiscreteDistribution(np.array([1.0, 0.0]), np.array([0.5, 0.5]))

    def test_mixture_combines_masses(self):
        """Test mixture weights masses by lam and 1 - lam."""
        F = DiscreteDistribution(np.array([0.0, 1.0]), np.array([0.5, 0.5]))
        G = DiscreteDistribution.point_mass(1.0)
        mixed = F.mixture(G, 0.5)
        self.assertEqual(mixed, DiscreteDistribution(np.array([0.0, 1.0]), np.array([0.25, 0.75])))

    def test_mixture_rejects_bad_lambda(self):
        """Test lam outside [0, 1] raises BadLambdaError."""
        F = DiscreteDistribution.point_mass(0.0)
        with self.assertRaises(BadLambdaError):
            F.mixture(F, 1.5)

    def test_scenario_is_not_a_distribution(self):
        """Test equality does not cross types."""
        self.assertNotEqual(DiscreteDistribution.point_mass(1.0), Scenario(np.array([1.0])))
