"""Tests for core specifications, the core factory and CoreService."""
import math

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given
from hypothesis import strategies as st

from apps.core.exceptions import (
    BadAlphaError,
    InvalidSpecError,
    SpaceMismatchError,
    UnknownScenarioError,
)
from apps.core.test_utils import (
    PROPERTY_SETTINGS,
    loss_and_scenario,
    make_rv,
    make_scenario,
    uniform_scenario,
)
from apps.measures.models import CoreSpec, Distortion, PenaltyFunction, UtilityFunction
from apps.measures.services import CoreService
from apps.measures.services.cores import (
    BlackBoxCore,
    CertaintyEquivalentCore,
    DistortionCore,
    ESCore,
    ExpectationCore,
    VaRCore,
    get_core,
)
from apps.scenarios.models import RandomVariable
from apps.scenarios.services import SpaceService

STANDARD_SPECS = [
    CoreSpec.expectation(),
    CoreSpec.var(0.5),
    CoreSpec.var(1.0),
    CoreSpec.es(0.3),
    CoreSpec.distortion_core(Distortion.power(0.5)),
    CoreSpec.distortion_core(Distortion.dual_power(2)),
    CoreSpec.penalized_mean(PenaltyFunction.zero()),
    CoreSpec.certainty_equivalent(UtilityFunction.exponential(0.7)),
    CoreSpec.certainty_equivalent(UtilityFunction.power(0.5)),
]


class DistortionTests(SimpleTestCase):
    """Tests for Distortion construction and the concavity flag."""

    def test_endpoints_enforced(self):
        """Test a grid not ending at h(1) = 1 is rejected."""
        with self.assertRaises(InvalidSpecError):
            Distortion.grid([0.0, 1.0], [0.0, 0.9])

    def test_decreasing_grid_rejected(self):
        """Test a decreasing grid is rejected."""
        with self.assertRaises(InvalidSpecError):
            Distortion.grid([0.0, 0.3, 0.6, 1.0], [0.0, 0.8, 0.7, 1.0])

    def test_tail_alpha_range(self):
        """Test the tail distortion needs alpha in [0, 1)."""
        with self.assertRaises(BadAlphaError):
            Distortion.es_tail(1.0)

    def test_concavity_flag(self):
        """Test concave and convex distortions are told apart."""
        self.assertTrue(Distortion.power(0.5).is_concave)
        self.assertTrue(Distortion.es_tail(0.9).is_concave)
        self.assertTrue(Distortion.identity().is_concave)
        self.assertFalse(Distortion.power(2).is_concave)
        self.assertFalse(Distortion.grid([0.0, 0.5, 1.0], [0.0, 0.2, 1.0]).is_concave)

    def test_tail_values(self):
        """Test h(t) = min(t / (1 - alpha), 1)."""
        h = Distortion.es_tail(0.5)
        self.assertEqual(h(0.25), 0.5)
        self.assertEqual(h(0.75), 1.0)


class UtilityFunctionTests(SimpleTestCase):
    """Tests for UtilityFunction."""

    def test_exponential_needs_nonzero_coefficient(self):
        """Test a = 0 is rejected."""
        with self.assertRaises(InvalidSpecError):
            UtilityFunction.exponential(0)

    def test_inverse_round_trip(self):
        """Test u(u^{-1}(y)) = y on the range of u."""
        for u in (UtilityFunction.identity(), UtilityFunction.exponential(0.5),
                  UtilityFunction.exponential(-0.3), UtilityFunction.power(0.5)):
            x = np.linspace(-5, 10, 31)
            y = u(x)
            np.testing.assert_allclose(u(u.inverse(y)), y, atol=1e-10)

    def test_strictly_increasing(self):
        """Test every kind increases on the working range."""
        x = np.linspace(-5, 10, 61)
        for u in (UtilityFunction.exponential(0.5), UtilityFunction.exponential(-0.3), UtilityFunction.power(2.0)):
            self.assertTrue(np.all(np.diff(u(x)) > 0))


class PenaltyFunctionTests(SimpleTestCase):
    """Tests for PenaltyFunction."""

    def test_table_lookup_by_id(self):
        """Test equal-mass scenarios can carry different penalties."""
        gamma = PenaltyFunction.from_table({'A': 0.0, 'B': math.inf})
        self.assertEqual(gamma(uniform_scenario(2, 'A')), 0.0)
        self.assertEqual(gamma(uniform_scenario(2, 'B')), math.inf)

    def test_missing_entry(self):
        """Test scenarios without an entry raise UnknownScenarioError."""
        gamma = PenaltyFunction.from_table({'A': 1.0})
        with self.assertRaises(UnknownScenarioError):
            gamma(uniform_scenario(2, 'C'))

    def test_kl_to_reference(self):
        """Test the KL penalty is the divergence to the reference."""
        gamma = PenaltyFunction.kl_to_reference(uniform_scenario(2, 'R'))
        self.assertAlmostEqual(gamma(make_scenario(1, 0)), math.log(2), places=15)

    def test_minus_infinity_rejected(self):
        """Test penalties live in (-inf, inf]."""
        with self.assertRaises(InvalidSpecError):
            PenaltyFunction.from_table({'A': -math.inf})


class CoreSpecTests(SimpleTestCase):
    """Tests for CoreSpec validation."""

    def test_var_alpha_range(self):
        """Test VaR accepts alpha = 1 but not alpha = 0."""
        CoreSpec.var(1.0)
        with self.assertRaises(BadAlphaError):
            CoreSpec.var(0.0)

    def test_es_alpha_range(self):
        """Test ES rejects alpha = 1."""
        with self.assertRaises(BadAlphaError):
            CoreSpec.es(1.0)

    def test_unknown_variant(self):
        """Test unknown variants are rejected."""
        with self.assertRaises(InvalidSpecError):
            CoreSpec('median')

    def test_distortion_required(self):
        """Test the distortion core needs h."""
        with self.assertRaises(InvalidSpecError):
            CoreSpec('distortion')

    def test_labels(self):
        """Test labels name the variant and its parameter."""
        self.assertEqual(CoreSpec.es(0.5).label, 'es(0.5)')
        self.assertEqual(CoreSpec.distortion_core(Distortion.power(0.5)).label, 'distortion(power(0.5))')


class CoreFactoryTests(SimpleTestCase):
    """Tests for get_core."""

    def test_builds_matching_core(self):
        """Test the factory maps variants to core classes."""
        self.assertIsInstance(get_core(CoreSpec.expectation()), ExpectationCore)
        self.assertIsInstance(get_core(CoreSpec.var(0.5)), VaRCore)
        self.assertIsInstance(get_core(CoreSpec.es(0.5)), ESCore)
        self.assertIsInstance(get_core(CoreSpec.distortion_core(Distortion.identity())), DistortionCore)
        self.assertIsInstance(get_core(CoreSpec.certainty_equivalent()), CertaintyEquivalentCore)

    def test_callable_becomes_black_box(self):
        """Test plain callables are wrapped."""
        core = get_core(lambda X, P: float(X.values.max()))
        self.assertIsInstance(core, BlackBoxCore)
        self.assertEqual(core(make_rv(1, 5), uniform_scenario(2)), 5.0)

    def test_core_instances_pass_through(self):
        """Test BaseCore instances are returned unchanged."""
        core = ESCore(0.5)
        self.assertIs(get_core(core), core)

    def test_regime_guard(self):
        """Test alpha <= 1 - 1/n decides the regime."""
        self.assertTrue(ESCore(0.5).in_regime(2))
        self.assertFalse(ESCore(0.75).in_regime(2))
        self.assertTrue(ExpectationCore().in_regime(1))


class EvaluateCoreTests(SimpleTestCase):
    """Tests for CoreService.evaluate_core."""

    def test_penalized_mean(self):
        """Test E^P[X] - gamma(P) with gamma(P) = 0.5."""
        spec = CoreSpec.penalized_mean(PenaltyFunction.from_table({'P': 0.5}))
        value = CoreService.evaluate_core(spec, make_rv(0, 10), uniform_scenario(2, 'P'))
        self.assertEqual(value, 4.5)

    def test_penalized_mean_on_mixture(self):
        """Test a mixture of tabled scenarios has no penalty entry of its own."""
        spec = CoreSpec.penalized_mean(PenaltyFunction.from_table({'P': 0.5, 'Q': 1.0}))
        mixed = SpaceService.mix_scenarios(uniform_scenario(2, 'P'), make_scenario(0.25, 0.75, scenario_id='Q'), 0.5)
        with self.assertRaises(UnknownScenarioError):
            CoreService.evaluate_core(spec, make_rv(0, 10), mixed)

    def test_certainty_equivalent_identity(self):
        """Test the identity certainty equivalent is the mean."""
        value = CoreService.evaluate_core(CoreSpec.certainty_equivalent(), make_rv(0, 10), make_scenario(0.8, 0.2))
        self.assertAlmostEqual(value, 2.0, places=12)

    def test_expected_utility(self):
        """Test E^P[u(X)] for an exponential utility."""
        u = UtilityFunction.exponential(1.0)
        value = CoreService.evaluate_core(CoreSpec.expected_utility(u), make_rv(0, 1), uniform_scenario(2))
        self.assertAlmostEqual(value, 0.5 * (1 - math.exp(-1)), places=12)

    def test_loss_penalized_mean(self):
        """Test E^P[X] - <beta, X>."""
        spec = CoreSpec.loss_penalized_mean([1.0, 0.0])
        value = CoreService.evaluate_core(spec, make_rv(2, 4), uniform_scenario(2))
        self.assertEqual(value, 1.0)

    def test_loss_penalized_mean_length(self):
        """Test beta must match the outcome space."""
        spec = CoreSpec.loss_penalized_mean([1.0, 0.0, 0.0])
        with self.assertRaises(SpaceMismatchError):
            CoreService.evaluate_core(spec, make_rv(2, 4), uniform_scenario(2))

    def test_space_mismatch(self):
        """Test X and P must share a space."""
        with self.assertRaises(SpaceMismatchError):
            CoreService.evaluate_core(CoreSpec.expectation(), make_rv(1, 2, 3), uniform_scenario(2))

    def test_per_scenario_values(self):
        """Test values keyed by scenario id."""
        values = CoreService.evaluate_per_scenario(
            CoreSpec.es(0.5), make_rv(0, 10),
            [make_scenario(0.8, 0.2, scenario_id='P1'), make_scenario(0.4, 0.6, scenario_id='P2')],
        )
        self.assertAlmostEqual(values['P1'], 4.0, places=12)
        self.assertAlmostEqual(values['P2'], 10.0, places=12)

    @PROPERTY_SETTINGS
    @given(loss_and_scenario(), st.sampled_from(STANDARD_SPECS), st.integers(-20, 20))
    def test_standardness(self, instance, spec, constant):
        """Test every standard core returns s on the constant s, exactly."""
        X, P = instance
        s = RandomVariable(np.full(X.n, float(constant)))
        self.assertEqual(CoreService.evaluate_core(spec, s, P), float(constant))
