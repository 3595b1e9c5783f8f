"""Tests for recover_distortion and verify_choquet_rep."""
import json
import math

import numpy as np
from django.test import SimpleTestCase

from apps.core.exceptions import GridInfeasibleError
from apps.core.test_utils import make_scenario, uniform_scenario
from apps.measures.models import CoreSpec, Distortion, PenaltyFunction
from apps.theorems.models import CheckStatus, TheoremStatus
from apps.theorems.services import TheoremService

TRIALS = 50
SEED = 20240607


class RecoverDistortionTests(SimpleTestCase):
    """Tests for recover_distortion."""

    def test_square_root_distortion(self):
        """Test a square-root distortion core is read back on the tenths."""
        core = CoreSpec.distortion_core(Distortion.power(0.5))
        h = TheoremService.recover_distortion(core, uniform_scenario(10, 'P1'))
        for k in range(11):
            self.assertAlmostEqual(h.h_values[k], math.sqrt(k / 10), delta=1e-12)
        self.assertTrue(h.monotone)
        self.assertTrue(h.concavity_certificate)
        self.assertTrue(h.normalized)
        self.assertTrue(h.nested)

    def test_expectation_is_identity(self):
        """Test the expectation core recovers the identity on the grid."""
        h = TheoremService.recover_distortion(CoreSpec.expectation(), uniform_scenario(8, 'P1'))
        np.testing.assert_allclose(h.h_values, h.grid, atol=1e-12)

    def test_expected_shortfall_tail(self):
        """Test ES recovers min(t / (1 - alpha), 1) at every grid point."""
        for alpha in (0.5, 0.7):
            h = TheoremService.recover_distortion(CoreSpec.es(alpha), uniform_scenario(10, 'P1'))
            expected = np.minimum(h.grid / (1 - alpha), 1.0)
            np.testing.assert_allclose(h.h_values, expected, atol=1e-12)
            self.assertTrue(h.concavity_certificate)

    def test_value_at_risk_is_not_concave(self):
        """Test the VaR step function fails the concavity certificate."""
        h = TheoremService.recover_distortion(CoreSpec.var(0.5), uniform_scenario(10, 'P1'))
        self.assertTrue(h.monotone)
        self.assertFalse(h.concavity_certificate)

    def test_infeasible_grid(self):
        """Test quarters are not event masses of the uniform scenario on ten atoms."""
        with self.assertRaises(GridInfeasibleError):
            TheoremService.recover_distortion(CoreSpec.expectation(), uniform_scenario(10, 'P1'), grid=4)

    def test_levels_searched_independently(self):
        """Test a chain that cannot be nested still yields every level."""
        P = make_scenario(0.5, 0.25, 0.25, scenario_id='P1')
        h = TheoremService.recover_distortion(CoreSpec.expectation(), P, grid=4)
        self.assertFalse(h.nested)
        np.testing.assert_allclose(h.h_values, [0.0, 0.25, 0.5, 0.75, 1.0], atol=1e-12)
        self.assertEqual(h.events[0], ())
        self.assertEqual(h.events[1], (1,))

    def test_black_box_core(self):
        """Test a plain callable is recovered like a built-in core."""
        def worst_outcome(X, P):
            return float(np.max(X.values[P.mass > 0]))

        h = TheoremService.recover_distortion(worst_outcome, uniform_scenario(4, 'P1'))
        np.testing.assert_allclose(h.h_values, [0.0, 1.0, 1.0, 1.0, 1.0])
        self.assertTrue(h.concavity_certificate)

    def test_to_dict(self):
        """Test the recovered grid serializes with its certificates."""
        h = TheoremService.recover_distortion(CoreSpec.es(0.5), uniform_scenario(10, 'P1'))
        data = json.loads(json.dumps(h.to_dict()))
        self.assertEqual(data['scenario'], 'P1')
        self.assertEqual(len(data['grid']), 11)
        self.assertIs(data['normalized'], True)
        self.assertIs(data['monotone'], True)
        self.assertTrue(data['concave'])


class ChoquetRepresentationTests(SimpleTestCase):
    """Tests for verify_choquet_rep."""

    def test_distortion_round_trip(self):
        """Test built-in concave distortion cores are their own Choquet integrals."""
        distortions = [
            Distortion.identity(),
            Distortion.power(0.5),
            Distortion.es_tail(0.5),
            Distortion.es_tail(0.9),
        ]
        for n in (10, 20):
            P = uniform_scenario(n, 'P1')
            for distortion in distortions:
                core = CoreSpec.distortion_core(distortion)
                h = TheoremService.recover_distortion(core, P)
                report = TheoremService.verify_choquet_rep(core, h, trials=TRIALS, seed=SEED)
                self.assertEqual(report.status, TheoremStatus.PASS, (n, distortion.label))
                self.assertLessEqual(report.max_gap, 1e-9)

    def test_expected_shortfall(self):
        """Test the ES core matches the Choquet integral of its recovered h."""
        P = uniform_scenario(10, 'P1')
        h = TheoremService.recover_distortion(CoreSpec.es(0.5), P)
        report = TheoremService.verify_choquet_rep(CoreSpec.es(0.5), h, trials=TRIALS, seed=SEED)
        self.assertEqual(report.status, TheoremStatus.PASS)
        self.assertIsNone(report.witness)

    def test_expectation_is_exact(self):
        """Test the expectation core and the identity grid agree to rounding."""
        P = make_scenario(0.125, 0.375, 0.25, 0.25, scenario_id='P1')
        h = TheoremService.recover_distortion(CoreSpec.expectation(), P, grid=8)
        report = TheoremService.verify_choquet_rep(CoreSpec.expectation(), h, trials=TRIALS, seed=SEED)
        self.assertEqual(report.status, TheoremStatus.PASS)
        self.assertLess(report.max_gap, 1e-12)

    def test_penalized_mean_constant_shift(self):
        """Test a nonzero penalty breaks normalization with a constant witness."""
        core = CoreSpec.penalized_mean(PenaltyFunction.from_table({'P1': 0.5}))
        P = uniform_scenario(4, 'P1')
        h = TheoremService.recover_distortion(core, P)
        self.assertFalse(h.normalized)
        report = TheoremService.verify_choquet_rep(core, h, trials=TRIALS, seed=SEED)
        self.assertEqual(report.status, TheoremStatus.FAIL)
        self.assertEqual(report.checks['normalized'], CheckStatus.FAIL)
        self.assertEqual(report.checks['representation'], CheckStatus.SKIPPED)
        self.assertEqual(report.witness['X'], [1.0, 1.0, 1.0, 1.0])
        self.assertAlmostEqual(report.witness['core'], 0.5)
        self.assertEqual(report.witness['choquet'], 1.0)
        self.assertAlmostEqual(report.max_gap, 0.5)

    def test_mismatched_core(self):
        """Test a core checked against another core's h fails with a witness."""
        P = uniform_scenario(10, 'P1')
        h = TheoremService.recover_distortion(CoreSpec.expectation(), P)
        report = TheoremService.verify_choquet_rep(CoreSpec.es(0.5), h, trials=TRIALS, seed=SEED)
        self.assertEqual(report.status, TheoremStatus.FAIL)
        self.assertEqual(report.checks['representation'], CheckStatus.FAIL)
        self.assertGreater(report.witness['core'], report.witness['choquet'])
