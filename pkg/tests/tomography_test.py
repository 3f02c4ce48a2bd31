#  Copyright 2024-2026 The qdiscord Contributors
#
#  This file is part of qdiscord.
#
#  qdiscord is free software: you can redistribute it and/or modify
#  it under the terms of the GNU General Public License as published by
#  the Free Software Foundation, either version 3 of the License, or
#  (at your option) any later version.
#
#  qdiscord is distributed in the hope that it will be useful,
#  but WITHOUT ANY WARRANTY; without even the implied warranty of
#  MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
#  GNU General Public License for more details.
#
#  You should have received a copy of the GNU General Public License
#  along with qdiscord.  If not, see <https://www.gnu.org/licenses/>.
import os
import unittest

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

from qdiscord.channels import RHO1, BELL_PHI_PLUS, prepare
from qdiscord.densop import DensityOperator, fidelity, random_density_operator, trace_distance, KET_0
from qdiscord.errors import ConvergenceError, InvalidArgumentError
from qdiscord.tomography import *

SLOW = bool(os.environ.get('QDISCORD_SLOW_TESTS'))
RANDOM_STATES = 50 if SLOW else 10


class MeasurementTestCase(unittest.TestCase):
    def test_settings__fixed_order(self):
        self.assertEqual(['XX', 'XY', 'XZ', 'YX', 'YY', 'YZ', 'ZX', 'ZY', 'ZZ'], [s.label for s in SETTINGS])

    def test_projectors__complete_per_setting(self):
        for s in range(len(SETTINGS)):
            assert_allclose(PROJECTORS[s].sum(axis=0), np.eye(4), atol=1e-15)

    def test_outcome_probabilities__reference_states(self):
        ground = DensityOperator.from_ket(np.kron(KET_0, KET_0))
        assert_allclose(outcome_probabilities(ground, 'ZZ'), [1, 0, 0, 0], atol=1e-15)
        assert_allclose(outcome_probabilities(ground, MeasurementSetting('X', 'Z')), [0.5, 0, 0.5, 0], atol=1e-15)
        rho1 = prepare(RHO1)
        assert_allclose(outcome_probabilities(rho1, 'XX'), [0.5, 0, 0, 0.5], atol=1e-15)
        assert_allclose(outcome_probabilities(rho1, 'YZ'), [0.25] * 4, atol=1e-15)
        with self.assertRaises(InvalidArgumentError):
            outcome_probabilities(rho1, 'XW')

    def test_sample_counts__seeded(self):
        rho = prepare(RHO1)
        first = sample_counts(rho, 500, 42)
        self.assertEqual(first, sample_counts(rho, 500, 42))
        self.assertNotEqual(first, sample_counts(rho, 500, 43))
        assert_array_equal(np.full(len(SETTINGS), 500.0), first.counts.sum(axis=1))
        self.assertTrue(first.is_integral)
        self.assertEqual(42, first.seed)
        assert_array_equal([0, 0], first['XX'][1:3])
        with self.assertRaises(InvalidArgumentError):
            sample_counts(rho, 0, 42)

    def test_sample_counts__seed_label(self):
        rho = prepare(RHO1)
        self.assertEqual(8, sample_counts(rho, 10, np.random.SeedSequence(8)).seed)
        child = np.random.SeedSequence(8).spawn(2)[1]
        self.assertIsNone(sample_counts(rho, 10, child).seed)
        self.assertIn("seed=none", sample_counts(rho, 10, child).to_text().splitlines()[0])


class CountRecordTestCase(unittest.TestCase):
    def test_from_text__fixture(self):
        record = self.__load_fixture()
        self.assertEqual(1000, record.shots_per_setting)
        self.assertEqual(20130101, record.seed)
        assert_array_equal([498, 0, 0, 502], record['XX'])
        self.assertEqual(record, CountRecord.from_text(record.to_text()))

    def test_to_text__format(self):
        ground = DensityOperator.from_ket(np.kron(KET_0, KET_0))
        lines = CountRecord.from_probabilities(ground, 1000).to_text().splitlines()
        self.assertEqual('# shots=1000 seed=none', lines[0])
        self.assertEqual('XX ++ 250', lines[1])
        self.assertEqual('XZ -+ 500', lines[11])
        self.assertEqual('ZZ ++ 1000', lines[33])
        self.assertEqual(37, len(lines))

    def test_from_text__rejects_malformed_records(self):
        text = self.__load_fixture().to_text()
        with self.assertRaises(InvalidArgumentError):
            CountRecord.from_text('\n'.join(text.splitlines()[1:]))
        with self.assertRaises(InvalidArgumentError):
            CountRecord.from_text('\n'.join(text.splitlines()[:-1]))
        with self.assertRaises(InvalidArgumentError):
            CountRecord.from_text(text.replace('ZZ -- 254', 'ZZ ++ 254'))
        with self.assertRaises(InvalidArgumentError):
            CountRecord.from_text(text.replace('XX -- 502', 'XX -- 501'))

    def test_count_record__validation(self):
        with self.assertRaises(InvalidArgumentError):
            CountRecord(np.zeros((9, 3)), 1)
        with self.assertRaises(InvalidArgumentError):
            CountRecord(np.full((9, 4), -1.0), -4)
        counts = np.full((9, 4), 25.0)
        counts[0] = [50, -25, 0, 75]
        with self.assertRaises(InvalidArgumentError):
            CountRecord(counts, 100)

    def test_binomial_standard_errors(self):
        record = self.__load_fixture()
        errors = binomial_standard_errors(record)
        self.assertEqual((9, 4), errors.shape)
        self.assertEqual(0.0, errors[0, 1])
        self.assertAlmostEqual(np.sqrt(0.498 * 0.502 / 1000), errors[0, 0])

    @staticmethod
    def __load_fixture() -> CountRecord:
        path = os.path.join(os.path.dirname(__file__), 'fixtures', 'rho1_1000.counts')
        with open(path) as f:
            return CountRecord.from_text(f.read())


class MaximumLikelihoodTestCase(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(11)

    def test_mle_reconstruct__exact_frequencies(self):
        states = [prepare(RHO1), prepare(BELL_PHI_PLUS)]
        states += [random_density_operator(4, self.rng) for _ in range(RANDOM_STATES)]
        for rho in states:
            result = mle_from_state(rho)
            self.assertTrue(result.converged)
            self.assertLess(trace_distance(result.rho_hat, rho), 1e-6)
            self.assertTrue(np.all(np.diff(result.history) >= 0), "Log-likelihood must never decrease.")
            self.assertAlmostEqual(1.0, np.trace(result.rho_hat.matrix).real, places=12)
            self.assertGreaterEqual(result.rho_hat.eigenvalues()[0], 0.0)

    def test_mle_reconstruct__sampled_counts_are_physical(self):
        result = mle_reconstruct(sample_counts(prepare(RHO1), 100, 5), 3000, 1e-9)
        self.assertGreaterEqual(result.rho_hat.eigenvalues()[0], 0.0)
        self.assertTrue(np.all(np.diff(result.history) >= 0))
        self.assertEqual(len(result.history), result.iterations + 1)

    def test_mle_reconstruct__fixture(self):
        path = os.path.join(os.path.dirname(__file__), 'fixtures', 'rho1_1000.counts')
        with open(path) as f:
            record = CountRecord.from_text(f.read())
        result = mle_reconstruct(record, 3000, 1e-9)
        self.assertGreater(fidelity(prepare(RHO1), result.rho_hat), 0.98)

    def test_mle_reconstruct__require_convergence(self):
        counts = CountRecord.from_probabilities(prepare(RHO1))
        with self.assertRaises(ConvergenceError):
            mle_reconstruct(counts, max_iterations=1, require_convergence=True)
        with self.assertLogs('qdiscord.tomography', level='WARNING'):
            result = mle_reconstruct(counts, max_iterations=1)
        self.assertFalse(result.converged)

    def test_mle_reconstruct__argument_validation(self):
        counts = CountRecord.from_probabilities(prepare(RHO1))
        with self.assertRaises(InvalidArgumentError):
            mle_reconstruct(counts, max_iterations=0)
        with self.assertRaises(InvalidArgumentError):
            mle_reconstruct(counts, tolerance=0)
        with self.assertRaises(InvalidArgumentError):
            mle_reconstruct(counts, fixed_point_tolerance=0.0)


class MonteCarloTestCase(unittest.TestCase):
    def test_monte_carlo_study__reproducible(self):
        rho = prepare(RHO1)
        first = monte_carlo_study(rho, 200, 4, seed=8)
        second = monte_carlo_study(rho, 200, 4, seed=np.random.SeedSequence(8))
        assert_array_equal(first.samples, second.samples)
        self.assertEqual(set(QUANTITIES), set(first.mean))
        self.assertEqual((4, len(QUANTITIES)), first.samples.shape)

    def test_monte_carlo_study__independent_of_workers(self):
        rho = prepare(RHO1)
        serial = monte_carlo_study(rho, 200, 4, seed=9)
        parallel = monte_carlo_study(rho, 200, 4, seed=9, workers=2)
        assert_array_equal(serial.samples, parallel.samples)

    def test_monte_carlo_study__noise_shrinks_with_shots(self):
        rho = prepare(RHO1)
        few = monte_carlo_study(rho, 100, 20, seed=1)
        many = monte_carlo_study(rho, 10000, 20, seed=1)
        self.assertGreater(few.mean['tangle'], many.mean['tangle'])
        self.assertGreater(few.mean['cm3'], many.mean['cm3'])
        self.assertGreater(few.std['discord_b'], many.std['discord_b'])
        self.assertGreater(many.mean['fidelity'], few.mean['fidelity'])
        self.assertGreater(few.mean['cm3'], 0.0)

    def test_monte_carlo_study__argument_validation(self):
        with self.assertRaises(InvalidArgumentError):
            monte_carlo_study(prepare(RHO1), 100, 1)
        with self.assertRaises(InvalidArgumentError):
            monte_carlo_study(prepare(RHO1), 0, 5)

    def test_error_bars__centred_on_reconstruction(self):
        rho_hat = mle_from_state(prepare(RHO1), tolerance=1e-12).rho_hat
        summary = error_bars(rho_hat, 500, 3, seed=4)
        self.assertEqual(500, summary.shots)
        self.assertGreater(summary.mean['fidelity'], 0.95)

    def test_singular_value_histogram(self):
        rows = singular_value_histogram(prepare(RHO1), 300, 6, 2, bins=5)
        self.assertEqual(len(SINGULAR_VALUE_QUANTITIES) * 5, len(rows))
        for name in SINGULAR_VALUE_QUANTITIES:
            self.assertEqual(6, sum(row.count for row in rows if row.quantity == name))
        with self.assertRaises(InvalidArgumentError):
            singular_value_histogram(prepare(RHO1), 300, 6, 2, bins=1)

    @unittest.skipUnless(SLOW, "set QDISCORD_SLOW_TESTS=1 to run the full projection-noise study")
    def test_monte_carlo_study__projection_noise_at_desk_scale(self):
        rho = prepare(RHO1)
        summaries = [monte_carlo_study(rho, shots, 70, seed=20130101) for shots in (100, 250, 500, 1000)]
        final = summaries[-1]
        self.assertLess(final.mean['tangle'], summaries[0].mean['tangle'])
        self.assertLess(final.mean['discord_b'], summaries[0].mean['discord_b'])
        self.assertGreater(final.mean['cm3'], 0.0)
        self.assertGreater(final.mean['cm4'], 0.0)
        for quantity in ('tangle', 'cm3', 'cm4', 'discord_b'):
            means = [s.mean[quantity] for s in summaries]
            self.assertTrue(all(a >= b for a, b in zip(means, means[1:])), f"{quantity} bias: {means}")
