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
import tempfile
import unittest

from qdiscord.config import ScenarioConfig
from qdiscord.scenarios import *

DEPHASED_RHO1_DISCORD = 0.3112781244591328


def make_config(scenario: str, **params) -> ScenarioConfig:
    return ScenarioConfig.from_params({'scenario': scenario, **{k: str(v) for k, v in params.items()}})


def rows_of(table) -> List[Dict[str, object]]:
    return [dict(zip(table.columns, row)) for row in table.rows]


class Fig2TestCase(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.report = run_fig2(make_config('fig2'))
        cls.rows = rows_of(cls.report.table('damping'))

    def test_damping__endpoints(self):
        first, last = self.rows[0], self.rows[-1]
        self.assertEqual(0.0, first['p'])
        self.assertLessEqual(first['discord_a'], 1e-6)
        self.assertLessEqual(first['discord_b'], 1e-6)
        self.assertAlmostEqual(1.0, first['mutual_information'], places=10)
        self.assertEqual(1.0, last['p'])
        self.assertLessEqual(last['discord_b'], 1e-6)
        self.assertAlmostEqual(0.0, last['mutual_information'], places=10)
        for name in ('plus', 'minus'):
            self.assertAlmostEqual(1.0, last[f'tau_{name}_z'], places=10)
            self.assertAlmostEqual(0.0, last[f'tau_{name}_x'], places=10)

    def test_damping__asymmetry(self):
        discord_b = [row['discord_b'] for row in self.rows]
        self.assertTrue(all(row['discord_a'] <= 1e-6 for row in self.rows))
        peak = discord_b.index(max(discord_b))
        self.assertTrue(0 < peak < len(discord_b) - 1, "D_B must peak inside the damping range.")
        mutual = [row['mutual_information'] for row in self.rows]
        self.assertTrue(all(b <= a + 1e-9 for a, b in zip(mutual, mutual[1:])))

    def test_damping__operators_and_ranks(self):
        self.assertEqual(len(self.rows), len(self.report.operators))
        self.assertEqual(2, self.rows[0]['rank'])
        self.assertEqual(1, self.rows[-1]['rank'])
        self.assertAlmostEqual(0.0, self.rows[5]['tangle'], places=12)
        self.assertNotIn('tomo_discord_b_mean', self.report.table('damping').columns)


class Fig3Fig4TestCase(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.report = run_fig3_fig4(make_config('fig4'))
        cls.rows = {row['state']: row for row in rows_of(cls.report.table('states'))}

    def test_states__all_nine(self):
        self.assertEqual(9, len(self.rows))
        self.assertEqual(9, len(self.report.operators))
        self.assertEqual(['fig3'] * 3 + ['fig4'] * 6, self.report.table('states').column('figure'))

    def test_states__dephased_classical_state(self):
        row = self.rows['eps_cd(rho1)']
        self.assertEqual([1.0, 0.5, 0.5, 0.0], [round(row[c], 9) for c in SINGULAR_VALUE_COLUMNS])
        self.assertEqual(3, row['rank'])
        self.assertEqual(3, row['predicted_rank'])
        self.assertAlmostEqual(DEPHASED_RHO1_DISCORD, row['discord_b'], delta=1e-6)
        self.assertAlmostEqual(row['discord_b'], row['discord_b_oracle'], delta=1e-3)
        self.assertLessEqual(row['discord_b'], row['discord_b_oracle'] + 1e-9)

    def test_states__rank_transitions(self):
        expected = {
            'eps_ad(rho1) p=0.0': 2,
            'eps_ad(rho1) p=1.0': 1,
            'rho2': 2,
            'eps_cd(rho2)': 4,
            '|++>': 1,
            'eps_cd(|++>)': 3,
            'eps_cd(K_y eps_cd(|++>) K_y^dagger)': 4,
        }
        for label, rank in expected.items():
            self.assertEqual(rank, self.rows[label]['rank'], label)
        self.assertEqual(4, self.rows['eps_cd(rho2)']['predicted_rank'])
        self.assertEqual(3, self.rows['eps_cd(|++>)']['predicted_rank'])
        self.assertIsNone(self.rows['rho2']['predicted_rank'])

    def test_states__rotated_classical_state_has_no_discord(self):
        row = self.rows['rho2']
        self.assertLessEqual(row['discord_b'], 1e-6)
        self.assertTrue(row['classical_quantum_b'])

    def test_run_fig3__subset(self):
        report = run_fig3(make_config('fig3'))
        self.assertEqual(['fig3'] * 3, report.table('states').column('figure'))


class Fig5TestCase(unittest.TestCase):
    def test_werner__columns(self):
        report = run_fig5(make_config('fig5', werner_grid='0.0 0.2 0.5 1.0'))
        rows = rows_of(report.table('werner'))
        for row in rows:
            self.assertAlmostEqual(row['tangle_expected'], row['tangle'], delta=1e-9)
            self.assertAlmostEqual(row['discord_a'], row['discord_b'], delta=1e-6)
            self.assertAlmostEqual(row['discord_closed_form'], row['discord_b'], delta=1e-6)
            self.assertAlmostEqual(1.0, row['protocol_fidelity'], places=7)
            self.assertLess(row['protocol_trace_distance'], 1e-12)
            self.assertAlmostEqual(row['discord_b'], row['protocol_discord_b'], delta=1e-6)
        self.assertAlmostEqual(0.0, rows[0]['discord_b'], delta=1e-9)
        self.assertEqual(0.0, rows[1]['tangle'])
        self.assertAlmostEqual(0.25, rows[0]['fidelity_to_bell'], places=12)
        self.assertAlmostEqual(1.0, rows[-1]['discord_b'], delta=1e-6)

    def test_werner__tomography_columns(self):
        report = run_fig5(make_config('fig5', werner_grid='1.0', tomography_copies=2, shots=200))
        row = rows_of(report.table('werner'))[0]
        self.assertIn('tomo_discord_b_mean', row)
        self.assertGreater(row['tomo_fidelity_mean'], 0.8)
        self.assertIsInstance(row['tomo_unconverged'], int)

    def test_werner__byte_identical_reruns(self):
        config = make_config('fig5', werner_grid='0.0 0.6', tomography_copies=2, shots=100)
        with tempfile.TemporaryDirectory() as tmp:
            first = [self.__read(p) for p in run_fig5(config).write(os.path.join(tmp, 'a'))]
            second = [self.__read(p) for p in run_fig5(config).write(os.path.join(tmp, 'b'))]
        self.assertEqual(first, second)

    @staticmethod
    def __read(path):
        with open(path, 'rb') as f:
            return f.read()


class SuppNoiseTestCase(unittest.TestCase):
    def test_supp_noise__tables(self):
        report = run_supp_noise(make_config('supp-noise', shots_grid='50 400', shots=200, copies=3,
                                            histogram_bins=4))
        bias = rows_of(report.table('bias'))
        self.assertEqual([50, 400], [row['shots'] for row in bias])
        self.assertTrue(all(row['copies'] == 3 for row in bias))
        histogram = report.table('histogram')
        self.assertEqual(16, len(histogram.rows))
        self.assertEqual(3, sum(c for q, c in zip(histogram.column('quantity'), histogram.column('count'))
                                if q == 'cm1'))


class StateTestCase(unittest.TestCase):
    def test_state__prepared(self):
        report = run_state(make_config('state', state_name='werner', state_p=1.0))
        row = rows_of(report.table('quantifiers'))[0]
        self.assertEqual('werner p=1.0', row['state'])
        self.assertAlmostEqual(1.0, row['discord_a'], delta=1e-6)
        self.assertAlmostEqual(1.0, row['tangle'], places=9)
        self.assertEqual(3, len(report.table('fano').rows))

    def test_state__state_file(self):
        report = run_state(make_config('state', state_file=self.__fixture_path('phi_plus.state')))
        row = rows_of(report.table('quantifiers'))[0]
        self.assertAlmostEqual(2.0, row['mutual_information'], places=9)
        self.assertFalse(row['classical_quantum_a'])

    def test_state__counts_file(self):
        report = run_state(make_config('state', counts_file=self.__fixture_path('rho1_1000.counts'),
                                       tomography_copies=2, mle_max_iterations=5000))
        reconstruction = rows_of(report.table('reconstruction'))[0]
        self.assertEqual(1000.0, reconstruction['shots_per_setting'])
        self.assertIsInstance(reconstruction['converged'], bool)
        row = rows_of(report.table('quantifiers'))[0]
        self.assertLess(row['discord_b'], 0.1)
        self.assertGreater(row['tomo_fidelity_mean'], 0.95)

    def test_state__missing_counts_file(self):
        with self.assertRaises(InvalidArgumentError):
            run_state(make_config('state', counts_file=self.__fixture_path('missing.counts')))

    @staticmethod
    def __fixture_path(name):
        return os.path.abspath(os.path.join(os.path.dirname(__file__), 'fixtures', name))


class RankTableTestCase(unittest.TestCase):
    def test_rank_table__all_cases_agree(self):
        report = run_rank_table(make_config('rank-table', rank_instances=20))
        rows = rows_of(report.table('rank_table'))
        self.assertEqual(len(RANK_CASES), len(rows))
        for row in rows:
            self.assertEqual(20, row['agreements'], row['case'])
            self.assertEqual(0, row['prediction_errors'])
            self.assertEqual(0, row['table_errors'])
