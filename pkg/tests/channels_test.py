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
import unittest
from math import pi

import numpy as np
from numpy.testing import assert_allclose
from scipy.linalg import expm

from qdiscord.channels import *
from qdiscord.densop import DensityOperator, Side, fano_compose, fano_decompose, partial_trace, pauli, \
    random_density_operator, sigma_dot, tensor, KET_0, KET_1
from qdiscord.errors import InvalidArgumentError

RANDOM_STATES = 20
RANDOM_AXES = 5


class ChannelsTestCase(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(99)

    def random_axis(self) -> RotationAxis:
        return RotationAxis.normalized(self.rng.standard_normal(3))

    def test_kraus_channel__rejects_incomplete_sets(self):
        with self.assertRaises(InvalidArgumentError):
            KrausChannel([np.eye(2) * 0.5])
        with self.assertRaises(InvalidArgumentError):
            KrausChannel([])
        with self.assertRaises(InvalidArgumentError):
            KrausChannel([np.eye(2), np.eye(4)])

    def test_rotation_axis__must_be_unit(self):
        with self.assertRaises(InvalidArgumentError):
            RotationAxis([1, 1, 0])
        with self.assertRaises(InvalidArgumentError):
            RotationAxis.normalized([0, 0, 0])
        assert_allclose(RotationAxis.normalized([0, 3, 4]).n, [0, 0.6, 0.8])

    def test_apply_channel__identity_and_dimension(self):
        rho = random_density_operator(4, self.rng)
        assert_allclose(apply_channel(identity_channel(4), rho).matrix, rho.matrix, atol=1e-15)
        with self.assertRaises(InvalidArgumentError):
            apply_channel(identity_channel(2), rho)

    def test_amplitude_damping__endpoints(self):
        excited = DensityOperator.from_ket(KET_1)
        assert_allclose(apply_channel(amplitude_damping(1.0), excited).matrix, np.diag([1, 0]), atol=1e-15)
        assert_allclose(apply_channel(amplitude_damping(0.0), excited).matrix, excited.matrix, atol=1e-15)
        assert_allclose(apply_channel(amplitude_damping(0.3), excited).matrix, np.diag([0.3, 0.7]), atol=1e-15)
        with self.assertRaises(InvalidArgumentError):
            amplitude_damping(1.5)

    def test_on_qubit__acts_on_one_side(self):
        a = random_density_operator(2, self.rng)
        rho = tensor(a, DensityOperator.from_ket(KET_1))
        damped = apply_channel(on_qubit(amplitude_damping(1.0), Side.B), rho)
        assert_allclose(damped.matrix, np.kron(a.matrix, np.diag([1, 0])), atol=1e-14)
        damped = apply_channel(on_qubit(amplitude_damping(1.0), 'A'), rho)
        assert_allclose(damped.matrix, np.kron(np.diag([1, 0]), np.diag([0, 1])), atol=1e-14)

    def test_on_qubit__leaves_other_marginal_unchanged(self):
        states = [random_density_operator(4, self.rng) for _ in range(RANDOM_STATES)] + [prepare(BELL_PHI_PLUS)]
        for rho in states:
            for side in Side:
                out = apply_channel(on_qubit(random_channel(self.rng), side), rho)
                assert_allclose(partial_trace(out, side.other).matrix, partial_trace(rho, side.other).matrix,
                                atol=1e-12)

    def test_rotation__matches_matrix_exponential(self):
        for _ in range(RANDOM_AXES):
            n = self.random_axis()
            theta = self.rng.uniform(-pi, pi)
            assert_allclose(rotation(n, theta), expm(-0.5j * theta * sigma_dot(n.n)), atol=1e-12)

    def test_ms_gates__match_matrix_exponential(self):
        sj = (pauli(1) + pauli(2)) / np.sqrt(2)
        for theta in (0.1, pi / 4, 1.3):
            assert_allclose(ms_gate(theta), expm(-1j * theta * np.kron(pauli(1), pauli(1))), atol=1e-12)
            assert_allclose(ms2_gate(theta), expm(-1j * theta * np.kron(sj, sj)), atol=1e-12)

    def test_ms_gate__inverse(self):
        for theta in (0.1, pi / 4, 1.3, -2.0):
            assert_allclose(ms_gate(theta) @ ms_gate(-theta), np.eye(4), atol=1e-12)

    def test_ms2_gate__entangles_ground_state(self):
        out = ms2_gate(pi / 4) @ np.kron(KET_0, KET_0)
        assert_allclose(out, (np.kron(KET_0, KET_0) + np.kron(KET_1, KET_1)) / np.sqrt(2), atol=1e-15)

    def test_correlated_dephasing__kraus_matches_angle_average(self):
        for _ in range(RANDOM_STATES):
            rho = random_density_operator(4, self.rng)
            for _ in range(RANDOM_AXES):
                n = self.random_axis()
                kraus = apply_channel(correlated_dephasing(n), rho)
                averaged = correlated_dephasing_averaged(n)(rho)
                assert_allclose(kraus.matrix, averaged.matrix, atol=1e-10)

    def test_correlated_dephasing__closed_form_on_fano(self):
        for _ in range(RANDOM_STATES):
            rho = random_density_operator(4, self.rng)
            n = self.random_axis()
            closed = fano_compose(dephase_fano(fano_decompose(rho), n))
            assert_allclose(closed.matrix, apply_channel(correlated_dephasing(n), rho).matrix, atol=1e-12)

    def test_correlated_dephasing__separable_form(self):
        for steps in (3, 4, 7):
            n = self.random_axis()
            rho = random_density_operator(4, self.rng)
            assert_allclose(apply_separable(dephasing_as_separable(n, steps), rho).matrix,
                            apply_channel(correlated_dephasing(n), rho).matrix, atol=1e-12)

    def test_correlated_dephasing__idempotent(self):
        n = self.random_axis()
        ch = correlated_dephasing(n)
        rho = random_density_operator(4, self.rng)
        once = apply_channel(ch, rho)
        assert_allclose(apply_channel(ch, once).matrix, once.matrix, atol=1e-12)

    def test_correlated_dephasing__singlet_is_invariant(self):
        singlet = DensityOperator.from_ket(np.kron(KET_0, KET_1) - np.kron(KET_1, KET_0))
        for _ in range(RANDOM_AXES):
            out = apply_channel(correlated_dephasing(self.random_axis()), singlet)
            assert_allclose(out.matrix, singlet.matrix, atol=1e-12)

    def test_correlated_dephasing__keeps_zero_one_coherence(self):
        rho1 = prepare(RHO1)
        out = apply_channel(correlated_dephasing(Z_AXIS), rho1)
        self.assertAlmostEqual(0.25, out.matrix[1, 2].real, places=12)
        self.assertAlmostEqual(0.0, abs(out.matrix[0, 3]), places=12)
        assert_allclose(fano_decompose(out).beta, np.diag([0.5, 0.5, 0.0]), atol=1e-12)

    def test_correlated_dephasing_averaged__single_step_is_identity(self):
        rho = random_density_operator(4, self.rng)
        assert_allclose(correlated_dephasing_averaged(Z_AXIS, 1)(rho).matrix, rho.matrix, atol=1e-15)
        with self.assertRaises(InvalidArgumentError):
            correlated_dephasing_averaged(Z_AXIS, 0)

    def test_bloch_dephasing__projects_on_axis(self):
        assert_allclose(bloch_dephasing([0.3, 0.4, 0.5], Z_AXIS), [0, 0, 0.5])
        assert_allclose(bloch_dephasing([1, 0, 0], Z_AXIS), [0, 0, 0])

    def test_random_channel__is_trace_preserving(self):
        for kraus_count in (1, 2, 4):
            ch = random_channel(self.rng, 2, kraus_count)
            self.assertEqual(kraus_count, len(ch))
            out = apply_channel(ch, random_density_operator(2, self.rng))
            self.assertAlmostEqual(1.0, np.trace(out.matrix).real, places=12)

    def test_prepare__states(self):
        rho1 = prepare(RHO1)
        self.assertAlmostEqual(0.25, rho1.matrix[0, 0].real)
        self.assertAlmostEqual(0.25, rho1.matrix[0, 3].real)
        assert_allclose(fano_decompose(rho1).beta, np.diag([1, 0, 0]), atol=1e-15)
        rho2 = prepare(RHO2)
        f2 = fano_decompose(rho2)
        self.assertAlmostEqual(np.sin(pi / 8) ** 2, abs(f2.beta[2, 2]), places=12)
        self.assertAlmostEqual(1.0, prepare(BELL_PHI_PLUS).matrix[0, 3].real * 2)
        with self.assertRaises(InvalidArgumentError):
            prepare(WERNER)
        with self.assertRaises(InvalidArgumentError):
            prepare(WERNER, 1.5)
        with self.assertRaises(InvalidArgumentError):
            prepare('ghz')

    def test_prepare_werner_protocol__matches_werner_state(self):
        for p in (0.0, 0.2, 1 / 3, 0.75, 1.0):
            assert_allclose(prepare_werner_protocol(p).matrix, prepare(WERNER, p).matrix, atol=1e-14)

    def test_dephase_rotate_dephase__bell_diagonal_output(self):
        out = dephase_rotate_dephase(prepare(PLUS_PLUS))
        f = fano_decompose(out)
        assert_allclose(f.beta, np.diag([0.25, 0.25, 0.5]), atol=1e-12)
        assert_allclose(f.r_a.array, [0, 0, 0], atol=1e-12)
