"""
Kraus channels, gates and the noise processes used by the scenarios: one-sided amplitude damping,
correlated dephasing (Kraus form, angle average and closed form on the Fano decomposition) and
separable mixtures of bilocal channels. Also prepares the ideal scenario states.
"""
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
import logging
from math import pi
from typing import Sequence, Tuple, Union, Optional

import numpy as np
from scipy.stats import unitary_group

from qdiscord.densop import DensityOperator, FanoForm, Side, pauli, sigma_dot, as_matrix, KET_0, KET_1, \
    KET_PLUS, KET_MINUS
from qdiscord.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

COMPLETENESS_ATOL = 1e-10
AXIS_NORM_ATOL = 1e-12
DEFAULT_AVERAGING_STEPS = 720
SEPARABLE_PROBABILITY_ATOL = 1e-10

RHO1 = 'rho1'
RHO2 = 'rho2'
PLUS_PLUS = 'plus_plus'
WERNER = 'werner'
WERNER_INPUT = 'werner_input'
BELL_PHI_PLUS = 'bell_phi_plus'
STATE_IDS = (RHO1, RHO2, PLUS_PLUS, WERNER, WERNER_INPUT, BELL_PHI_PLUS)
# States whose preparation takes the mixing parameter p.
PARAMETRIZED_STATE_IDS = (WERNER, WERNER_INPUT)
RHO2_PULSE_ANGLE = pi / 8


class KrausChannel:
    """A CPTP map given by Kraus operators K_i with sum K_i^dagger K_i = I."""
    def __init__(self, operators: Sequence[np.ndarray]):
        ops = [np.array(k, dtype=np.complex128) for k in operators]
        if len(ops) == 0:
            raise InvalidArgumentError("A Kraus channel needs at least one operator.")
        dim = ops[0].shape[0]
        for k in ops:
            if k.shape != (dim, dim):
                raise InvalidArgumentError(f"Kraus operators must all be {dim}x{dim}, got {k.shape}.")
        completeness = sum(k.conj().T @ k for k in ops)
        deviation = np.max(np.abs(completeness - np.eye(dim)))
        if deviation > COMPLETENESS_ATOL:
            raise InvalidArgumentError(f"Kraus operators are not complete (max deviation {deviation:.3e}).")
        stacked = np.array(ops)
        stacked.setflags(write=False)
        self.operators = stacked

    @property
    def dim(self) -> int:
        return self.operators.shape[1]

    def __len__(self):
        return self.operators.shape[0]

    def __call__(self, rho: DensityOperator) -> DensityOperator:
        return apply_channel(self, rho)

    def __repr__(self):
        return f'KrausChannel(dim={self.dim}, operators={len(self)})'


class RotationAxis:
    def __init__(self, n: Sequence[float]):
        n = np.array(n, dtype=float)
        if n.shape != (3,):
            raise InvalidArgumentError(f"A rotation axis needs 3 components, got shape {n.shape}.")
        norm = np.linalg.norm(n)
        if abs(norm - 1) > AXIS_NORM_ATOL:
            raise InvalidArgumentError(f"Rotation axis must be a unit vector, got norm {norm!r}.")
        n.setflags(write=False)
        self.n = n

    @classmethod
    def normalized(cls, v: Sequence[float]) -> 'RotationAxis':
        v = np.asarray(v, dtype=float)
        norm = np.linalg.norm(v)
        if norm == 0:
            raise InvalidArgumentError("Can not use the zero vector as a rotation axis.")
        return cls(v / norm)

    def __repr__(self):
        return f'RotationAxis({self.n.tolist()})'


X_AXIS = RotationAxis([1.0, 0.0, 0.0])
Y_AXIS = RotationAxis([0.0, 1.0, 0.0])
Z_AXIS = RotationAxis([0.0, 0.0, 1.0])


class SeparableChannel:
    """sum_i p_i (eps_i^A (x) eps_i^B) over single-qubit channels."""
    def __init__(self, terms: Sequence[Tuple[float, KrausChannel, KrausChannel]]):
        if len(terms) == 0:
            raise InvalidArgumentError("A separable channel needs at least one term.")
        for p, ch_a, ch_b in terms:
            if p < 0:
                raise InvalidArgumentError(f"Negative term probability {p}.")
            if ch_a.dim != 2 or ch_b.dim != 2:
                raise InvalidArgumentError("Separable channel terms must act on single qubits.")
        total = sum(p for p, _, _ in terms)
        if abs(total - 1) > SEPARABLE_PROBABILITY_ATOL:
            raise InvalidArgumentError(f"Term probabilities sum to {total!r}, expected 1.")
        self.terms = tuple((float(p), ch_a, ch_b) for p, ch_a, ch_b in terms)

    def __len__(self):
        return len(self.terms)

    def __call__(self, rho: DensityOperator) -> DensityOperator:
        return apply_separable(self, rho)


class AngleAveragedDephasing:
    """
    Correlated dephasing evaluated as a uniform average of K_n(theta) rho K_n(theta)^dagger over
    theta_k = 2 pi k / steps. The integrand is a degree-2 trigonometric polynomial, so any steps >= 3 is exact.
    """
    def __init__(self, n: RotationAxis, steps: int):
        self.n = n
        self.steps = steps
        self.angles = 2 * pi * np.arange(steps) / steps
        self._unitaries = np.array([correlated_rotation(n, theta) for theta in self.angles])

    def __call__(self, rho: DensityOperator) -> DensityOperator:
        if rho.dim != 4:
            raise InvalidArgumentError(f"Correlated dephasing acts on two qubits, got dimension {rho.dim}.")
        u = self._unitaries
        out = np.einsum('kab,bc,kdc->ad', u, rho.matrix, u.conj()) / self.steps
        return DensityOperator(out)


def identity_channel(dim: int = 2) -> KrausChannel:
    return KrausChannel([np.eye(dim)])


def unitary_channel(u: np.ndarray) -> KrausChannel:
    return KrausChannel([u])


def apply_channel(ch: KrausChannel, rho: DensityOperator) -> DensityOperator:
    if ch.dim != rho.dim:
        raise InvalidArgumentError(f"Channel of dimension {ch.dim} can not act on a state of dimension {rho.dim}.")
    k = ch.operators
    return DensityOperator(np.einsum('kab,bc,kdc->ad', k, rho.matrix, k.conj()))


def apply_unitary(u: np.ndarray, rho: DensityOperator) -> DensityOperator:
    u = as_matrix(u)
    if u.shape != (rho.dim, rho.dim):
        raise InvalidArgumentError(f"Unitary of shape {u.shape} can not act on a state of dimension {rho.dim}.")
    return DensityOperator(u @ rho.matrix @ u.conj().T)


def amplitude_damping(p: float) -> KrausChannel:
    """E0 = |0><0| + sqrt(1-p)|1><1|, E1 = sqrt(p)|0><1|."""
    if not 0 <= p <= 1:
        raise InvalidArgumentError(f"Damping probability must lie in [0, 1], got {p!r}.")
    e0 = np.array([[1, 0], [0, np.sqrt(1 - p)]], dtype=np.complex128)
    e1 = np.array([[0, np.sqrt(p)], [0, 0]], dtype=np.complex128)
    return KrausChannel([e0, e1])


def on_qubit(ch: KrausChannel, which: Union[Side, str]) -> KrausChannel:
    which = Side(which)
    if ch.dim != 2:
        raise InvalidArgumentError(f"on_qubit() lifts single-qubit channels, got dimension {ch.dim}.")
    eye = np.eye(2)
    if which == Side.A:
        return KrausChannel([np.kron(k, eye) for k in ch.operators])
    return KrausChannel([np.kron(eye, k) for k in ch.operators])


def bilocal(ch_a: KrausChannel, ch_b: KrausChannel) -> KrausChannel:
    return KrausChannel([np.kron(ka, kb) for ka in ch_a.operators for kb in ch_b.operators])


def rotation(n: RotationAxis, theta: float) -> np.ndarray:
    """R_n(theta) = cos(theta/2) I - i sin(theta/2) n.sigma"""
    return np.cos(theta / 2) * pauli(0) - 1j * np.sin(theta / 2) * sigma_dot(n.n)


def correlated_rotation(n: RotationAxis, theta: float) -> np.ndarray:
    r = rotation(n, theta)
    return np.kron(r, r)


def correlated_dephasing(n: RotationAxis) -> KrausChannel:
    nn = np.kron(sigma_dot(n.n), sigma_dot(n.n))
    n_i = np.kron(sigma_dot(n.n), pauli(0))
    i_n = np.kron(pauli(0), sigma_dot(n.n))
    ii = np.eye(4)
    k1 = (-ii + nn) / np.sqrt(2)
    k2 = (ii + nn) / np.sqrt(2)
    # K3 symmetric in the two qubits
    k3 = (n_i + i_n) / np.sqrt(2)
    return KrausChannel([np.sqrt(1 / 2) * k1, np.sqrt(1 / 4) * k2, np.sqrt(1 / 4) * k3])


def correlated_dephasing_averaged(n: RotationAxis, steps: int = DEFAULT_AVERAGING_STEPS) -> AngleAveragedDephasing:
    if steps < 1:
        raise InvalidArgumentError(f"The angle average needs at least one step, got {steps}.")
    return AngleAveragedDephasing(n, steps)


def dephasing_as_separable(n: RotationAxis, steps: int = 3) -> SeparableChannel:
    """Correlated dephasing as an equal mixture of `steps` bilocal rotations (exact for steps >= 3)."""
    if steps < 1:
        raise InvalidArgumentError(f"Need at least one term, got {steps}.")
    terms = []
    for k in range(steps):
        r = unitary_channel(rotation(n, 2 * pi * k / steps))
        terms.append((1 / steps, r, r))
    return SeparableChannel(terms)


def apply_separable(ch: SeparableChannel, rho: DensityOperator) -> DensityOperator:
    if rho.dim != 4:
        raise InvalidArgumentError(f"Separable channels act on two qubits, got dimension {rho.dim}.")
    out = np.zeros((4, 4), dtype=np.complex128)
    for p, ch_a, ch_b in ch.terms:
        if p == 0:
            continue
        k = bilocal(ch_a, ch_b).operators
        out += p * np.einsum('kab,bc,kdc->ad', k, rho.matrix, k.conj())
    return DensityOperator(out)


def bloch_dephasing(r: Sequence[float], n: RotationAxis) -> np.ndarray:
    """Angle-averaged rotation of a single Bloch vector: r -> (n.r) n."""
    r = np.asarray(r, dtype=float)
    return np.dot(n.n, r) * n.n


def dephase_fano(f: FanoForm, n: RotationAxis) -> FanoForm:
    """
    Closed-form correlated dephasing on the Fano decomposition. For each rank-one term v (x) w:
    1/2 v w - 1/2 (n.w) v n - 1/2 (n.v) n w + 1/2 (v x n)(w x n) + 3/2 (n.v)(n.w) n n
    """
    nv = n.n
    beta = f.beta
    # c @ v == v x n
    c = -np.array([[0, -nv[2], nv[1]], [nv[2], 0, -nv[0]], [-nv[1], nv[0], 0]])
    beta_n = beta @ nv
    n_beta = nv @ beta
    new_beta = (0.5 * beta
                - 0.5 * np.outer(beta_n, nv)
                - 0.5 * np.outer(nv, n_beta)
                + 0.5 * c @ beta @ c.T
                + 1.5 * (nv @ beta_n) * np.outer(nv, nv))
    return FanoForm(bloch_dephasing(f.r_a.array, n), bloch_dephasing(f.r_b.array, n), new_beta)


def random_channel(rng: np.random.Generator, dim: int = 2, kraus_count: int = 2) -> KrausChannel:
    """Random CPTP map from a Haar-random Stinespring isometry."""
    if kraus_count < 1:
        raise InvalidArgumentError(f"Need at least one Kraus operator, got {kraus_count}.")
    u = unitary_group.rvs(dim * kraus_count, random_state=rng)
    isometry = u[:, :dim]
    return KrausChannel([isometry[i * dim:(i + 1) * dim, :] for i in range(kraus_count)])


def ms_gate(theta: float) -> np.ndarray:
    """exp(-i theta sx (x) sx)"""
    return np.cos(theta) * np.eye(4) - 1j * np.sin(theta) * np.kron(pauli(1), pauli(1))


def ms2_gate(theta: float) -> np.ndarray:
    """exp(-i theta sj (x) sj) with sj = (sx + sy)/sqrt(2)"""
    sj = (pauli(1) + pauli(2)) / np.sqrt(2)
    return np.cos(theta) * np.eye(4) - 1j * np.sin(theta) * np.kron(sj, sj)


def prepare(name: str, p: Optional[float] = None) -> DensityOperator:
    if name not in STATE_IDS:
        raise InvalidArgumentError(f"Unknown state id '{name}'. Known ids: {', '.join(STATE_IDS)}.")
    if name in PARAMETRIZED_STATE_IDS:
        if p is None or not 0 <= p <= 1:
            raise InvalidArgumentError(f"State '{name}' needs a mixing parameter p in [0, 1], got {p!r}.")
    if name == RHO1:
        return _rho1()
    if name == RHO2:
        k = correlated_rotation(Y_AXIS, RHO2_PULSE_ANGLE)
        return apply_unitary(k, _rho1())
    if name == PLUS_PLUS:
        return DensityOperator.from_ket(np.kron(KET_PLUS, KET_PLUS))
    if name == BELL_PHI_PLUS:
        return DensityOperator.from_ket(_phi_plus())
    if name == WERNER:
        return DensityOperator(p * np.outer(_phi_plus(), _phi_plus().conj()) + (1 - p) * np.eye(4) / 4)
    # werner_input: the mixed part is normalized to I/4
    ket00 = np.kron(KET_0, KET_0)
    return DensityOperator(p * np.outer(ket00, ket00.conj()) + (1 - p) * np.eye(4) / 4)


def prepare_werner_protocol(p: float) -> DensityOperator:
    """Werner state made by the entangling gate MS2(pi/4) acting on the classically correlated input."""
    return apply_unitary(ms2_gate(pi / 4), prepare(WERNER_INPUT, p))


def dephase_rotate_dephase(rho: DensityOperator, n: RotationAxis = Z_AXIS, m: RotationAxis = Y_AXIS,
                           theta: float = pi / 2) -> DensityOperator:
    """eps_n[K_m(theta) eps_n(rho) K_m(theta)^dagger], the sequence that lifts a product state to rank 4."""
    dephase = correlated_dephasing(n)
    return apply_channel(dephase, apply_unitary(correlated_rotation(m, theta), apply_channel(dephase, rho)))


def _rho1() -> DensityOperator:
    plus = np.outer(KET_PLUS, KET_PLUS.conj())
    minus = np.outer(KET_MINUS, KET_MINUS.conj())
    return DensityOperator((np.kron(plus, plus) + np.kron(minus, minus)) / 2)


def _phi_plus() -> np.ndarray:
    return (np.kron(KET_0, KET_0) + np.kron(KET_1, KET_1)) / np.sqrt(2)
