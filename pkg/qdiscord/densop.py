"""
Density-operator algebra for one and two qubits.

All two-qubit matrices use the basis ordering |00>, |01>, |10>, |11> with qubit A as the left tensor factor.
Entropies are in bits.
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
from enum import Enum
from typing import NamedTuple, Optional, Union, Sequence

import numpy as np

from qdiscord.errors import InvalidArgumentError, NotAStateError

logger = logging.getLogger(__name__)

HERMITIAN_ATOL = 1e-10
TRACE_ATOL = 1e-10
# Eigenvalues in [-EIGENVALUE_FLOOR, 0) are roundoff and get clipped to 0.
EIGENVALUE_FLOOR = 1e-10
# Below this an entropy or square root is refused.
EIGENVALUE_REJECT = 1e-8
FANO_SINGULAR_VALUE_SLACK = 1e-9
BLOCH_NORM_SLACK = 1e-10
SUPPORTED_DIMS = (2, 4)

_PAULIS = (
    np.array([[1, 0], [0, 1]], dtype=np.complex128),
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)
# PAULI_PRODUCTS[i, j] = sigma_i (x) sigma_j
PAULI_PRODUCTS = np.array([[np.kron(a, b) for b in _PAULIS] for a in _PAULIS])

KET_0 = np.array([1, 0], dtype=np.complex128)
KET_1 = np.array([0, 1], dtype=np.complex128)
KET_PLUS = np.array([1, 1], dtype=np.complex128) / np.sqrt(2)
KET_MINUS = np.array([1, -1], dtype=np.complex128) / np.sqrt(2)

Operator = Union['DensityOperator', np.ndarray]


class Side(Enum):
    A = 'A'
    B = 'B'

    @property
    def other(self) -> 'Side':
        return Side.B if self == Side.A else Side.A


class BlochVector(NamedTuple):
    x: float
    y: float
    z: float

    @classmethod
    def from_array(cls, arr: Sequence[float]) -> 'BlochVector':
        arr = np.asarray(arr, dtype=float)
        if arr.shape != (3,):
            raise InvalidArgumentError(f"A Bloch vector needs 3 components, got shape {arr.shape}.")
        return cls(float(arr[0]), float(arr[1]), float(arr[2]))

    @property
    def array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.array))


class DensityOperator:
    """
    An immutable, validated density matrix of dimension 2 or 4.
    The stored matrix is Hermitian-symmetrized after validation and is read-only.
    """
    def __init__(self, matrix: Union[np.ndarray, Sequence], validate: bool = True):
        m = np.array(matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in SUPPORTED_DIMS:
            raise InvalidArgumentError(f"Density operators must be square of dimension 2 or 4, got shape {m.shape}.")
        if validate:
            _validate_state(m)
        m = (m + m.conj().T) / 2
        m.setflags(write=False)
        self._matrix = m

    @classmethod
    def from_ket(cls, ket: Union[np.ndarray, Sequence]) -> 'DensityOperator':
        ket = np.asarray(ket, dtype=np.complex128)
        norm = np.linalg.norm(ket)
        if norm == 0:
            raise InvalidArgumentError("Can not build a state from the zero vector.")
        ket = ket / norm
        return cls(np.outer(ket, ket.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> 'DensityOperator':
        return cls(np.eye(dim, dtype=np.complex128) / dim)

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues, roundoff negatives clipped to zero."""
        return _clipped_eigenvalues(self._matrix)

    def __eq__(self, other):
        if not isinstance(other, DensityOperator):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self._matrix, other._matrix)

    def __hash__(self):
        return hash(self._matrix.tobytes())

    def __repr__(self):
        return f'DensityOperator(dim={self.dim}, matrix={np.array2string(self._matrix, precision=4)})'


class FanoForm:
    """
    Bloch/correlation decomposition rho = 1/4 (I(x)I + rA.s(x)I + I(x)rB.s + sum_ij beta_ij s_i(x)s_j).
    """
    def __init__(self, r_a: Sequence[float], r_b: Sequence[float], beta: Union[np.ndarray, Sequence]):
        self.r_a = BlochVector.from_array(r_a)
        self.r_b = BlochVector.from_array(r_b)
        beta = np.array(beta, dtype=float)
        if beta.shape != (3, 3):
            raise InvalidArgumentError(f"The correlation block beta must be 3x3, got shape {beta.shape}.")
        for name, r in (('rA', self.r_a), ('rB', self.r_b)):
            if r.norm > 1 + BLOCH_NORM_SLACK:
                raise NotAStateError(f"Reduced Bloch vector {name} has norm {r.norm} > 1.")
        top = np.linalg.svd(beta, compute_uv=False)[0]
        if top > 1 + FANO_SINGULAR_VALUE_SLACK:
            raise NotAStateError(f"Singular value {top} of beta exceeds 1.")
        beta.setflags(write=False)
        self.beta = beta

    def correlation_block(self) -> np.ndarray:
        """beta - rA (x) rB, whose rank plus one is the correlation rank."""
        return self.beta - np.outer(self.r_a.array, self.r_b.array)

    def __repr__(self):
        return f'FanoForm(r_a={tuple(self.r_a)}, r_b={tuple(self.r_b)}, beta={self.beta.tolist()})'


def pauli(index: int) -> np.ndarray:
    """I, sigma_x, sigma_y, sigma_z for index 0..3."""
    if not isinstance(index, (int, np.integer)) or not 0 <= index <= 3:
        raise InvalidArgumentError(f"Pauli index must be 0, 1, 2 or 3, got {index!r}.")
    return _PAULIS[index].copy()


def sigma_dot(n: Sequence[float]) -> np.ndarray:
    """n . sigma for a real 3-vector."""
    n = np.asarray(n, dtype=float)
    return n[0] * _PAULIS[1] + n[1] * _PAULIS[2] + n[2] * _PAULIS[3]


def as_matrix(op: Operator) -> np.ndarray:
    if isinstance(op, DensityOperator):
        return op.matrix
    return np.asarray(op, dtype=np.complex128)


def tensor(a: Operator, b: Operator) -> Operator:
    """Kronecker product; two density operators give a density operator, anything else a plain matrix."""
    ma, mb = as_matrix(a), as_matrix(b)
    if ma.ndim != 2 or ma.shape[0] != ma.shape[1] or mb.ndim != 2 or mb.shape[0] != mb.shape[1]:
        raise InvalidArgumentError("tensor() needs two square operators.")
    product = np.kron(ma, mb)
    if isinstance(a, DensityOperator) and isinstance(b, DensityOperator):
        return DensityOperator(product, validate=False)
    return product


def partial_trace(rho: DensityOperator, keep: Union[Side, str]) -> DensityOperator:
    keep = Side(keep)
    if rho.dim != 4:
        raise InvalidArgumentError(f"partial_trace needs a two-qubit state, got dimension {rho.dim}.")
    m = rho.matrix.reshape(2, 2, 2, 2)
    if keep == Side.A:
        reduced = np.einsum('ijkj->ik', m)
    else:
        reduced = np.einsum('ijil->jl', m)
    return DensityOperator(reduced, validate=False)


def von_neumann_entropy(rho: DensityOperator) -> float:
    vals = rho.eigenvalues()
    vals = vals[vals > 0]
    return float(max(0.0, -np.sum(vals * np.log2(vals))))


def binary_entropy(p: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """h(p) in bits with 0 log 0 := 0, vectorized."""
    p = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    q = 1.0 - p
    with np.errstate(divide='ignore', invalid='ignore'):
        hp = np.where(p > 0, -p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
        hq = np.where(q > 0, -q * np.log2(np.where(q > 0, q, 1.0)), 0.0)
    result = hp + hq
    if result.ndim == 0:
        return float(result)
    return result


def qubit_entropy_from_bloch_length(r: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Entropy of a qubit state whose Bloch vector has length r."""
    return binary_entropy((1.0 + np.minimum(np.asarray(r, dtype=float), 1.0)) / 2.0)


def fidelity(rho: DensityOperator, sigma: DensityOperator) -> float:
    """Squared Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."""
    if rho.dim != sigma.dim:
        raise InvalidArgumentError(f"fidelity() got states of dimension {rho.dim} and {sigma.dim}.")
    sqrt_rho = hermitian_sqrt(rho.matrix)
    inner = sqrt_rho @ sigma.matrix @ sqrt_rho
    inner = (inner + inner.conj().T) / 2
    vals = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
    return float(min(1.0, np.sum(np.sqrt(vals)) ** 2))


def trace_distance(rho: Operator, sigma: Operator) -> float:
    diff = as_matrix(rho) - as_matrix(sigma)
    diff = (diff + diff.conj().T) / 2
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(diff))))


def hermitian_sqrt(m: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh((m + m.conj().T) / 2)
    vals = _clip_eigenvalues(vals)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def pauli_expectations(rho: DensityOperator) -> np.ndarray:
    """The 4x4 real matrix m_ij = Tr[rho (sigma_i (x) sigma_j)], indices over {I, sx, sy, sz}."""
    if rho.dim != 4:
        raise InvalidArgumentError(f"Pauli expectations need a two-qubit state, got dimension {rho.dim}.")
    return np.einsum('ijab,ba->ij', PAULI_PRODUCTS, rho.matrix).real


def fano_decompose(rho: DensityOperator) -> FanoForm:
    m = pauli_expectations(rho)
    return FanoForm(m[1:, 0], m[0, 1:], m[1:, 1:])


def fano_compose(f: FanoForm) -> DensityOperator:
    m = np.empty((4, 4))
    m[0, 0] = 1.0
    m[1:, 0] = f.r_a.array
    m[0, 1:] = f.r_b.array
    m[1:, 1:] = f.beta
    return DensityOperator(np.einsum('ij,ijab->ab', m, PAULI_PRODUCTS) / 4)


def bloch_vector(rho: DensityOperator) -> BlochVector:
    if rho.dim != 2:
        raise InvalidArgumentError(f"Bloch vectors are defined for single qubits, got dimension {rho.dim}.")
    return BlochVector.from_array([np.trace(rho.matrix @ _PAULIS[i]).real for i in (1, 2, 3)])


def from_bloch(r: Sequence[float]) -> DensityOperator:
    return DensityOperator((_PAULIS[0] + sigma_dot(r)) / 2)


def random_density_operator(dim: int, rng: np.random.Generator, rank: Optional[int] = None) -> DensityOperator:
    """Random state from the (induced) Ginibre ensemble; `rank` limits the number of nonzero eigenvalues."""
    if dim not in SUPPORTED_DIMS:
        raise InvalidArgumentError(f"Unsupported dimension {dim}.")
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise InvalidArgumentError(f"Rank must lie in 1..{dim}, got {rank}.")
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    return DensityOperator(m / np.trace(m).real)


def load_state_file(path: str) -> DensityOperator:
    """
    Reads a two-qubit state from 16 lines of "re im" (row-major, fixed basis ordering).
    Blank lines and lines starting with '#' are ignored.
    """
    values = []
    with open(path, 'r') as f:
        for line_no, line in enumerate(f, start=1):
            line = line.strip()
            if line == '' or line.startswith('#'):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise InvalidArgumentError(f"{path}:{line_no}: expected 're im', got {line!r}.")
            try:
                values.append(complex(float(parts[0]), float(parts[1])))
            except ValueError:
                raise InvalidArgumentError(f"{path}:{line_no}: not a number pair: {line!r}.")
    if len(values) != 16:
        raise InvalidArgumentError(f"{path}: expected 16 matrix entries, found {len(values)}.")
    return DensityOperator(np.array(values).reshape(4, 4))


def dump_state_file(rho: DensityOperator, path: str):
    with open(path, 'w') as f:
        for value in rho.matrix.reshape(-1):
            f.write(f'{float(value.real)!r} {float(value.imag)!r}\n')


def _validate_state(m: np.ndarray):
    if not np.all(np.isfinite(m)):
        raise NotAStateError("Matrix contains non-finite entries.")
    asym = np.max(np.abs(m - m.conj().T))
    if asym > HERMITIAN_ATOL:
        raise NotAStateError(f"Matrix is not Hermitian (max deviation {asym:.3e}).")
    tr = np.trace(m).real
    if abs(tr - 1) > TRACE_ATOL:
        raise NotAStateError(f"Trace is {tr!r}, expected 1.")
    lowest = np.linalg.eigvalsh((m + m.conj().T) / 2)[0]
    if lowest < -EIGENVALUE_FLOOR:
        raise NotAStateError(f"Matrix has negative eigenvalue {lowest:.3e}.")


def _clip_eigenvalues(vals: np.ndarray) -> np.ndarray:
    if vals.size and vals.min() < -EIGENVALUE_REJECT:
        raise NotAStateError(f"Negative eigenvalue {vals.min():.3e} beyond the numerical floor.")
    return np.clip(vals, 0.0, None)


def _clipped_eigenvalues(m: np.ndarray) -> np.ndarray:
    return _clip_eigenvalues(np.linalg.eigvalsh(m))
