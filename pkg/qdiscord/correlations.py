"""
Correlation quantifiers for two-qubit states: mutual information, classical correlation and
discord over von Neumann measurements, tangle, and the Pauli correlation matrix with its rank.
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
from math import pi, sqrt
from typing import List, NamedTuple, Sequence, Tuple, Union

import numpy as np

from qdiscord.densop import DensityOperator, FanoForm, BlochVector, Side, partial_trace, von_neumann_entropy, \
    qubit_entropy_from_bloch_length, pauli, pauli_expectations, fano_decompose, sigma_dot
from qdiscord.errors import InvalidArgumentError, InternalInconsistencyError, NotAStateError

logger = logging.getLogger(__name__)

DEFAULT_GRID_POINTS = 312
DEFAULT_AXIS_TOLERANCE = 1e-4
BRUTE_FORCE_POINTS = 10000
INITIAL_SEARCH_STEP = 0.2
# Grid axes whose J is this close to the best count as tied.
TIE_ATOL = 1e-9
IMPROVEMENT_ATOL = 1e-14
MAX_REFINEMENT_MOVES = 10000
DISCORD_CLIP = 1e-9
AXIS_NORM_ATOL = 1e-9
OUTCOME_PROBABILITY_FLOOR = 1e-12
DEFAULT_RANK_TOLERANCE = 1e-7
TANGLE_EIGENVALUE_FLOOR = 1e-13
CLASSICALITY_TOLERANCE = 1e-9
SYMMETRIC_CRITERION_ATOL = 1e-9

_SIGMA_YY = np.kron(pauli(2), pauli(2))
_PAULI_VECTOR = np.array([pauli(1), pauli(2), pauli(3)])


class DiscordResult(NamedTuple):
    value: float
    measured_side: Side
    optimal_axis: BlochVector
    mutual_information: float
    classical_correlation: float


class CorrelationMatrix(NamedTuple):
    """m_ij = Tr[rho (s_i (x) s_j)] over {I, sx, sy, sz}, without the overall 1/4."""
    m: np.ndarray
    singular_values: np.ndarray


class RankReport(NamedTuple):
    singular_values: np.ndarray
    rank: int
    tolerance: float
    beta_rank_inputs: FanoForm


def fibonacci_sphere(points: int) -> np.ndarray:
    """Nearly uniform unit vectors, shape (points, 3)."""
    if points < 1:
        raise InvalidArgumentError(f"Need at least one grid point, got {points}.")
    i = np.arange(points) + 0.5
    z = 1 - 2 * i / points
    r = np.sqrt(1 - z * z)
    phi = pi * (1 + sqrt(5)) * i
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def mutual_information(rho: DensityOperator) -> float:
    if rho.dim != 4:
        raise InvalidArgumentError(f"Mutual information needs a two-qubit state, got dimension {rho.dim}.")
    value = (von_neumann_entropy(partial_trace(rho, Side.A)) + von_neumann_entropy(partial_trace(rho, Side.B))
             - von_neumann_entropy(rho))
    return max(0.0, value)


def conditional_ensemble(rho: DensityOperator, side: Union[Side, str],
                         axis: Union[BlochVector, Sequence[float]]) -> List[Tuple[float, DensityOperator]]:
    """
    Measures `side` with the projectors (I +- a.sigma)/2 and returns [(p+, rho+), (p-, rho-)] for the other qubit.
    Outcomes with probability below 1e-12 come back as (0.0, I/2).
    """
    side = Side(side)
    a = _unit_axis(axis)
    if rho.dim != 4:
        raise InvalidArgumentError(f"conditional_ensemble() needs a two-qubit state, got dimension {rho.dim}.")
    ensemble = []
    for s in (1, -1):
        projector = (pauli(0) + s * sigma_dot(a)) / 2
        conditioned = _conditioned_operators(rho, side, projector[np.newaxis])[0]
        p = float(np.trace(conditioned).real)
        if p < OUTCOME_PROBABILITY_FLOOR:
            ensemble.append((0.0, DensityOperator.maximally_mixed(2)))
        else:
            ensemble.append((p, DensityOperator(conditioned / p)))
    return ensemble


def classical_correlation(rho: DensityOperator, side: Union[Side, str],
                          grid_points: int = DEFAULT_GRID_POINTS,
                          axis_tolerance: float = DEFAULT_AXIS_TOLERANCE) -> Tuple[float, BlochVector]:
    """
    J = S(rho_other) - min_a sum_s p_s S(rho_other|s) over measurement axes a of `side`.
    A Fibonacci-sphere grid picks the start, a pattern search on the sphere refines it until the
    step falls below `axis_tolerance` (radians).
    """
    side = Side(side)
    if axis_tolerance <= 0:
        raise InvalidArgumentError(f"Axis tolerance must be positive, got {axis_tolerance!r}.")
    objective = _fano_objective(fano_decompose(rho), side)

    grid = fibonacci_sphere(grid_points)
    values = objective(grid)
    best = values.max()
    tied = grid[values >= best - TIE_ATOL]
    start = min(tied, key=lambda v: tuple(v))
    axis, value = _pattern_search(objective, start, float(objective(start[np.newaxis])[0]), axis_tolerance)
    logger.debug(f"J on side {side.value}: grid best {best!r}, refined {value!r} at {axis.tolist()}")
    return max(0.0, value), BlochVector.from_array(_canonical_sign(axis))


def brute_force_classical_correlation(rho: DensityOperator, side: Union[Side, str],
                                      points: int = BRUTE_FORCE_POINTS) -> Tuple[float, BlochVector]:
    """
    Dense-grid maximum of J evaluated from explicit conditional density matrices.
    Slow, and only as accurate as the grid spacing; used to check classical_correlation.
    """
    side = Side(side)
    axes = fibonacci_sphere(points)
    other = side.other
    s_other = von_neumann_entropy(partial_trace(rho, other))
    conditional = np.zeros(points)
    for s in (1, -1):
        projectors = (np.eye(2)[np.newaxis] + s * np.einsum('ni,ijk->njk', axes, _PAULI_VECTOR)) / 2
        conditioned = _conditioned_operators(rho, side, projectors)
        p = np.einsum('njj->n', conditioned).real
        safe = p > OUTCOME_PROBABILITY_FLOOR
        normalized = conditioned / np.where(safe, p, 1.0)[:, np.newaxis, np.newaxis]
        vals = np.clip(np.linalg.eigvalsh(normalized), 0.0, 1.0)
        with np.errstate(divide='ignore', invalid='ignore'):
            entropy = -np.sum(np.where(vals > 0, vals * np.log2(np.where(vals > 0, vals, 1.0)), 0.0), axis=1)
        conditional += np.where(safe, p * entropy, 0.0)
    values = s_other - conditional
    best = values.max()
    tied = axes[values >= best - TIE_ATOL]
    axis = min(tied, key=lambda v: tuple(v))
    return max(0.0, float(best)), BlochVector.from_array(_canonical_sign(axis))


def discord(rho: DensityOperator, side: Union[Side, str],
            grid_points: int = DEFAULT_GRID_POINTS,
            axis_tolerance: float = DEFAULT_AXIS_TOLERANCE) -> DiscordResult:
    """D = I - J with the measurement on `side`."""
    side = Side(side)
    i = mutual_information(rho)
    j, axis = classical_correlation(rho, side, grid_points, axis_tolerance)
    value = i - j
    if value < 0:
        if value < -DISCORD_CLIP:
            raise InternalInconsistencyError(f"Classical correlation {j!r} exceeds mutual information {i!r}.")
        value = 0.0
    return DiscordResult(value, side, axis, i, j)


def tangle(rho: DensityOperator) -> float:
    """Squared concurrence from the square roots of the eigenvalues of rho (sy sy) rho* (sy sy)."""
    if rho.dim != 4:
        raise InvalidArgumentError(f"The tangle needs a two-qubit state, got dimension {rho.dim}.")
    m = rho.matrix
    spin_flipped = _SIGMA_YY @ m.conj() @ _SIGMA_YY
    vals = np.linalg.eigvals(m @ spin_flipped).real
    vals[vals < TANGLE_EIGENVALUE_FLOOR] = 0.0
    lam = np.sort(np.sqrt(vals))[::-1]
    concurrence = max(0.0, lam[0] - lam[1] - lam[2] - lam[3])
    return float(min(1.0, concurrence ** 2))


def correlation_matrix(rho: DensityOperator) -> CorrelationMatrix:
    m = pauli_expectations(rho)
    m.setflags(write=False)
    return CorrelationMatrix(m, np.linalg.svd(m, compute_uv=False))


def correlation_rank(rho: DensityOperator, tolerance: float = DEFAULT_RANK_TOLERANCE) -> RankReport:
    """
    Number of singular values of the correlation matrix above tolerance * (largest singular value).
    Cross-checked against 1 + rank(beta - rA rB^T). M = L diag(1, beta - rA rB^T) U with unit-triangular
    L, U of norm at most 1 + |rA| and 1 + |rB|, so the block is counted over the threshold band scaled by
    kappa = (1 + |rA|)(1 + |rB|) and only a rank outside that band is an error.
    """
    if not 0 < tolerance < 0.5:
        raise InvalidArgumentError(f"Rank tolerance must lie in (0, 0.5), got {tolerance!r}.")
    cm = correlation_matrix(rho)
    threshold = tolerance * cm.singular_values[0]
    rank = int(np.count_nonzero(cm.singular_values > threshold))
    fano = fano_decompose(rho)
    block_values = np.linalg.svd(fano.correlation_block(), compute_uv=False)
    kappa = (1 + fano.r_a.norm) * (1 + fano.r_b.norm)
    diagonal = np.append(block_values, 1.0)
    lowest = int(np.count_nonzero(diagonal > threshold * kappa))
    highest = int(np.count_nonzero(diagonal > threshold / kappa))
    if not lowest <= rank <= highest:
        raise InternalInconsistencyError(
            f"Correlation rank {rank} disagrees with 1 + rank(beta - rA rB^T) in [{lowest}, {highest}] "
            f"(singular values {cm.singular_values.tolist()}, block {block_values.tolist()}, tolerance {tolerance!r})."
        )
    return RankReport(cm.singular_values, rank, tolerance, fano)


def is_classical_quantum(rho: DensityOperator, side: Union[Side, str],
                         tolerance: float = CLASSICALITY_TOLERANCE) -> bool:
    """
    True if rho = sum_i p_i |i><i| (x) rho_i with an orthonormal basis on `side`, i.e. the discord measured
    on `side` vanishes. Holds iff the `side` operators Tr_other[rho (I (x) s_j)] commute, which is the case when
    the Bloch parts [r | beta] of `side` span at most one direction.
    """
    side = Side(side)
    m = pauli_expectations(rho)
    block = m[1:, :] if side == Side.A else m[:, 1:].T
    return bool(np.linalg.svd(block, compute_uv=False)[1] <= tolerance)


def bell_diagonal_discord(c: Sequence[float]) -> float:
    """
    Closed-form discord of rho = 1/4 (I + sum_i c_i s_i (x) s_i); same on both sides.
    """
    c = np.asarray(c, dtype=float)
    if c.shape != (3,):
        raise InvalidArgumentError(f"Expected three correlation coefficients, got shape {c.shape}.")
    c1, c2, c3 = c
    lam = np.array([1 - c1 - c2 - c3, 1 - c1 + c2 + c3, 1 + c1 - c2 + c3, 1 + c1 + c2 - c3]) / 4
    if lam.min() < -1e-10:
        raise NotAStateError(f"Coefficients {c.tolist()} do not describe a state (eigenvalue {lam.min():.3e}).")
    lam = lam[lam > 0]
    mutual = 2 + float(np.sum(lam * np.log2(lam)))
    top = float(np.max(np.abs(c)))
    classical = 1 - float(qubit_entropy_from_bloch_length(top))
    return max(0.0, mutual - classical)


def symmetric_rank4_criterion(beta: Union[np.ndarray, Sequence], n: Sequence[float]) -> bool:
    """For a symmetric rank-one correlation block: dephasing about n reaches rank 4 iff 0 < n.beta.n / |beta| < 1."""
    beta = np.asarray(beta, dtype=float)
    n = np.asarray(n, dtype=float)
    norm = np.linalg.norm(beta, 2)
    if norm == 0:
        raise InvalidArgumentError("The correlation block is zero.")
    ratio = abs(float(n @ beta @ n)) / norm
    return SYMMETRIC_CRITERION_ATOL < ratio < 1 - SYMMETRIC_CRITERION_ATOL


def _unit_axis(axis: Union[BlochVector, Sequence[float]]) -> np.ndarray:
    a = axis.array if isinstance(axis, BlochVector) else np.asarray(axis, dtype=float)
    if a.shape != (3,):
        raise InvalidArgumentError(f"A measurement axis needs 3 components, got shape {a.shape}.")
    if abs(np.linalg.norm(a) - 1) > AXIS_NORM_ATOL:
        raise InvalidArgumentError(f"Measurement axis must be a unit vector, got norm {np.linalg.norm(a)!r}.")
    return a


def _conditioned_operators(rho: DensityOperator, side: Side, projectors: np.ndarray) -> np.ndarray:
    """Tr_side[(P (x) I) rho] for a stack of projectors P on `side`, unnormalized."""
    m = rho.matrix.reshape(2, 2, 2, 2)
    if side == Side.A:
        return np.einsum('nac,cbad->nbd', projectors, m)
    return np.einsum('nbd,adcb->nac', projectors, m)


def _fano_objective(f: FanoForm, side: Side):
    """J(a) for a stack of unit axes, from the Fano form: the other qubit's conditional Bloch vector
    for outcome s is (r_other + s beta^T a) / (1 + s a.r_side)."""
    if side == Side.A:
        r_side, r_other, corr = f.r_a.array, f.r_b.array, f.beta
    else:
        r_side, r_other, corr = f.r_b.array, f.r_a.array, f.beta.T
    s_other = float(qubit_entropy_from_bloch_length(np.linalg.norm(r_other)))

    def objective(axes: np.ndarray) -> np.ndarray:
        shift = axes @ corr
        bias = axes @ r_side
        conditional = np.zeros(len(axes))
        for s in (1.0, -1.0):
            p = (1 + s * bias) / 2
            safe = p > OUTCOME_PROBABILITY_FLOOR
            length = np.linalg.norm(r_other + s * shift, axis=1) / np.where(safe, 2 * p, 1.0)
            conditional += np.where(safe, p * qubit_entropy_from_bloch_length(length), 0.0)
        return s_other - conditional

    return objective


def _tangent_basis(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    helper = np.array([1.0, 0.0, 0.0]) if abs(a[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    t1 = np.cross(a, helper)
    t1 /= np.linalg.norm(t1)
    return t1, np.cross(a, t1)


def _pattern_search(objective, start: np.ndarray, value: float, axis_tolerance: float) -> Tuple[np.ndarray, float]:
    axis = start / np.linalg.norm(start)
    step = INITIAL_SEARCH_STEP
    moves = 0
    while step >= axis_tolerance and moves < MAX_REFINEMENT_MOVES:
        t1, t2 = _tangent_basis(axis)
        directions = np.array([t1, -t1, t2, -t2, t1 + t2, t1 - t2, -t1 + t2, -t1 - t2])
        directions /= np.linalg.norm(directions, axis=1)[:, np.newaxis]
        candidates = np.cos(step) * axis + np.sin(step) * directions
        candidates /= np.linalg.norm(candidates, axis=1)[:, np.newaxis]
        values = objective(candidates)
        best = int(np.argmax(values))
        if values[best] > value + IMPROVEMENT_ATOL:
            axis, value = candidates[best], float(values[best])
            moves += 1
        else:
            step /= 2
    return axis, value


def _canonical_sign(axis: np.ndarray) -> np.ndarray:
    """a and -a define the same measurement; report the one whose first non-negligible component is positive."""
    for component in axis:
        if abs(component) > 1e-12:
            return axis if component > 0 else -axis
    return axis
