"""
Simulated finite-shot two-qubit tomography: nine product-Pauli settings with four outcomes each,
multinomial sampling, iterative maximum-likelihood reconstruction, and Monte Carlo projection-noise studies.
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
from concurrent.futures import ProcessPoolExecutor
from itertools import product
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from qdiscord.correlations import DEFAULT_AXIS_TOLERANCE, DEFAULT_GRID_POINTS, correlation_matrix, discord, tangle
from qdiscord.densop import DensityOperator, Side, fidelity, pauli
from qdiscord.errors import ConvergenceError, InvalidArgumentError

logger = logging.getLogger(__name__)

BASES = ('X', 'Y', 'Z')
OUTCOMES = ('++', '+-', '-+', '--')
PROBABILITY_FLOOR = 1e-12
DEFAULT_MAX_ITERATIONS = 100000
DEFAULT_TOLERANCE = 1e-10
DEFAULT_FIXED_POINT_TOLERANCE = 1e-12
DEFAULT_MC_MAX_ITERATIONS = 3000
DEFAULT_MC_TOLERANCE = 1e-9
DEFAULT_COPIES = 70
INITIAL_DILUTION = 0.1
MIN_DILUTION = 1e-6
COUNT_SUM_ATOL = 1e-9
GENERATOR_NAME = 'numpy.random.Philox'
# Columns of MonteCarloSummary, in report order.
QUANTITIES = ('discord_a', 'discord_b', 'tangle', 'cm1', 'cm2', 'cm3', 'cm4', 'fidelity')
SINGULAR_VALUE_QUANTITIES = ('cm1', 'cm2', 'cm3', 'cm4')

Seed = Union[int, np.random.SeedSequence]


class MeasurementSetting(NamedTuple):
    basis_a: str
    basis_b: str

    @property
    def label(self) -> str:
        return self.basis_a + self.basis_b


SETTINGS: Tuple[MeasurementSetting, ...] = tuple(MeasurementSetting(a, b) for a, b in product(BASES, BASES))
_SETTING_INDEX = {s.label: i for i, s in enumerate(SETTINGS)}


def _eigenprojectors(basis: str) -> Tuple[np.ndarray, np.ndarray]:
    sigma = pauli(BASES.index(basis) + 1)
    return (pauli(0) + sigma) / 2, (pauli(0) - sigma) / 2


# PROJECTORS[s, o] is the two-qubit projector of outcome OUTCOMES[o] in setting SETTINGS[s].
PROJECTORS = np.array([
    [np.kron(_eigenprojectors(s.basis_a)[oa], _eigenprojectors(s.basis_b)[ob]) for oa, ob in product((0, 1), (0, 1))]
    for s in SETTINGS
])


class CountRecord:
    """
    Outcome counts for the nine settings, in SETTINGS x OUTCOMES order. Counts may be non-integer
    for records that carry exact expected frequencies instead of sampled data.
    """
    def __init__(self, counts: Union[np.ndarray, Sequence], shots_per_setting: float, seed: Optional[int] = None):
        counts = np.array(counts, dtype=float)
        if counts.shape != (len(SETTINGS), len(OUTCOMES)):
            raise InvalidArgumentError(f"Expected {len(SETTINGS)}x{len(OUTCOMES)} counts, got shape {counts.shape}.")
        if shots_per_setting <= 0:
            raise InvalidArgumentError(f"A count record needs at least one shot per setting, got {shots_per_setting}.")
        if np.any(counts < 0) or not np.all(np.isfinite(counts)):
            raise InvalidArgumentError("Counts must be finite and non-negative.")
        sums = counts.sum(axis=1)
        bad = np.abs(sums - shots_per_setting) > COUNT_SUM_ATOL * max(1.0, shots_per_setting)
        if np.any(bad):
            setting = SETTINGS[int(np.argmax(bad))].label
            raise InvalidArgumentError(f"Counts of setting {setting} sum to {sums[np.argmax(bad)]!r}, "
                                       f"expected {shots_per_setting!r}.")
        counts.setflags(write=False)
        self.counts = counts
        self.shots_per_setting = shots_per_setting
        self.seed = seed

    @classmethod
    def from_probabilities(cls, rho: DensityOperator, shots_per_setting: float = 1.0) -> 'CountRecord':
        """Expected counts shots * p, i.e. the infinite-shot limit."""
        return cls(shots_per_setting * all_outcome_probabilities(rho), shots_per_setting)

    @property
    def frequencies(self) -> np.ndarray:
        return self.counts / self.shots_per_setting

    @property
    def is_integral(self) -> bool:
        return bool(np.all(self.counts == np.round(self.counts)))

    def __getitem__(self, setting: Union[MeasurementSetting, str]) -> np.ndarray:
        label = setting.label if isinstance(setting, MeasurementSetting) else setting
        if label not in _SETTING_INDEX:
            raise InvalidArgumentError(f"Unknown measurement setting '{label}'.")
        return self.counts[_SETTING_INDEX[label]]

    def __eq__(self, other):
        if not isinstance(other, CountRecord):
            return NotImplemented
        return (self.shots_per_setting == other.shots_per_setting and self.seed == other.seed
                and np.array_equal(self.counts, other.counts))

    def to_text(self) -> str:
        seed = 'none' if self.seed is None else str(self.seed)
        lines = [f'# shots={_format_count(self.shots_per_setting)} seed={seed}']
        for setting, row in zip(SETTINGS, self.counts):
            for outcome, count in zip(OUTCOMES, row):
                lines.append(f'{setting.label} {outcome} {_format_count(count)}')
        return '\n'.join(lines) + '\n'

    @classmethod
    def from_text(cls, text: str) -> 'CountRecord':
        lines = [line.strip() for line in text.splitlines() if line.strip() != '']
        if len(lines) == 0 or not lines[0].startswith('#'):
            raise InvalidArgumentError("Count record must start with a '# shots=<n> seed=<s>' header.")
        header = dict(part.split('=', 1) for part in lines[0][1:].split() if '=' in part)
        if 'shots' not in header or 'seed' not in header:
            raise InvalidArgumentError(f"Malformed count record header: {lines[0]!r}.")
        shots = _parse_count(header['shots'], 1)
        seed = None if header['seed'] == 'none' else _parse_int(header['seed'], 1)
        counts = np.full((len(SETTINGS), len(OUTCOMES)), np.nan)
        for line_no, line in enumerate(lines[1:], start=2):
            parts = line.split()
            if len(parts) != 3:
                raise InvalidArgumentError(f"Line {line_no}: expected 'setting outcome count', got {line!r}.")
            label, outcome, value = parts
            if label not in _SETTING_INDEX or outcome not in OUTCOMES:
                raise InvalidArgumentError(f"Line {line_no}: unknown setting or outcome in {line!r}.")
            s, o = _SETTING_INDEX[label], OUTCOMES.index(outcome)
            if not np.isnan(counts[s, o]):
                raise InvalidArgumentError(f"Line {line_no}: duplicate entry for {label} {outcome}.")
            counts[s, o] = _parse_count(value, line_no)
        if np.any(np.isnan(counts)):
            raise InvalidArgumentError(f"Count record is incomplete, expected {counts.size} entries.")
        return cls(counts, shots, seed)


class ReconstructionResult(NamedTuple):
    rho_hat: DensityOperator
    log_likelihood: float
    iterations: int
    converged: bool
    history: Tuple[float, ...]


class MonteCarloSummary(NamedTuple):
    copies: int
    shots: int
    unconverged: int
    mean: Dict[str, float]
    std: Dict[str, float]
    samples: np.ndarray


class HistogramRow(NamedTuple):
    quantity: str
    bin_low: float
    bin_high: float
    count: int


def outcome_probabilities(rho: DensityOperator, setting: Union[MeasurementSetting, str]) -> np.ndarray:
    label = setting.label if isinstance(setting, MeasurementSetting) else setting
    if label not in _SETTING_INDEX:
        raise InvalidArgumentError(f"Unknown measurement setting '{label}'.")
    return all_outcome_probabilities(rho)[_SETTING_INDEX[label]]


def all_outcome_probabilities(rho: DensityOperator) -> np.ndarray:
    """Born-rule probabilities for every setting and outcome, shape (9, 4)."""
    if rho.dim != 4:
        raise InvalidArgumentError(f"Tomography needs a two-qubit state, got dimension {rho.dim}.")
    return np.clip(_probabilities(rho.matrix), 0.0, 1.0)


def generator(seed: Seed) -> np.random.Generator:
    seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return np.random.Generator(np.random.Philox(seq))


def sample_counts(rho: DensityOperator, shots: int, seed: Seed) -> CountRecord:
    """One multinomial draw of `shots` outcomes per setting."""
    if shots < 1:
        raise InvalidArgumentError(f"Need at least one shot per setting, got {shots}.")
    rng = generator(seed)
    probabilities = all_outcome_probabilities(rho)
    counts = np.array([rng.multinomial(shots, p / p.sum()) for p in probabilities])
    return CountRecord(counts, shots, _seed_label(seed))


def mle_reconstruct(counts: CountRecord, max_iterations: int = DEFAULT_MAX_ITERATIONS,
                    tolerance: float = DEFAULT_TOLERANCE, require_convergence: bool = False,
                    fixed_point_tolerance: Optional[float] = DEFAULT_FIXED_POINT_TOLERANCE) -> ReconstructionResult:
    """
    Iterative R rho R maximum-likelihood reconstruction, starting from I/4.
    R(rho) = 1/9 sum_i (f_i / p_i(rho)) Pi_i equals I at the fixed point. If an undiluted step lowers the
    likelihood, the step (I + eps R) rho (I + eps R) is tried with eps = 0.1, 0.05, ... down to 1e-6.

    Converged once a step gains less than `tolerance` in log-likelihood and, unless `fixed_point_tolerance`
    is None, changes no matrix entry by more than `fixed_point_tolerance`.
    """
    if max_iterations < 1:
        raise InvalidArgumentError(f"max_iterations must be at least 1, got {max_iterations}.")
    if tolerance <= 0:
        raise InvalidArgumentError(f"tolerance must be positive, got {tolerance!r}.")
    if fixed_point_tolerance is not None and fixed_point_tolerance <= 0:
        raise InvalidArgumentError(f"fixed_point_tolerance must be positive, got {fixed_point_tolerance!r}.")
    weights = counts.counts
    freqs = counts.frequencies
    eye = np.eye(4, dtype=np.complex128)
    rho = eye / 4
    p = _floored(_probabilities(rho))
    likelihood = _log_likelihood(weights, p)
    history = [likelihood]
    converged = False
    iterations = 0
    for _ in range(max_iterations):
        r = np.einsum('so,soab->ab', freqs / p, PROJECTORS) / len(SETTINGS)
        candidate = _normalized(r @ rho @ r)
        gain = _likelihood_gain(weights, p, candidate - rho)
        if gain < 0:
            eps = INITIAL_DILUTION
            while eps >= MIN_DILUTION:
                step = eye + eps * r
                candidate = _normalized(step @ rho @ step)
                gain = _likelihood_gain(weights, p, candidate - rho)
                if gain >= 0:
                    break
                eps /= 2
            else:
                logger.debug(f"MLE stationary after {iterations} steps, no dilution improves the likelihood")
                converged = True
                break
        change = float(np.max(np.abs(candidate - rho)))
        rho, p = candidate, _floored(_probabilities(candidate))
        likelihood += gain
        iterations += 1
        history.append(likelihood)
        if gain < tolerance and (fixed_point_tolerance is None or change < fixed_point_tolerance):
            converged = True
            break
    if not converged:
        logger.warning(f"MLE did not converge within {max_iterations} iterations "
                       f"(last improvement {history[-1] - history[-2]!r}).")
        if require_convergence:
            raise ConvergenceError(f"MLE did not converge within {max_iterations} iterations.")
    else:
        logger.debug(f"MLE converged after {iterations} iterations, log-likelihood {likelihood!r}")
    return ReconstructionResult(DensityOperator(rho), likelihood, iterations, converged, tuple(history))


def mle_from_state(rho: DensityOperator, max_iterations: int = DEFAULT_MAX_ITERATIONS,
                   tolerance: float = DEFAULT_TOLERANCE,
                   fixed_point_tolerance: Optional[float] = DEFAULT_FIXED_POINT_TOLERANCE) -> ReconstructionResult:
    """Reconstruction from the exact frequencies of rho."""
    return mle_reconstruct(CountRecord.from_probabilities(rho), max_iterations, tolerance,
                           fixed_point_tolerance=fixed_point_tolerance)


def binomial_standard_errors(counts: CountRecord) -> np.ndarray:
    """sqrt(p_i (1 - p_i) / n) per setting and outcome."""
    f = counts.frequencies
    return np.sqrt(f * (1 - f) / counts.shots_per_setting)


def quantities(rho_hat: DensityOperator, target: DensityOperator,
               grid_points: int = DEFAULT_GRID_POINTS,
               axis_tolerance: float = DEFAULT_AXIS_TOLERANCE) -> np.ndarray:
    """The QUANTITIES of one reconstructed state, in order."""
    cm = correlation_matrix(rho_hat)
    return np.array([
        discord(rho_hat, Side.A, grid_points, axis_tolerance).value,
        discord(rho_hat, Side.B, grid_points, axis_tolerance).value,
        tangle(rho_hat),
        *cm.singular_values,
        fidelity(rho_hat, target),
    ])


def monte_carlo_study(rho_ideal: DensityOperator, shots: int, copies: int = DEFAULT_COPIES, seed: Seed = 0,
                      max_iterations: int = DEFAULT_MC_MAX_ITERATIONS, tolerance: float = DEFAULT_MC_TOLERANCE,
                      workers: int = 1, target: Optional[DensityOperator] = None,
                      grid_points: int = DEFAULT_GRID_POINTS,
                      axis_tolerance: float = DEFAULT_AXIS_TOLERANCE) -> MonteCarloSummary:
    """
    Samples `copies` count records from rho_ideal, reconstructs each, and reports mean and sample standard
    deviation of QUANTITIES. Copy k draws from the k-th child of SeedSequence(seed), so the result does not
    depend on `workers`. The fidelity is taken against `target` (default: rho_ideal). Reconstructions stop on
    the likelihood test alone.
    """
    if copies < 2:
        raise InvalidArgumentError(f"A Monte Carlo study needs at least two copies, got {copies}.")
    if shots < 1:
        raise InvalidArgumentError(f"Need at least one shot per setting, got {shots}.")
    if workers < 1:
        raise InvalidArgumentError(f"Need at least one worker, got {workers}.")
    target = rho_ideal if target is None else target
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    children = root.spawn(copies)
    jobs = [(rho_ideal.matrix, target.matrix, shots, child, max_iterations, tolerance, grid_points, axis_tolerance)
            for child in children]
    if workers == 1:
        results = [_monte_carlo_copy(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_monte_carlo_copy, jobs))
    samples = np.array([values for values, _ in results])
    unconverged = sum(1 for _, converged in results if not converged)
    if unconverged:
        logger.warning(f"{unconverged} of {copies} reconstructions at {shots} shots did not converge.")
    mean = {name: float(v) for name, v in zip(QUANTITIES, samples.mean(axis=0))}
    std = {name: float(v) for name, v in zip(QUANTITIES, samples.std(axis=0, ddof=1))}
    logger.info(f"Monte Carlo at {shots} shots: {copies} copies, mean discord_b {mean['discord_b']!r}")
    samples.setflags(write=False)
    return MonteCarloSummary(copies, shots, unconverged, mean, std, samples)


def error_bars(rho_hat: DensityOperator, shots: int, copies: int = DEFAULT_COPIES, seed: Seed = 0,
               **kwargs) -> MonteCarloSummary:
    """Projection-noise error bars for a reconstructed state: a Monte Carlo study centred on rho_hat itself."""
    return monte_carlo_study(rho_hat, shots, copies, seed, **kwargs)


def histogram_from_summary(summary: MonteCarloSummary, bins: int = 20) -> List[HistogramRow]:
    if bins < 2:
        raise InvalidArgumentError(f"Need at least two histogram bins, got {bins}.")
    rows = []
    for name in SINGULAR_VALUE_QUANTITIES:
        values = summary.samples[:, QUANTITIES.index(name)]
        counts, edges = np.histogram(values, bins=bins)
        for count, low, high in zip(counts, edges[:-1], edges[1:]):
            rows.append(HistogramRow(name, float(low), float(high), int(count)))
    return rows


def singular_value_histogram(rho_ideal: DensityOperator, shots: int, copies: int, seed: int,
                             bins: int = 20, **kwargs) -> List[HistogramRow]:
    """Distribution of the correlation-matrix singular values CM1..CM4 over a Monte Carlo ensemble."""
    if bins < 2:
        raise InvalidArgumentError(f"Need at least two histogram bins, got {bins}.")
    return histogram_from_summary(monte_carlo_study(rho_ideal, shots, copies, seed, **kwargs), bins)


def _monte_carlo_copy(job) -> Tuple[np.ndarray, bool]:
    rho_matrix, target_matrix, shots, child, max_iterations, tolerance, grid_points, axis_tolerance = job
    counts = sample_counts(DensityOperator(rho_matrix), shots, child)
    result = mle_reconstruct(counts, max_iterations, tolerance, fixed_point_tolerance=None)
    values = quantities(result.rho_hat, DensityOperator(target_matrix), grid_points, axis_tolerance)
    return values, result.converged


def _probabilities(m: np.ndarray) -> np.ndarray:
    return np.einsum('soab,ba->so', PROJECTORS, m).real


def _floored(p: np.ndarray) -> np.ndarray:
    return np.maximum(p, PROBABILITY_FLOOR)


def _log_likelihood(weights: np.ndarray, p: np.ndarray) -> float:
    return float(np.sum(np.where(weights > 0, weights * np.log(p), 0.0)))


def _likelihood_gain(weights: np.ndarray, p: np.ndarray, delta: np.ndarray) -> float:
    """Log-likelihood change of the step rho -> rho + delta, computed from the probability change."""
    dp = _probabilities(delta)
    dp = np.where(p + dp > PROBABILITY_FLOOR, dp, PROBABILITY_FLOOR - p)
    return float(np.sum(np.where(weights > 0, weights * np.log1p(dp / p), 0.0)))


def _normalized(m: np.ndarray) -> np.ndarray:
    m = (m + m.conj().T) / 2
    return m / np.trace(m).real


def _seed_label(seed: Seed) -> Optional[int]:
    """The integer that reproduces the record on its own, None for spawned children."""
    if isinstance(seed, np.random.SeedSequence):
        if len(seed.spawn_key) > 0 or not isinstance(seed.entropy, (int, np.integer)):
            return None
        return int(seed.entropy)
    return int(seed)


def _format_count(value: float) -> str:
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def _parse_count(value: str, line_no: int) -> float:
    try:
        return float(value)
    except ValueError:
        raise InvalidArgumentError(f"Line {line_no}: not a number: {value!r}.")


def _parse_int(value: str, line_no: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise InvalidArgumentError(f"Line {line_no}: not an integer: {value!r}.")
