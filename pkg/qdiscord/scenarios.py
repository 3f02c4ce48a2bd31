"""
Scenario runners. Each run_* function evaluates one study and returns a Report; none of them writes files.
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
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from qdiscord.channels import RotationAxis, X_AXIS, Y_AXIS, Z_AXIS, RHO1, RHO2, PLUS_PLUS, WERNER, BELL_PHI_PLUS, \
    amplitude_damping, apply_channel, apply_unitary, correlated_dephasing, correlated_rotation, \
    dephase_rotate_dephase, on_qubit, prepare, prepare_werner_protocol
from qdiscord.config import ScenarioConfig, SCENARIO_FIG3, SCENARIO_FIG4
from qdiscord.correlations import DiscordResult, bell_diagonal_discord, brute_force_classical_correlation, \
    conditional_ensemble, correlation_rank, discord, is_classical_quantum, tangle
from qdiscord.densop import DensityOperator, Side, bloch_vector, fano_decompose, fidelity, load_state_file, \
    trace_distance
from qdiscord.errors import InvalidArgumentError, UnsupportedStateClassError
from qdiscord.rank_rules import RANK_CASES, dephased_rank, predict_dephasing_rank, random_instance
from qdiscord.report_xml import Report, Table
from qdiscord.tomography import QUANTITIES, CountRecord, error_bars, generator, histogram_from_summary, \
    mle_reconstruct, monte_carlo_study

logger = logging.getLogger(__name__)

# Damping strengths of the states shown as density matrices for the amplitude-damping study.
FIG3_DAMPING = (0.0, 0.79, 1.0)
SINGULAR_VALUE_COLUMNS = ['cm1', 'cm2', 'cm3', 'cm4']
TOMOGRAPHY_COLUMNS = ['tomo_discord_a_mean', 'tomo_discord_a_std', 'tomo_discord_b_mean', 'tomo_discord_b_std',
                      'tomo_tangle_mean', 'tomo_tangle_std', 'tomo_fidelity_mean', 'tomo_fidelity_std',
                      'tomo_unconverged']
_TOMOGRAPHY_QUANTITIES = (('discord_a', 'tomo_discord_a'), ('discord_b', 'tomo_discord_b'),
                          ('tangle', 'tomo_tangle'), ('fidelity', 'tomo_fidelity'))


class ScenarioState:
    """One state of the correlation-rank scenarios, with the input it was dephased from (if any)."""
    def __init__(self, figure: str, label: str, rho: DensityOperator,
                 dephased_from: Optional[DensityOperator] = None, dephasing_axis: Optional[RotationAxis] = None):
        self.figure = figure
        self.label = label
        self.rho = rho
        self.dephased_from = dephased_from
        self.dephasing_axis = dephasing_axis


def scenario_states() -> List[ScenarioState]:
    """The nine states of the amplitude-damping snapshots and the correlated-dephasing study, in figure order."""
    states = []
    rho1 = prepare(RHO1)
    for p in FIG3_DAMPING:
        states.append(ScenarioState(SCENARIO_FIG3, f'eps_ad(rho1) p={p!r}',
                                    apply_channel(on_qubit(amplitude_damping(p), Side.B), rho1)))
    dephase = correlated_dephasing(Z_AXIS)
    rho2 = prepare(RHO2)
    plus_plus = prepare(PLUS_PLUS)
    states.append(ScenarioState(SCENARIO_FIG4, 'eps_cd(rho1)', apply_channel(dephase, rho1), rho1, Z_AXIS))
    states.append(ScenarioState(SCENARIO_FIG4, 'rho2', rho2))
    states.append(ScenarioState(SCENARIO_FIG4, 'eps_cd(rho2)', apply_channel(dephase, rho2), rho2, Z_AXIS))
    states.append(ScenarioState(SCENARIO_FIG4, '|++>', plus_plus))
    states.append(ScenarioState(SCENARIO_FIG4, 'eps_cd(|++>)', apply_channel(dephase, plus_plus), plus_plus, Z_AXIS))
    rotated = apply_unitary(correlated_rotation(Y_AXIS, pi / 2), apply_channel(dephase, plus_plus))
    states.append(ScenarioState(SCENARIO_FIG4, 'eps_cd(K_y eps_cd(|++>) K_y^dagger)',
                                dephase_rotate_dephase(plus_plus), rotated, Z_AXIS))
    return states


def run_fig2(config: ScenarioConfig) -> Report:
    """One-sided amplitude damping of rho1 over the damping grid."""
    report = Report(config)
    columns = ['p', 'discord_a', 'discord_b', 'mutual_information', 'classical_correlation_a',
               'classical_correlation_b', 'tau_plus_probability', 'tau_plus_x', 'tau_plus_y', 'tau_plus_z',
               'tau_minus_probability', 'tau_minus_x', 'tau_minus_y', 'tau_minus_z',
               *SINGULAR_VALUE_COLUMNS, 'rank', 'tangle']
    table = report.add_table(Table('damping', columns + _tomography_columns(config)))
    rho1 = prepare(RHO1)
    seeds = _row_seeds(config, len(config.damping_grid))
    for p, seed in zip(config.damping_grid, seeds):
        rho = apply_channel(on_qubit(amplitude_damping(p), Side.B), rho1)
        d_a, d_b = _discords(rho, config)
        row = {
            'p': p,
            'discord_a': d_a.value,
            'discord_b': d_b.value,
            'mutual_information': d_a.mutual_information,
            'classical_correlation_a': d_a.classical_correlation,
            'classical_correlation_b': d_b.classical_correlation,
            'tangle': tangle(rho),
        }
        for (probability, tau), name in zip(conditional_ensemble(rho, Side.A, X_AXIS.n), ('plus', 'minus')):
            r = bloch_vector(tau)
            row.update({f'tau_{name}_probability': probability,
                        f'tau_{name}_x': r.x, f'tau_{name}_y': r.y, f'tau_{name}_z': r.z})
        row.update(_rank_columns(rho, config))
        row.update(_tomography_row(rho, config, seed))
        table.add_row(row)
        report.add_operator(f'eps_ad(rho1) p={p!r}', rho)
        logger.info(f"fig2: p={p!r} D_A={d_a.value!r} D_B={d_b.value!r}")
    return report


def run_fig3_fig4(config: ScenarioConfig, figures: Sequence[str] = (SCENARIO_FIG3, SCENARIO_FIG4)) -> Report:
    """
    Correlation-matrix singular values, ranks and discord of the amplitude-damping snapshots and of the
    correlated-dephasing states. `predicted_rank` is filled in for dephased states whose input is covered
    by the rank table.
    """
    report = Report(config)
    columns = ['figure', 'state', *SINGULAR_VALUE_COLUMNS, 'rank', 'predicted_rank', 'discord_a', 'discord_b',
               'discord_b_oracle', 'mutual_information', 'tangle', 'classical_quantum_a', 'classical_quantum_b',
               'max_abs_imag']
    table = report.add_table(Table('states', columns + _tomography_columns(config)))
    states = [s for s in scenario_states() if s.figure in figures]
    seeds = _row_seeds(config, len(states))
    for state, seed in zip(states, seeds):
        rho = state.rho
        d_a, d_b = _discords(rho, config)
        j_oracle, _ = brute_force_classical_correlation(rho, Side.B)
        row = {
            'figure': state.figure,
            'state': state.label,
            'predicted_rank': _predicted_rank(state, config),
            'discord_a': d_a.value,
            'discord_b': d_b.value,
            'discord_b_oracle': max(0.0, d_b.mutual_information - j_oracle),
            'mutual_information': d_a.mutual_information,
            'tangle': tangle(rho),
            'classical_quantum_a': is_classical_quantum(rho, Side.A),
            'classical_quantum_b': is_classical_quantum(rho, Side.B),
            'max_abs_imag': float(np.max(np.abs(rho.matrix.imag))),
        }
        row.update(_rank_columns(rho, config))
        row.update(_tomography_row(rho, config, seed))
        table.add_row(row)
        report.add_operator(state.label, rho)
        logger.info(f"{state.figure}: {state.label} rank={row['rank']} D_B={d_b.value!r}")
    return report


def run_fig3(config: ScenarioConfig) -> Report:
    return run_fig3_fig4(config, (SCENARIO_FIG3,))


def run_fig4(config: ScenarioConfig) -> Report:
    return run_fig3_fig4(config, (SCENARIO_FIG4,))


def run_fig5(config: ScenarioConfig) -> Report:
    """Werner states over the p grid, and the same states prepared by MS2(pi/4) on the classically correlated input."""
    report = Report(config)
    columns = ['p', 'discord_a', 'discord_b', 'discord_closed_form', 'tangle', 'tangle_expected',
               *SINGULAR_VALUE_COLUMNS, 'fidelity_to_bell', 'protocol_fidelity', 'protocol_trace_distance',
               'protocol_discord_b', 'protocol_tangle']
    table = report.add_table(Table('werner', columns + _tomography_columns(config)))
    bell = prepare(BELL_PHI_PLUS)
    seeds = _row_seeds(config, len(config.werner_grid))
    for p, seed in zip(config.werner_grid, seeds):
        rho = prepare(WERNER, p)
        protocol = prepare_werner_protocol(p)
        d_a, d_b = _discords(rho, config)
        row = {
            'p': p,
            'discord_a': d_a.value,
            'discord_b': d_b.value,
            'discord_closed_form': bell_diagonal_discord((p, -p, p)),
            'tangle': tangle(rho),
            'tangle_expected': max(0.0, (3 * p - 1) / 2) ** 2,
            'fidelity_to_bell': fidelity(rho, bell),
            'protocol_fidelity': fidelity(protocol, rho),
            'protocol_trace_distance': trace_distance(protocol, rho),
            'protocol_discord_b': discord(protocol, Side.B, config.grid_points, config.axis_tolerance).value,
            'protocol_tangle': tangle(protocol),
        }
        row.update(_rank_columns(rho, config, with_rank=False))
        row.update(_tomography_row(rho, config, seed))
        table.add_row(row)
        report.add_operator(f'rho_W p={p!r}', rho)
        logger.info(f"fig5: p={p!r} D={d_b.value!r} tangle={row['tangle']!r}")
    return report


def run_supp_noise(config: ScenarioConfig) -> Report:
    """Projection-noise study on rho1: bias against shots, and singular-value histograms at config.shots."""
    report = Report(config)
    columns = ['shots', 'copies', 'unconverged']
    for name in QUANTITIES:
        columns += [f'{name}_mean', f'{name}_std']
    bias = report.add_table(Table('bias', columns))
    histogram = report.add_table(Table('histogram', ['quantity', 'bin_low', 'bin_high', 'count']))
    rho1 = prepare(RHO1)
    grid = list(config.shots_grid)
    if config.shots not in grid:
        grid.append(config.shots)
    seeds = _row_seeds(config, len(grid))
    summaries = {}
    for shots, seed in zip(grid, seeds):
        summary = monte_carlo_study(rho1, shots, config.copies, seed, config.mc_max_iterations, config.mc_tolerance,
                                    config.workers, grid_points=config.grid_points,
                                    axis_tolerance=config.axis_tolerance)
        summaries[shots] = summary
        if shots not in config.shots_grid:
            continue
        row = {'shots': shots, 'copies': summary.copies, 'unconverged': summary.unconverged}
        for name in QUANTITIES:
            row[f'{name}_mean'] = summary.mean[name]
            row[f'{name}_std'] = summary.std[name]
        bias.add_row(row)
    for h in histogram_from_summary(summaries[config.shots], config.histogram_bins):
        histogram.add_row({'quantity': h.quantity, 'bin_low': h.bin_low, 'bin_high': h.bin_high, 'count': h.count})
    return report


def run_state(config: ScenarioConfig) -> Report:
    """
    All quantifiers of a single state: a prepared one, one read from a state file, or the maximum-likelihood
    reconstruction of a count record. For a count record the tomography columns are error bars at the
    record's own shot count.
    """
    report = Report(config)
    shots = config.shots
    if config.counts_file is not None:
        counts = _read_counts(config.counts_file)
        result = mle_reconstruct(counts, config.mle_max_iterations, config.mle_tolerance)
        rho = result.rho_hat
        label = config.counts_file
        shots = max(1, int(round(counts.shots_per_setting)))
        reconstruction = report.add_table(Table('reconstruction', ['shots_per_setting', 'log_likelihood',
                                                                   'iterations', 'converged']))
        reconstruction.add_row({'shots_per_setting': counts.shots_per_setting,
                                'log_likelihood': result.log_likelihood, 'iterations': result.iterations,
                                'converged': result.converged})
    elif config.state_file is not None:
        rho = load_state_file(config.state_file)
        label = config.state_file
    else:
        rho = prepare(config.state_name, config.state_p)
        label = config.state_name if config.state_p is None else f'{config.state_name} p={config.state_p!r}'
    columns = ['state', 'mutual_information', 'discord_a', 'discord_b', 'classical_correlation_a',
               'classical_correlation_b', 'axis_a_x', 'axis_a_y', 'axis_a_z', 'axis_b_x', 'axis_b_y', 'axis_b_z',
               'tangle', *SINGULAR_VALUE_COLUMNS, 'rank', 'classical_quantum_a', 'classical_quantum_b', 'max_abs_imag']
    table = report.add_table(Table('quantifiers', columns + _tomography_columns(config)))
    d_a, d_b = _discords(rho, config)
    row = {
        'state': label,
        'mutual_information': d_a.mutual_information,
        'discord_a': d_a.value,
        'discord_b': d_b.value,
        'classical_correlation_a': d_a.classical_correlation,
        'classical_correlation_b': d_b.classical_correlation,
        'tangle': tangle(rho),
        'classical_quantum_a': is_classical_quantum(rho, Side.A),
        'classical_quantum_b': is_classical_quantum(rho, Side.B),
        'max_abs_imag': float(np.max(np.abs(rho.matrix.imag))),
    }
    for result, side in ((d_a, 'a'), (d_b, 'b')):
        row.update({f'axis_{side}_x': result.optimal_axis.x, f'axis_{side}_y': result.optimal_axis.y,
                    f'axis_{side}_z': result.optimal_axis.z})
    row.update(_rank_columns(rho, config))
    row.update(_tomography_row(rho, config, _row_seeds(config, 1)[0], shots))
    table.add_row(row)
    fano = fano_decompose(rho)
    fano_table = report.add_table(Table('fano', ['row', 'r_a', 'r_b', 'beta_x', 'beta_y', 'beta_z']))
    for i, axis in enumerate('xyz'):
        fano_table.add_row({'row': axis, 'r_a': fano.r_a[i], 'r_b': fano.r_b[i], 'beta_x': fano.beta[i, 0],
                            'beta_y': fano.beta[i, 1], 'beta_z': fano.beta[i, 2]})
    report.add_operator(label, rho)
    return report


def run_rank_table(config: ScenarioConfig) -> Report:
    """Randomized check of the dephasing rank table: predicted against actually reached rank, per case."""
    report = Report(config)
    table = report.add_table(Table('rank_table', ['case', 'expected_rank', 'instances', 'agreements',
                                                  'prediction_errors', 'table_errors']))
    children = np.random.SeedSequence(config.seed).spawn(len(RANK_CASES))
    for case, child in zip(RANK_CASES, children):
        rng = generator(child)
        agreements = prediction_errors = table_errors = 0
        for _ in range(config.rank_instances):
            f, n = random_instance(case, rng)
            predicted = predict_dephasing_rank(f, n, config.tolerance)
            actual = dephased_rank(f, n, config.tolerance)
            if predicted == actual:
                agreements += 1
            else:
                prediction_errors += 1
                logger.warning(f"Rank case '{case.name}': predicted {predicted}, reached {actual} "
                               f"(n={n.n.tolist()}, beta={f.beta.tolist()})")
            if predicted != case.expected_rank:
                table_errors += 1
        table.add_row({'case': case.name, 'expected_rank': case.expected_rank, 'instances': config.rank_instances,
                       'agreements': agreements, 'prediction_errors': prediction_errors,
                       'table_errors': table_errors})
        logger.info(f"rank-table: {case.name}: {agreements}/{config.rank_instances}")
    return report


def _discords(rho: DensityOperator, config: ScenarioConfig) -> Tuple[DiscordResult, DiscordResult]:
    return (discord(rho, Side.A, config.grid_points, config.axis_tolerance),
            discord(rho, Side.B, config.grid_points, config.axis_tolerance))


def _rank_columns(rho: DensityOperator, config: ScenarioConfig, with_rank: bool = True) -> Dict[str, float]:
    report = correlation_rank(rho, config.tolerance)
    columns = {name: float(v) for name, v in zip(SINGULAR_VALUE_COLUMNS, report.singular_values)}
    if with_rank:
        columns['rank'] = report.rank
    return columns


def _predicted_rank(state: ScenarioState, config: ScenarioConfig) -> Optional[int]:
    if state.dephased_from is None:
        return None
    try:
        return predict_dephasing_rank(fano_decompose(state.dephased_from), state.dephasing_axis, config.tolerance)
    except UnsupportedStateClassError:
        return None


def _tomography_columns(config: ScenarioConfig) -> List[str]:
    return TOMOGRAPHY_COLUMNS if config.tomography_copies > 0 else []


def _row_seeds(config: ScenarioConfig, rows: int) -> List[np.random.SeedSequence]:
    return np.random.SeedSequence(config.seed).spawn(rows)


def _tomography_row(rho: DensityOperator, config: ScenarioConfig, seed: np.random.SeedSequence,
                    shots: Optional[int] = None) -> Dict[str, float]:
    """Simulated-experiment columns: Monte Carlo reconstructions of rho, at config.shots unless given."""
    if config.tomography_copies == 0:
        return {}
    shots = config.shots if shots is None else shots
    summary = error_bars(rho, shots, config.tomography_copies, seed, max_iterations=config.mc_max_iterations,
                         tolerance=config.mc_tolerance, workers=config.workers, grid_points=config.grid_points,
                         axis_tolerance=config.axis_tolerance)
    row = {'tomo_unconverged': summary.unconverged}
    for quantity, prefix in _TOMOGRAPHY_QUANTITIES:
        row[f'{prefix}_mean'] = summary.mean[quantity]
        row[f'{prefix}_std'] = summary.std[quantity]
    return row


def _read_counts(path: str) -> CountRecord:
    try:
        with open(path) as f:
            return CountRecord.from_text(f.read())
    except OSError as err:
        raise InvalidArgumentError(f"Can not read count file {path}: {err}")
