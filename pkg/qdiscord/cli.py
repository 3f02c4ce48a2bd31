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
import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional

from qdiscord import __version__
from qdiscord.config import ScenarioConfig, read_config_file, SCENARIO_FIG2, SCENARIO_FIG3, SCENARIO_FIG4, \
    SCENARIO_FIG5, SCENARIO_SUPP_NOISE, SCENARIO_STATE, SCENARIO_RANK_TABLE
from qdiscord.errors import QDiscordError
from qdiscord.report_xml import Report
from qdiscord.scenarios import run_fig2, run_fig3, run_fig4, run_fig5, run_supp_noise, run_state, run_rank_table

logger = logging.getLogger(__name__)

RUNNERS: Dict[str, Callable[[ScenarioConfig], Report]] = {
    SCENARIO_FIG2: run_fig2,
    SCENARIO_FIG3: run_fig3,
    SCENARIO_FIG4: run_fig4,
    SCENARIO_FIG5: run_fig5,
    SCENARIO_SUPP_NOISE: run_supp_noise,
    SCENARIO_STATE: run_state,
    SCENARIO_RANK_TABLE: run_rank_table,
}
HELP = {
    SCENARIO_FIG2: "amplitude damping of the classically correlated state",
    SCENARIO_FIG3: "density matrices and correlation ranks under amplitude damping",
    SCENARIO_FIG4: "correlated dephasing of classical and product states",
    SCENARIO_FIG5: "Werner states and their preparation with the MS2 gate",
    SCENARIO_SUPP_NOISE: "projection-noise bias of reconstructed states",
    SCENARIO_STATE: "all quantifiers of one prepared, file-supplied or reconstructed state",
    SCENARIO_RANK_TABLE: "randomized check of the dephasing rank table",
}
# argparse destination -> config parameter
_OVERRIDES = {
    'seed': 'seed',
    'out': 'out',
    'tolerance': 'tolerance',
    'shots': 'shots',
    'copies': 'copies',
    'workers': 'workers',
    'tomography_copies': 'tomography_copies',
    'grid': 'damping_grid',
    'werner_grid': 'werner_grid',
    'shots_grid': 'shots_grid',
    'instances': 'rank_instances',
    'name': 'state_name',
    'p': 'state_p',
    'file': 'state_file',
    'counts': 'counts_file',
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='qdiscord', description="Quantum discord and correlation-rank studies "
                                                                  "of two-qubit states under noise.")
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('--config', help="XML <ScenarioConfig> file; command line flags override its values")
    parser.add_argument('--seed', help="root seed of every random stream")
    parser.add_argument('--out', help="output directory for the report and CSV tables")
    parser.add_argument('--tolerance', help="relative singular-value threshold for correlation ranks")
    parser.add_argument('--shots', help="measurements per tomography setting")
    parser.add_argument('--copies', help="Monte Carlo copies per shot count")
    parser.add_argument('--workers', help="worker processes for Monte Carlo studies")
    parser.add_argument('--tomography-copies', dest='tomography_copies',
                        help="add simulated-experiment columns from this many reconstructions (0: off)")
    parser.add_argument('-v', '--verbose', action='count', default=0, help="-v for progress, -vv for details")

    sub = parser.add_subparsers(dest='scenario', metavar='SCENARIO')
    sub.required = True
    for scenario in RUNNERS:
        cmd = sub.add_parser(scenario, help=HELP[scenario])
        if scenario == SCENARIO_FIG2:
            cmd.add_argument('--grid', help="damping strengths, whitespace separated")
        elif scenario == SCENARIO_FIG5:
            cmd.add_argument('--grid', dest='werner_grid', help="Werner mixing parameters, whitespace separated")
        elif scenario == SCENARIO_SUPP_NOISE:
            cmd.add_argument('--shots-grid', dest='shots_grid', help="shot counts, whitespace separated")
        elif scenario == SCENARIO_RANK_TABLE:
            cmd.add_argument('--instances', help="random instances per table cell")
        elif scenario == SCENARIO_STATE:
            cmd.add_argument('--name', help="prepared state id")
            cmd.add_argument('--p', help="mixing parameter of parametrized states")
            cmd.add_argument('--file', help="state file: 16 lines of 're im'")
            cmd.add_argument('--counts', help="count record to reconstruct by maximum likelihood")
    return parser


def config_from_args(args: argparse.Namespace) -> ScenarioConfig:
    params = read_config_file(args.config) if args.config is not None else {}
    for dest, name in _OVERRIDES.items():
        value = getattr(args, dest, None)
        if value is not None:
            params[name] = value
    params['scenario'] = args.scenario
    return ScenarioConfig.from_params(params)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(stream=sys.stderr, level=level, format='%(levelname)s %(name)s: %(message)s')
    try:
        config = config_from_args(args)
        report = RUNNERS[config.scenario](config)
        report.write()
    except QDiscordError as err:
        logger.error(str(err))
        return err.exit_code
    except OSError as err:
        logger.error(f"I/O error: {err}")
        return 2
    return 0
