"""
Example script to reproduce every study (damping, rank transitions, Werner states, projection noise and the
dephasing rank table) into one output directory, with tomography error bars at 70 copies.
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
import os
import sys

from qdiscord.config import ScenarioConfig, SCENARIOS, SCENARIO_STATE, SCENARIO_RANK_TABLE, SCENARIO_SUPP_NOISE
from qdiscord.cli import RUNNERS

output_dir_base = sys.argv[1] if len(sys.argv) > 1 else 'qdiscord_figures'
tomography_copies = int(sys.argv[2]) if len(sys.argv) > 2 else 70

for scenario in SCENARIOS:
    if scenario == SCENARIO_STATE:
        continue
    print(scenario)
    output_dir = os.path.join(output_dir_base, scenario)
    params = {'scenario': scenario, 'out': output_dir}
    if scenario not in (SCENARIO_RANK_TABLE, SCENARIO_SUPP_NOISE):
        params['tomography_copies'] = str(tomography_copies)
    config = ScenarioConfig.from_params(params)
    report = RUNNERS[scenario](config)

    for path in report.write():
        print(f'  {path}')
