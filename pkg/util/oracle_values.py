"""Prints reference values to check the optimizer against: dense-grid discord and the Werner closed form."""
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
import sys

from qdiscord.correlations import bell_diagonal_discord, brute_force_classical_correlation, discord, \
    mutual_information
from qdiscord.densop import Side
from qdiscord.scenarios import scenario_states

points = int(sys.argv[1]) if len(sys.argv) > 1 else 10000

print("state,side,discord,discord_brute_force,difference")
for state in scenario_states():
    mutual = mutual_information(state.rho)
    for side in (Side.A, Side.B):
        optimized = discord(state.rho, side).value
        classical, _ = brute_force_classical_correlation(state.rho, side, points)
        brute = max(0.0, mutual - classical)
        print(f"{state.label},{side.value},{optimized!r},{brute!r},{optimized - brute:.3e}")

print()
print("p,werner_discord")
for i in range(11):
    p = i / 10
    print(f"{p!r},{bell_diagonal_discord([p, -p, p])!r}")
