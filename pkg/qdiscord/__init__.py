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
__version__ = '0.3.0'

# Numerical conventions, echoed into every report.
ENTROPY_BASE = '2 (bits)'
FIDELITY_CONVENTION = 'squared Uhlmann, F = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2'
BASIS_ORDERING = '|00>, |01>, |10>, |11>; qubit A is the left tensor factor'
CORRELATION_MATRIX_NORMALIZATION = 'm_ij = Tr[rho (s_i (x) s_j)] over {I, sx, sy, sz}, no factor 1/4'
ROTATION_CONVENTION = 'R_n(theta) = cos(theta/2) I - i sin(theta/2) n.sigma'
MEASUREMENT_MODEL = '9 product-Pauli settings x 4 outcomes, multinomial sampling'
RECONSTRUCTION_METHOD = 'iterative R rho R maximum likelihood with dilution'
DISCORD_MEASUREMENTS = 'von Neumann measurements, Fibonacci-sphere grid + pattern search'

CONVENTIONS = (
    ('entropy_base', ENTROPY_BASE),
    ('fidelity', FIDELITY_CONVENTION),
    ('basis_ordering', BASIS_ORDERING),
    ('correlation_matrix', CORRELATION_MATRIX_NORMALIZATION),
    ('rotation', ROTATION_CONVENTION),
    ('measurement_model', MEASUREMENT_MODEL),
    ('reconstruction', RECONSTRUCTION_METHOD),
    ('discord_measurements', DISCORD_MEASUREMENTS),
)
