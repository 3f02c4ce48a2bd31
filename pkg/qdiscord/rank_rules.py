"""
This module contains the table of correlation ranks reached by correlated dephasing, and the rules that predict the
rank for the two input classes it covers: product states (rank 1), and rank-2 states with maximally mixed
marginals. Each of the rank-2 states has a single correlation term d (v.sigma (x) w.sigma); the rank after dephasing
about n only depends on whether n.v and n.w are 1, 0 or in between (in absolute value).
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
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from qdiscord.channels import RotationAxis, apply_channel, correlated_dephasing
from qdiscord.correlations import DEFAULT_RANK_TOLERANCE, correlation_rank
from qdiscord.densop import FanoForm, fano_compose
from qdiscord.errors import InvalidArgumentError, UnsupportedStateClassError

logger = logging.getLogger(__name__)

ALIGNMENT_ATOL = 1e-9
MARGINAL_ATOL = 1e-9
# sin of the largest angle between n and a marginal Bloch direction that still counts as parallel.
PARALLEL_ANGLE_ATOL = 1e-6
# Ranges used when drawing random instances.
OBLIQUE_OVERLAP_RANGE = (0.1, 0.9)
STRENGTH_RANGE = (0.2, 1.0)
GENERIC_MAX_OVERLAP = 0.9


class Alignment(Enum):
    PARALLEL = '=1'
    ORTHOGONAL = '=0'
    OBLIQUE = 'between'


# Keyed by the alignment of (n.v, n.w).
RANK_TABLE: Dict[Tuple[Alignment, Alignment], int] = {
    (Alignment.PARALLEL, Alignment.PARALLEL): 2,
    (Alignment.PARALLEL, Alignment.ORTHOGONAL): 1,
    (Alignment.PARALLEL, Alignment.OBLIQUE): 2,
    (Alignment.ORTHOGONAL, Alignment.PARALLEL): 1,
    (Alignment.ORTHOGONAL, Alignment.ORTHOGONAL): 3,
    (Alignment.ORTHOGONAL, Alignment.OBLIQUE): 3,
    (Alignment.OBLIQUE, Alignment.PARALLEL): 2,
    (Alignment.OBLIQUE, Alignment.ORTHOGONAL): 3,
    (Alignment.OBLIQUE, Alignment.OBLIQUE): 4,
}
# Product states stay products if n is parallel to one of the marginals, and become rank 3 otherwise.
PRODUCT_ALIGNED_RANK = 1
PRODUCT_GENERIC_RANK = 3


class RankCase(NamedTuple):
    name: str
    expected_rank: int
    v: Optional[Alignment] = None
    w: Optional[Alignment] = None
    product_aligned: bool = False

    @property
    def is_product(self) -> bool:
        return self.v is None


RANK_CASES: List[RankCase] = [
    RankCase(f'rank2 n.v{v.value} n.w{w.value}', rank, v, w) for (v, w), rank in RANK_TABLE.items()
] + [
    RankCase('product n||r', PRODUCT_ALIGNED_RANK, product_aligned=True),
    RankCase('product generic', PRODUCT_GENERIC_RANK),
]


def classify_alignment(overlap: float, tolerance: float = ALIGNMENT_ATOL) -> Alignment:
    overlap = abs(overlap)
    if abs(1 - overlap) <= tolerance:
        return Alignment.PARALLEL
    if overlap <= tolerance:
        return Alignment.ORTHOGONAL
    return Alignment.OBLIQUE


def predict_dephasing_rank(f: FanoForm, n: RotationAxis, tolerance: float = DEFAULT_RANK_TOLERANCE) -> int:
    """
    Predicts the correlation rank after correlated dephasing about n. Raises UnsupportedStateClassError for
    anything that is neither a product state nor a single correlation term with maximally mixed marginals.
    """
    block_values = np.linalg.svd(f.correlation_block(), compute_uv=False)
    if block_values[0] <= tolerance:
        return _predict_product(f, n)
    if f.r_a.norm >= MARGINAL_ATOL or f.r_b.norm >= MARGINAL_ATOL:
        raise UnsupportedStateClassError(
            f"Only product states and rank-2 states with maximally mixed marginals are covered "
            f"(|rA| = {f.r_a.norm!r}, |rB| = {f.r_b.norm!r})."
        )
    u, s, vt = np.linalg.svd(f.beta)
    if s[1] > tolerance:
        raise UnsupportedStateClassError(
            f"The correlation block has more than one term (singular values {s.tolist()})."
        )
    key = (classify_alignment(float(n.n @ u[:, 0])), classify_alignment(float(n.n @ vt[0])))
    logger.debug(f"Dephasing about {n.n.tolist()}: alignment {key[0].value}/{key[1].value}")
    return RANK_TABLE[key]


def dephased_rank(f: FanoForm, n: RotationAxis, tolerance: float = DEFAULT_RANK_TOLERANCE) -> int:
    """The rank actually reached, from the Kraus form of the channel."""
    return correlation_rank(apply_channel(correlated_dephasing(n), fano_compose(f)), tolerance).rank


def random_instance(case: RankCase, rng: np.random.Generator) -> Tuple[FanoForm, RotationAxis]:
    """Draws a random state of the class `case` describes, together with a dephasing axis."""
    n = _random_unit(rng)
    if case.is_product:
        r_a = _random_unit(rng) * rng.uniform(*STRENGTH_RANGE)
        r_b = _random_unit(rng) * rng.uniform(*STRENGTH_RANGE)
        if case.product_aligned:
            target = r_a if rng.random() < 0.5 else r_b
            sign = 1 if rng.random() < 0.5 else -1
            n = sign * target / np.linalg.norm(target)
        else:
            while max(abs(n @ r_a) / np.linalg.norm(r_a), abs(n @ r_b) / np.linalg.norm(r_b)) > GENERIC_MAX_OVERLAP:
                n = _random_unit(rng)
        return FanoForm(r_a, r_b, np.outer(r_a, r_b)), RotationAxis(n)
    v = _aligned_with(n, case.v, rng)
    w = _aligned_with(n, case.w, rng)
    d = rng.uniform(*STRENGTH_RANGE)
    return FanoForm(np.zeros(3), np.zeros(3), d * np.outer(v, w)), RotationAxis(n)


def find_case(name: str) -> RankCase:
    for case in RANK_CASES:
        if case.name == name:
            return case
    raise InvalidArgumentError(f"Unknown rank case '{name}'.")


def _predict_product(f: FanoForm, n: RotationAxis) -> int:
    for r in (f.r_a.array, f.r_b.array):
        norm = np.linalg.norm(r)
        if norm < MARGINAL_ATOL:
            return PRODUCT_ALIGNED_RANK
        if np.linalg.norm(np.cross(n.n, r / norm)) <= PARALLEL_ANGLE_ATOL:
            return PRODUCT_ALIGNED_RANK
    return PRODUCT_GENERIC_RANK


def _random_unit(rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)


def _random_orthogonal(n: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(3)
    v -= (v @ n) * n
    return v / np.linalg.norm(v)


def _aligned_with(n: np.ndarray, alignment: Alignment, rng: np.random.Generator) -> np.ndarray:
    sign = 1 if rng.random() < 0.5 else -1
    if alignment == Alignment.PARALLEL:
        return sign * n
    u = _random_orthogonal(n, rng)
    if alignment == Alignment.ORTHOGONAL:
        return u
    t = rng.uniform(*OBLIQUE_OVERLAP_RANGE)
    return sign * t * n + np.sqrt(1 - t * t) * u
