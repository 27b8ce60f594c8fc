# suzukicartier/core/eo.py

"""
a-number, rank profile and final-type constraints from the Cartier matrix.

A final type is a sequence nu_1..nu_g with nu_0 = 0 and
nu_i <= nu_(i+1) <= nu_i + 1. Reading N_(r_k) as the image of C^k inside a
final filtration gives nu_(r_k) = r_(k+1) (r_0 = g); p-rank 0 gives nu_1 = 0.
That reading is worked out for m = 1 only, so constraints for other m carry
heuristic = True.
"""

from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
from loguru import logger

from suzukicartier.core.f2la import BitMatrix, column_space_basis, rank
from suzukicartier.core.models import FinalTypeConstraints, RankProfile
from suzukicartier.core.params import a_number_formula, make_params
from suzukicartier.core.structured import Basis, StructuredPoly
from suzukicartier.utils.errors import (
    DimensionError,
    EnumerationCapError,
    InconsistentProfileError,
    ParameterError,
)

DEFAULT_ENUMERATION_CAP = 10 ** 6


def a_number_from_matrix(matrix: BitMatrix) -> int:
    """g - rank(M)."""
    if not matrix.is_square():
        raise DimensionError("Cartier matrix must be square", context={"shape": list(matrix.shape)})
    return matrix.cols - rank(matrix)


def _anchors(profile: RankProfile) -> Dict[int, int]:
    anchors: Dict[int, int] = {}

    def pin(index: int, value: int) -> None:
        if index < 1:
            return
        if anchors.get(index, value) != value:
            raise InconsistentProfileError(
                "Rank profile pins one index to two values",
                context={"index": index, "values": [anchors[index], value]}
            )
        anchors[index] = value

    chain = (profile.g,) + profile.ranks
    for current, following in zip(chain, chain[1:]):
        pin(current, following)
    if profile.is_nilpotent:
        pin(1, 0)
    elif profile.ranks:
        # the stable image is where nu_i = i stops
        pin(profile.p_rank, profile.p_rank)
    return anchors


def derive_constraints(profile: RankProfile, m: Optional[int] = None) -> FinalTypeConstraints:
    """Anchor values from the profile, then every value forced by the step condition.

    Raises:
        InconsistentProfileError: if no sequence satisfies the anchors
    """
    g = profile.g
    anchors = _anchors(profile)
    lo = [0] * (g + 1)
    hi = [0] * (g + 1)

    for i in range(1, g + 1):
        lo[i] = lo[i - 1]
        hi[i] = hi[i - 1] + 1
        if i in anchors:
            lo[i] = max(lo[i], anchors[i])
            hi[i] = min(hi[i], anchors[i])
    for i in range(g - 1, 0, -1):
        lo[i] = max(lo[i], lo[i + 1] - 1)
        hi[i] = min(hi[i], hi[i + 1])

    clashes = [i for i in range(1, g + 1) if lo[i] > hi[i]]
    if clashes:
        raise InconsistentProfileError(
            "Rank profile admits no final type",
            context={"g": g, "ranks": list(profile.ranks), "first_index": clashes[0]}
        )

    fixed = {i: lo[i] for i in range(1, g + 1) if lo[i] == hi[i]}
    constraints = FinalTypeConstraints(
        g=g,
        fixed=fixed,
        anchors=anchors,
        lower=tuple(lo),
        upper=tuple(hi),
        heuristic=m != 1,
    )
    logger.debug("Final-type constraints derived", g=g, anchors=len(anchors), fixed=len(fixed))
    return constraints


def free_indices(constraints: FinalTypeConstraints) -> List[int]:
    return [i for i in range(1, constraints.g + 1) if i not in constraints.fixed]


def count_compatible_final_types(constraints: FinalTypeConstraints) -> int:
    """Number of compatible sequences, by dynamic programming over nu_i."""
    lo, hi = constraints.lower, constraints.upper
    ways = {0: 1}
    for i in range(1, constraints.g + 1):
        ways = {
            v: ways.get(v, 0) + ways.get(v - 1, 0)
            for v in range(lo[i], hi[i] + 1)
        }
    return sum(ways.values())


def _sequences(constraints: FinalTypeConstraints) -> Iterator[Tuple[int, ...]]:
    # Bounds are tight after propagation, so every prefix extends: walk in
    # lexicographic order by bumping the rightmost index that can still grow.
    g, lo, hi = constraints.g, constraints.lower, constraints.upper
    values = [0] * (g + 1)
    for i in range(1, g + 1):
        values[i] = max(lo[i], values[i - 1])
    while True:
        yield tuple(values[1:])
        i = g
        while i >= 1 and values[i] + 1 > min(hi[i], values[i - 1] + 1):
            i -= 1
        if i == 0:
            return
        values[i] += 1
        for j in range(i + 1, g + 1):
            values[j] = max(lo[j], values[j - 1])


def enumerate_compatible_final_types(
    constraints: FinalTypeConstraints,
    cap: int = DEFAULT_ENUMERATION_CAP
) -> List[Tuple[int, ...]]:
    """All sequences nu_1..nu_g compatible with the constraints, in lexicographic order.

    Raises:
        EnumerationCapError: if there are more than cap sequences
    """
    count = count_compatible_final_types(constraints)
    if count > cap:
        raise EnumerationCapError(
            "Too many compatible final types to enumerate",
            count=count,
            free_gaps=constraints.free_count(),
            cap=cap
        )
    sequences = list(_sequences(constraints))
    logger.debug("Final types enumerated", g=constraints.g, count=len(sequences))
    return sequences


def decomposition_bound(a_number: int) -> int:
    """Upper bound on the number of indecomposable principally polarized factors of the Jacobian.

    Each factor contributes at least 1 to the a-number.
    """
    if a_number < 1:
        raise ParameterError("a-number must be at least 1", context={"a_number": a_number})
    return a_number


def superspecial_check(m: int) -> bool:
    """True iff a(m) = g; false for every m."""
    return a_number_formula(m) == make_params(m).g


def image_forms(basis: Basis, matrix: BitMatrix) -> List[StructuredPoly]:
    """A basis of the image of C, decoded to polynomials f with forms f dy."""
    if matrix.rows != len(basis):
        raise DimensionError("Matrix does not match the basis", context={"rows": matrix.rows, "basis": len(basis)})
    return [basis.decode(vector) for vector in column_space_basis(matrix)]


def coordinate_vector(basis: Basis, element_index: int) -> np.ndarray:
    vector = np.zeros(len(basis), dtype=np.uint8)
    vector[element_index] = 1
    return vector
