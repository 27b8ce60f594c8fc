# suzukicartier/core/params.py

"""
Derived constants of the Suzuki curve S_m: z^q + z = y^q0 (y^q + y) over
GF(q), q = 2^(2m+1), q0 = 2^m. Closed formulas, semigroup counting and
point counts from the L-polynomial (1 + 2 q0 t + q t^2)^g.

Everything here is exact integer arithmetic on Python ints.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import gcd
from typing import List, Tuple

from loguru import logger

from suzukicartier.utils.errors import ParameterError

# Width of the machine word the derived constants must fit in. The SZCM cache
# header stores g in 32 bits; that narrower limit is checked by the cache codec.
PARAM_WORD_BITS = 64


@dataclass(frozen=True)
class SuzukiParams:
    """All derived constants of S_m."""
    m: int
    q0: int
    q: int
    g: int
    vy: int
    vz: int
    vh1: int
    vh2: int

    @property
    def sg_generators(self) -> Tuple[int, int, int, int]:
        """Generators of the Weierstrass semigroup at the point at infinity."""
        return (self.vy, self.vz, self.vh1, self.vh2)

    @property
    def canonical_degree(self) -> int:
        """Order of vanishing of dy at infinity, 2g - 2."""
        return 2 * self.g - 2

    def pole_order(self, a: int, b: int, c: int, d: int) -> int:
        """Pole order at infinity of y^a z^b h1^c h2^d."""
        return a * self.vy + b * self.vz + c * self.vh1 + d * self.vh2


@dataclass(frozen=True)
class ZetaData:
    """Data of L(S_m, t) = (1 + linear_coeff t + norm t^2)^multiplicity."""
    linear_coeff: int
    norm: int
    multiplicity: int

    def power_sum(self, k: int) -> int:
        """Power sum s_k of the two inverse roots of 1 + linear_coeff t + norm t^2.

        s_0 = 2, s_1 = -linear_coeff, s_k = -linear_coeff s_(k-1) - norm s_(k-2).
        """
        if k < 0:
            raise ParameterError("Power sum index must be non-negative", context={"k": k})
        prev, cur = 2, -self.linear_coeff
        if k == 0:
            return prev
        for _ in range(k - 1):
            prev, cur = cur, -self.linear_coeff * cur - self.norm * prev
        return cur

    def power_sums(self, count: int) -> List[int]:
        """Return [s_0, ..., s_(count-1)]."""
        return [self.power_sum(k) for k in range(count)]


@lru_cache(maxsize=None)
def make_params(m: int) -> SuzukiParams:
    """Build the constants of S_m.

    Raises:
        ParameterError: if m < 1 or g does not fit in PARAM_WORD_BITS bits
    """
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise ParameterError("Curve parameter m must be a positive integer", context={"m": repr(m)})

    # g = 2^m (2^(2m+1) - 1) has exactly 3m + 1 bits
    required = 3 * m + 1
    if required > PARAM_WORD_BITS:
        raise ParameterError(
            "Derived constants overflow the parameter word",
            context={"m": m, "required_bits": required, "word_bits": PARAM_WORD_BITS}
        )

    q0 = 1 << m
    q = 2 * q0 * q0
    g = q0 * (q - 1)

    params = SuzukiParams(
        m=m,
        q0=q0,
        q=q,
        g=g,
        vy=q,
        vz=q + q0,
        vh1=q + 2 * q0,
        vh2=q + 2 * q0 + 1,
    )
    if gcd(*params.sg_generators) != 1:
        raise ParameterError("Semigroup generators are not coprime", context={"m": m})
    logger.debug("Curve parameters derived", m=m, q0=q0, q=q, g=g)
    return params


def zeta_data(m: int) -> ZetaData:
    """L-polynomial data of S_m."""
    p = make_params(m)
    return ZetaData(linear_coeff=2 * p.q0, norm=p.q, multiplicity=p.g)


def a_number_formula(m: int) -> int:
    """Closed formula q0 (q0 + 1)(2 q0 + 1) / 6 for the a-number."""
    q0 = make_params(m).q0
    numerator = q0 * (q0 + 1) * (2 * q0 + 1)
    assert numerator % 6 == 0
    return numerator // 6


def nu_g_formula(m: int) -> int:
    """Closed formula q0 (10 q0 + 7)(q0 - 1) / 6 for the final-type entry at g."""
    q0 = make_params(m).q0
    numerator = q0 * (10 * q0 + 7) * (q0 - 1)
    assert numerator % 6 == 0
    return numerator // 6


def _triples_up_to(bound: int) -> int:
    # Walk (a, c) explicitly; for fixed (a, c) the admissible d are 0..bound-a-c.
    if bound < 0:
        return 0
    return sum(
        bound - a - c + 1
        for a, c in product(range(bound + 1), repeat=2)
        if a + c <= bound
    )


def lattice_count(m: int) -> int:
    """Count lattice points with a + c + d <= q0 - 1 plus those with a + c + d <= q0 - 2.

    Counted by explicit enumeration, independently of the closed formula.
    """
    q0 = make_params(m).q0
    return _triples_up_to(q0 - 1) + _triples_up_to(q0 - 2)


def _semigroup_reachable(p: SuzukiParams) -> bytearray:
    limit = p.canonical_degree
    reach = bytearray(limit + 1)
    reach[0] = 1
    gens = p.sg_generators
    for n in range(1, limit + 1):
        for s in gens:
            if s <= n and reach[n - s]:
                reach[n] = 1
                break
    return reach


def semigroup_elements(m: int) -> List[int]:
    """Elements of <q, q+q0, q+2q0, q+2q0+1> in [0, 2g-2], ascending."""
    reach = _semigroup_reachable(make_params(m))
    return [n for n, hit in enumerate(reach) if hit]


def semigroup_count(m: int) -> int:
    """Number of semigroup elements in [0, 2g-2]; equals g."""
    return sum(_semigroup_reachable(make_params(m)))


def point_count_zeta(m: int, k: int) -> int:
    """#S_m(GF(q^k)) = q^k + 1 - g s_k."""
    if k < 1:
        raise ParameterError("Extension degree k must be at least 1", context={"k": k})
    p = make_params(m)
    return p.q ** k + 1 - p.g * zeta_data(m).power_sum(k)


def is_maximal_over(m: int, k: int) -> bool:
    """True iff S_m meets the Hasse-Weil upper bound over GF(q^k)."""
    if k < 1:
        raise ParameterError("Extension degree k must be at least 1", context={"k": k})
    if k % 2:
        # q^(k/2) is not an integer for odd k
        return False
    p = make_params(m)
    half = p.q ** (k // 2)
    return point_count_zeta(m, k) == p.q ** k + 1 + 2 * p.g * half


def hasse_weil_holds(m: int, k: int) -> bool:
    """Check |N - q^k - 1| <= 2 g q^(k/2) as (N - q^k - 1)^2 <= 4 g^2 q^k."""
    p = make_params(m)
    deviation = point_count_zeta(m, k) - p.q ** k - 1
    return deviation * deviation <= 4 * p.g * p.g * p.q ** k


def ratio_bound_holds(m: int) -> bool:
    """Check 1/6 < a/g < 1/6 + 1/2^(m+1) by cross-multiplication."""
    p = make_params(m)
    a = a_number_formula(m)
    scale = 1 << (m + 1)
    lower = 6 * a > p.g
    upper = 6 * a * scale < p.g * (scale + 6)
    return lower and upper
