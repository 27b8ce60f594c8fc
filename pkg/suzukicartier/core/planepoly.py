# suzukicartier/core/planepoly.py

"""
The plane-model coordinate ring GF(2)[y, z] / (z^q + z + y^(q0+q) + y^(q0+1)).

A PlanePoly is a set of exponent pairs (i, j) standing for y^i z^j; GF(2)
coefficients make addition a symmetric difference. Canonical form has every
z-exponent below q. The Cartier oracle here works straight from the
definition C((A^2 + B^2 y) dy) = B dy and is the ground truth the table-driven
path in structured.py is checked against.
"""

from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
import random
from typing import Dict, FrozenSet, Iterable, Optional, Set, Tuple

from suzukicartier.core.params import SuzukiParams
from suzukicartier.utils.errors import ParameterError

Term = Tuple[int, int]


def _toggle(bucket: Set, item) -> None:
    if item in bucket:
        bucket.remove(item)
    else:
        bucket.add(item)


@dataclass(frozen=True)
class PlanePoly:
    """Element of GF(2)[y, z]; canonical means curve-reduced (all j < q)."""
    terms: FrozenSet[Term] = frozenset()
    canonical: bool = field(default=False, compare=False)

    @classmethod
    def from_terms(cls, terms: Iterable[Term], canonical: bool = False) -> "PlanePoly":
        """Build from terms, cancelling repeated pairs."""
        acc: Set[Term] = set()
        for term in terms:
            if term[0] < 0 or term[1] < 0:
                raise ParameterError("Negative exponent in plane term", context={"term": list(term)})
            _toggle(acc, term)
        return cls(frozenset(acc), canonical)

    @classmethod
    def zero(cls) -> "PlanePoly":
        return cls(frozenset(), True)

    @classmethod
    def one(cls) -> "PlanePoly":
        return cls(frozenset({(0, 0)}), True)

    @classmethod
    def monomial(cls, i: int, j: int) -> "PlanePoly":
        return cls.from_terms([(i, j)])

    def __add__(self, other: "PlanePoly") -> "PlanePoly":
        return PlanePoly(self.terms ^ other.terms, self.canonical and other.canonical)

    __sub__ = __add__

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_reduced(self, p: SuzukiParams) -> bool:
        return all(j < p.q for _, j in self.terms)

    def shift_y(self, a: int) -> "PlanePoly":
        """Multiply by y^a; leaves z-exponents untouched, so canonical form is kept."""
        return PlanePoly(frozenset((i + a, j) for i, j in self.terms), self.canonical)

    def sorted_terms(self) -> Tuple[Term, ...]:
        return tuple(sorted(self.terms, key=lambda t: (t[1], t[0])))

    def __repr__(self) -> str:
        if not self.terms:
            return "PlanePoly(0)"
        body = " + ".join(f"y^{i} z^{j}" for i, j in self.sorted_terms())
        return f"PlanePoly({body})"


def curve_reduce(p: SuzukiParams, f: PlanePoly) -> PlanePoly:
    """Rewrite z^q -> z + y^(q0+q) + y^(q0+1) until every z-exponent is below q."""
    if f.canonical:
        return f
    buckets: Dict[int, Set[int]] = defaultdict(set)
    for i, j in f.terms:
        _toggle(buckets[j], i)

    top = max(buckets, default=-1)
    for j in range(top, p.q - 1, -1):
        row = buckets.pop(j, None)
        if not row:
            continue
        for i in row:
            _toggle(buckets[j - p.q + 1], i)
            _toggle(buckets[j - p.q], i + p.q0 + p.q)
            _toggle(buckets[j - p.q], i + p.q0 + 1)

    return PlanePoly(
        frozenset((i, j) for j, row in buckets.items() for i in row),
        canonical=True
    )


def mul(p: SuzukiParams, f: PlanePoly, g: PlanePoly) -> PlanePoly:
    """Canonical product."""
    acc: Set[Term] = set()
    for i1, j1 in f.terms:
        for i2, j2 in g.terms:
            _toggle(acc, (i1 + i2, j1 + j2))
    return curve_reduce(p, PlanePoly(frozenset(acc)))


def square(p: SuzukiParams, f: PlanePoly) -> PlanePoly:
    """Canonical square; cross terms cancel in characteristic 2."""
    return curve_reduce(p, PlanePoly(frozenset((2 * i, 2 * j) for i, j in f.terms)))


def power(p: SuzukiParams, f: PlanePoly, exponent: int) -> PlanePoly:
    if exponent < 0:
        raise ParameterError("Negative exponent", context={"exponent": exponent})
    result = PlanePoly.one()
    base = curve_reduce(p, f)
    while exponent:
        if exponent & 1:
            result = mul(p, result, base)
        exponent >>= 1
        if exponent:
            base = square(p, base)
    return result


def pole_bound(p: SuzukiParams, f: PlanePoly) -> int:
    """Largest i vy + j vz over the terms; bounds the pole order at infinity from above."""
    return max((i * p.vy + j * p.vz for i, j in f.terms), default=0)


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# The functions h1, h2 and embedded monomials
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

@lru_cache(maxsize=None)
def h1(p: SuzukiParams) -> PlanePoly:
    """h1 = z^(2 q0) + y^(2 q0 + 1)."""
    return curve_reduce(p, PlanePoly.from_terms([(0, 2 * p.q0), (2 * p.q0 + 1, 0)]))


@lru_cache(maxsize=None)
def h2(p: SuzukiParams) -> PlanePoly:
    """h2 = z^(2 q0) y + h1^(2 q0)."""
    return PlanePoly.from_terms([(1, 2 * p.q0)]) + power(p, h1(p), 2 * p.q0)


@lru_cache(maxsize=None)
def _z_h1_h2(p: SuzukiParams, b: int, c: int, d: int) -> PlanePoly:
    return mul(
        p,
        power(p, PlanePoly.monomial(0, 1), b),
        mul(p, power(p, h1(p), c), power(p, h2(p), d))
    )


def embed_monomial(p: SuzukiParams, a: int, b: int, c: int, d: int) -> PlanePoly:
    """Canonical plane image of y^a z^b h1^c h2^d."""
    if min(a, b, c, d) < 0:
        raise ParameterError("Negative exponent in monomial", context={"monomial": [a, b, c, d]})
    return _z_h1_h2(p, b, c, d).shift_y(a)


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# Cartier operator from its definition
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

def make_z_even(p: SuzukiParams, f: PlanePoly) -> PlanePoly:
    """Replace one factor z of every odd-z term by z^q + y^(q0+q) + y^(q0+1).

    The result has only even z-exponents (at most 2q - 2) and is deliberately
    NOT curve-reduced: reducing it would bring odd z-exponents back.
    """
    acc: Set[Term] = set()
    for i, j in f.terms:
        if j % 2 == 0:
            _toggle(acc, (i, j))
            continue
        _toggle(acc, (i, j - 1 + p.q))
        _toggle(acc, (i + p.q0 + p.q, j - 1))
        _toggle(acc, (i + p.q0 + 1, j - 1))
    return PlanePoly(frozenset(acc), canonical=False)


def cartier_oracle(p: SuzukiParams, f: PlanePoly) -> PlanePoly:
    """Return h with C(f dy) = h dy.

    After make_z_even, f = A^2 + B^2 y where B collects the odd-y terms
    y^(2k+1) z^(2l) as y^k z^l. B already has z-degree below q.
    """
    f = curve_reduce(p, f)
    even = make_z_even(p, f)
    odd_part: Set[Term] = set()
    for i, j in even.terms:
        if i % 2 == 1:
            _toggle(odd_part, ((i - 1) // 2, j // 2))
    return PlanePoly(frozenset(odd_part), canonical=True)


def semilinearity_check(p: SuzukiParams, f: PlanePoly, g: PlanePoly) -> bool:
    """Check C(f^2 g dy) = f C(g dy) and C((f + g) dy) = C(f dy) + C(g dy)."""
    f = curve_reduce(p, f)
    g = curve_reduce(p, g)
    twisted = cartier_oracle(p, mul(p, square(p, f), g)) == mul(p, f, cartier_oracle(p, g))
    additive = cartier_oracle(p, f + g) == cartier_oracle(p, f) + cartier_oracle(p, g)
    return twisted and additive


def random_plane_poly(
    p: SuzukiParams,
    terms: int,
    max_y: int,
    rng: Optional[random.Random] = None
) -> PlanePoly:
    """Random sparse canonical polynomial with y-degree at most max_y."""
    rng = rng or random.Random()
    return PlanePoly.from_terms(
        ((rng.randrange(max_y + 1), rng.randrange(p.q)) for _ in range(terms)),
        canonical=True
    )
