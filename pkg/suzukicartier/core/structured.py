# suzukicartier/core/structured.py

"""
Monomials y^a z^b h1^c h2^d, their normal form under

    z^2 = y h1 + h2,   h1^q0 = z + y^(q0+1),   h2^q0 = h1 + z y^q0,

the basis of regular 1-forms {y^a z^b h1^c h2^d dy} (b <= 1, c, d <= q0 - 1,
pole order <= 2g - 2), the table-driven Cartier operator and the Cartier matrix.

Normal-form monomials have pairwise distinct pole orders, so a normal form is
unique; that is what makes the table-driven and oracle-driven matrices agree.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import product
import random
from typing import Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Set, Tuple

import numpy as np
from loguru import logger

from suzukicartier.core.f2la import BitMatrix
from suzukicartier.core.params import SuzukiParams, make_params
from suzukicartier.core.planepoly import PlanePoly, Term, cartier_oracle, embed_monomial
from suzukicartier.utils.errors import InternalInvariantError, NotRegularFormError, ParameterError


class StructuredMonomial(NamedTuple):
    """Exponents of y, z, h1, h2."""
    a: int
    b: int
    c: int
    d: int

    def pole_order(self, p: SuzukiParams) -> int:
        return p.pole_order(self.a, self.b, self.c, self.d)

    def is_normal(self, p: SuzukiParams) -> bool:
        return self.b <= 1 and self.c < p.q0 and self.d < p.q0

    def times(self, other: "StructuredMonomial") -> "StructuredMonomial":
        return StructuredMonomial(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def split(self) -> Tuple["StructuredMonomial", "StructuredMonomial"]:
        """(halves, residue) with self = halves^2 * residue and residue in {0, 1}^4."""
        return (
            StructuredMonomial(self.a // 2, self.b // 2, self.c // 2, self.d // 2),
            StructuredMonomial(self.a % 2, self.b % 2, self.c % 2, self.d % 2),
        )

    def label(self) -> str:
        parts = [
            name if exp == 1 else f"{name}^{exp}"
            for name, exp in zip(("y", "z", "h1", "h2"), self)
            if exp
        ]
        return "*".join(parts) or "1"


ONE = StructuredMonomial(0, 0, 0, 0)
RESIDUES: Tuple[StructuredMonomial, ...] = tuple(
    StructuredMonomial(*exps) for exps in product((0, 1), repeat=4)
)


def _toggle(bucket: Set, item) -> None:
    if item in bucket:
        bucket.remove(item)
    else:
        bucket.add(item)


@dataclass(frozen=True)
class StructuredPoly:
    """GF(2)-combination of StructuredMonomials."""
    terms: FrozenSet[StructuredMonomial] = frozenset()

    @classmethod
    def from_terms(cls, terms: Iterable[Sequence[int]]) -> "StructuredPoly":
        acc: Set[StructuredMonomial] = set()
        for term in terms:
            mon = StructuredMonomial(*term)
            if min(mon) < 0:
                raise ParameterError("Negative exponent in monomial", context={"monomial": list(mon)})
            _toggle(acc, mon)
        return cls(frozenset(acc))

    @classmethod
    def monomial(cls, a: int, b: int, c: int, d: int) -> "StructuredPoly":
        return cls.from_terms([(a, b, c, d)])

    @classmethod
    def zero(cls) -> "StructuredPoly":
        return cls()

    def __add__(self, other: "StructuredPoly") -> "StructuredPoly":
        return StructuredPoly(self.terms ^ other.terms)

    __sub__ = __add__

    def __mul__(self, other: "StructuredPoly") -> "StructuredPoly":
        acc: Set[StructuredMonomial] = set()
        for left in self.terms:
            for right in other.terms:
                _toggle(acc, left.times(right))
        return StructuredPoly(frozenset(acc))

    def __pow__(self, exponent: int) -> "StructuredPoly":
        result = StructuredPoly.monomial(0, 0, 0, 0)
        for _ in range(exponent):
            result = result * self
        return result

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_normal(self, p: SuzukiParams) -> bool:
        return all(mon.is_normal(p) for mon in self.terms)

    def max_pole(self, p: SuzukiParams) -> int:
        return max((mon.pole_order(p) for mon in self.terms), default=0)

    def sorted_terms(self, p: SuzukiParams) -> List[StructuredMonomial]:
        return sorted(self.terms, key=lambda mon: (mon.pole_order(p), mon))

    def embed(self, p: SuzukiParams) -> PlanePoly:
        result = PlanePoly.zero()
        for mon in self.terms:
            result = result + embed_monomial(p, *mon)
        return result

    def __repr__(self) -> str:
        if not self.terms:
            return "StructuredPoly(0)"
        return "StructuredPoly(" + " + ".join(mon.label() for mon in sorted(self.terms)) + ")"


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# Basis of regular 1-forms
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

@dataclass(frozen=True)
class Basis:
    """Normal-form monomials with pole order <= 2g - 2, ascending by pole order."""
    params: SuzukiParams
    elements: Tuple[StructuredMonomial, ...]
    index: Dict[StructuredMonomial, int] = field(compare=False, repr=False, default_factory=dict)

    @classmethod
    def from_elements(cls, params: SuzukiParams, elements: Sequence[StructuredMonomial]) -> "Basis":
        ordered = tuple(elements)
        return cls(params, ordered, {mon: k for k, mon in enumerate(ordered)})

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[StructuredMonomial]:
        return iter(self.elements)

    def __getitem__(self, k: int) -> StructuredMonomial:
        return self.elements[k]

    def __contains__(self, mon: object) -> bool:
        return mon in self.index

    def index_of(self, mon: StructuredMonomial) -> int:
        try:
            return self.index[mon]
        except KeyError as e:
            raise NotRegularFormError(
                "Monomial is not a basis element",
                context={"monomial": tuple(mon), "pole": mon.pole_order(self.params)},
                original_error=e
            )

    def pole_orders(self) -> List[int]:
        return [mon.pole_order(self.params) for mon in self.elements]

    def decode(self, vector: Iterable[int]) -> StructuredPoly:
        """StructuredPoly with the basis elements whose coordinate is 1."""
        return StructuredPoly(frozenset(self.elements[k] for k, bit in enumerate(vector) if bit))


def normal_monomials(p: SuzukiParams, bound: int) -> List[StructuredMonomial]:
    """All normal-form monomials with pole order <= bound, ascending by pole order."""
    found = []
    for b, c, d in product(range(2), range(p.q0), range(p.q0)):
        base = p.pole_order(0, b, c, d)
        a = 0
        while base + a * p.vy <= bound:
            found.append(StructuredMonomial(a, b, c, d))
            a += 1
    found.sort(key=lambda mon: (mon.pole_order(p), mon))
    return found


@lru_cache(maxsize=None)
def enumerate_basis(p: SuzukiParams) -> Basis:
    """Enumerate the basis of regular 1-forms.

    Raises:
        InternalInvariantError: if the count differs from g or two pole orders coincide
    """
    elements = normal_monomials(p, p.canonical_degree)
    poles = [mon.pole_order(p) for mon in elements]
    if len(elements) != p.g:
        raise InternalInvariantError(
            "Basis size differs from the genus",
            context={"m": p.m, "size": len(elements), "g": p.g}
        )
    if len(set(poles)) != len(poles):
        raise InternalInvariantError("Basis pole orders are not distinct", context={"m": p.m})
    logger.debug("Basis enumerated", m=p.m, size=len(elements))
    return Basis.from_elements(p, elements)


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# Normal form
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

def _violation(p: SuzukiParams, mon: StructuredMonomial) -> int:
    # d first, then c, then b
    if mon.d >= p.q0:
        return 3
    if mon.c >= p.q0:
        return 2
    if mon.b >= 2:
        return 1
    return 0


def _rewrite(p: SuzukiParams, mon: StructuredMonomial) -> Tuple[StructuredMonomial, StructuredMonomial]:
    a, b, c, d = mon
    kind = _violation(p, mon)
    if kind == 3:
        # h2^q0 = h1 + z y^q0
        return (StructuredMonomial(a, b, c + 1, d - p.q0), StructuredMonomial(a + p.q0, b + 1, c, d - p.q0))
    if kind == 2:
        # h1^q0 = z + y^(q0+1)
        return (StructuredMonomial(a, b + 1, c - p.q0, d), StructuredMonomial(a + p.q0 + 1, b, c - p.q0, d))
    # z^2 = y h1 + h2
    return (StructuredMonomial(a + 1, b - 2, c + 1, d), StructuredMonomial(a, b - 2, c, d + 1))


def normalize(p: SuzukiParams, poly: StructuredPoly) -> StructuredPoly:
    """Rewrite until every monomial satisfies b <= 1, c <= q0 - 1, d <= q0 - 1.

    Raises:
        InternalInvariantError: if the rewriting loop exceeds 64 q0 (initial term count) steps
    """
    done: Set[StructuredMonomial] = set()
    pending: Set[StructuredMonomial] = set()
    for mon in poly.terms:
        (pending if _violation(p, mon) else done).add(mon)

    cap = 64 * p.q0 * max(1, len(poly.terms))
    steps = 0
    while pending:
        steps += 1
        if steps > cap:
            raise InternalInvariantError(
                "Normal form rewriting did not terminate within its step cap",
                context={"m": p.m, "cap": cap, "pending": len(pending)}
            )
        worst = max(pending, key=lambda mon: (_violation(p, mon), mon.pole_order(p), mon))
        pending.remove(worst)
        for new in _rewrite(p, worst):
            _toggle(pending if _violation(p, new) else done, new)
    return StructuredPoly(frozenset(done))


def random_structured_poly(
    p: SuzukiParams,
    terms: int,
    rng: Optional[random.Random] = None
) -> StructuredPoly:
    """Random polynomial with small out-of-normal-form exponents (b < 4, c, d < 2 q0)."""
    rng = rng or random.Random()
    return StructuredPoly.from_terms(
        (rng.randrange(2 * p.q0), rng.randrange(4), rng.randrange(2 * p.q0), rng.randrange(2 * p.q0))
        for _ in range(terms)
    )


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# Change of representation: plane polynomials back to monomials
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

class EmbeddedSpan:
    """Span of embedded generators, kept as an XOR basis of plane-monomial bit rows.

    Elimination is done once at construction; solve() only reduces the query.
    """

    def __init__(self, p: SuzukiParams, generators: Sequence[StructuredMonomial]):
        self.params = p
        self.generators = tuple(generators)
        self._columns: Dict[Term, int] = {}
        self._pivots: Dict[int, Tuple[int, int]] = {}

        for k, mon in enumerate(self.generators):
            vector = self._encode(embed_monomial(p, *mon), grow=True)
            vector, combination = self._reduce(vector, 1 << k)
            if not vector:
                raise InternalInvariantError(
                    "Embedded generators are linearly dependent",
                    context={"m": p.m, "generator": tuple(mon)}
                )
            self._pivots[vector.bit_length() - 1] = (vector, combination)
        logger.debug("Embedded span factorised", m=p.m, generators=len(self.generators), columns=len(self._columns))

    def __len__(self) -> int:
        return len(self.generators)

    def _encode(self, f: PlanePoly, grow: bool = False) -> int:
        vector = 0
        for term in f.terms:
            column = self._columns.get(term)
            if column is None:
                if not grow:
                    raise NotRegularFormError(
                        "Plane polynomial has a term outside the span",
                        context={"m": self.params.m, "term": term}
                    )
                column = len(self._columns)
                self._columns[term] = column
            vector ^= 1 << column
        return vector

    def _reduce(self, vector: int, combination: int) -> Tuple[int, int]:
        while vector:
            pivot = self._pivots.get(vector.bit_length() - 1)
            if pivot is None:
                break
            vector ^= pivot[0]
            combination ^= pivot[1]
        return vector, combination

    def solve(self, f: PlanePoly) -> int:
        """Bit mask of the generators summing to f.

        Raises:
            NotRegularFormError: if f is not in the span
        """
        residual, combination = self._reduce(self._encode(f), 0)
        if residual:
            raise NotRegularFormError(
                "Plane polynomial is not in the span of the embedded generators",
                context={"m": self.params.m, "terms": len(f)}
            )
        return combination

    def coordinates(self, f: PlanePoly) -> np.ndarray:
        combination = self.solve(f)
        return np.array(
            [(combination >> k) & 1 for k in range(len(self.generators))],
            dtype=np.uint8
        )

    def express(self, f: PlanePoly) -> StructuredPoly:
        combination = self.solve(f)
        return StructuredPoly(frozenset(
            mon for k, mon in enumerate(self.generators) if (combination >> k) & 1
        ))


@lru_cache(maxsize=None)
def span_up_to(p: SuzukiParams, bound: int) -> EmbeddedSpan:
    """EmbeddedSpan of all normal-form monomials with pole order <= bound."""
    return EmbeddedSpan(p, normal_monomials(p, bound))


@lru_cache(maxsize=None)
def basis_span(p: SuzukiParams) -> EmbeddedSpan:
    return EmbeddedSpan(p, enumerate_basis(p).elements)


def lift(p: SuzukiParams, f: PlanePoly, bound: int) -> StructuredPoly:
    """Normal-form StructuredPoly equal to f, given that f has pole order <= bound."""
    return span_up_to(p, bound).express(f)


def to_basis_coords(p: SuzukiParams, basis: Basis, f: PlanePoly) -> np.ndarray:
    """Coordinates of f in the embedded basis, as a uint8 vector of length g.

    Raises:
        NotRegularFormError: if f is not a regular form
    """
    span = basis_span(p) if basis.elements == enumerate_basis(p).elements else EmbeddedSpan(p, basis.elements)
    return span.coordinates(f)


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# The table of the 16 residue monomials
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

def image_pole_bound(p: SuzukiParams, pole: int) -> int:
    """Pole order bound for h with C(f dy) = h dy when f has pole order <= pole.

    f dy vanishes to order 2g - 2 - pole at infinity and the Cartier operator
    takes valuation v to at least ceil((v - 1) / 2).
    """
    return (2 * p.g - 1 + pole) // 2


@lru_cache(maxsize=None)
def _table(p: SuzukiParams) -> Tuple[Tuple[StructuredMonomial, StructuredPoly], ...]:
    bound = max(image_pole_bound(p, r.pole_order(p)) for r in RESIDUES)
    span = span_up_to(p, bound)
    rows = []
    for residue in RESIDUES:
        image = cartier_oracle(p, embed_monomial(p, *residue))
        try:
            rows.append((residue, span.express(image)))
        except NotRegularFormError as e:
            raise InternalInvariantError(
                "Cartier image of a residue monomial could not be lifted",
                context={"m": p.m, "residue": residue.label(), "bound": bound},
                original_error=e
            )
    logger.debug("Cartier table regenerated", m=p.m, bound=bound)
    return tuple(rows)


def cartier_table(p: SuzukiParams) -> Dict[StructuredMonomial, StructuredPoly]:
    """Normal form of C(r dy) / dy for the 16 residue monomials r."""
    return dict(_table(p))


def printed_table_rows(p: SuzukiParams) -> Dict[StructuredMonomial, StructuredPoly]:
    """Hand-derived table rows, used only to cross-check cartier_table.

    h2 and y h1 carry h2^(q0/2); at m = 1 this is the printed "+ h2".
    The h2 exponent of the last term of y z h1 h2 is q0/2.
    """
    half = p.q0 // 2
    mono = StructuredPoly.monomial
    rows = {
        (0, 0, 0, 0): StructuredPoly.zero(),
        (1, 0, 0, 0): mono(0, 0, 0, 0),
        (0, 1, 0, 0): mono(half, 0, 0, 0),
        (0, 0, 1, 0): mono(p.q0, 0, 0, 0),
        (0, 0, 0, 1): mono(half, 0, half, 0) + mono(0, 0, 0, half),
        (1, 1, 0, 0): mono(0, 0, half, 0),
        (1, 0, 1, 0): mono(half, 0, half, 0) + mono(0, 0, 0, half),
        (0, 1, 1, 0): mono(half, 0, 0, half),
        (0, 1, 0, 1): mono(0, 0, half, half),
        (0, 0, 1, 1): mono(0, 0, 1, 0) + mono(p.q0, 1, 0, 0),
        (1, 1, 1, 0): mono(half, 1, 0, 0) + mono(0, 0, half, half),
        (1, 1, 0, 1): mono(0, 1, half, 0) + mono(half + 1, 0, 0, half),
        (1, 0, 0, 1): mono(0, 1, 0, 0) + mono(p.q0 + 1, 0, 0, 0),
        (0, 1, 1, 1): mono(half, 1, 0, half) + mono(0, 0, half + 1, 0),
        (1, 0, 1, 1): mono(half, 1, half, 0) + mono(0, 1, 0, half),
        (1, 1, 1, 1): mono(half, 0, 0, 1) + mono(0, 1, half, half),
    }
    return {StructuredMonomial(*key): normalize(p, value) for key, value in rows.items()}


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# Table-driven Cartier operator and the Cartier matrix
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

def cartier_structured(
    p: SuzukiParams,
    basis_element: StructuredMonomial,
    table: Optional[Dict[StructuredMonomial, StructuredPoly]] = None
) -> StructuredPoly:
    """C(y^(2e1+r1) z^(2e2+r2) h1^(2e3+r3) h2^(2e4+r4) dy) = y^e1 z^e2 h1^e3 h2^e4 C(residue dy).

    Raises:
        InternalInvariantError: if the image has a term of pole order above 2g - 2
    """
    table = table if table is not None else cartier_table(p)
    halves, residue = StructuredMonomial(*basis_element).split()
    image = normalize(p, table[residue] * StructuredPoly(frozenset({halves})))
    too_high = [mon for mon in image.terms if mon.pole_order(p) > p.canonical_degree]
    if too_high:
        raise InternalInvariantError(
            "Cartier image is not a regular form",
            context={"m": p.m, "element": tuple(basis_element), "pole": max(mon.pole_order(p) for mon in too_high)}
        )
    return image


class MatrixPath(str, Enum):
    """How the columns of the Cartier matrix are computed."""
    STRUCTURED = "structured"
    ORACLE = "oracle"


def _structured_columns(m: int, indices: Sequence[int]) -> List[List[int]]:
    p = make_params(m)
    basis = enumerate_basis(p)
    table = cartier_table(p)
    return [
        sorted(basis.index_of(mon) for mon in cartier_structured(p, basis[j], table).terms)
        for j in indices
    ]


def _oracle_columns(m: int, indices: Sequence[int]) -> List[List[int]]:
    p = make_params(m)
    basis = enumerate_basis(p)
    span = basis_span(p)
    columns = []
    for j in indices:
        combination = span.solve(cartier_oracle(p, embed_monomial(p, *basis[j])))
        columns.append([k for k in range(len(basis)) if (combination >> k) & 1])
    return columns


def _chunks(total: int, parts: int) -> List[List[int]]:
    return [list(range(start, total, parts)) for start in range(parts)]


def build_cartier_matrix(
    p: SuzukiParams,
    basis: Optional[Basis] = None,
    path: MatrixPath = MatrixPath.STRUCTURED,
    workers: Optional[int] = None
) -> BitMatrix:
    """g x g matrix whose column j holds the basis coordinates of C(basis[j])."""
    basis = basis or enumerate_basis(p)
    if basis.elements != enumerate_basis(p).elements:
        raise InternalInvariantError("Cartier matrices are built on the canonical basis only", context={"m": p.m})
    path = MatrixPath(path)
    worker = _structured_columns if path is MatrixPath.STRUCTURED else _oracle_columns
    g = len(basis)

    if workers and workers > 1:
        chunks = _chunks(g, workers)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(worker, [p.m] * len(chunks), chunks))
        columns: List[List[int]] = [[] for _ in range(g)]
        for chunk, chunk_columns in zip(chunks, results):
            for j, rows in zip(chunk, chunk_columns):
                columns[j] = rows
    else:
        columns = worker(p.m, range(g))

    matrix = BitMatrix.from_columns(g, columns)
    logger.info("Cartier matrix built", m=p.m, path=path.value, g=g, workers=workers or 1)
    return matrix
