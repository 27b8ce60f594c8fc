# suzukicartier/core/gf2n.py

"""
Arithmetic in GF(2^n), n <= 24, in the polynomial basis.

Elements are n-bit integers (bit i is the coefficient of x^i). The modulus of
GF(2^n) is the irreducible polynomial of degree n with the smallest integer
encoding, so field(n) is the same on every run.
"""

from dataclasses import dataclass
from functools import lru_cache
import random
from typing import Iterator, List, Optional

import numpy as np
from loguru import logger

from suzukicartier.core.params import make_params
from suzukicartier.utils.errors import BoundExceededError, FieldError, FieldMismatchError

MAX_DEGREE = 24
POINT_COUNT_BITS = 24
POINT_CHUNK = 1 << 16


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# Polynomials over GF(2) as integers
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

def clmul(a: int, b: int) -> int:
    """Carry-less product of two bit-vector polynomials."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def poly_mod(a: int, modulus: int) -> int:
    """Remainder of a modulo a nonzero polynomial."""
    deg = modulus.bit_length() - 1
    while a.bit_length() - 1 >= deg:
        a ^= modulus << (a.bit_length() - 1 - deg)
    return a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def _proper_divisors(n: int) -> List[int]:
    return [k for k in range(1, n) if n % k == 0]


def is_irreducible(poly: int) -> bool:
    """Rabin test: x^(2^n) = x mod f and gcd(x^(2^k) - x, f) = 1 for proper divisors k of n."""
    n = poly.bit_length() - 1
    if n < 1:
        return False

    def frobenius_power_of_x(k: int) -> int:
        value = 0b10
        for _ in range(k):
            value = poly_mod(clmul(value, value), poly)
        return value

    x = poly_mod(0b10, poly)
    if frobenius_power_of_x(n) != x:
        return False
    return all(
        poly_gcd(poly, frobenius_power_of_x(k) ^ x) == 1
        for k in _proper_divisors(n)
    )


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# Fields and elements
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

@dataclass(frozen=True)
class FieldSpec:
    """GF(2^n) given by an irreducible modulus of degree n."""
    n: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus.bit_length() - 1 != self.n or not is_irreducible(self.modulus):
            raise FieldError(
                "Modulus is not irreducible of the stated degree",
                context={"n": self.n, "modulus": bin(self.modulus)}
            )

    @property
    def order(self) -> int:
        return 1 << self.n

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(self, value)

    def reduce(self, value: int) -> int:
        return poly_mod(value, self.modulus)

    def mul_int(self, a: int, b: int) -> int:
        return poly_mod(clmul(a, b), self.modulus)

    def random_element(self, rng: Optional[random.Random] = None) -> "FieldElement":
        rng = rng or random.Random()
        return FieldElement(self, rng.getrandbits(self.n))

    def elements(self) -> Iterator["FieldElement"]:
        for value in range(self.order):
            yield FieldElement(self, value)

    # - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - -
    # Vectorised helpers over numpy uint64 arrays
    # - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - -

    def mul_array(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise product of two arrays of field elements."""
        a = np.asarray(a, dtype=np.uint64)
        b = np.asarray(b, dtype=np.uint64)
        one = np.uint64(1)
        acc = np.zeros(np.broadcast(a, b).shape, dtype=np.uint64)
        for i in range(self.n):
            bit = (b >> np.uint64(i)) & one
            acc ^= (a << np.uint64(i)) * bit
        for deg in range(2 * self.n - 2, self.n - 1, -1):
            hit = (acc >> np.uint64(deg)) & one
            acc ^= np.uint64(self.modulus << (deg - self.n)) * hit
        return acc

    def linear_images(self, images: List[int], values: np.ndarray) -> np.ndarray:
        """Apply the GF(2)-linear map sending x^i to images[i] to every entry of values."""
        values = np.asarray(values, dtype=np.uint64)
        one = np.uint64(1)
        acc = np.zeros_like(values)
        for i, image in enumerate(images):
            acc ^= np.uint64(image) * ((values >> np.uint64(i)) & one)
        return acc


@dataclass(frozen=True)
class FieldElement:
    """An element of a FieldSpec, kept reduced."""
    spec: FieldSpec
    value: int

    def __post_init__(self) -> None:
        if self.value < 0:
            raise FieldError("Field element encodings are non-negative", context={"value": self.value})
        if self.value.bit_length() > self.spec.n:
            object.__setattr__(self, "value", self.spec.reduce(self.value))

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise FieldError("Operand is not a field element", context={"type": type(other).__name__})
        if other.spec != self.spec:
            raise FieldMismatchError(
                "Field elements belong to different fields",
                context={"left": self.spec.n, "right": other.spec.n}
            )

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec, self.value ^ other.value)

    __sub__ = __add__

    def __neg__(self) -> "FieldElement":
        return self

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec, self.spec.mul_int(self.value, other.value))

    def square(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.mul_int(self.value, self.value))

    def __pow__(self, exponent: int) -> "FieldElement":
        if exponent < 0:
            raise FieldError("Negative exponents are not supported", context={"exponent": exponent})
        result, base = 1, self.value
        while exponent:
            if exponent & 1:
                result = self.spec.mul_int(result, base)
            base = self.spec.mul_int(base, base)
            exponent >>= 1
        return FieldElement(self.spec, result)

    def sqrt(self) -> "FieldElement":
        """Unique square root, a^(2^(n-1))."""
        value = self.value
        for _ in range(self.spec.n - 1):
            value = self.spec.mul_int(value, value)
        return FieldElement(self.spec, value)

    def is_zero(self) -> bool:
        return self.value == 0

    def __repr__(self) -> str:
        return f"GF(2^{self.spec.n})({self.value:#x})"


@lru_cache(maxsize=None)
def field(n: int) -> FieldSpec:
    """GF(2^n) with the irreducible modulus of degree n of smallest integer encoding."""
    if not 1 <= n <= MAX_DEGREE:
        raise FieldError("Extension degree out of range", context={"n": n, "max": MAX_DEGREE})
    for candidate in range(1 << n, 1 << (n + 1)):
        if is_irreducible(candidate):
            logger.debug("Field modulus selected", n=n, modulus=bin(candidate))
            return FieldSpec(n=n, modulus=candidate)
    raise FieldError("No irreducible polynomial found", context={"n": n})  # unreachable


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def square(a: FieldElement) -> FieldElement:
    return a.square()


def power(a: FieldElement, exponent: int) -> FieldElement:
    return a ** exponent


def sqrt(a: FieldElement) -> FieldElement:
    return a.sqrt()


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# Brute-force point counting on the affine model
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

def _frobenius_images(spec: FieldSpec, times: int) -> List[int]:
    """Images of the basis x^i under a -> a^(2^times)."""
    images = []
    for i in range(spec.n):
        value = 1 << i
        for _ in range(times):
            value = spec.mul_int(value, value)
        images.append(value)
    return images


def point_count_naive(m: int, k: int, chunk: int = POINT_CHUNK) -> int:
    """Count points of z^q + z = y^q0 (y^q + y) over GF(q^k), plus the point at infinity.

    The GF(2)-linear map z -> z^q + z is tabulated over the whole field, giving the
    number of z above every right-hand side; the y-range is then swept in chunks.
    """
    p = make_params(m)
    if k < 1:
        raise FieldError("Extension degree k must be at least 1", context={"k": k})
    n = (2 * m + 1) * k
    if n > POINT_COUNT_BITS:
        raise BoundExceededError(
            "Field too large for brute-force point counting",
            context={"m": m, "k": k, "bits": n, "max_bits": POINT_COUNT_BITS}
        )

    spec = field(n)
    frob_q = _frobenius_images(spec, 2 * m + 1)
    frob_q0 = _frobenius_images(spec, m)
    artin_schreier = [image ^ (1 << i) for i, image in enumerate(frob_q)]

    everything = np.arange(spec.order, dtype=np.uint64)
    fibre = np.bincount(
        spec.linear_images(artin_schreier, everything).astype(np.int64),
        minlength=spec.order
    )

    affine = 0
    for start in range(0, spec.order, chunk):
        ys = np.arange(start, min(start + chunk, spec.order), dtype=np.uint64)
        rhs = spec.mul_array(
            spec.linear_images(frob_q0, ys),
            spec.linear_images(artin_schreier, ys)
        )
        affine += int(fibre[rhs.astype(np.int64)].sum())

    logger.debug("Naive point count", m=m, k=k, affine=affine)
    return affine + 1
