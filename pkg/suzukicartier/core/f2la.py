# suzukicartier/core/f2la.py

"""
Dense GF(2) linear algebra on bit-packed rows.

Row i of a BitMatrix is ceil(cols / 64) uint64 words; column j sits in word
j // 64 at bit j % 64, and padding bits past cols are zero. Elimination only
swaps rows, so kernel coordinates stay aligned with basis indices.

The Cartier operator is 1/2-linear, but its matrix on the monomial basis has
GF(2) entries, so the matrix of C^k is M^k and the dimension of the kernel of
the plain product equals that of the semilinear kernel: entrywise squaring
permutes the solutions.
"""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from suzukicartier.core.models import RankProfile
from suzukicartier.utils.errors import DimensionError

WORD_BITS = 64


def words_for(cols: int) -> int:
    return (cols + WORD_BITS - 1) // WORD_BITS


def _bit(j: int) -> Tuple[int, np.uint64]:
    return j // WORD_BITS, np.uint64(1 << (j % WORD_BITS))


@dataclass(frozen=True, eq=False)
class BitMatrix:
    """Immutable rows x cols matrix over GF(2)."""
    rows: int
    cols: int
    data: np.ndarray

    def __post_init__(self) -> None:
        expected = (self.rows, words_for(self.cols))
        if self.data.shape != expected or self.data.dtype != np.uint64:
            raise DimensionError(
                "Packed data does not match the matrix shape",
                context={"shape": list(self.data.shape), "expected": list(expected), "dtype": str(self.data.dtype)}
            )
        if not self.padding_clean():
            raise DimensionError("Padding bits past the last column are set", context={"cols": self.cols})
        self.data.flags.writeable = False

    # - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - -
    # Construction
    # - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - -

    @classmethod
    def zeros(cls, rows: int, cols: Optional[int] = None) -> "BitMatrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, np.zeros((rows, words_for(cols)), dtype=np.uint64))

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        data = np.zeros((n, words_for(n)), dtype=np.uint64)
        for i in range(n):
            word, mask = _bit(i)
            data[i, word] = mask
        return cls(n, n, data)

    @classmethod
    def from_dense(cls, dense: np.ndarray) -> "BitMatrix":
        """Pack a 0/1 array of shape (rows, cols)."""
        bits = (np.asarray(dense) & 1).astype(np.uint8)
        if bits.ndim != 2:
            raise DimensionError("Dense matrix must be two-dimensional", context={"ndim": bits.ndim})
        rows, cols = bits.shape
        padded = np.zeros((rows, words_for(cols) * WORD_BITS), dtype=np.uint8)
        padded[:, :cols] = bits
        packed = np.packbits(padded, axis=1, bitorder="little")
        data = np.ascontiguousarray(packed).view("<u8").astype(np.uint64)
        return cls(rows, cols, data.reshape(rows, words_for(cols)))

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Iterable[int]]) -> "BitMatrix":
        """Matrix whose column j has ones exactly at the row indices columns[j]."""
        data = np.zeros((rows, words_for(len(columns))), dtype=np.uint64)
        for j, row_indices in enumerate(columns):
            idx = np.fromiter(row_indices, dtype=np.int64)
            if idx.size == 0:
                continue
            if idx.min() < 0 or idx.max() >= rows:
                raise DimensionError("Row index out of range", context={"column": j, "rows": rows})
            word, mask = _bit(j)
            data[idx, word] |= mask
        return cls(rows, len(columns), data)

    # - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - -
    # Access
    # - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - - -

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def words(self) -> int:
        return words_for(self.cols)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def padding_clean(self) -> bool:
        spare = self.words * WORD_BITS - self.cols
        if spare == 0 or self.rows == 0:
            return True
        mask = np.uint64(((1 << spare) - 1) << (WORD_BITS - spare))
        return not np.any(self.data[:, -1] & mask)

    def get(self, i: int, j: int) -> int:
        word, mask = _bit(j)
        return int(bool(self.data[i, word] & mask))

    def to_dense(self) -> np.ndarray:
        as_bytes = np.ascontiguousarray(self.data.astype("<u8")).view(np.uint8)
        return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :self.cols]

    def column(self, j: int) -> np.ndarray:
        word, mask = _bit(j)
        return ((self.data[:, word] & mask) != 0).astype(np.uint8)

    def column_support(self, j: int) -> List[int]:
        return [int(i) for i in np.flatnonzero(self.column(j))]

    def matvec(self, vector: np.ndarray) -> np.ndarray:
        """M v over GF(2)."""
        v = np.asarray(vector, dtype=np.uint8) & 1
        if v.shape != (self.cols,):
            raise DimensionError("Vector length does not match the column count", context={"cols": self.cols, "length": int(v.size)})
        acc = np.zeros(self.rows, dtype=np.uint8)
        for j in np.flatnonzero(v):
            acc ^= self.column(int(j))
        return acc

    def with_column(self, vector: np.ndarray) -> "BitMatrix":
        """Copy of self with vector appended as a last column."""
        dense = np.hstack([self.to_dense(), (np.asarray(vector, dtype=np.uint8) & 1).reshape(-1, 1)])
        return BitMatrix.from_dense(dense)

    def first_differing_column(self, other: "BitMatrix") -> Optional[int]:
        """Smallest column index where self and other differ, None when equal."""
        if self.shape != other.shape:
            raise DimensionError("Matrices have different shapes", context={"left": list(self.shape), "right": list(other.shape)})
        diff = BitMatrix(self.rows, self.cols, self.data ^ other.data)
        columns = np.flatnonzero(diff.to_dense().any(axis=0))
        return int(columns[0]) if columns.size else None

    def count_ones(self) -> int:
        return int(self.to_dense().sum())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.data, other.data)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols}, ones={self.count_ones()})"


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# Elimination
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

def _eliminate(matrix: BitMatrix, reduced: bool) -> Tuple[np.ndarray, List[int]]:
    """Row echelon form of a private copy; RREF when reduced. Returns (rows, pivot columns)."""
    work = matrix.data.copy()
    pivots: List[int] = []
    r = 0
    for col in range(matrix.cols):
        if r == matrix.rows:
            break
        word, mask = _bit(col)
        hits = np.flatnonzero(work[r:, word] & mask)
        if hits.size == 0:
            continue
        pivot = r + int(hits[0])
        if pivot != r:
            work[[r, pivot]] = work[[pivot, r]]
        scope = work if reduced else work[r + 1:]
        offset = 0 if reduced else r + 1
        targets = np.flatnonzero(scope[:, word] & mask) + offset
        targets = targets[targets != r]
        if targets.size:
            work[targets] ^= work[r]
        pivots.append(col)
        r += 1
    return work, pivots


def rank(matrix: BitMatrix) -> int:
    """GF(2) rank."""
    return len(_eliminate(matrix, reduced=False)[1])


def kernel_basis(matrix: BitMatrix) -> List[np.ndarray]:
    """Basis of {v : M v = 0} as uint8 vectors, one per free column."""
    work, pivots = _eliminate(matrix, reduced=True)
    pivot_set = set(pivots)
    basis = []
    for free in range(matrix.cols):
        if free in pivot_set:
            continue
        vector = np.zeros(matrix.cols, dtype=np.uint8)
        vector[free] = 1
        word, mask = _bit(free)
        for row, col in enumerate(pivots):
            if work[row, word] & mask:
                vector[col] = 1
        basis.append(vector)
    return basis


def column_space_basis(matrix: BitMatrix) -> List[np.ndarray]:
    """Reduced echelon basis of the column space, one uint8 vector per pivot."""
    transposed = BitMatrix.from_dense(matrix.to_dense().T)
    work, pivots = _eliminate(transposed, reduced=True)
    echelon = BitMatrix(len(pivots), transposed.cols, work[:len(pivots)].copy()).to_dense()
    return [echelon[k].copy() for k in range(len(pivots))]


def matmul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """A B over GF(2): row i of the product is the XOR of the rows k of B with A[i, k] = 1."""
    if a.cols != b.rows:
        raise DimensionError("Inner dimensions differ", context={"left": list(a.shape), "right": list(b.shape)})
    data = np.zeros((a.rows, b.words), dtype=np.uint64)
    for k in range(a.cols):
        word, mask = _bit(k)
        targets = np.flatnonzero(a.data[:, word] & mask)
        if targets.size:
            data[targets] ^= b.data[k]
    return BitMatrix(a.rows, b.cols, data)


def rank_profile(matrix: BitMatrix) -> RankProfile:
    """r_k = rank(M^k) for k = 1, 2, ... until r_k = 0 or the rank stops dropping.

    A matrix that is not nilpotent gets nilpotency None; its last recorded rank
    is the stable rank.
    """
    if not matrix.is_square():
        raise DimensionError("Rank profile needs a square matrix", context={"shape": list(matrix.shape)})
    ranks: List[int] = []
    nilpotency: Optional[int] = None
    power = matrix
    for k in range(1, matrix.cols + 2):
        r = rank(power)
        if ranks and r == ranks[-1]:
            break
        ranks.append(r)
        if r == 0:
            nilpotency = k
            break
        power = matmul(power, matrix)
    logger.debug("Rank profile computed", g=matrix.cols, ranks=ranks, nilpotency=nilpotency)
    return RankProfile(g=matrix.cols, ranks=tuple(ranks), nilpotency=nilpotency)


def column_space_contains(matrix: BitMatrix, vector: np.ndarray) -> bool:
    """True iff vector is in the column space of M, by rank augmentation."""
    if np.asarray(vector).shape != (matrix.rows,):
        raise DimensionError("Vector length does not match the row count", context={"rows": matrix.rows})
    return rank(matrix.with_column(vector)) == rank(matrix)
