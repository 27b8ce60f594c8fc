import numpy as np
import pytest

from suzukicartier.core.f2la import (
    BitMatrix,
    column_space_basis,
    column_space_contains,
    kernel_basis,
    matmul,
    rank,
    rank_profile,
)
from suzukicartier.core.params import make_params
from suzukicartier.core.structured import build_cartier_matrix
from suzukicartier.utils.errors import DimensionError


def random_dense(rng, rows, cols, density=0.5):
    return (rng.random((rows, cols)) < density).astype(np.uint8)


def shift_matrix(n):
    """Single nilpotent Jordan block: e_j -> e_(j-1)."""
    return BitMatrix.from_columns(n, [[]] + [[j - 1] for j in range(1, n)])


class TestBitMatrix:
    def test_identity_and_zeros(self):
        assert rank(BitMatrix.identity(70)) == 70
        assert kernel_basis(BitMatrix.identity(70)) == []
        assert rank(BitMatrix.zeros(70)) == 0
        assert len(kernel_basis(BitMatrix.zeros(70))) == 70
        assert BitMatrix.zeros(3, 5).shape == (3, 5)

    def test_dense_round_trip(self):
        rng = np.random.default_rng(1)
        dense = random_dense(rng, 9, 130)
        packed = BitMatrix.from_dense(dense)
        assert packed.words == 3
        assert np.array_equal(packed.to_dense(), dense)
        assert packed.get(4, 129) == dense[4, 129]

    def test_from_columns(self):
        m = BitMatrix.from_columns(3, [[0, 2], [], [1]])
        assert m.to_dense().tolist() == [[1, 0, 0], [0, 0, 1], [1, 0, 0]]
        assert m.column_support(0) == [0, 2]

    def test_from_columns_out_of_range(self):
        with pytest.raises(DimensionError):
            BitMatrix.from_columns(2, [[2]])

    def test_dirty_padding_rejected(self):
        with pytest.raises(DimensionError):
            BitMatrix(1, 3, np.array([[8]], dtype=np.uint64))

    def test_wrong_shape_rejected(self):
        with pytest.raises(DimensionError):
            BitMatrix(2, 3, np.zeros((1, 1), dtype=np.uint64))

    def test_read_only(self):
        m = BitMatrix.identity(4)
        with pytest.raises(ValueError):
            m.data[0, 0] = 0

    def test_matvec(self):
        m = BitMatrix.from_columns(3, [[0, 2], [1], [1, 2]])
        assert m.matvec(np.array([1, 1, 1])).tolist() == [1, 0, 0]
        with pytest.raises(DimensionError):
            m.matvec(np.array([1, 0]))

    def test_first_differing_column(self):
        a = BitMatrix.identity(5)
        b = BitMatrix.from_columns(5, [[0], [1], [1, 2], [3], [4]])
        assert a.first_differing_column(a) is None
        assert a.first_differing_column(b) == 2
        with pytest.raises(DimensionError):
            a.first_differing_column(BitMatrix.identity(4))

    def test_equality(self):
        assert BitMatrix.identity(3) == BitMatrix.identity(3)
        assert BitMatrix.identity(3) != BitMatrix.zeros(3)


class TestElimination:
    @pytest.mark.parametrize("seed", range(5))
    def test_kernel(self, seed):
        rng = np.random.default_rng(seed)
        dense = random_dense(rng, 40, 70)
        m = BitMatrix.from_dense(dense)
        kernel = kernel_basis(m)
        assert len(kernel) == 70 - rank(m)
        for v in kernel:
            assert not m.matvec(v).any()
            assert not ((dense.astype(int) @ v) % 2).any()

    @pytest.mark.parametrize("seed", range(5))
    def test_matmul_matches_numpy(self, seed):
        rng = np.random.default_rng(100 + seed)
        a = random_dense(rng, 30, 70)
        b = random_dense(rng, 70, 65)
        product = matmul(BitMatrix.from_dense(a), BitMatrix.from_dense(b))
        assert np.array_equal(product.to_dense(), (a.astype(int) @ b.astype(int)) % 2)

    @pytest.mark.parametrize("seed", range(5))
    def test_rank_of_product(self, seed):
        rng = np.random.default_rng(200 + seed)
        a = BitMatrix.from_dense(random_dense(rng, 70, 70, density=0.05))
        b = BitMatrix.from_dense(random_dense(rng, 70, 70, density=0.05))
        assert rank(matmul(a, b)) <= min(rank(a), rank(b))

    def test_matmul_mismatch(self):
        with pytest.raises(DimensionError):
            matmul(BitMatrix.zeros(3, 4), BitMatrix.zeros(3, 4))

    def test_column_space(self):
        m = BitMatrix.from_columns(4, [[0, 1], [1], [0]])
        basis = column_space_basis(m)
        assert len(basis) == 2
        assert column_space_contains(m, np.array([1, 0, 0, 0]))
        assert not column_space_contains(m, np.array([0, 0, 1, 0]))
        with pytest.raises(DimensionError):
            column_space_contains(m, np.array([1, 0]))


class TestRankProfile:
    def test_shift_matrix(self):
        profile = rank_profile(shift_matrix(5))
        assert profile.ranks == (4, 3, 2, 1, 0)
        assert profile.nilpotency == 5
        assert profile.a_number == 1

    def test_identity_is_not_nilpotent(self):
        profile = rank_profile(BitMatrix.identity(5))
        assert profile.ranks == (5,)
        assert profile.nilpotency is None
        assert profile.p_rank == 5

    def test_zero_matrix(self):
        profile = rank_profile(BitMatrix.zeros(4))
        assert profile.ranks == (0,)
        assert profile.nilpotency == 1

    def test_needs_square(self):
        with pytest.raises(DimensionError):
            rank_profile(BitMatrix.zeros(2, 3))

    def test_cartier_m1(self, matrix1):
        assert rank(matrix1) == 9
        assert len(kernel_basis(matrix1)) == 5
        profile = rank_profile(matrix1)
        assert profile.ranks == (9, 4, 0)
        assert profile.nilpotency == 3

    def test_cartier_m2(self, matrix2):
        profile = rank_profile(matrix2)
        assert profile.ranks[0] == 94
        assert profile.ranks[-1] == 0

    @pytest.mark.slow
    def test_cartier_m3_is_nilpotent(self):
        p = make_params(3)
        profile = rank_profile(build_cartier_matrix(p))
        assert profile.ranks[0] == p.g - 204
        assert profile.is_nilpotent
