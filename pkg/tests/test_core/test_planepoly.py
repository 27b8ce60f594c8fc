import random

import pytest

from suzukicartier.core.params import make_params
from suzukicartier.core.planepoly import (
    PlanePoly,
    cartier_oracle,
    curve_reduce,
    embed_monomial,
    h1,
    h2,
    make_z_even,
    mul,
    power,
    random_plane_poly,
    semilinearity_check,
    square,
)
from suzukicartier.core.structured import enumerate_basis
from suzukicartier.utils.errors import ParameterError

Y = PlanePoly.monomial(1, 0)
Z = PlanePoly.monomial(0, 1)


def y_pow(n):
    return PlanePoly.monomial(n, 0)


class TestReduction:
    def test_z_to_the_q(self, p1):
        reduced = curve_reduce(p1, PlanePoly.monomial(0, 8))
        assert reduced.terms == {(0, 1), (10, 0), (3, 0)}
        assert reduced.is_reduced(p1)

    def test_reduction_is_idempotent(self, p1):
        f = curve_reduce(p1, PlanePoly.from_terms([(2, 17), (0, 9), (1, 1)]))
        assert curve_reduce(p1, PlanePoly(f.terms)) == f

    def test_addition_cancels(self):
        f = PlanePoly.from_terms([(1, 2), (3, 4)])
        assert (f + f).is_zero()
        assert PlanePoly.from_terms([(1, 1), (1, 1)]).is_zero()

    def test_negative_exponent(self, p1):
        with pytest.raises(ParameterError):
            PlanePoly.from_terms([(-1, 0)])
        with pytest.raises(ParameterError):
            power(p1, Z, -1)
        with pytest.raises(ParameterError) as exc_info:
            embed_monomial(p1, 0, -2, 0, 0)
        assert exc_info.value.context["monomial"] == [0, -2, 0, 0]

    def test_square_matches_mul(self, p1):
        f = PlanePoly.from_terms([(1, 3), (0, 7), (4, 0)], canonical=True)
        assert square(p1, f) == mul(p1, f, f)

    def test_h1_m1(self, p1):
        # z^4 + y^5 is already reduced at q = 8
        assert h1(p1).terms == {(0, 4), (5, 0)}


@pytest.mark.parametrize("m", [1, 2, pytest.param(3, marks=pytest.mark.slow)])
class TestRelations:
    def test_z_squared(self, m):
        p = make_params(m)
        lhs = square(p, Z)
        rhs = mul(p, Y, h1(p)) + h2(p)
        assert lhs == rhs

    def test_h1_frobenius(self, m):
        p = make_params(m)
        assert power(p, h1(p), p.q0) == curve_reduce(p, Z + y_pow(p.q0 + 1))

    def test_h2_frobenius(self, m):
        p = make_params(m)
        expected = h1(p) + mul(p, Z, y_pow(p.q0))
        assert power(p, h2(p), p.q0) == expected

    def test_embed_is_product(self, m):
        p = make_params(m)
        expected = mul(p, mul(p, y_pow(2), Z), mul(p, h1(p), h2(p)))
        assert embed_monomial(p, 2, 1, 1, 1) == expected


class TestOracle:
    def test_make_z_even(self, p1):
        even = make_z_even(p1, PlanePoly.from_terms([(1, 3), (2, 2)]))
        assert all(j % 2 == 0 for _, j in even.terms)
        assert curve_reduce(p1, even) == PlanePoly.from_terms([(1, 3), (2, 2)])

    @pytest.mark.parametrize("m", [1, 2])
    def test_basic_images(self, m):
        p = make_params(m)
        assert cartier_oracle(p, PlanePoly.one()).is_zero()
        assert cartier_oracle(p, Y) == PlanePoly.one()
        assert cartier_oracle(p, Z) == y_pow(p.q0 // 2)

    def test_odd_power_of_y(self, p1):
        # C(y^(2k+1) dy) = y^k dy
        assert cartier_oracle(p1, y_pow(7)) == y_pow(3)
        assert cartier_oracle(p1, y_pow(6)).is_zero()

    @pytest.mark.parametrize("m, count", [(1, 200), (2, 200)])
    def test_semilinearity(self, m, count):
        p = make_params(m)
        rng = random.Random(1000 + m)
        for _ in range(count):
            f = random_plane_poly(p, terms=4, max_y=p.q, rng=rng)
            g = random_plane_poly(p, terms=4, max_y=p.q, rng=rng)
            assert semilinearity_check(p, f, g)

    def test_random_plane_poly_is_canonical(self, p2):
        f = random_plane_poly(p2, terms=10, max_y=50, rng=random.Random(3))
        assert f.is_reduced(p2)
        assert all(i <= 50 for i, _ in f.terms)

    def test_cube_vanishes_on_basis_m1(self, p1):
        for mon in enumerate_basis(p1):
            f = embed_monomial(p1, *mon)
            for _ in range(3):
                f = cartier_oracle(p1, f)
            assert f.is_zero(), mon.label()

    @pytest.mark.parametrize("m", [1, 2])
    def test_exact_forms_vanish(self, m):
        p = make_params(m)
        rng = random.Random(500 + m)
        for _ in range(50):
            exponents = rng.sample(range(1, 3 * p.q), 6)
            # d(y^i) = i y^(i-1) dy, so only odd i survive in characteristic 2
            du = PlanePoly.from_terms([(i - 1, 0) for i in exponents if i % 2], canonical=True)
            assert cartier_oracle(p, du).is_zero(), sorted(exponents)
