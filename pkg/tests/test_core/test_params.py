import pytest

from suzukicartier.core.params import (
    PARAM_WORD_BITS,
    a_number_formula,
    hasse_weil_holds,
    is_maximal_over,
    lattice_count,
    make_params,
    nu_g_formula,
    point_count_zeta,
    ratio_bound_holds,
    semigroup_count,
    semigroup_elements,
    zeta_data,
)
from suzukicartier.utils.errors import ParameterError


class TestMakeParams:
    @pytest.mark.parametrize("m, q0, q, g", [
        (1, 2, 8, 14),
        (2, 4, 32, 124),
        (3, 8, 128, 1016),
        (4, 16, 512, 8176),
    ])
    def test_derived_constants(self, m, q0, q, g):
        p = make_params(m)
        assert (p.q0, p.q, p.g) == (q0, q, g)
        assert p.sg_generators == (q, q + q0, q + 2 * q0, q + 2 * q0 + 1)
        assert p.canonical_degree == 2 * g - 2

    def test_pole_orders_m1(self):
        p = make_params(1)
        assert (p.vy, p.vz, p.vh1, p.vh2) == (8, 10, 12, 13)
        assert p.pole_order(1, 1, 1, 1) == 43
        assert p.pole_order(0, 0, 0, 0) == 0

    @pytest.mark.parametrize("bad", [0, -1, True, 1.5, "1"])
    def test_rejects_bad_m(self, bad):
        with pytest.raises(ParameterError):
            make_params(bad)

    def test_word_width(self):
        assert make_params(21).g.bit_length() <= PARAM_WORD_BITS
        with pytest.raises(ParameterError) as exc_info:
            make_params(22)
        assert exc_info.value.context["required_bits"] > PARAM_WORD_BITS

    def test_huge_m_rejected_before_shifting(self):
        with pytest.raises(ParameterError) as exc_info:
            make_params(0xFFFFFFFF)
        assert exc_info.value.context["required_bits"] == 3 * 0xFFFFFFFF + 1

    def test_cached(self):
        assert make_params(2) is make_params(2)


class TestClosedFormulas:
    @pytest.mark.parametrize("m, a", [(1, 5), (2, 30), (3, 204)])
    def test_a_number_formula(self, m, a):
        assert a_number_formula(m) == a

    @pytest.mark.parametrize("m", range(1, 11))
    def test_nu_g_is_g_minus_a(self, m):
        assert nu_g_formula(m) == make_params(m).g - a_number_formula(m)

    @pytest.mark.parametrize("m", range(1, 7))
    def test_lattice_count_matches_formula(self, m):
        assert lattice_count(m) == a_number_formula(m)

    @pytest.mark.parametrize("m", range(1, 11))
    def test_ratio_bound(self, m):
        assert ratio_bound_holds(m)


class TestSemigroup:
    def test_elements_m1(self):
        assert semigroup_elements(1) == [0, 8, 10, 12, 13, 16, 18, 20, 21, 22, 23, 24, 25, 26]

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_count_equals_genus(self, m):
        assert semigroup_count(m) == make_params(m).g

    def test_elements_and_count_agree(self):
        assert len(semigroup_elements(2)) == semigroup_count(2)


class TestZeta:
    def test_power_sums_m1(self):
        assert zeta_data(1).power_sums(5) == [2, -4, 0, 32, -128]

    def test_negative_index(self):
        with pytest.raises(ParameterError):
            zeta_data(1).power_sum(-1)

    @pytest.mark.parametrize("m, k, expected", [
        (1, 1, 65),
        (1, 2, 65),
        (1, 4, 5889),
        (2, 1, 1025),
    ])
    def test_point_counts(self, m, k, expected):
        assert point_count_zeta(m, k) == expected

    def test_maximal_exactly_at_k4(self):
        assert [is_maximal_over(1, k) for k in (1, 2, 3, 4)] == [False, False, False, True]
        assert is_maximal_over(2, 4)

    @pytest.mark.parametrize("k", range(1, 7))
    def test_hasse_weil(self, k):
        assert hasse_weil_holds(1, k)
        assert hasse_weil_holds(2, k)
        assert hasse_weil_holds(3, k)

    def test_k_must_be_positive(self):
        with pytest.raises(ParameterError):
            point_count_zeta(1, 0)
        with pytest.raises(ParameterError):
            is_maximal_over(1, 0)
