"""Exact q-series identities and the Eisenstein numerics."""

import math
from fractions import Fraction as F

import pytest

from formaldisk.characters import (LatticeSpec, QSeries, a_hat,
                                   a_hat_root_series, bernoulli, c1,
                                   ch_sym_product, char_identity_check,
                                   chern_character_component, divisor_sigma,
                                   eisenstein_lattice, eisenstein_q,
                                   eisenstein_q_numeric, eta_product, jet_exp,
                                   log_witten, log_witten_full, power_sum,
                                   reduce_mod_p2, specialize_roots_zero, todd,
                                   todd_root_series, witten_class,
                                   witten_exp_check, witten_exp_check_full)
from formaldisk.errors import ShapeError
from formaldisk.jets import JetSeries


def two_colored_partitions(colors, top):
    """Independent oracle: partitions with parts in `colors` colors, by
    bounded dynamic programming over (part size, multiplicity)."""
    counts = [1] + [0] * top
    for part in range(1, top + 1):
        for _ in range(colors):
            for total in range(part, top + 1):
                counts[total] += counts[total - part]
    return counts


class TestScalarOracles:
    def test_bernoulli(self):
        assert [bernoulli(k) for k in range(7)] == \
            [F(1), F(-1, 2), F(1, 6), 0, F(-1, 30), 0, F(1, 42)]
        assert bernoulli(12) == F(-691, 2730)

    def test_divisor_sigma(self):
        assert divisor_sigma(6, 1) == 12
        assert divisor_sigma(3, 3) == 28

    def test_todd_series_is_bernoulli_expansion(self):
        # x/(1-e^{-x}) = sum (-1)^d B_d x^d / d!
        series = todd_root_series(8)
        for d, c in enumerate(series):
            assert c == bernoulli(d) * F((-1) ** d, math.factorial(d))

    def test_a_hat_series_values(self):
        series = a_hat_root_series(6)
        assert series[0] == 1 and series[2] == F(-1, 24)
        assert series[4] == F(7, 5760)
        assert all(series[d] == 0 for d in (1, 3, 5))


class TestToddAHat:
    def test_degree_two_values(self):
        assert todd(1, 2) == JetSeries(1, 2, {(0,): F(1), (1,): F(1, 2),
                                              (2,): F(1, 12)})
        assert a_hat(1, 2) == JetSeries(1, 2, {(0,): F(1), (2,): F(-1, 24)})

    def test_todd_factorization(self):
        for n, degree in [(1, 6), (2, 5), (3, 4)]:
            lhs = todd(n, degree)
            rhs = jet_exp(c1(n, degree).scale(F(1, 2))) * a_hat(n, degree)
            assert lhs == rhs


class TestChSym:
    def test_constant_term_one(self):
        cs = ch_sym_product(2, 3, 4)
        assert cs.coeffs[0] == JetSeries.one(2, 3)

    def test_two_colored_partition_coefficients(self):
        cs = ch_sym_product(1, 0, 5)
        vals = [c.constant_term() for c in cs.coeffs]
        assert vals == [1, 2, 5, 10, 20, 36]
        assert vals == two_colored_partitions(2, 5)

    def test_specialization_is_eta_power(self):
        for n in (1, 2):
            spec = specialize_roots_zero(ch_sym_product(n, 3, 5))
            assert spec == eta_product(5, -2 * n)
            oracle = two_colored_partitions(2 * n, 5)
            assert [int(c) for c in spec.coeffs] == oracle


class TestWittenClass:
    def test_leading_coefficient(self):
        for n, d, q in [(1, 4, 3), (2, 4, 3)]:
            assert witten_class(n, d, q).coeffs[0] == a_hat(n, d)

    def test_specialization_trivial(self):
        sp = specialize_roots_zero(witten_class(2, 4, 4))
        assert sp.coeffs[0] == 1
        assert all(not c for c in sp.coeffs[1:])

    def test_char_identity(self):
        assert char_identity_check(1, 4, 6).is_zero()
        assert char_identity_check(2, 4, 4).is_zero()
        assert char_identity_check(1, 0, 4).is_zero()


class TestEisensteinQ:
    def test_r4(self):
        assert eisenstein_q(4, 3).coeffs == [F(1, 120), F(2), F(18), F(56)]

    def test_r6_constant(self):
        assert eisenstein_q(6, 0).coeffs[0] == F(-1, 252)

    def test_q1_always_two(self):
        for k2 in (4, 6, 8, 10, 12):
            assert eisenstein_q(k2, 1).coeffs[1] == 2

    def test_weight_validation(self):
        with pytest.raises(ShapeError):
            eisenstein_q(2, 3)
        with pytest.raises(ShapeError):
            eisenstein_q(5, 3)


class TestLogWitten:
    def test_low_degree_vanishes(self):
        lw = log_witten(2, 6, 3)
        for coeff in lw.coeffs:
            assert all(sum(e) >= 4 for e in coeff.coeffs)

    def test_ch4_coefficient_is_r4(self):
        lw = log_witten(1, 4, 3)
        r4 = eisenstein_q(4, 3)
        ch4 = chern_character_component(1, 4, 4)
        for m in range(4):
            assert lw.coeffs[m] == ch4.scale(r4.coeffs[m])

    def test_exponential_identity_mod_p2(self):
        assert witten_exp_check(2, 6, 4).is_zero()
        assert witten_exp_check(1, 6, 3).is_zero()

    def test_exponential_identity_full_ring(self):
        assert witten_exp_check_full(2, 6, 4).is_zero()
        assert witten_exp_check_full(1, 8, 3).is_zero()

    def test_full_log_differs_by_weight_two(self):
        lw = log_witten(2, 4, 3)
        lwf = log_witten_full(2, 4, 3)
        diff = lwf - lw
        ch2 = chern_character_component(2, 4, 2)
        assert diff.coeffs[0] == ch2.scale(F(-1, 12))
        assert diff.coeffs[1] == ch2.scale(2)


class TestReduceModP2:
    def test_normal_form(self):
        f = power_sum(2, 4, 2)  # x1^2 + x2^2
        assert reduce_mod_p2(f).is_zero()
        g = JetSeries.monomial(2, 4, (3, 1))
        red = reduce_mod_p2(g)
        assert red == JetSeries.monomial(2, 4, (1, 3), F(-1))

    def test_rank_one(self):
        f = JetSeries.monomial(1, 4, (2,)) + JetSeries.variable(1, 4, 1)
        assert reduce_mod_p2(f) == JetSeries.variable(1, 4, 1)

    def test_idempotent_and_ideal(self):
        f = JetSeries.monomial(2, 6, (2, 2), F(3)) + \
            JetSeries.monomial(2, 6, (1, 1))
        red = reduce_mod_p2(f)
        assert reduce_mod_p2(red) == red
        assert reduce_mod_p2(f * power_sum(2, 6, 2)).is_zero()


class TestLattice:
    def test_forced_zeros(self):
        assert abs(eisenstein_lattice(6, LatticeSpec(1j, 200))) < 1e-6
        omega = complex(-0.5, math.sqrt(3) / 2)
        assert abs(eisenstein_lattice(4, LatticeSpec(omega, 200))) < 1e-6

    def test_matches_q_expansion(self):
        for k2 in (4, 6):
            for tau in (1j, 2j, complex(0.5, 1.0)):
                lat = eisenstein_lattice(k2, LatticeSpec(tau, 200))
                ref = eisenstein_q_numeric(k2, tau)
                if abs(ref) > 1e-9:
                    assert abs(lat - ref) / abs(ref) < 1e-6, (k2, tau)
                else:
                    assert abs(lat - ref) < 1e-6

    def test_point_enumeration_symmetric(self):
        pts = LatticeSpec(complex(0.3, 1.1), 12).points()
        as_set = {(round(z.real, 9), round(z.imag, 9)) for z in pts}
        assert len(as_set) == len(pts)
        for z in pts:
            assert (round(-z.real, 9), round(-z.imag, 9)) in as_set

    def test_weight_two_rejected(self):
        with pytest.raises(ShapeError):
            eisenstein_lattice(2, LatticeSpec(1j, 50))


class TestQSeries:
    def test_inverse_roundtrip(self):
        s = eta_product(8, 3)
        one = QSeries([F(1)] + [F(0)] * 8, 8)
        assert s * s.inverse() == one

    def test_exp_of_nilpotent(self):
        zero = JetSeries.zero(1, 3)
        x = JetSeries.variable(1, 3, 1)
        a = QSeries([x, x.scale(2), zero, zero], 3)
        e = a.exp()
        assert e.coeffs[0] == jet_exp(x)
