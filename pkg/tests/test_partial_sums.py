import random
from fractions import Fraction

import mpmath
import pytest
from mpmath import mp

from mzeta.errors import InsufficientPrecisionError
from mzeta.partial_sums import (
    BasisTerm,
    basis_partial_sum,
    known_closed_form,
    resolve_constant,
    schedule_n,
    sum_basis,
    sum_sequence,
)
from mzeta.scale import INF, Coeff, ScaleSeries

FR = Fraction


def exact_power_sum(p, n_top):
    return sum(FR(n) ** p for n in range(1, n_top))


class TestSumBasis:
    def test_count_of_integers(self):
        res = sum_basis(BasisTerm(0, 0), 0)
        assert res.exact
        assert res.divergent.cell(-1, 0) == Coeff.rational(1)
        assert res.divergent.cell(0, 0) == Coeff.rational(-1)
        assert resolve_constant(res.constant_slot, 10) == 0

    def test_harmonic(self):
        res = sum_basis(BasisTerm(0, 1), 0)
        assert res.divergent.cell(0, 1) == Coeff.rational(1)
        assert res.divergent.cell(0, 0).is_zero
        assert res.constant_slot == "em(0,1)"

    def test_log_sum_stirling_shape(self):
        res = sum_basis(BasisTerm(1, 0), 0)
        assert res.divergent.cell(-1, 1) == Coeff.rational(1)
        assert res.divergent.cell(-1, 0) == Coeff.rational(-1)
        assert res.divergent.cell(0, 1) == Coeff.rational(FR(-1, 2))

    def test_boundary_polynomial_in_l_only(self):
        # at the boundary weight m=1 the divergent part is a pure L-polynomial
        for l in range(4):
            res = sum_basis(BasisTerm(l, 1), 0)
            assert all(m == 0 for m, _ in res.divergent.terms)

    @pytest.mark.parametrize("p", [1, 2, 3, 4])
    def test_faulhaber_exactness(self, p):
        res = sum_basis(BasisTerm(0, -p), 0)
        assert res.exact
        for n_top in range(1, 101):
            val = res.divergent.evaluate(FR(n_top), log_n=0)
            assert val == exact_power_sum(p, n_top)

    def test_correction_terms_extend_precision(self):
        res = sum_basis(BasisTerm(0, 1), 4)
        assert res.divergent.cell(1, 0) == Coeff.rational(FR(-1, 2))
        assert res.divergent.cell(2, 0) == Coeff.rational(FR(-1, 12))
        assert res.divergent.cell(3, 0).is_zero
        assert res.divergent.cell(4, 0) == Coeff.rational(FR(1, 120))


class TestSumSequence:
    def test_zero_sequence(self):
        res = sum_sequence(ScaleSeries.zero(), 0)
        assert res.divergent.is_zero
        assert res.exact

    def test_sum_of_n(self):
        v = ScaleSeries.monomial(Coeff.rational(1), m=-1)
        res = sum_sequence(v, 0)
        assert res.exact
        assert res.divergent.cell(-2, 0) == Coeff.rational(FR(1, 2))
        assert res.divergent.cell(-1, 0) == Coeff.rational(FR(-1, 2))
        assert res.divergent.cell(0, 0).is_zero

    def test_single_term_linearity(self):
        v = ScaleSeries.monomial(Coeff.rational(1), m=1)
        res = sum_sequence(v, 0)
        base = sum_basis(BasisTerm(0, 1), 0)
        lhs, rhs = res.divergent.drop_constant_cell(), base.divergent.drop_constant_cell()
        assert lhs.terms == rhs.terms
        assert res.constant_coeff() == base.constant_coeff()

    def test_insufficient_precision_rejected(self):
        v = ScaleSeries.monomial(Coeff.rational(1), m=1, precision=0)
        with pytest.raises(InsufficientPrecisionError):
            sum_sequence(v, 0)

    def test_order_bound(self):
        # order of the partial sums >= min(0, ord(v) - 1)
        rng = random.Random(42)
        for _ in range(200):
            cells = {}
            for _ in range(rng.randint(1, 3)):
                m = rng.randint(-3, 4)
                cells[m] = ScaleSeries.monomial(
                    Coeff.rational(FR(rng.randint(-5, 5), rng.randint(1, 3))),
                    l=rng.randint(0, 2),
                    m=m,
                ).poly_at(m)
            v = ScaleSeries.make({m: p for m, p in cells.items() if not p.is_zero}, INF)
            if v.is_zero:
                continue
            res = sum_sequence(v, 2)
            assert res.divergent.is_zero or res.divergent.order() >= min(0, v.order() - 1)


class TestResolveConstant:
    def test_euler(self):
        value = resolve_constant("em(0,1)", 15)
        assert abs(value - mp.mpf("0.577215664901533")) < 1e-14

    def test_half_log_two_pi(self):
        value = resolve_constant("em(1,0)", 12)
        with mp.workdps(25):
            assert abs(value - mp.log(2 * mp.pi) / 2) < 1e-12

    def test_zeta2_offset_convention(self):
        value = resolve_constant("em(0,2)", 12)
        assert abs(value - mp.mpf("1.644934066848226")) < 1e-12

    def test_exact_slots_are_zero(self):
        assert resolve_constant("em(0,0)", 10) == 0
        assert resolve_constant("em(0,-3)", 10) == 0

    @pytest.mark.parametrize("slot", ["em(0,1)", "em(1,1)", "em(2,1)", "em(1,0)", "em(1,2)", "em(0,3)"])
    def test_against_closed_forms(self, slot):
        with mp.workdps(30):
            expected = known_closed_form(slot)
            assert expected is not None
            assert abs(resolve_constant(slot, 13) - expected) < 1e-12

    def test_stieltjes_metadata(self):
        with mp.workdps(25):
            assert abs(known_closed_form("em(2,1)") - mpmath.stieltjes(2)) < 1e-20

    def test_convergence_rate(self):
        # residual after subtracting the A=2 divergent part decays by a
        # factor >= 1.5 per doubling of N
        for l, m in [(0, 1), (1, 1), (1, 0)]:
            table = sum_basis(BasisTerm(l, m), 2).divergent
            with mp.workdps(30):
                const = resolve_constant(f"em({l},{m})", 20)
                residuals = []
                for e in range(10, 17):
                    n_top = 2**e
                    u = basis_partial_sum(l, m, n_top)
                    approx = table.evaluate(mp.mpf(n_top), log_n=mp.ln(n_top))
                    residuals.append(abs(u - approx - const))
            for a, b in zip(residuals, residuals[1:]):
                assert b < a / mp.mpf("1.5")


def test_schedule_is_deterministic():
    assert schedule_n(12) == schedule_n(12)
    assert schedule_n(1) >= 64
