import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cmorlicz import orlicz as oz
from cmorlicz.numerics import NumericConfig

SQRT_E_HALF = math.sqrt(math.e) / 2.0  # dip bottom of the Example-2 inverse

CONVEX_KINDS = [
    oz.power(1.0),
    oz.power(1.5),
    oz.power(2.0),
    oz.power(3.0),
    oz.tabulated([(1.0, 0.5), (2.0, 2.0), (4.0, 8.0), (8.0, 40.0)]),
]
PLOG_KINDS = [
    oz.powerlog_plus(2, 1.0),
    oz.powerlog_plus(3, 0.25),
    oz.powerlog_sym(2, 0.5),
    oz.powerlog_sym(2, 1.0),
]
ALL_KINDS = CONVEX_KINDS + PLOG_KINDS + [oz.linear_cap()]


class TestEvaluate:
    def test_power_direct(self):
        assert oz.evaluate(oz.power(2), 3.0) == 9.0

    @pytest.mark.parametrize("phi", ALL_KINDS)
    def test_zero(self, phi):
        assert oz.evaluate(phi, 0.0) == 0.0

    def test_powerlog_plus_at_dip_bottom(self):
        # inverting u^(1/2) (1 + ln u)^(-1) at argument e gives sqrt(e)/2
        phi = oz.powerlog_plus(2, 1.0)
        assert oz.evaluate(phi, SQRT_E_HALF) == pytest.approx(math.e, rel=1e-10)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            oz.evaluate(oz.power(2), -1.0)
        with pytest.raises(ValueError):
            oz.inverse(oz.power(2), -0.5)

    def test_linear_cap_jump(self):
        cap = oz.linear_cap()
        assert oz.evaluate(cap, 1.0) == 0.0
        assert oz.evaluate(cap, 1.0 + 1e-12) == math.inf


class TestInverse:
    def test_power(self):
        assert oz.inverse(oz.power(2), 4.0) == pytest.approx(2.0)

    def test_linear_cap(self):
        assert oz.inverse(oz.linear_cap(), 0.5) == 1.0

    def test_powerlog_plus_formula(self):
        # Example-2 inverse: v^(1/p) (1 + ln v)^(-a) for v >= 1
        phi = oz.powerlog_plus(2, 1.0)
        assert oz.inverse(phi, math.e) == pytest.approx(SQRT_E_HALF, rel=1e-12)
        v = 250.0
        expect = v ** 0.5 * (1 + math.log(v)) ** -1.0
        assert oz.inverse(phi, v) == pytest.approx(expect, rel=1e-12)
        assert oz.inverse(phi, 0.04) == pytest.approx(0.2, rel=1e-12)

    @pytest.mark.parametrize("phi", ALL_KINDS)
    def test_nondecreasing(self, phi):
        v = np.logspace(-8, 8, 400)
        w = np.asarray(oz.inverse(phi, v))
        assert np.all(np.diff(w) >= -1e-12 * w[:-1])

    @pytest.mark.parametrize("phi", CONVEX_KINDS + PLOG_KINDS)
    def test_consistency_with_forward(self, phi):
        # Phi((1 - tiny) Phi^{-1}(v)) <= v and u <= Phi^{-1}(Phi(u))
        for v in np.logspace(-6, 6, 41):
            u = oz.inverse(phi, float(v))
            if u == 0.0 or not math.isfinite(u):
                continue
            assert oz.evaluate(phi, u * (1 - 1e-12)) <= v * (1 + 1e-9)
            w = oz.evaluate(phi, u)
            if math.isfinite(w):
                assert u <= oz.inverse(phi, w) * (1 + 1e-9)

    @pytest.mark.parametrize("phi", PLOG_KINDS)
    def test_roundtrip_forward_inverse(self, phi):
        for v in [1e-7, 0.11, 0.93, 4.2, 313.0, 2.4e6]:
            u = oz.inverse(phi, v)
            w = oz.evaluate(phi, u)
            # forward is the generalized inverse: w >= v with equality off
            # the flat piece of the envelope
            assert w >= v * (1 - 1e-9)


class TestConjugate:
    def test_power_closed_form(self):
        # Phi*(v) = (p-1) p^{-p'} v^{p'}
        assert oz.conjugate(oz.power(2), 2.0) == pytest.approx(1.0)
        p, v = 3.0, 1.0
        pp = p / (p - 1)
        assert oz.conjugate(oz.power(p), v) == pytest.approx(
            (p - 1) * p ** -pp, rel=1e-12)

    def test_power_one_is_cap(self):
        assert oz.conjugate(oz.power(1), 0.5) == 0.0
        assert oz.conjugate(oz.power(1), 2.0) == math.inf

    def test_numeric_matches_closed_form(self):
        # grid maximization against the analytic value for a pure power
        phi = oz.power(3.0)
        ys = np.array([1e-4, 0.3, 1.0, 17.0, 1e5])
        num = oz._conjugate_numeric(phi, ys, NumericConfig())
        pp = 1.5
        closed = 2.0 * 3.0 ** -pp * ys ** pp
        assert np.allclose(num, closed, rtol=1e-8)

    def test_conjugate_is_convex_nondecreasing(self):
        phi = oz.powerlog_plus(2, 1.0)
        ys = np.logspace(-4, 4, 101)
        vals = np.asarray(oz.conjugate(phi, ys))
        assert np.all(np.diff(vals) >= 0)
        mid = np.asarray(oz.conjugate(phi, 0.5 * (ys[:-2] + ys[2:])))
        assert np.all(mid <= 0.5 * (vals[:-2] + vals[2:]) * (1 + 1e-9))

    @pytest.mark.parametrize("phi", CONVEX_KINDS)
    def test_double_conjugate_convex_kinds(self, phi):
        us = np.logspace(-3, 3, 25)
        cj = oz.conjugate_young(phi)
        bi = oz._conjugate_numeric(cj, us, NumericConfig())
        direct = np.array([oz.evaluate(phi, float(u)) for u in us])
        mask = np.isfinite(direct) & np.isfinite(bi)
        err = np.abs(bi[mask] - direct[mask]) / np.maximum(1.0, direct[mask])
        assert np.max(err) <= 1e-6

    @pytest.mark.parametrize("phi", PLOG_KINDS)
    def test_double_conjugate_minorizes(self, phi):
        # the literal powerlog forward is only equivalent to a convex
        # function, so the biconjugate is its convex minorant; tolerance is
        # the tabulated-conjugate interpolation accuracy
        us = np.logspace(-3, 3, 13)
        cj = oz.conjugate_young(phi)
        bi = oz._conjugate_numeric(cj, us, NumericConfig())
        direct = np.array([oz.evaluate(phi, float(u)) for u in us])
        assert np.all(bi <= direct * (1 + 1e-4))

    @pytest.mark.parametrize("phi", CONVEX_KINDS + PLOG_KINDS)
    def test_pair_identity(self, phi):
        # u <= Phi^{-1}(u) (Phi*)^{-1}(u) <= 2u
        cj = oz.conjugate_young(phi)
        us = np.logspace(-8, 8, 65)
        prod = np.asarray(oz.inverse(phi, us)) * np.asarray(cj.inv(us))
        ratio = prod / us
        assert np.all(ratio >= 1.0 - 1e-5)
        assert np.all(ratio <= 2.0 + 1e-5)

    @settings(max_examples=40, deadline=None)
    @given(u=st.floats(1e-4, 1e4), v=st.floats(1e-4, 1e4),
           idx=st.integers(0, len(CONVEX_KINDS + PLOG_KINDS) - 1))
    def test_youngs_inequality(self, u, v, idx):
        phi = (CONVEX_KINDS + PLOG_KINDS)[idx]
        lhs = u * v
        rhs = oz.evaluate(phi, u) + oz.conjugate(phi, v)
        assert lhs <= rhs * (1 + 1e-7) + 1e-12


class TestSFunction:
    def test_power_constant_ratio(self):
        for t in (0.1, 0.7, 3.0, 40.0):
            sv = oz.s_function(oz.power(2), t)
            assert sv.value == pytest.approx(t ** 0.5, rel=1e-9)

    def test_at_one(self):
        assert oz.s_function(oz.power(3), 1.0).value == pytest.approx(1.0)

    def test_powerlog_sym_formula(self):
        # monotone regime: s(t) = t^{1/p} (1 + |ln t|)^a exactly
        phi = oz.powerlog_sym(2, 0.5)
        t = 0.1
        expect = t ** 0.5 * (1 + math.log(10)) ** 0.5
        assert oz.s_function(phi, t).value == pytest.approx(expect, rel=1e-10)

    def test_powerlog_plus_formulas(self):
        phi = oz.powerlog_plus(3, 0.25)
        for t in (0.05, 0.5):
            expect = t ** (1 / 3) * (1 - math.log(t)) ** 0.25
            assert oz.s_function(phi, t).value == pytest.approx(expect,
                                                                rel=1e-10)
        assert oz.s_function(phi, 30.0).value == pytest.approx(
            30.0 ** (1 / 3), rel=1e-8)

    @settings(max_examples=20, deadline=None)
    @given(t1=st.floats(0.05, 20.0), t2=st.floats(0.05, 20.0))
    def test_submultiplicative(self, t1, t2):
        phi = oz.powerlog_sym(2, 0.5)
        s12 = oz.s_function(phi, t1 * t2).value
        s1 = oz.s_function(phi, t1).value
        s2 = oz.s_function(phi, t2).value
        assert s12 <= s1 * s2 * (1 + 1e-7)

    def test_divergence_flagged(self):
        # genuinely concave inverses keep the ratio bounded; the divergence
        # flag is exercised through an evaluator pair whose "inverse" grows
        # superpolynomially, so the ratio climbs without stabilizing
        class SuperPoly:
            kind = "synthetic"

            def inv(self, v):
                v = np.asarray(v, dtype=float)
                with np.errstate(divide="ignore"):
                    lx = np.where(v > 0, np.log(v), -np.inf)
                return np.exp(lx + lx * np.abs(lx) / 60.0)

        sv = oz.s_function(SuperPoly(), 50.0)
        assert sv.value == math.inf and sv.attained_s is None


class TestDelta2:
    def test_power(self):
        res = oz.delta2_check(oz.power(2))
        assert res.satisfied and res.d2 == pytest.approx(4.0)

    def test_exp_table_not_delta2(self):
        us = np.linspace(0.05, 30.0, 400)
        phi = oz.tabulated([(float(u), float(math.expm1(u))) for u in us])
        assert oz.delta2_check(phi).satisfied is False

    def test_linear_cap_not_applicable(self):
        assert oz.delta2_check(oz.linear_cap()).satisfied is None

    def test_powerlog_plus_conjugate(self):
        res = oz.delta2_check(oz.conjugate_young(oz.powerlog_plus(2, 1.0)))
        assert res.satisfied
        assert res.d2 == pytest.approx(4.0, rel=0.05)  # 2^{p'} with p' = 2

    def test_power_conjugate_constant(self):
        for p in (1.5, 2.0, 3.0):
            res = oz.delta2_check(oz.conjugate_young(oz.power(p)))
            assert res.satisfied
            assert res.d2 == pytest.approx(2.0 ** (p / (p - 1)), rel=1e-9)


class TestIndices:
    def test_power(self):
        assert oz.matuszewska_index(oz.power(2)) == pytest.approx(0.5, abs=1e-6)

    def test_powerlog_plus(self):
        beta = oz.matuszewska_index(oz.powerlog_plus(2, 1.0))
        assert beta == pytest.approx(0.5, rel=0.05)

    def test_conjugate_index_relation(self):
        # beta_{Phi*} = 1/(1 - beta_{Phi^{-1}}) = p/(p-1)
        beta = oz.matuszewska_index(oz.powerlog_plus(2, 1.0))
        assert 1.0 / (1.0 - beta) == pytest.approx(2.0, rel=0.05)

    def test_power_one_gives_infinite_conjugate_index(self):
        beta = oz.matuszewska_index(oz.power(1))
        assert beta == pytest.approx(1.0, abs=1e-6)


class TestFundamentalFunction:
    def test_power(self):
        assert oz.fundamental_function(oz.power(2), 9.0) == pytest.approx(3.0)

    def test_powerlog_plus_small_measure(self):
        # t <= 1 puts 1/t above 1 in the inverse formula
        phi = oz.powerlog_plus(2, 1.0)
        t = 0.04
        expect = t ** 0.5 * (1 + math.log(1 / t)) ** 1.0
        assert oz.fundamental_function(phi, t) == pytest.approx(expect,
                                                                rel=1e-12)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            oz.fundamental_function(oz.power(2), 0.0)


class TestSerialization:
    @pytest.mark.parametrize("phi", ALL_KINDS)
    def test_roundtrip(self, phi):
        clone = oz.YoungFunction.from_dict(phi.to_dict())
        assert clone == phi

    def test_rejects_unknown_kind(self):
        with pytest.raises(ValueError):
            oz.YoungFunction.from_dict({"kind": "mystery"})

    def test_tabulated_validation(self):
        with pytest.raises(ValueError):
            oz.tabulated([(1.0, 1.0), (2.0, 1.5), (3.0, 1.6)])  # concave
        with pytest.raises(ValueError):
            oz.tabulated([(2.0, 1.0), (1.0, 2.0)])  # not increasing


class TestShapeInvariants:
    @pytest.mark.parametrize("phi", CONVEX_KINDS)
    def test_midpoint_convexity(self, phi):
        us = np.logspace(-4, 2, 100)
        f = np.array([oz.evaluate(phi, float(u)) for u in us])
        mid = np.array([oz.evaluate(phi, float(0.5 * (a + b)))
                        for a, b in zip(us[:-2], us[2:])])
        finite = np.isfinite(f[:-2]) & np.isfinite(f[2:]) & np.isfinite(mid)
        lhs = mid[finite]
        rhs = 0.5 * (f[:-2] + f[2:])[finite]
        assert np.all(lhs <= rhs * (1 + 1e-9) + 1e-300)

    @pytest.mark.parametrize("phi", ALL_KINDS)
    def test_forward_nondecreasing(self, phi):
        us = np.logspace(-6, 4, 200)
        f = np.array([oz.evaluate(phi, float(u)) for u in us])
        finite = np.isfinite(f)
        assert np.all(np.diff(f[finite]) >= -1e-9 * np.abs(f[finite][:-1]))

    @pytest.mark.parametrize("phi", [oz.power(1.5), oz.power(3),
                                     oz.powerlog_plus(3, 0.25)])
    def test_derivative_sandwich(self, phi):
        # Phi(u) <= u Phi'_+(u) <= Phi(2u), one-sided difference quotient
        for u in np.logspace(-3, 3, 25):
            h = u * 1e-7
            f0, f1 = oz.evaluate(phi, u), oz.evaluate(phi, u + h)
            deriv = (f1 - f0) / h
            assert f0 <= u * deriv * (1 + 1e-4)
            assert u * deriv <= oz.evaluate(phi, 2 * u) * (1 + 1e-4)
