import math

import numpy as np
import pytest

from slicereg import qarray, series as se
from slicereg.errors import DegenerateAtZero
from slicereg.hyperbolic import (
    BallSpec,
    balpha_bounds,
    delta,
    dieudonne_rhs,
    dieudonne_sup_rhs,
    goluzin_rhs,
    hyperbolic_derivative,
    hyperbolic_quotient,
    iterated_quotient,
    pseudo_ball_to_euclidean,
    rho,
)
from slicereg.moebius import (
    BlaschkeProduct,
    Bullet,
    Moebius,
    SeriesFunc,
    expr_to_series,
)
from slicereg.quaternion import I, J, K, ONE, Quaternion, ZERO
from slicereg.series import TaylorSeries

Q2 = TaylorSeries.from_quaternions([ZERO, ZERO, ONE], exact=True)
Q3 = TaylorSeries.from_quaternions([ZERO, ZERO, ZERO, ONE], exact=True)


def rand_q(rng, cap):
    v = rng.uniform(-1, 1, 4)
    v = v / np.linalg.norm(v) * cap * rng.uniform(0.05, 0.95)
    return Quaternion.from_iter(v)


class TestDistances:
    def test_rho_from_origin_is_modulus(self):
        q = Quaternion(0.2, 0.3, -0.1, 0.4)
        assert abs(rho(ZERO, q) - abs(q)) <= 1e-15

    def test_rho_vanishes_on_diagonal(self):
        p = Quaternion(0.3, 0.1, 0.2, -0.2)
        assert rho(p, p) <= 1e-15

    def test_rho_on_orthogonal_imaginaries(self):
        lam, mu = 0.3, 0.45
        got = rho(I * lam, J * mu)
        expect = math.sqrt((lam ** 2 + mu ** 2) / (1 + lam ** 2 * mu ** 2))
        assert abs(got - expect) <= 1e-14

    def test_symmetry(self, rng):
        for _ in range(100):
            p, q = rand_q(rng, 0.9), rand_q(rng, 0.9)
            assert abs(rho(p, q) - rho(q, p)) <= 1e-12

    def test_delta_examples(self):
        assert delta(ZERO, ZERO) == 0.0
        assert abs(delta(ZERO, Quaternion(0.5)) - math.atanh(0.5)) <= 1e-15

    def test_delta_triangle_inequality(self, rng):
        for _ in range(100):
            a, b, c = (rand_q(rng, 0.9) for _ in range(3))
            assert delta(a, c) <= delta(a, b) + delta(b, c) + 1e-12

    def test_outside_ball_rejected(self):
        with pytest.raises(ValueError):
            rho(Quaternion(1.5), ZERO)


class TestBallSpec:
    def test_centered_ball_is_fixed(self):
        e = pseudo_ball_to_euclidean(BallSpec(ZERO, 0.3))
        assert e.center == ZERO and abs(e.radius - 0.3) <= 1e-15

    def test_half_half_example(self):
        e = pseudo_ball_to_euclidean(BallSpec(Quaternion(0.5), 0.5))
        assert e.center.isclose(Quaternion(0.4), 1e-15)
        assert abs(e.radius - 0.4) <= 1e-15
        # endpoints on the real axis: rho(1/2, x) = 1/2 at x = 0 and x = 0.8
        assert abs(rho(Quaternion(0.5), ZERO) - 0.5) <= 1e-15
        assert abs(rho(Quaternion(0.5), Quaternion(0.8)) - 0.5) <= 1e-14

    def test_membership_equivalence(self, rng):
        b = BallSpec(Quaternion(0.3, 0.2, -0.1, 0.1), 0.45)
        e = pseudo_ball_to_euclidean(b)
        for _ in range(500):
            q = rand_q(rng, 0.98)
            assert b.contains(q) == e.contains(q)

    def test_validation(self):
        with pytest.raises(ValueError):
            BallSpec(ZERO, 0.3, "spherical")
        with pytest.raises(ValueError):
            BallSpec(Quaternion(1.2), 0.3)
        with pytest.raises(ValueError):
            BallSpec(ZERO, 1.5)


class TestQuotients:
    def test_identity_has_unimodular_quotient_one(self):
        p = Quaternion(0.2, 0.3, 0.0, -0.1)
        hq = hyperbolic_quotient(TaylorSeries.identity(), p)
        assert hq.is_unimodular_constant
        assert abs(hq.unimodular_value - ONE) <= 1e-9

    def test_square_at_origin_is_identity(self, rng):
        hq = hyperbolic_quotient(Q2, ZERO)
        for _ in range(30):
            q = rand_q(rng, 0.9)
            assert abs(hq.eval(q) - q) <= 1e-10

    def test_vanishing_at_origin_factorization(self, rng):
        # when f(0) = 0, f*_0 = f / q and f(q) = q * f*_0 value-wise on
        # each slice through real-coefficient factors
        coeffs = np.zeros((4, 4))
        coeffs[1, 0] = 0.4
        coeffs[3, 0] = 0.3
        f = TaylorSeries(coeffs, exact=True)
        hq = hyperbolic_quotient(f, ZERO)
        for _ in range(30):
            q = rand_q(rng, 0.9)
            fv, _ = se.evaluate(f, q)
            assert abs(q * hq.eval(q) - fv) <= 1e-10

    def test_derivative_of_square_on_reals(self):
        for r in (0.1, 0.35, 0.6, 0.85):
            got = hyperbolic_derivative(Q2, Quaternion(r))
            expect = 2 * r / (1 + r * r)
            assert abs(got - Quaternion(expect)) <= 1e-9

    def test_derivative_of_identity(self):
        got = hyperbolic_derivative(TaylorSeries.identity(),
                                    Quaternion(0.3, 0.2))
        assert abs(got - ONE) <= 1e-9

    def test_derivative_at_zero_is_cullen_derivative(self):
        f = TaylorSeries.from_quaternions(
            [ZERO, Quaternion(0.3, 0.2, 0.0, 0.1), Quaternion(0.2)],
            exact=True)
        got = hyperbolic_derivative(f, ZERO)
        expect = se.cullen_derivative(f).coefficient(0)
        assert abs(got - expect) <= 1e-10

    def test_value_at_conjugate_point(self):
        # when f(p) = 0 the quotient at conj(p) collapses to
        # (1 - conj(p)^2) d_S f(p)
        p = Quaternion(0.3, 0.2, -0.1, 0.25)
        f = expr_to_series(Moebius(p), order=256)
        hq = hyperbolic_quotient(f, p)
        got = hq.eval(p.conj())
        ds = se.spherical_derivative(f, p)
        expect = (ONE - p.conj() * p.conj()) * ds
        assert abs(got - expect) <= 1e-8


class TestIterated:
    def test_square_twice_at_origin(self):
        hq = iterated_quotient(Q2, [ZERO, ZERO])
        assert hq.is_unimodular_constant
        assert abs(hq.unimodular_value - ONE) <= 1e-9

    def test_cube_three_times_at_origin(self):
        hq = iterated_quotient(Q3, [ZERO, ZERO, ZERO])
        assert hq.is_unimodular_constant
        assert abs(hq.unimodular_value - ONE) <= 1e-9

    def test_blaschke_degree_two_terminates_at_its_zeros(self):
        p1 = Quaternion(0.3)
        p2 = Quaternion(-0.2)
        b = BlaschkeProduct([p1, p2]).to_expr()
        hq = iterated_quotient(b, [p1, p2])
        assert hq.is_unimodular_constant
        assert abs(abs(hq.unimodular_value) - 1.0) <= 1e-9

    def test_extra_quotient_of_unimodular_stays_constant(self):
        hq = iterated_quotient(Q2, [ZERO, ZERO, Quaternion(0.4)])
        assert hq.is_unimodular_constant
        assert abs(hq.unimodular_value - ONE) <= 1e-9


class TestSchwarzPick:
    def test_strict_inequality_for_square(self, rng):
        p = Quaternion(0.3, 0.1, 0.0, 0.2)
        fp, _ = se.evaluate(Q2, p)
        mp = Moebius(p)
        num = Bullet(fp, SeriesFunc(Q2))
        for _ in range(60):
            q = rand_q(rng, 0.9)
            if abs(q - p) <= 1e-6:
                continue
            assert abs(num.eval(q)) <= abs(mp.eval(q)) + 1e-10

    def test_equality_for_moebius(self, rng):
        p = Quaternion(0.2, -0.1, 0.3, 0.0)
        f = Moebius(Quaternion(0.4, 0.1, 0.0, -0.2), u=J)
        fp = f.eval(p)
        num = Bullet(fp, f)
        mp = Moebius(p)
        for _ in range(60):
            q = rand_q(rng, 0.9)
            assert abs(abs(num.eval(q)) - abs(mp.eval(q))) <= 1e-9

    def test_three_point_form(self, rng):
        f = Q2
        p = Quaternion(0.25, 0.15, -0.1, 0.0)
        hq = hyperbolic_quotient(f, p)
        for _ in range(40):
            q = rand_q(rng, 0.8)
            try:
                v = hq.eval(q)
            except Exception:
                continue
            assert abs(v) <= 1.0 + 1e-9

    def test_swap_symmetry(self):
        # |f*_p(q)| = |f*_q(p)| for self-maps
        f = Q2
        p = Quaternion(0.3, 0.1, 0.2, 0.0)
        q = Quaternion(0.15, -0.2, 0.1, 0.1)
        a = hyperbolic_quotient(f, p).eval(q)
        b = hyperbolic_quotient(f, q).eval(p)
        assert abs(abs(a) - abs(b)) <= 1e-11

    def test_multipoint_quotients_stay_bounded(self, rng):
        f = BlaschkeProduct(
            [Quaternion(0.2, 0.1), Quaternion(-0.1, 0.0, 0.2),
             Quaternion(0.3)]).to_expr()
        nodes = [Quaternion(0.1), Quaternion(0.2, 0.1), Quaternion(-0.15)]
        cur = f
        for p in nodes:
            cur = hyperbolic_quotient(cur, p)
            for _ in range(15):
                q = rand_q(rng, 0.6)
                assert abs(cur.eval(q)) <= 1.0 + 1e-9


class TestDieudonneBounds:
    def test_membership_for_square(self, rng):
        f = Q2
        for _ in range(60):
            q0 = rand_q(rng, 0.85)
            if abs(q0) < 1e-2:
                continue
            fq0, _ = se.evaluate(f, q0)
            center, radius = dieudonne_rhs(q0, fq0)
            fh = hyperbolic_derivative(f, q0)
            assert abs(fh - center) <= radius + 1e-9

    def test_equality_at_real_points(self):
        # for f = q^2 at real r the derivative sits on the disk boundary:
        # center = radius = r / (1 + r^2) and f^h = 2r / (1 + r^2)
        r = 0.4
        q0 = Quaternion(r)
        center, radius = dieudonne_rhs(q0, Quaternion(r * r))
        assert abs(center - Quaternion(r / (1 + r * r))) <= 1e-14
        assert abs(radius - r / (1 + r * r)) <= 1e-14
        fh = hyperbolic_derivative(Q2, q0)
        assert abs(abs(fh - center) - radius) <= 1e-9

    def test_sup_branches(self):
        thr = math.sqrt(2.0) - 1.0
        assert abs(dieudonne_sup_rhs(thr - 1e-6, 2.0) - 0.5) <= 1e-12
        above = dieudonne_sup_rhs(thr + 1e-3, 2.0)
        assert above > 0.5
        r = thr + 1e-3
        expect = (1 + r * r) ** 2 / (4 * r * (1 - r * r)) / 2.0
        assert abs(above - expect) <= 1e-12

    def test_sup_bound_holds_for_square(self, rng):
        f = Q2
        for _ in range(40):
            q0 = rand_q(rng, 0.85)
            if abs(q0) < 1e-2:
                continue
            fq0, _ = se.evaluate(f, q0)
            alpha = (1 - abs(fq0) ** 2) / (1 - abs(q0) ** 2)
            fh = hyperbolic_derivative(f, q0)
            assert abs(fh) <= dieudonne_sup_rhs(abs(q0), alpha) + 1e-9

    def test_degenerate_at_zero(self):
        with pytest.raises(DegenerateAtZero):
            dieudonne_rhs(ZERO, ZERO)


class TestGoluzinBound:
    def test_zero_derivative_case(self):
        r = 0.3
        assert abs(goluzin_rhs(0.0, r) - 2 * r / (1 + r * r)) <= 1e-15

    def test_unit_derivative_case(self):
        assert goluzin_rhs(1.0, 0.5) == 1.0

    def test_equality_for_square(self):
        # f = q^2 has f'(0) = 0; at real r the bound is attained
        for r in (0.2, 0.5, 0.7):
            fh = hyperbolic_derivative(Q2, Quaternion(r))
            assert abs(abs(fh) - goluzin_rhs(0.0, r)) <= 1e-9

    def test_bound_holds_generic(self, rng):
        f = TaylorSeries.from_quaternions(
            [ZERO, Quaternion(0.3), Quaternion(0.0, 0.2), Quaternion(0.2)],
            exact=True)
        dc0 = abs(se.cullen_derivative(f).coefficient(0))
        for _ in range(40):
            q0 = rand_q(rng, 0.8)
            fh = hyperbolic_derivative(f, q0)
            assert abs(fh) <= goluzin_rhs(min(dc0, 1.0), abs(q0)) + 1e-9


class TestBalphaBounds:
    def test_alpha_zero(self):
        lo, hi = balpha_bounds(0.0, 0.4)
        assert abs(lo + 2 * 0.4 / (1 + 0.16)) <= 1e-15
        assert abs(hi - 2 * 0.4 / (1 + 0.16)) <= 1e-15

    def test_at_origin(self):
        lo, hi = balpha_bounds(0.3, 0.0)
        assert lo == 0.3 and hi == 0.3

    def test_bounds_hold_for_real_alpha_family(self, rng):
        alpha = 0.5
        f = TaylorSeries.from_quaternions(
            [ZERO, Quaternion(alpha), Quaternion(0.2, 0.1, 0.0, 0.1)],
            exact=True)
        for _ in range(30):
            q0 = rand_q(rng, 0.75)
            lo, hi = balpha_bounds(alpha, abs(q0))
            fh = hyperbolic_derivative(f, q0)
            assert fh.re >= lo - 1e-9
            assert abs(fh) <= hi + 1e-9

    def test_validation(self):
        with pytest.raises(ValueError):
            balpha_bounds(1.5, 0.2)
        with pytest.raises(ValueError):
            balpha_bounds(0.2, 1.5)
