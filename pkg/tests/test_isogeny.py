"""Division polynomials, pullbacks, the group law, divisor realization."""

import random
from fractions import Fraction

import pytest

from elldiff.scalars import Scalar
from elldiff.ellfield import CurveParams, EllFn, Poly, RatFn
from elldiff.isogeny import (
    DivisorError, PointXY, ShortCurve, division_polys, ec_add, ec_mul,
    function_from_divisor, g_element, order_at, pullback, translate,
)
from elldiff.laurent import LaurentSeries, embed, scale_arg, weierstrass_series
from tests.test_exact import rand_ellfn

CURVE = CurveParams(Scalar(4), Scalar(0))
CURVE2 = CurveParams(Scalar(1), Scalar(1))


def test_short_curve_round_trip():
    sc = ShortCurve.from_curve(CURVE)
    assert sc.A == Scalar(-1) and sc.B == Scalar(0)
    assert sc.to_curve() == CURVE


def test_division_poly_seeds():
    seq = division_polys(CURVE, 4)
    assert seq.poly(1) == Poly.const(1) and not seq.has_y(1)
    assert seq.poly(2) == Poly.const(2) and seq.has_y(2)
    A = ShortCurve.from_curve(CURVE).A
    B = ShortCurve.from_curve(CURVE).B
    assert seq.poly(3) == Poly([-(A * A), Scalar(12) * B, Scalar(6) * A,
                                Scalar(0), Scalar(3)])


def test_psi4_divisible_by_psi2():
    seq = division_polys(CURVE2, 8)
    # duplication identity: psi_{2k} * psi_2 = psi_k (psi_{k+2} psi_{k-1}^2
    #                                              - psi_{k-2} psi_{k+1}^2)
    rhs_short = ShortCurve.from_curve(CURVE2).rhs()

    def full(k):  # as polynomial in X with Y^2 already reduced, Y factored out
        p = seq.poly(k)
        return p, seq.has_y(k)

    for k in (3, 4):
        p2k, e2k = full(2 * k)
        p2, e2 = full(2)
        lhs = p2k * p2
        el = e2k + e2
        pk, ek = full(k)
        pa, ea = full(k + 2)
        pb, eb = full(k - 1)
        pc, ec_ = full(k - 2)
        pd, ed = full(k + 1)
        t1 = pa * pb * pb
        t1e = ea + 2 * eb
        t2 = pc * pd * pd
        t2e = ec_ + 2 * ed
        # reduce Y powers mod Y^2 = rhs
        t1 = t1 * rhs_short ** (t1e // 2)
        t2 = t2 * rhs_short ** (t2e // 2)
        assert t1e % 2 == t2e % 2
        rhs_val = pk * (t1 - t2)
        er = ek + (t1e % 2)
        lhs = lhs * rhs_short ** (el // 2)
        rhs_val = rhs_val * rhs_short ** (er // 2)
        assert el % 2 == er % 2
        assert lhs == rhs_val


def test_pullback_identity():
    rng = random.Random(2)
    f = rand_ellfn(rng)
    assert pullback(f, 1) == f


def test_pullback_wp_doubling_series():
    # wp(2z) from the field map must match the argument-scaled series
    for m in (2, 3):
        lhs = embed(pullback(EllFn.x(CURVE), m), 40)
        rhs = scale_arg(embed(EllFn.x(CURVE), 40), m)
        assert lhs.agrees_with(rhs)


def test_pullback_master_oracle():
    rng = random.Random(9)
    for curve in (CURVE, CURVE2):
        for m in (2, 3, 4, 5, 6):
            for _ in range(3):
                f = rand_ellfn(rng, curve=curve)
                lhs = embed(pullback(f, m), 40)
                rhs = scale_arg(embed(f, 40), m)
                assert lhs.agrees_with(rhs), (curve, m)


def test_pullback_multiplicative():
    rng = random.Random(10)
    for _ in range(5):
        f = rand_ellfn(rng)
        assert pullback(pullback(f, 2), 3) == pullback(f, 6)


def test_pullback_is_hom():
    rng = random.Random(12)
    for _ in range(5):
        f, g = rand_ellfn(rng), rand_ellfn(rng)
        assert pullback(f * g, 2) == pullback(f, 2) * pullback(g, 2)
        assert pullback(f + g, 2) == pullback(f, 2) + pullback(g, 2)


def test_g_element_m2_closed_form():
    # Psi_2 = -wp', so g_2 = (1/2) wp''/wp' = (6x^2 - g2/2)/(2y)
    g = g_element(CURVE, 2)
    expected = EllFn(RatFn(Poly()), RatFn(Poly([-CURVE.g2 / Scalar(2), Scalar(0), Scalar(6)]),
                                          Poly([Scalar(0), Scalar(2)])), CURVE)
    # expected = (6x^2 - g2/2) / (2y) written as b(x) * y with b = (...)/ (2 rhs)
    rhs = CURVE.rhs_ratfn()
    b = RatFn(Poly([-CURVE.g2 / Scalar(2), Scalar(0), Scalar(6)])) / (RatFn(Poly.const(2)) * rhs)
    assert g == EllFn(RatFn(Poly()), b, CURVE)


def test_g_element_series():
    for curve in (CURVE, CURVE2):
        zeta = weierstrass_series(curve, "zeta", 40)
        for m in (2, 3, 4, 5):
            series = embed(g_element(curve, m), 40)
            target = scale_arg(zeta, m) - Scalar(m) * zeta
            assert series.agrees_with(target), (curve, m)
            lead_val, lead = series.leading()
            assert lead_val == -1
            assert lead == Scalar(Fraction(1, m) - m)


def test_g_cocycle():
    zeta = weierstrass_series(CURVE, "zeta", 40)
    for m, n in ((2, 3), (3, 2), (2, 2)):
        lhs = embed(pullback(g_element(CURVE, m), n), 40) \
            + Scalar(m) * embed(g_element(CURVE, n), 40)
        target = scale_arg(zeta, m * n) - Scalar(m * n) * zeta
        assert lhs.agrees_with(target)


# -- group law ----------------------------------------------------------------

def two_torsion_point():
    # (0, 0) lies on y^2 = 4x^3 - 4x
    return PointXY.affine(0, 0, CURVE)


def test_ec_add_identity_and_inverse():
    P = PointXY.affine(-1, 0, CURVE)
    O = PointXY.infinity(CURVE)
    assert ec_add(P, O) == P
    assert ec_add(O, P) == P
    Q = PointXY.affine(2, Scalar(2) * Scalar(Fraction(6)) ** 0, CURVE) if False else None
    assert ec_add(P, -P).is_infinity


def test_two_torsion_doubles_to_infinity():
    T = two_torsion_point()
    assert ec_add(T, T).is_infinity


def test_ec_add_associativity_sampled():
    # rational points on y^2 = 4x^3 - 4x + 1... use curve with known points
    curve = CurveParams(Scalar(4), Scalar(0))
    pts = [PointXY.affine(0, 0, curve), PointXY.affine(1, 0, curve),
           PointXY.affine(-1, 0, curve), PointXY.infinity(curve)]
    for P in pts:
        for Q in pts:
            for R in pts:
                assert ec_add(ec_add(P, Q), R) == ec_add(P, ec_add(Q, R))


def test_point_validation():
    with pytest.raises(ValueError):
        PointXY.affine(5, 1, CURVE)


# -- translation and divisor realization ---------------------------------------

def test_translate_matches_group_law():
    # x(z + z_P) evaluated at a point Q equals x(Q + P)
    P = PointXY.affine(-1, 0, CURVE)
    shifted = translate(EllFn.x(CURVE), P)
    Q = PointXY.affine(0, 0, CURVE)
    s = ec_add(Q, P)
    # evaluate shifted at Q by substituting coordinates
    num = shifted.a.num.eval(Q.x)
    den = shifted.a.den.eval(Q.x)
    b_num = shifted.b.num.eval(Q.x)
    b_den = shifted.b.den.eval(Q.x)
    val = num / den + (b_num / b_den) * Q.y
    assert val == s.x


def test_function_from_divisor_canonical_pair():
    P = PointXY.affine(-1, 0, CURVE)
    f = function_from_divisor([(P, 1), (-P, 1), (PointXY.infinity(CURVE), -2)])
    # expected x - x(P) up to constant
    expected = EllFn.x(CURVE) - EllFn.const(P.x, CURVE)
    ratio = f / expected
    assert ratio.constant_value() is not None


def test_function_from_divisor_two_torsion():
    T = two_torsion_point()
    f = function_from_divisor([(T, 2), (PointXY.infinity(CURVE), -2)])
    ratio = f / (EllFn.x(CURVE) - EllFn.const(T.x, CURVE))
    assert ratio.constant_value() is not None
    assert order_at(f, T) == 2
    assert order_at(f, PointXY.infinity(CURVE)) == -2


def test_function_from_divisor_errors():
    P = PointXY.affine(-1, 0, CURVE)
    with pytest.raises(DivisorError):
        function_from_divisor([(P, 1), (PointXY.infinity(CURVE), -2)])
    T = two_torsion_point()
    with pytest.raises(DivisorError):
        function_from_divisor([(P, 1), (T, 1), (PointXY.infinity(CURVE), -2)])


def test_function_from_divisor_round_trip_orders():
    # 2-torsion combinations keep coordinates in Q(i)
    T1 = PointXY.affine(0, 0, CURVE)
    T2 = PointXY.affine(1, 0, CURVE)
    T3 = PointXY.affine(-1, 0, CURVE)
    O = PointXY.infinity(CURVE)
    div = [(T1, 1), (T2, 1), (T3, 2), (O, -4)]
    # group sum: T1 + T2 + 2*T3 = T1 + T2 (2-torsion) = T3
    # fix by using T1+T2+T3 = O for the three 2-torsion points
    div = [(T1, 1), (T2, 1), (T3, 1), (O, -3)]
    f = function_from_divisor(div)
    assert order_at(f, T1) == 1
    assert order_at(f, T2) == 1
    assert order_at(f, T3) == 1
    assert order_at(f, O) == -3


def test_order_at_via_translation():
    f = EllFn.x(CURVE) - EllFn.const(-1, CURVE)
    P = PointXY.affine(-1, 0, CURVE)   # 2-torsion: double zero
    assert order_at(f, P) == 2
    Q = PointXY.affine(0, 0, CURVE)
    assert order_at(f, Q) == 0
    assert order_at(f, PointXY.infinity(CURVE)) == -2


def test_ec_mul_matches_pullback_on_x():
    # x([3]P) computed through the field map equals the group law value
    P = PointXY.affine(2, Scalar(2) * Scalar(3) ** 0, CURVE) if False else None
    curve = CURVE
    # take P = (-1, 0) + something non-torsion is hard in Q(i); use 2-torsion
    T = PointXY.affine(1, 0, curve)
    x3 = pullback(EllFn.x(curve), 3)
    num = x3.a.num.eval(T.x)
    den = x3.a.den.eval(T.x)
    assert num / den == ec_mul(T, 3).x
