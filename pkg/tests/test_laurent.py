"""Series layer: Weierstrass expansions, embedding, solvers."""

import random
from fractions import Fraction

import pytest

from elldiff.scalars import Scalar
from elldiff.ellfield import CurveParams, EllFn, Poly, RatFn
from elldiff.laurent import (
    LaurentSeries, SBounds, SElement, TruncationError, embed, embed_S,
    s_membership, scale_arg, solve_scalar_first_order, solve_system_regular,
    verify_system, weierstrass_series,
)
from tests.test_exact import rand_ellfn

CURVE = CurveParams(Scalar(4), Scalar(0))

CURVES = [CurveParams(Scalar(4), Scalar(0)), CurveParams(Scalar(0), Scalar(4)),
          CurveParams(Scalar(4), Scalar(4)), CurveParams(Scalar(1), Scalar(1)),
          CurveParams(Scalar(-4), Scalar(0))]


def frac(p, q=1):
    return Scalar(Fraction(p, q))


# -- series arithmetic -------------------------------------------------------

def test_series_basic_arithmetic():
    f = LaurentSeries(-1, [1, 0, 2], 4)   # z^-1 + 2 z
    g = LaurentSeries(0, [1, 1], 4)       # 1 + z
    assert (f + g)[-1] == Scalar(1)
    assert (f + g)[1] == Scalar(3)
    assert (f * g)[-1] == Scalar(1)
    assert (f * g)[0] == Scalar(1)
    h = f * f.inverse()
    assert h.is_zero() or (h.val == 0 and h[0] == Scalar(1))
    assert all(h[n].is_zero() for n in range(1, h.trunc))


def test_series_truncation_tracking():
    f = LaurentSeries(-2, [1], 10)
    g = LaurentSeries(0, [1], 5)
    assert (f * g).trunc == 3  # -2 + 5
    assert (f + g).trunc == 5


def test_zero_series_convention():
    z = LaurentSeries.zero(7)
    assert z.is_zero() and z.trunc == 7 and z.val == 7
    assert (z * LaurentSeries(-3, [1], 9)).is_zero()


# -- Weierstrass expansions --------------------------------------------------

def test_wp_examples():
    wp = weierstrass_series(CURVE, "wp", 10)
    assert wp[-2] == Scalar(1)
    assert wp[2] == frac(1, 5)
    assert wp[6] == frac(1, 75)
    assert wp[0].is_zero() and wp[4].is_zero()


def test_zeta_leading_terms():
    for curve in CURVES:
        zeta = weierstrass_series(curve, "zeta", 10)
        assert zeta[-1] == Scalar(1)
        assert zeta[3] == -(curve.g2 / Scalar(60))
        assert zeta[5] == -(curve.g3 / Scalar(140))


def test_degenerate_wp_is_pure_pole():
    # g2 = g3 = 0 is singular, so approximate with the recursion directly:
    # all c_k vanish when both seeds vanish.  Use a curve object bypass.
    from elldiff.laurent import _wp_coefficients
    cs = _wp_coefficients(Scalar(0), Scalar(0), 12)
    assert all(c.is_zero() for c in cs)


def test_order_too_small():
    with pytest.raises(ValueError):
        weierstrass_series(CURVE, "wp", 7)


def test_weierstrass_relation_to_order_50():
    rng = random.Random(5)
    curves = list(CURVES)
    while len(curves) < 5 + 3:
        g2, g3 = rng.randint(-6, 6), rng.randint(-6, 6)
        try:
            curves.append(CurveParams(Scalar(g2), Scalar(g3)))
        except ValueError:
            pass
    for curve in curves:
        wp = weierstrass_series(curve, "wp", 50)
        wpp = weierstrass_series(curve, "wp_prime", 50)
        resid = wpp * wpp - Scalar(4) * wp ** 3 + curve.g2 * wp + curve.g3
        assert resid.is_zero(), f"relation fails on {curve}"
        assert resid.trunc >= 44


def test_zeta_sigma_relations():
    for curve in CURVES[:3]:
        wp = weierstrass_series(curve, "wp", 50)
        zeta = weierstrass_series(curve, "zeta", 50)
        sigma = weierstrass_series(curve, "sigma", 50)
        assert (zeta.derivative() + wp).is_zero()
        resid = sigma.derivative() - zeta * sigma
        assert resid.is_zero()
        assert sigma.val == 1 and sigma[1] == Scalar(1)
        assert sigma[2].is_zero() and sigma[3].is_zero() and sigma[4].is_zero()


# -- embedding ---------------------------------------------------------------

def test_embed_generators():
    assert embed(EllFn.x(CURVE), 30) == weierstrass_series(CURVE, "wp", 30)
    assert embed(EllFn.const(5, CURVE), 12) == LaurentSeries.const(5, 12)
    y2 = embed(EllFn.y(CURVE), 40) ** 2
    rhs = embed(EllFn.from_ratfn(CURVE.rhs_ratfn(), CURVE), 40)
    assert y2.agrees_with(rhs)


def test_embed_is_field_hom():
    rng = random.Random(23)
    for k in range(100):
        f, g = rand_ellfn(rng), rand_ellfn(rng)
        ef, eg = embed(f, 25), embed(g, 25)
        assert embed(f + g, 25).agrees_with(ef + eg)
        assert embed(f * g, 25).agrees_with(ef * eg)
    # division too, on a few
    for k in range(10):
        f, g = rand_ellfn(rng), rand_ellfn(rng)
        if g.is_zero():
            continue
        assert embed(f / g, 20).agrees_with(embed(f, 25) / embed(g, 25))


def test_derive_matches_series_derivative():
    rng = random.Random(31)
    for _ in range(20):
        f = rand_ellfn(rng)
        assert embed(f.derivative(), 20).agrees_with(embed(f, 25).derivative())


# -- argument scaling ---------------------------------------------------------

def test_scale_arg_examples():
    f = LaurentSeries(-1, [1, 0, 1], 2)  # z^-1 + z
    g = scale_arg(f, 2)
    assert g[-1] == frac(1, 2) and g[1] == Scalar(2)
    assert scale_arg(f, 1) == f


def test_scale_arg_ring_hom():
    rng = random.Random(41)
    for _ in range(20):
        f = LaurentSeries(-2, [rng.randint(-4, 4) for _ in range(12)], 10)
        g = LaurentSeries(-1, [rng.randint(-4, 4) for _ in range(11)], 10)
        assert scale_arg(f * g, 3) == scale_arg(f, 3) * scale_arg(g, 3)
        assert scale_arg(scale_arg(f, 2), 3) == scale_arg(f, 6)


# -- the ring S ----------------------------------------------------------------

def test_embed_S_examples():
    zeta = weierstrass_series(CURVE, "zeta", 20)
    s = SElement.from_dict({(0, 1): EllFn.const(1, CURVE)}, CURVE)
    assert embed_S(s, 20).agrees_with(zeta)
    s2 = SElement.from_dict({(1, 0): EllFn.const(1, CURVE),
                             (-1, 0): EllFn.const(1, CURVE)}, CURVE)
    e = embed_S(s2, 10)
    assert e[-1] == Scalar(1) and e[1] == Scalar(1) and e[0].is_zero()
    s3 = SElement.from_dict({(0, 1): EllFn.const(1, CURVE),
                             (0, 0): EllFn.const(3, CURVE)}, CURVE)
    e3 = embed_S(s3, 15)
    assert e3.agrees_with(zeta + LaurentSeries.const(3, 15))


def test_s_membership_zeta_and_wp():
    bounds = SBounds(max_zeta_pow=1, max_z_range=1, max_pole_order=3)
    zeta = weierstrass_series(CURVE, "zeta", 40)
    w = s_membership(zeta, bounds, CURVE)
    assert w is not None
    d = w.as_dict()
    assert set(d) == {(0, 1)} and d[(0, 1)] == EllFn.const(1, CURVE)

    wp = weierstrass_series(CURVE, "wp", 40)
    w2 = s_membership(wp, bounds, CURVE)
    assert w2 is not None
    d2 = w2.as_dict()
    assert set(d2) == {(0, 0)} and d2[(0, 0)] == EllFn.x(CURVE)


def test_s_membership_mixed():
    zeta = weierstrass_series(CURVE, "zeta", 45)
    wp = weierstrass_series(CURVE, "wp", 45)
    target = LaurentSeries.z_power(1, 45) * wp + Scalar(3) * zeta
    w = s_membership(target, SBounds(1, 1, 3), CURVE)
    assert w is not None
    d = w.as_dict()
    assert d[(1, 0)] == EllFn.x(CURVE)
    assert d[(0, 1)] == EllFn.const(3, CURVE)


def test_s_membership_rejects_factorials():
    # 31 known coefficients cannot pin down the 280-dimensional candidate
    # space at these bounds: the window system is consistent, so a None
    # verdict would be unsound and the call must refuse instead
    import math
    f = LaurentSeries(0, [Scalar(math.factorial(n)) for n in range(31)], 31)
    bounds = SBounds(max_zeta_pow=3, max_z_range=3, max_pole_order=10)
    with pytest.raises(TruncationError):
        s_membership(f, bounds, CURVE)


def test_s_membership_sound_none_under_small_window():
    # inconsistency on the known window is conclusive at any truncation
    f = LaurentSeries(3, [1], 12)  # exactly z^3
    assert s_membership(f, SBounds(0, 0, 2), CURVE) is None


def test_s_membership_truncation_guard():
    # consistent but underdetermined data must raise, never mislead
    zeta = weierstrass_series(CURVE, "zeta", 12)
    with pytest.raises(TruncationError):
        s_membership(zeta, SBounds(3, 3, 10), CURVE)


# -- scalar first order solver ---------------------------------------------------

def test_scalar_solver_nonresonant():
    res = solve_scalar_first_order(Scalar(3), LaurentSeries.const(1, 10), 2)
    assert res.particular is not None
    assert res.particular[0] == frac(-1, 2)
    assert res.resonances == () and res.homogeneous_dim == 0
    # back substitution: u(2z) - 3u(z) = 1
    u = res.particular
    assert (scale_arg(u, 2) - Scalar(3) * u).agrees_with(LaurentSeries.const(1, 10))


def test_scalar_solver_obstructed():
    res = solve_scalar_first_order(Scalar(2), LaurentSeries(1, [1], 10), 2)
    assert res.particular is None
    assert res.obstruction == 1
    assert res.resonances == (1,)


def test_scalar_solver_free_constant():
    res = solve_scalar_first_order(Scalar(1), LaurentSeries.zero(10), 2)
    assert res.particular is not None and res.particular.is_zero()
    assert res.homogeneous_dim == 1
    assert res.resonances == (0,)


def test_scalar_solver_random_backsub():
    rng = random.Random(77)
    for _ in range(50):
        a = Scalar(rng.choice([3, 5, 7, -2, Fraction(3, 2)]))
        coeffs = [rng.randint(-5, 5) for _ in range(12)]
        b = LaurentSeries(rng.randint(-3, 0), coeffs, 30)
        b = LaurentSeries(b.val, list(b.coeffs), 30)
        res = solve_scalar_first_order(a, b, 2)
        u = res.particular
        assert u is not None
        assert (scale_arg(u, 2) - a * u).agrees_with(b)


# -- system verification -----------------------------------------------------

def build_pv_matrices(curve, q, order):
    z = LaurentSeries.z_power(1, order)
    zeta = weierstrass_series(curve, "zeta", order)
    one = LaurentSeries.const(1, order)
    zero = LaurentSeries.zero(order)
    gq = scale_arg(zeta, q) - Scalar(q) * zeta
    A = [[LaurentSeries.const(q, order), gq], [zero, one]]
    U = [[z, zeta], [zero, one]]
    return A, U


def test_verify_pv_example_series_level():
    A, U = build_pv_matrices(CURVE, 2, 40)
    res = verify_system(A, U, 2)
    assert res.ok and res.order >= 38


def test_verify_identity():
    one = LaurentSeries.const(1, 10)
    zero = LaurentSeries.zero(10)
    I2 = [[one, zero], [zero, one]]
    assert verify_system(I2, I2, 3).ok


def test_verify_detects_perturbation():
    A, U = build_pv_matrices(CURVE, 2, 40)
    A[0][1] = A[0][1] + LaurentSeries.const(1, 40)
    res = verify_system(A, U, 2)
    assert not res.ok
    assert res.order == 0  # the constant term is the first mismatch


# -- regular systems -----------------------------------------------------------

def test_solve_system_diag():
    order = 12
    one = LaurentSeries.const(1, order)
    zero = LaurentSeries.zero(order)
    q2 = LaurentSeries.const(2, order)
    A = [[one, zero], [zero, q2]]
    res = solve_system_regular(A, 2, order)
    assert res.resonances == (1,)
    assert len(res.solutions) == 2
    for sol in res.solutions:
        assert verify_system(A, [[s] for s in sol], 2).ok


def test_solve_system_identity():
    order = 10
    one = LaurentSeries.const(1, order)
    zero = LaurentSeries.zero(order)
    A = [[one, zero], [zero, one]]
    res = solve_system_regular(A, 2, order)
    assert len(res.solutions) == 2
    assert res.resonances == ()


def test_solve_system_nilpotent_perturbation():
    order = 12
    one = LaurentSeries.const(1, order)
    zero = LaurentSeries.zero(order)
    z = LaurentSeries.z_power(1, order)
    A = [[one, z], [zero, one]]
    res = solve_system_regular(A, 2, order)
    assert len(res.solutions) == 2
    # one solution is (1,0); the other has second entry 1 and first entry z
    firsts = sorted(res.solutions, key=lambda s: 0 if s[1].is_zero() else 1)
    assert firsts[0][0][0] == Scalar(1) and firsts[0][1].is_zero()
    u = firsts[1][0]
    assert firsts[1][1][0] == Scalar(1)
    assert u[1] == Scalar(1) and all(u[n].is_zero() for n in range(2, u.trunc))
    for sol in res.solutions:
        assert verify_system(A, [[s] for s in sol], 2).ok


def test_solve_system_rejects_pole():
    order = 10
    one = LaurentSeries.const(1, order)
    pole = LaurentSeries.z_power(-1, order)
    with pytest.raises(ValueError, match="verify_system"):
        solve_system_regular([[pole, one], [one, one]], 2, order)


# -- companion correspondence ---------------------------------------------------

def test_companion_correspondence_series():
    # u = zeta satisfies the order-2 scalar equation obtained by eliminating
    # g from u(qz) = q u(z) + g(z): with w = g(qz)/g(z),
    #   u(q^2 z) - (q + w) u(qz) + q w u(z) = 0
    order = 40
    q = 2
    zeta = weierstrass_series(CURVE, "zeta", order)
    g = scale_arg(zeta, q) - Scalar(q) * zeta
    w = scale_arg(g, q) / g
    u = zeta
    lhs = scale_arg(u, q * q) - (LaurentSeries.const(q, order) + w) * scale_arg(u, q) \
        + Scalar(q) * w * u
    assert lhs.is_zero()
    # companion system for Y = (u, u(qz)): Y(qz) = [[0,1],[-qw, q+w]] Y(z)
    zero = LaurentSeries.zero(order)
    one = LaurentSeries.const(1, order)
    A = [[zero, one], [Scalar(-q) * w, LaurentSeries.const(q, order) + w]]
    U = [[u], [scale_arg(u, q)]]
    assert verify_system(A, U, q).ok
