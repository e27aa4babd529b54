"""Multiplication-by-m on the curve and on its function field.

Division polynomials are computed on the short form Y^2 = X^3 + AX + B
(A = -g2/4, B = -g3/4 under x -> X, y -> 2Y) where the classical
recurrences live, then transported back to the 4x^3 normalization.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from .scalars import Scalar, ZERO, ONE
from .ellfield import CurveParams, EllFn, Poly, RatFn, rat_eval_ell


# ---------------------------------------------------------------------------
# short Weierstrass bridge
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShortCurve:
    """Y^2 = X^3 + AX + B."""

    A: Scalar
    B: Scalar

    def __post_init__(self):
        disc = Scalar(4) * self.A ** 3 + Scalar(27) * self.B ** 2
        if disc.is_zero():
            raise ValueError("singular short curve: 4A^3 + 27B^2 = 0")

    @staticmethod
    def from_curve(curve: CurveParams) -> "ShortCurve":
        return ShortCurve(-curve.g2 / Scalar(4), -curve.g3 / Scalar(4))

    def to_curve(self) -> CurveParams:
        return CurveParams(Scalar(-4) * self.A, Scalar(-4) * self.B)

    def rhs(self) -> Poly:
        return Poly([self.B, self.A, ZERO, ONE])


# ---------------------------------------------------------------------------
# curve points and the group law (4x^3 normalization)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PointXY:
    """Affine point (x, y) with exact coordinates, or the point at infinity."""

    curve: CurveParams
    x: Optional[Scalar] = None
    y: Optional[Scalar] = None

    def __post_init__(self):
        if (self.x is None) != (self.y is None):
            raise ValueError("affine points need both coordinates")
        if self.x is not None:
            lhs = self.y * self.y
            rhs = self.curve.rhs().eval(self.x)
            if lhs != rhs:
                raise ValueError(f"point ({self.x}, {self.y}) is not on the curve")

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    @staticmethod
    def infinity(curve: CurveParams) -> "PointXY":
        return PointXY(curve)

    @staticmethod
    def affine(x, y, curve: CurveParams) -> "PointXY":
        return PointXY(curve, Scalar.coerce(x), Scalar.coerce(y))

    def __neg__(self) -> "PointXY":
        if self.is_infinity:
            return self
        return PointXY(self.curve, self.x, -self.y)


def ec_add(P: PointXY, Q: PointXY) -> PointXY:
    """Chord-tangent addition on y^2 = 4x^3 - g2 x - g3."""
    if P.curve != Q.curve:
        raise ValueError("points on different curves")
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    curve = P.curve
    if P.x == Q.x:
        if P.y == -Q.y:
            return PointXY.infinity(curve)
        # tangent: 2 y y' = 12 x^2 - g2
        lam = (Scalar(6) * P.x * P.x - curve.g2 / Scalar(2)) / P.y
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    # substituting y = lam (x - x_P) + y_P into 4x^3 gives root sum lam^2/4
    x3 = lam * lam / Scalar(4) - P.x - Q.x
    y3 = -(lam * (x3 - P.x) + P.y)
    return PointXY(curve, x3, y3)


def ec_mul(P: PointXY, n: int) -> PointXY:
    if n < 0:
        return ec_mul(-P, -n)
    acc = PointXY.infinity(P.curve)
    add = P
    while n:
        if n & 1:
            acc = ec_add(acc, add)
        add = ec_add(add, add)
        n >>= 1
    return acc


# ---------------------------------------------------------------------------
# division polynomials
# ---------------------------------------------------------------------------

class _YPoly:
    """P(X) * Y^eps on the short curve, eps in {0, 1}; Y^2 reduces to the cubic."""

    __slots__ = ("poly", "eps", "rhs")

    def __init__(self, poly: Poly, eps: int, rhs: Poly):
        self.poly = poly
        self.eps = eps
        self.rhs = rhs

    def mul(self, other: "_YPoly") -> "_YPoly":
        p = self.poly * other.poly
        e = self.eps + other.eps
        if e == 2:
            return _YPoly(p * self.rhs, 0, self.rhs)
        return _YPoly(p, e, self.rhs)

    def sub(self, other: "_YPoly") -> "_YPoly":
        if self.poly.is_zero():
            return _YPoly(-other.poly, other.eps, self.rhs)
        if other.poly.is_zero():
            return self
        if self.eps != other.eps:
            raise ValueError("mixed parity difference in the division recurrence")
        return _YPoly(self.poly - other.poly, self.eps, self.rhs)

    def div_2y(self) -> "_YPoly":
        half = Scalar(Fraction(1, 2))
        if self.eps == 1:
            return _YPoly(self.poly * half, 0, self.rhs)
        return _YPoly(self.poly.exact_div(self.rhs) * half, 1, self.rhs)

    def cube(self) -> "_YPoly":
        return self.mul(self).mul(self)

    def square(self) -> "_YPoly":
        return self.mul(self)


@dataclass(frozen=True)
class DivPolySeq:
    """psi_0..psi_m as (polynomial in X, power of Y) pairs on the short curve."""

    curve: CurveParams
    entries: Tuple[Tuple[Poly, int], ...]

    def __len__(self):
        return len(self.entries)

    def poly(self, k: int) -> Poly:
        return self.entries[k][0]

    def has_y(self, k: int) -> bool:
        return self.entries[k][1] == 1


@lru_cache(maxsize=None)
def _division_entries(curve: CurveParams, m: int) -> Tuple[Tuple[Poly, int], ...]:
    short = ShortCurve.from_curve(curve)
    A, B = short.A, short.B
    rhs = short.rhs()
    psi: List[_YPoly] = [
        _YPoly(Poly(), 0, rhs),
        _YPoly(Poly.const(1), 0, rhs),
        _YPoly(Poly.const(2), 1, rhs),
        _YPoly(Poly([-(A * A), Scalar(12) * B, Scalar(6) * A, ZERO, Scalar(3)]), 0, rhs),
        _YPoly(Poly([-(Scalar(8) * B * B) - A ** 3, -(Scalar(4) * A * B),
                     -(Scalar(5) * A * A), Scalar(20) * B, Scalar(5) * A,
                     ZERO, ONE]) * Scalar(4), 1, rhs),
    ]
    for n in range(5, m + 1):
        k = n // 2
        if n % 2 == 1:
            term = psi[k + 2].mul(psi[k].cube()).sub(psi[k - 1].mul(psi[k + 1].cube()))
            psi.append(term)
        else:
            inner = psi[k + 2].mul(psi[k - 1].square()).sub(psi[k - 2].mul(psi[k + 1].square()))
            psi.append(psi[k].mul(inner).div_2y())
    return tuple((p.poly, p.eps) for p in psi[:m + 1])


def division_polys(curve: CurveParams, m: int) -> DivPolySeq:
    """psi_1..psi_m on the short curve attached to this 4x^3 curve."""
    if m < 1:
        raise ValueError("division polynomial index must be at least 1")
    return DivPolySeq(curve, _division_entries(curve, m))


@lru_cache(maxsize=None)
def _mult_by_m_maps(curve: CurveParams, m: int) -> Tuple[EllFn, EllFn]:
    """(x o [m], y o [m]) as elliptic functions on the 4x^3 curve."""
    entries = _division_entries(curve, max(2 * m, 4))
    rhs_short = ShortCurve.from_curve(curve).rhs()

    def as_x_poly(k: int) -> Tuple[Poly, int]:
        return entries[k]

    pm, em = as_x_poly(m)
    pm1, em1 = as_x_poly(m - 1)
    pp1, ep1 = as_x_poly(m + 1)
    # psi_{m-1} psi_{m+1}: same parity, Y^2 -> cubic when even index pair
    prod = pm1 * pp1
    if em1 == 1:
        prod = prod * rhs_short
    den = pm * pm
    if em == 1:
        den = den * rhs_short
    x_map = RatFn(Poly.x()) - RatFn(prod, den)
    # y o [m] = y * P_{2m} / (2 psi_m^4) where psi_{2m} = P_{2m} * Y
    p2m, e2m = entries[2 * m]
    assert e2m == 1, "psi at an even index must carry Y"
    den_y = den * den * Scalar(2)
    y_map_b = RatFn(p2m, den_y)
    x_ell = EllFn(x_map, RatFn(Poly()), curve)
    y_ell = EllFn(RatFn(Poly()), y_map_b, curve)
    return x_ell, y_ell


def _rat_at_ratfn(r: RatFn, N: Poly, D: Poly) -> RatFn:
    """r(N/D) by clearing the common denominator once."""
    d = max(r.num.degree(), r.den.degree(), 0)
    n_pows = [Poly.const(1)]
    d_pows = [Poly.const(1)]
    for _ in range(d):
        n_pows.append(n_pows[-1] * N)
        d_pows.append(d_pows[-1] * D)

    def lift(p: Poly) -> Poly:
        acc = Poly()
        for i, c in enumerate(p.coeffs):
            if not c.is_zero():
                acc = acc + n_pows[i] * d_pows[d - i] * c
        return acc

    return RatFn(lift(r.num), lift(r.den))


def pullback(f: EllFn, m: int) -> EllFn:
    """f(z) -> f(mz): substitute the multiplication-by-m rational map."""
    if m < 1:
        raise ValueError("pullback needs a positive integer multiplier")
    if m == 1:
        return f
    xm, ym = _mult_by_m_maps(f.curve, m)
    N, D = xm.a.num, xm.a.den
    a_part = _rat_at_ratfn(f.a, N, D) if not f.a.is_zero() else RatFn(Poly())
    if f.b.is_zero():
        return EllFn(a_part, RatFn(Poly()), f.curve)
    b_part = _rat_at_ratfn(f.b, N, D) * ym.b
    return EllFn(a_part, b_part, f.curve)


def pullback_matrix(A: Sequence[Sequence[EllFn]], m: int) -> List[List[EllFn]]:
    return [[pullback(entry, m) for entry in row] for row in A]


# ---------------------------------------------------------------------------
# the elements g_m = zeta(mz) - m zeta(z)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def g_element(curve: CurveParams, m: int) -> EllFn:
    """zeta(mz) - m zeta(z) as an exact elliptic function.

    Realized as (1/m) * D(Psi_m)/Psi_m where Psi_m = sigma(mz)/sigma(z)^(m^2)
    agrees with the division polynomial up to a constant, which the
    logarithmic derivative kills.
    """
    if m < 2:
        raise ValueError("g_element needs m >= 2")
    entries = _division_entries(curve, max(m, 4))
    p, eps = entries[m]
    if eps:
        # P(x) * y/2
        psi = EllFn(RatFn(Poly()), RatFn(p) * Scalar(Fraction(1, 2)), curve)
    else:
        psi = EllFn(RatFn(p), RatFn(Poly()), curve)
    return psi.derivative() / psi * Scalar(Fraction(1, m))


# ---------------------------------------------------------------------------
# translation by a point and functions from divisors
# ---------------------------------------------------------------------------

def translate(f: EllFn, P: PointXY) -> EllFn:
    """f(z + z_P) as an element of the field, for P with exact coordinates."""
    if P.is_infinity:
        return f
    curve = f.curve
    x, y = EllFn.x(curve), EllFn.y(curve)
    cx, cy = EllFn.const(P.x, curve), EllFn.const(P.y, curve)
    lam = (y - cy) / (x - cx)
    xs = lam * lam * Scalar(Fraction(1, 4)) - x - cx
    ys = -(lam * (xs - cx) + cy)
    out = rat_eval_ell(f.a, xs)
    if not f.b.is_zero():
        out = out + rat_eval_ell(f.b, xs) * ys
    return out


class DivisorError(ValueError):
    pass


def function_from_divisor(points: Sequence[Tuple[PointXY, int]]) -> EllFn:
    """A function with the prescribed principal divisor, by chord reduction.

    The divisor must have degree zero and group-law sum O; the returned
    representative is the product of the chord/vertical line quotients and
    is unique only up to a nonzero constant.
    """
    pts = [(P, mult) for P, mult in points if mult]
    if not pts:
        raise DivisorError("empty divisor list; pass the curve via a point")
    curve = pts[0][0].curve
    one = EllFn.const(1, curve)
    if sum(mult for _, mult in pts) != 0:
        raise DivisorError("divisor degree is not zero")

    def vertical(P: PointXY) -> EllFn:
        return EllFn.x(curve) - EllFn.const(P.x, curve)

    # normalize to a bag of ((P) - (O)) summands, inverting negative ones
    bag: List[PointXY] = []
    fn = one
    for P, mult in pts:
        if P.is_infinity:
            continue  # O entries only shift the (O)-count, fixed by degree 0
        if mult > 0:
            bag.extend([P] * mult)
        else:
            # -((P)-(O)) = ((-P)-(O)) - div(x - x_P)
            bag.extend([-P] * (-mult))
            for _ in range(-mult):
                fn = fn / vertical(P)

    acc = PointXY.infinity(curve)
    for P in bag:
        if acc.is_infinity:
            acc = P
            continue
        s = ec_add(acc, P)
        if s.is_infinity:
            # chord through acc and P = -acc is vertical
            fn = fn * vertical(acc)
            acc = s
            continue
        if acc.x == P.x and acc.y == P.y:
            lam = (Scalar(6) * acc.x * acc.x - curve.g2 / Scalar(2)) / acc.y
        else:
            lam = (P.y - acc.y) / (P.x - acc.x)
        mu = acc.y - lam * acc.x
        line = EllFn.y(curve) - EllFn.from_ratfn(
            RatFn(Poly([mu, lam])), curve)
        fn = fn * line / vertical(s)
        acc = s
    if not acc.is_infinity:
        raise DivisorError(
            "divisor has nonzero group-law sum; no such function exists")
    return fn


def order_at(f: EllFn, P: PointXY, probe_order: int = 24) -> int:
    """Zero/pole order of f at a point with exact coordinates."""
    from .laurent import embed  # local import to keep layering one-way
    if f.is_zero():
        raise ValueError("the zero function has no divisor")
    shifted = translate(f, P)
    return embed(shifted, probe_order).leading()[0]
