"""Polynomials, rational functions and the elliptic function field over Q(i).

An elliptic function is stored in the canonical form a(x) + b(x)*y on a
fixed curve y^2 = 4x^3 - g2*x - g3, with a, b reduced rational functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

from .scalars import Scalar, ZERO, ONE


# ---------------------------------------------------------------------------
# dense polynomials over Q(i)
# ---------------------------------------------------------------------------

class Poly:
    """Dense polynomial, coefficients ascending by degree, no trailing zeros."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Scalar.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- basics ---------------------------------------------------------

    @staticmethod
    def const(c) -> "Poly":
        return Poly([Scalar.coerce(c)])

    @staticmethod
    def x(power: int = 1) -> "Poly":
        return Poly([ZERO] * power + [ONE])

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def leading(self) -> Scalar:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, k: int) -> Scalar:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return ZERO

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self.coeffs[0] if self.coeffs else ZERO

    # -- ring operations --------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __mul__(self, other) -> "Poly":
        if isinstance(other, Scalar):
            return Poly([c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    def __rmul__(self, other):
        return self * Scalar.coerce(other)

    def scale(self, c) -> "Poly":
        return self * Scalar.coerce(c)

    def __pow__(self, n: int) -> "Poly":
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = other.degree()
        lead_inv = other.leading().inverse()
        quo = [ZERO] * max(0, len(rem) - d)
        for i in range(len(rem) - d - 1, -1, -1):
            c = rem[i + d] * lead_inv
            if c.is_zero():
                continue
            quo[i] = c
            for j, oc in enumerate(other.coeffs):
                rem[i + j] = rem[i + j] - c * oc
        return Poly(quo), Poly(rem[:d])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError("polynomial division is not exact")
        return q

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * self.leading().inverse()

    def derivative(self) -> "Poly":
        return Poly([c * Scalar(k) for k, c in enumerate(self.coeffs)][1:])

    def eval(self, x):
        """Horner evaluation; works for any value supporting + and *."""
        if not self.coeffs:
            return ZERO if isinstance(x, Scalar) else x * 0
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    # -- equality ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append(f"({c})*x")
            else:
                parts.append(f"({c})*x^{k}")
        return " + ".join(parts)


def _find_gcd_primes():
    # primes p = 1 mod 4 with a precomputed sqrt of -1, for the modular
    # coprimality certificate below
    out = []
    for p in (998244353, 1000000009, 2147483629):
        for a in range(2, 50):
            s = pow(a, (p - 1) // 4, p)
            if (s * s + 1) % p == 0:
                out.append((p, s))
                break
    return tuple(out)


_GCD_PRIMES = _find_gcd_primes()


def _reduce_mod(poly: Poly, p: int, s: int):
    """Coefficients mapped to Z/p with i -> s; None if a denominator dies."""
    out = []
    for c in poly.coeffs:
        if c.re.denominator % p == 0 or c.im.denominator % p == 0:
            return None
        re = c.re.numerator * pow(c.re.denominator, -1, p)
        im = c.im.numerator * pow(c.im.denominator, -1, p)
        out.append((re + im * s) % p)
    return out


def _poly_rem_mod_p(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        if a[-1]:
            f = a[-1] * inv % p
            off = len(a) - len(b)
            for i in range(len(b) - 1):
                a[off + i] = (a[off + i] - f * b[i]) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _gcd_degree_mod(a, b, p):
    a, b = list(a), list(b)
    while a and a[-1] == 0:
        a.pop()
    while b and b[-1] == 0:
        b.pop()
    while b:
        a, b = b, _poly_rem_mod_p(a, b, p)
    return len(a) - 1


def _certified_coprime(a: Poly, b: Poly) -> bool:
    """True only when gcd(a, b) = 1 is proven via a good prime."""
    for p, s in _GCD_PRIMES:
        ra = _reduce_mod(a, p, s)
        rb = _reduce_mod(b, p, s)
        if ra is None or rb is None:
            continue
        # the exact gcd is monic, so its image keeps full degree; a constant
        # modular gcd therefore certifies coprimality
        if _gcd_degree_mod(ra, rb, p) == 0:
            return True
        return False
    return False


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm with monic remainders."""
    if not a.is_zero() and not b.is_zero() and min(a.degree(), b.degree()) >= 8:
        if _certified_coprime(a, b):
            return Poly.const(1)
    while not b.is_zero():
        a, b = b, (a % b).monic()
    return a.monic()


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------

class RatFn:
    """Reduced rational function num/den with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = None, reduce: bool = True):
        if den is None:
            den = Poly.const(1)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = Poly(), Poly.const(1)
        elif reduce:
            if num.degree() > 0 and den.degree() > 0:
                g = poly_gcd(num, den)
                if g.degree() > 0:
                    num = num.exact_div(g)
                    den = den.exact_div(g)
            if not den.leading().is_one():
                lead_inv = den.leading().inverse()
                num = num * lead_inv
                den = den * lead_inv
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFn is immutable")

    @staticmethod
    def const(c) -> "RatFn":
        return RatFn(Poly.const(c))

    @staticmethod
    def x() -> "RatFn":
        return RatFn(Poly.x())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError("not a constant rational function")
        return self.num.constant_value()

    def __add__(self, other: "RatFn") -> "RatFn":
        return RatFn(self.num * other.den + other.num * self.den,
                     self.den * other.den)

    def __sub__(self, other: "RatFn") -> "RatFn":
        return RatFn(self.num * other.den - other.num * self.den,
                     self.den * other.den)

    def __neg__(self) -> "RatFn":
        return RatFn(-self.num, self.den, reduce=False)

    def __mul__(self, other) -> "RatFn":
        if isinstance(other, Scalar):
            return RatFn(self.num * other, self.den, reduce=False)
        return RatFn(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RatFn") -> "RatFn":
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFn(self.num * other.den, self.den * other.num)

    def inverse(self) -> "RatFn":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFn(self.den, self.num)

    def derivative(self) -> "RatFn":
        return RatFn(self.num.derivative() * self.den - self.num * self.den.derivative(),
                     self.den * self.den)

    def __eq__(self, other):
        if not isinstance(other, RatFn):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.den == Poly.const(1):
            return f"RatFn({self.num})"
        return f"RatFn(({self.num}) / ({self.den}))"


RATFN_ZERO = RatFn(Poly())
RATFN_ONE = RatFn(Poly.const(1))


# ---------------------------------------------------------------------------
# the curve and its function field
# ---------------------------------------------------------------------------

class CurveMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class CurveParams:
    """Invariants of the curve y^2 = 4x^3 - g2*x - g3; discriminant nonzero."""

    g2: Scalar
    g3: Scalar

    def __post_init__(self):
        object.__setattr__(self, "g2", Scalar.coerce(self.g2))
        object.__setattr__(self, "g3", Scalar.coerce(self.g3))
        if self.discriminant().is_zero():
            raise ValueError("singular curve: g2^3 - 27*g3^2 = 0")

    def discriminant(self) -> Scalar:
        return self.g2 ** 3 - Scalar(27) * self.g3 ** 2

    def rhs(self) -> Poly:
        """4x^3 - g2*x - g3, the square of y."""
        return _curve_rhs(self)

    def rhs_ratfn(self) -> RatFn:
        return _curve_rhs_ratfn(self)


@lru_cache(maxsize=None)
def _curve_rhs(curve: CurveParams) -> Poly:
    return Poly([-curve.g3, -curve.g2, ZERO, Scalar(4)])


@lru_cache(maxsize=None)
def _curve_rhs_ratfn(curve: CurveParams) -> RatFn:
    return RatFn(_curve_rhs(curve))


class EllFn:
    """Element a(x) + b(x)*y of the function field of one fixed curve."""

    __slots__ = ("a", "b", "curve")

    def __init__(self, a: RatFn, b: RatFn, curve: CurveParams):
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "curve", curve)

    def __setattr__(self, name, value):
        raise AttributeError("EllFn is immutable")

    # -- constructors -----------------------------------------------------

    @staticmethod
    def const(c, curve: CurveParams) -> "EllFn":
        return EllFn(RatFn.const(Scalar.coerce(c)), RATFN_ZERO, curve)

    @staticmethod
    def x(curve: CurveParams) -> "EllFn":
        return EllFn(RatFn.x(), RATFN_ZERO, curve)

    @staticmethod
    def y(curve: CurveParams) -> "EllFn":
        return EllFn(RATFN_ZERO, RATFN_ONE, curve)

    @staticmethod
    def from_ratfn(a: RatFn, curve: CurveParams) -> "EllFn":
        return EllFn(a, RATFN_ZERO, curve)

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def _check(self, other: "EllFn"):
        if self.curve != other.curve:
            raise CurveMismatchError("operands live on different curves")

    # -- field operations ----------------------------------------------------

    def _lift(self, other):
        if isinstance(other, (Scalar, int)):
            return EllFn.const(Scalar.coerce(other), self.curve)
        return other

    def __add__(self, other) -> "EllFn":
        other = self._lift(other)
        self._check(other)
        return EllFn(self.a + other.a, self.b + other.b, self.curve)

    __radd__ = __add__

    def __sub__(self, other) -> "EllFn":
        other = self._lift(other)
        self._check(other)
        return EllFn(self.a - other.a, self.b - other.b, self.curve)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self) -> "EllFn":
        return EllFn(-self.a, -self.b, self.curve)

    def __mul__(self, other) -> "EllFn":
        if isinstance(other, (Scalar, int)):
            c = Scalar.coerce(other)
            return EllFn(self.a * c, self.b * c, self.curve)
        self._check(other)
        r = self.curve.rhs_ratfn()
        # (a1 + b1 y)(a2 + b2 y) with y^2 = r(x)
        return EllFn(self.a * other.a + self.b * other.b * r,
                     self.a * other.b + self.b * other.a,
                     self.curve)

    __rmul__ = __mul__

    def __truediv__(self, other: "EllFn") -> "EllFn":
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero elliptic function")
        r = self.curve.rhs_ratfn()
        # rationalize with the conjugate a - b y; the norm a^2 - b^2 r is
        # nonzero since r is not a square in Q(i)(x)
        norm = other.a * other.a - other.b * other.b * r
        conj = EllFn(other.a, -other.b, self.curve)
        scaled = self * conj
        return EllFn(scaled.a / norm, scaled.b / norm, self.curve)

    def inverse(self) -> "EllFn":
        return EllFn.const(1, self.curve) / self

    def __pow__(self, n: int) -> "EllFn":
        if n < 0:
            return (self ** (-n)).inverse()
        result = EllFn.const(1, self.curve)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def derivative(self) -> "EllFn":
        """d/dz via dx/dz = y and dy/dz = 6x^2 - g2/2."""
        r = self.curve.rhs_ratfn()
        half_rp = RatFn(Poly([-self.curve.g2 / Scalar(2), ZERO, Scalar(6)]))
        new_a = self.b.derivative() * r + self.b * half_rp
        new_b = self.a.derivative()
        return EllFn(new_a, new_b, self.curve)

    # -- queries ---------------------------------------------------------

    def constant_value(self) -> Optional[Scalar]:
        """The Scalar value if this element is constant, else None."""
        if self.b.is_zero() and self.a.is_constant():
            return self.a.constant_value()
        return None

    def __eq__(self, other):
        if not isinstance(other, EllFn):
            return NotImplemented
        return self.curve == other.curve and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b, self.curve))

    def __repr__(self):
        return f"EllFn({self.a!r} + ({self.b!r})*y)"


# ---------------------------------------------------------------------------
# module-level operation surface
# ---------------------------------------------------------------------------

def ell_arith(lhs: EllFn, rhs: EllFn, kind: str) -> EllFn:
    """Field arithmetic dispatch: kind in {'add','sub','mul','div'}."""
    if kind == "add":
        return lhs + rhs
    if kind == "sub":
        return lhs - rhs
    if kind == "mul":
        return lhs * rhs
    if kind == "div":
        return lhs / rhs
    raise ValueError(f"unknown arithmetic kind {kind!r}")


def ell_derive(f: EllFn) -> EllFn:
    return f.derivative()


def ell_is_constant(f: EllFn) -> Optional[Scalar]:
    return f.constant_value()


def rat_eval_ell(r: RatFn, at: EllFn) -> EllFn:
    """Evaluate a rational function at an element of the field."""
    num = r.num.eval(at) if not r.num.is_zero() else EllFn.const(0, at.curve)
    if not isinstance(num, EllFn):
        num = EllFn.const(num, at.curve)
    den = r.den.eval(at)
    if not isinstance(den, EllFn):
        den = EllFn.const(den, at.curve)
    return num / den
