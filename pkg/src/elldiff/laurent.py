"""Truncated formal Laurent series over Q(i) and the Weierstrass expansions.

Every series carries its guaranteed order: coefficients are known exactly
for exponents val..trunc-1 and unknown from trunc on.  Arithmetic tracks
truncation pessimistically, so a zero result really is zero to the stated
order.  A series that is zero to truncation is stored with empty
coefficients and val == trunc.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .scalars import Scalar, ZERO, ONE
from .ellfield import CurveParams, EllFn, Poly, RatFn
from .linalg import det_is_zero, kernel_basis, solve_linear


class TruncationError(ValueError):
    """Raised when an operation cannot guarantee any coefficient."""


class LaurentSeries:
    __slots__ = ("val", "coeffs", "trunc")

    def __init__(self, val: int, coeffs: Iterable = (), trunc: Optional[int] = None):
        cs = [Scalar.coerce(c) for c in coeffs]
        if trunc is None:
            trunc = val + len(cs)
        if val + len(cs) > trunc:
            raise ValueError("more coefficients than the truncation order allows")
        cs.extend([ZERO] * (trunc - val - len(cs)))
        # strip leading exact zeros; a series that is zero to truncation
        # keeps only its guaranteed order
        k = 0
        while k < len(cs) and cs[k].is_zero():
            k += 1
        object.__setattr__(self, "val", val + k)
        object.__setattr__(self, "coeffs", tuple(cs[k:]))
        object.__setattr__(self, "trunc", trunc)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentSeries is immutable")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(trunc: int) -> "LaurentSeries":
        return LaurentSeries(trunc, (), trunc)

    @staticmethod
    def const(c, trunc: int) -> "LaurentSeries":
        return LaurentSeries(0, [Scalar.coerce(c)], trunc)

    @staticmethod
    def z_power(n: int, trunc: int) -> "LaurentSeries":
        return LaurentSeries(n, [ONE], trunc)

    # -- queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        """Zero to truncation."""
        return not self.coeffs

    def __getitem__(self, n: int) -> Scalar:
        """Coefficient of z^n; exact zero below val, error at or past trunc."""
        if n >= self.trunc:
            raise TruncationError(f"coefficient of z^{n} is beyond truncation {self.trunc}")
        if n < self.val:
            return ZERO
        return self.coeffs[n - self.val]

    def known(self, n: int) -> bool:
        return n < self.trunc

    def leading(self) -> Tuple[int, Scalar]:
        if not self.coeffs:
            raise ValueError("series is zero to truncation")
        return self.val, self.coeffs[0]

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return LaurentSeries.const(Scalar.coerce(other), self.trunc)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        trunc = min(self.trunc, other.trunc)
        lo = min(self.val, other.val, trunc)
        out = []
        for n in range(lo, trunc):
            a = self.coeffs[n - self.val] if self.val <= n < self.val + len(self.coeffs) else ZERO
            b = other.coeffs[n - other.val] if other.val <= n < other.val + len(other.coeffs) else ZERO
            out.append(a + b)
        return LaurentSeries(lo, out, trunc)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.val, [-c for c in self.coeffs], self.trunc)

    def __sub__(self, other):
        other = self._coerce(other)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            c = Scalar.coerce(other)
            if c.is_zero():
                return LaurentSeries.zero(self.trunc)
            return LaurentSeries(self.val, [a * c for a in self.coeffs], self.trunc)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        # guaranteed exponents: below min(v1 + t2, v2 + t1)
        trunc = min(self.val + other.trunc, other.val + self.trunc)
        if self.is_zero() or other.is_zero():
            return LaurentSeries.zero(trunc)
        lo = self.val + other.val
        width = trunc - lo
        out = [ZERO] * width
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            jmax = min(len(other.coeffs), width - i)
            for j in range(jmax):
                b = other.coeffs[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return LaurentSeries(lo, out, trunc)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentSeries":
        if self.is_zero():
            raise ZeroDivisionError("series is zero to truncation")
        v = self.val
        rel = self.trunc - v  # relative precision carries over
        c0 = self.coeffs[0]
        c0_inv = c0.inverse()
        # invert 1 + h with h = O(z) by Newton-free back substitution
        out = [ZERO] * rel
        out[0] = c0_inv
        for n in range(1, rel):
            acc = ZERO
            for k in range(1, n + 1):
                a = self.coeffs[k] if k < len(self.coeffs) else ZERO
                if not a.is_zero() and not out[n - k].is_zero():
                    acc = acc + a * out[n - k]
            out[n] = -c0_inv * acc
        return LaurentSeries(-v, out, -v + rel)

    def __truediv__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return self * Scalar.coerce(other).inverse()
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int) -> "LaurentSeries":
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return LaurentSeries.const(1, self.trunc)
        result = self
        for _ in range(n - 1):
            result = result * self
        return result

    def derivative(self) -> "LaurentSeries":
        out = [c * Scalar(self.val + k) for k, c in enumerate(self.coeffs)]
        return LaurentSeries(self.val - 1, out, self.trunc - 1)

    def integrate(self) -> "LaurentSeries":
        """Termwise primitive with zero constant; the z^-1 term must vanish."""
        coeffs: Dict[int, Scalar] = {}
        for k, c in enumerate(self.coeffs):
            n = self.val + k
            if n == -1:
                if not c.is_zero():
                    raise ValueError("series has a z^-1 term; no Laurent primitive")
                continue
            coeffs[n + 1] = c / Scalar(n + 1)
        if not coeffs:
            return LaurentSeries.zero(self.trunc + 1)
        low = min(coeffs)
        arr = [coeffs.get(n, ZERO) for n in range(low, self.trunc + 1)]
        return LaurentSeries(low, arr, self.trunc + 1)

    def truncate(self, trunc: int) -> "LaurentSeries":
        if trunc > self.trunc:
            raise TruncationError("cannot extend a truncated series")
        return LaurentSeries(min(self.val, trunc), [c for k, c in enumerate(self.coeffs) if self.val + k < trunc], trunc)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by z^k."""
        return LaurentSeries(self.val + k, self.coeffs, self.trunc + k)

    def exp(self) -> "LaurentSeries":
        """exp of a series with positive valuation."""
        if not self.is_zero() and self.val <= 0:
            raise ValueError("exp needs positive valuation")
        result = LaurentSeries.const(1, self.trunc)
        term = LaurentSeries.const(1, self.trunc)
        k = 1
        while True:
            term = (term * self) / Scalar(k)
            if term.is_zero() or term.val >= self.trunc:
                break
            result = result + term
            k += 1
        return result

    # -- conversions ----------------------------------------------------------

    def eval_complex(self, z: complex) -> complex:
        """Numerical evaluation of the truncated sum."""
        acc = 0j
        for k, c in enumerate(self.coeffs):
            acc += complex(c) * z ** (self.val + k)
        return acc

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.val, self.coeffs, self.trunc) == (other.val, other.coeffs, other.trunc)

    def __hash__(self):
        return hash((self.val, self.coeffs, self.trunc))

    def agrees_with(self, other: "LaurentSeries") -> bool:
        """Equality on the shared window of guaranteed coefficients."""
        t = min(self.trunc, other.trunc)
        lo = min(self.val, other.val, t)
        for n in range(lo, t):
            if self[n] != other[n]:
                return False
        return True

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            n = self.val + k
            terms.append(f"({c})*z^{n}" if n else f"({c})")
            if len(terms) > 7:
                terms.append("...")
                break
        body = " + ".join(terms) if terms else "0"
        return f"<{body} + O(z^{self.trunc})>"


# ---------------------------------------------------------------------------
# Weierstrass expansions
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _wp_coefficients(g2: Scalar, g3: Scalar, kmax: int) -> Tuple[Scalar, ...]:
    """c_2..c_kmax with wp = z^-2 + sum c_k z^(2k-2)."""
    c: Dict[int, Scalar] = {2: g2 / Scalar(20), 3: g3 / Scalar(28)}
    for k in range(4, kmax + 1):
        acc = ZERO
        for i in range(2, k - 1):
            acc = acc + c[i] * c[k - i]
        c[k] = Scalar(Fraction(3, (2 * k + 1) * (k - 3))) * acc
    return tuple(c[k] for k in range(2, kmax + 1))


def weierstrass_series(curve: CurveParams, kind: str, order: int) -> LaurentSeries:
    """Expansion of wp, wp', zeta or sigma at 0, guaranteed below z^order.

    zeta integrates -wp with principal part 1/z and no constant term;
    sigma is normalized to z + O(z^5).
    """
    if order < 8:
        raise ValueError("order must be at least 8")
    if kind not in ("wp", "wp_prime", "zeta", "sigma"):
        raise ValueError(f"unknown series kind {kind!r}")
    # wp needs exponents up to order+1 so that derived series stay sharp
    kmax = (order + 6) // 2 + 2
    cs = _wp_coefficients(curve.g2, curve.g3, kmax)
    hi = 2 * kmax - 2
    coeffs = {-2: ONE}
    for j, ck in enumerate(cs):
        coeffs[2 * (j + 2) - 2] = ck
    wp = LaurentSeries(-2, [coeffs.get(n, ZERO) for n in range(-2, hi + 1)], hi + 1)
    if kind == "wp":
        return wp.truncate(order)
    if kind == "wp_prime":
        return wp.derivative().truncate(order)
    zeta = (-wp).integrate()
    if kind == "zeta":
        return zeta.truncate(order)
    # sigma = z * exp(integral of (zeta - 1/z))
    tail = zeta - LaurentSeries.z_power(-1, zeta.trunc)
    sigma = LaurentSeries.z_power(1, tail.trunc + 1) * tail.integrate().exp()
    return sigma.truncate(order)


# ---------------------------------------------------------------------------
# embedding K into F = C((z))
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _wp_powers(curve: CurveParams, width: int, upto: int) -> Tuple[LaurentSeries, ...]:
    """wp^k for k <= upto, each kept to `width` coefficients past its pole.

    wp^k has exact valuation -2k, so a relative window loses nothing; it
    keeps high-degree evaluations from dragging absolute precision along.
    """
    if upto == 0:
        return (LaurentSeries.const(1, width),)
    prev = _wp_powers(curve, width, upto - 1)
    wp = weierstrass_series(curve, "wp", max(width - 2, 8))
    nxt = prev[-1] * wp
    return prev + (nxt.truncate(min(nxt.trunc, nxt.val + width)),)


def _poly_at_wp(p: Poly, curve: CurveParams, width: int) -> LaurentSeries:
    """p(wp) with roughly `width` coefficients past z^(-2 deg p)."""
    d = max(p.degree(), 0)
    powers = _wp_powers(curve, width, d)
    acc = LaurentSeries.zero(-2 * d + width)
    for k, c in enumerate(p.coeffs):
        if not c.is_zero():
            acc = acc + powers[k] * c
    return acc


def embed(f: EllFn, order: int) -> LaurentSeries:
    """Taylor-Maclaurin expansion at 0 sending x -> wp, y -> wp'.

    Works with relative-precision windows and widens them when leading-term
    cancellation eats into the guaranteed order.
    """
    curve = f.curve
    d = max(f.a.num.degree(), f.a.den.degree(), f.b.num.degree(), f.b.den.degree(), 0)
    width = order + 12
    cap = order + 4 * d + 24
    while True:
        out = LaurentSeries.zero(order + 4 * d + 24)
        ok = True
        for part, is_b in ((f.a, False), (f.b, True)):
            if part.is_zero():
                continue
            num = _poly_at_wp(part.num, curve, width)
            den = _poly_at_wp(part.den, curve, width)
            if den.is_zero():
                raise ZeroDivisionError("denominator series vanishes to truncation")
            term = num / den
            if is_b:
                term = term * weierstrass_series(curve, "wp_prime", max(width - 3, 8))
            if term.trunc < order:
                ok = False
                break
            out = out + term
        if ok and out.trunc >= order:
            return out.truncate(order)
        if width >= cap:
            raise TruncationError("internal precision loss while embedding")
        width = min(2 * width, cap)


def scale_arg(f: LaurentSeries, m: int) -> LaurentSeries:
    """f(z) -> f(mz): the coefficient of z^n picks up a factor m^n."""
    if m < 1:
        raise ValueError("scale factor must be a positive integer")
    if m == 1:
        return f
    out = []
    for k, c in enumerate(f.coeffs):
        n = f.val + k
        factor = Fraction(m) ** n
        out.append(c * Scalar(factor))
    return LaurentSeries(f.val, out, f.trunc)


# ---------------------------------------------------------------------------
# the ring S = K[z, z^-1, zeta]
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SElement:
    """Finite sum of k_ij * z^i * zeta^j with elliptic coefficients."""

    terms: Tuple[Tuple[Tuple[int, int], EllFn], ...]
    curve: CurveParams

    @staticmethod
    def from_dict(d: Dict[Tuple[int, int], EllFn], curve: CurveParams) -> "SElement":
        items = tuple(sorted(((ij, f) for ij, f in d.items() if not f.is_zero()),
                             key=lambda t: t[0]))
        for (i, j), _ in items:
            if j < 0:
                raise ValueError("zeta exponents must be nonnegative")
        return SElement(items, curve)

    def as_dict(self) -> Dict[Tuple[int, int], EllFn]:
        return dict(self.terms)


def embed_S(s: SElement, order: int) -> LaurentSeries:
    maxj = max((j for (_, j), _ in s.terms), default=0)
    mini = min((i for (i, _), _ in s.terms), default=0)
    work = order + abs(mini) + maxj + 4
    zeta = weierstrass_series(s.curve, "zeta", work)
    out = LaurentSeries.zero(order)
    for (i, j), f in s.terms:
        term = embed(f, work).shift(i)
        for _ in range(j):
            term = term * zeta
        out = out + term
    return out


# ---------------------------------------------------------------------------
# bounded S-membership test
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SBounds:
    max_zeta_pow: int
    max_z_range: int
    max_pole_order: int


def _riemann_roch_monomials(max_pole: int) -> List[Tuple[int, int]]:
    """(a, b) with x^a y^b of pole order 2a+3b <= max_pole, b in {0,1}."""
    out = [(0, 0)]
    for b in (0, 1):
        for a in range(0, max_pole + 1):
            if (a, b) == (0, 0):
                continue
            if 2 * a + 3 * b <= max_pole:
                out.append((a, b))
    return out


def s_membership(f: LaurentSeries, bounds: SBounds,
                 curve: CurveParams) -> Optional[SElement]:
    """Search for a representation of f in S within the given bounds.

    The candidate space is spanned by x^a y^b z^i zeta^j over the stated
    ranges.  A returned witness re-expands to f on its whole window; None
    means the exact linear system is inconsistent, which no enlargement of
    the window can repair.  If the system is consistent but the window is
    too small to pin down the candidate space, a TruncationError is raised
    instead of guessing.
    """
    monos = _riemann_roch_monomials(bounds.max_pole_order)
    zrange = range(-bounds.max_z_range, bounds.max_z_range + 1)
    jrange = range(0, bounds.max_zeta_pow + 1)
    candidates = [(ab, i, j) for ab in monos for i in zrange for j in jrange]
    dim = len(candidates)

    lo = -(bounds.max_pole_order + bounds.max_z_range + bounds.max_zeta_pow)
    lo = min(lo, f.val)
    hi = f.trunc
    if hi <= lo:
        raise TruncationError("series carries no usable coefficients")

    work = hi + abs(lo) + 2 * bounds.max_pole_order + 8
    zeta = weierstrass_series(curve, "zeta", work)
    wpp = weierstrass_series(curve, "wp_prime", work)
    zeta_pows = [LaurentSeries.const(1, work)]
    for _ in range(bounds.max_zeta_pow):
        zeta_pows.append(zeta_pows[-1] * zeta)
    max_a = max(a for (a, _b) in monos)
    wp_pows = _wp_powers(curve, work, max_a)

    columns = []
    for (a, b), i, j in candidates:
        s = wp_pows[a]
        if b:
            s = s * wpp
        s = s.shift(i) * zeta_pows[j]
        columns.append(s)

    rows = range(lo, hi)
    n_eq = hi - lo
    # exact dense system over Q(i)
    mat = [[col[n] if col.known(n) else None for col in columns] for n in rows]
    for r in mat:
        if any(c is None for c in r):
            raise TruncationError("candidate expansions ran out of precision")
    rhs = [f[n] for n in rows]

    solution = solve_linear(mat, rhs)
    if solution is None:
        return None
    if n_eq < dim + 10:
        raise TruncationError(
            f"series order {hi} too small to certify membership at these bounds "
            f"(need at least {dim + 10} coefficients, have {n_eq})")

    # assemble the witness and certify by re-expansion
    terms: Dict[Tuple[int, int], EllFn] = {}
    for coeff, ((a, b), i, j) in zip(solution, candidates):
        if coeff.is_zero():
            continue
        mono = EllFn.x(curve) ** a * (EllFn.y(curve) ** b)
        add = mono * coeff
        key = (i, j)
        terms[key] = terms[key] + add if key in terms else add
    witness = SElement.from_dict(terms, curve)
    back = embed_S(witness, hi)
    if not back.agrees_with(f):
        raise AssertionError("membership witness failed re-expansion")
    return witness



# ---------------------------------------------------------------------------
# scalar first order solve and system verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalarSolveResult:
    particular: Optional[LaurentSeries]
    resonances: Tuple[int, ...]
    homogeneous_dim: int
    obstruction: Optional[int] = None


def _resonant_index(a: Scalar, q: int) -> Optional[int]:
    """The n with q^n == a, if one exists (unique since q >= 2)."""
    if a.im or a.re <= 0:
        return None
    fr = a.re
    if fr.denominator == 1:
        n, v = 0, fr.numerator
        while v % q == 0:
            v //= q
            n += 1
        return n if v == 1 else None
    if fr.numerator == 1:
        n, v = 0, fr.denominator
        while v % q == 0:
            v //= q
            n += 1
        return -n if v == 1 else None
    return None


def solve_scalar_first_order(a: Scalar, b: LaurentSeries, q: int) -> ScalarSolveResult:
    """Coefficientwise solve of u(qz) = a*u(z) + b(z): u_n (q^n - a) = b_n.

    At a resonant index q^n == a the coefficient u_n is free when b_n = 0
    (counted in homogeneous_dim, and set to zero); when b_n != 0 there is
    no particular solution and the obstruction index is reported.
    """
    if q < 2:
        raise ValueError("q must be at least 2")
    if a.is_zero():
        raise ValueError("a must be nonzero")
    n_res = _resonant_index(a, q)
    resonances = (n_res,) if n_res is not None else ()
    lo = b.val if not b.is_zero() else 0
    hi = b.trunc
    if n_res is not None and n_res < hi:
        lo = min(lo, n_res)
    if hi <= lo:
        lo = hi - 1
    out = []
    hom = 0
    for n in range(lo, hi):
        bn = b[n]
        denom = Scalar(Fraction(q) ** n) - a
        if denom.is_zero():
            if bn.is_zero():
                hom += 1
                out.append(ZERO)
            else:
                return ScalarSolveResult(None, resonances, 0, obstruction=n)
        else:
            out.append(bn / denom)
    return ScalarSolveResult(LaurentSeries(lo, out, hi), resonances, hom)


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    order: int

    def __bool__(self):
        return self.ok


Matrix = Sequence[Sequence[LaurentSeries]]


def mat_mul_series(A: Matrix, B: Matrix) -> List[List[LaurentSeries]]:
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = None
            for t in range(k):
                term = A[i][t] * B[t][j]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def verify_system(A: Matrix, U: Matrix, m: int) -> VerifyResult:
    """Residual order of U(mz) - A(z) U(z).

    ok=True with the guaranteed vanishing order when the residual is zero
    to truncation in every entry; otherwise ok=False with the exponent of
    the first nonzero residual coefficient.
    """
    AU = mat_mul_series(A, U)
    worst_fail = None
    order = None
    for i in range(len(U)):
        for j in range(len(U[0])):
            resid = scale_arg(U[i][j], m) - AU[i][j]
            if resid.is_zero():
                order = resid.trunc if order is None else min(order, resid.trunc)
            else:
                v = resid.val
                worst_fail = v if worst_fail is None else min(worst_fail, v)
    if worst_fail is not None:
        return VerifyResult(False, worst_fail)
    return VerifyResult(True, order if order is not None else 0)


# ---------------------------------------------------------------------------
# regular system solver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SystemSolveResult:
    solutions: Tuple[Tuple[LaurentSeries, ...], ...]
    resonances: Tuple[int, ...]


def solve_system_regular(A: Matrix, q: int, order: int) -> SystemSolveResult:
    """Power series solutions of Y(qz) = A(z) Y(z) for A analytic at 0.

    Seeds come from ker(q^n I - A(0)) at each level n where that matrix is
    singular; the ascending recursion (q^n I - A0) Y_n = sum A_m Y_{n-m}
    fills in the rest.  Free coefficients at later resonant levels are set
    to zero; a seed whose recursion becomes inconsistent is dropped.
    """
    n_dim = len(A)
    for row in A:
        for s in row:
            if not s.is_zero() and s.val < 0:
                raise ValueError(
                    "system has a pole at 0; use verify_system against a "
                    "candidate fundamental matrix instead")
    depth = min(min(s.trunc for row in A for s in row), order)
    A_coeff: List[List[List[Scalar]]] = []
    for m in range(depth):
        A_coeff.append([[A[i][j][m] if A[i][j].known(m) else ZERO
                         for j in range(n_dim)] for i in range(n_dim)])
    A0 = A_coeff[0]

    def shifted(n: int) -> List[List[Scalar]]:
        qn = Scalar(Fraction(q) ** n)
        return [[(qn if i == j else ZERO) - A0[i][j] for j in range(n_dim)]
                for i in range(n_dim)]

    if det_is_zero(A0):
        raise ValueError("A(0) is singular; the solver needs an invertible A(0)")

    # bound on levels: q^n beyond every eigenvalue magnitude
    bound = Fraction(1)
    for row in A0:
        s = Fraction(0)
        for c in row:
            s += abs(c.re) + abs(c.im)
        bound = max(bound, s)
    n_max = 0
    qn = Fraction(1)
    while qn <= bound:
        qn *= q
        n_max += 1
    levels = [n for n in range(0, min(n_max + 1, depth)) if kernel_basis(shifted(n))]
    resonances = tuple(n for n in levels if n >= 1)

    solutions = []
    for level in levels:
        for seed in kernel_basis(shifted(level)):
            coeffs: List[List[Scalar]] = [[ZERO] * n_dim for _ in range(level)]
            coeffs.append(seed)
            ok = True
            for n in range(level + 1, depth):
                rhs = [ZERO] * n_dim
                for m in range(1, n - level + 1):
                    if m >= len(A_coeff):
                        break
                    prev = coeffs[n - m]
                    Am = A_coeff[m]
                    for i in range(n_dim):
                        rhs[i] = rhs[i] + sum((Am[i][j] * prev[j] for j in range(n_dim)), ZERO)
                sol = solve_linear([row[:] for row in shifted(n)], rhs)
                if sol is None:
                    ok = False
                    break
                coeffs.append(sol)
            if ok:
                vec = tuple(
                    LaurentSeries(0, [coeffs[n][i] for n in range(depth)], depth)
                    for i in range(n_dim))
                solutions.append(vec)
    assert len(solutions) <= n_dim, "Wronskian bound violated"
    return SystemSolveResult(tuple(solutions), resonances)
