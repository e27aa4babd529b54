"""elldiff: exact linear difference algebra over elliptic function fields.

The layers, bottom up:

* ``scalars`` / ``ellfield`` -- Q(i) scalars, polynomials, rational
  functions and the function field of one fixed curve
  y^2 = 4x^3 - g2 x - g3.
* ``laurent`` -- truncated Laurent series, Weierstrass expansions, the
  embedding of the field into C((z)), membership in the ring
  K[z, 1/z, zeta], and series-level solvers.
* ``isogeny`` -- division polynomials, the multiplication-by-m pullback
  operators, the elements zeta(mz) - m zeta(z), the curve group law and
  functions built from principal divisors.
* ``divisors`` -- discretely supported Q-valued divisor calculus, the
  periodicity reconstruction and the first-order descent decision.
* ``diffmod`` -- difference systems: companion matrices, gauge
  transforms, compatibility checks and order-one verdicts.
* ``numeval`` -- floating point Weierstrass evaluation as an independent
  numerical cross-check of the exact layers.
* ``cli`` -- a batch JSON command-line front end.
"""

from .scalars import Scalar
from .ellfield import CurveParams, EllFn, Poly, RatFn
from .laurent import LaurentSeries, SElement

__all__ = [
    "Scalar", "CurveParams", "EllFn", "Poly", "RatFn",
    "LaurentSeries", "SElement",
]

__version__ = "0.1.0"
