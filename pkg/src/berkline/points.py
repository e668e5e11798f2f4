"""Points of the Berkovich projective line over Q with the p-adic valuation.

A point is either classical (type I: a rational number or the point at
infinity) or a disc B(a, p^(-t)) stored as center a in Q and radius exponent
t in Q(sqrt 2).  A disc point is type II when t is rational (radius in the
value group) and type III otherwise.  Type IV points require infinitely much
data and are not representable here.

Two disc values denote the same point iff the exponents agree and the centers
differ by something of valuation >= t; equality and hashing go through a
canonical truncated p-adic expansion of the center.
"""

from __future__ import annotations

from fractions import Fraction

from . import polys
from .exact import (
    MINUS_INFINITY,
    PLUS_INFINITY,
    BerklineError,
    PrimeConfig,
    ValExp,
    is_infinite,
    ord_p,
    vmin,
)

TYPE_I = "I"
TYPE_II = "II"
TYPE_III = "III"

CLOSED = "CLOSED"
OPEN = "OPEN"


class _InfinityPoint:
    __slots__ = ()

    def __repr__(self):
        return "inf"


INFINITY_POINT = _InfinityPoint()


class SingularMatrixError(BerklineError):
    code = "SINGULAR_MATRIX"


class UnsupportedPointError(BerklineError):
    code = "UNSUPPORTED_POINT"


def reduce_center(a: Fraction, m: int, p: int) -> Fraction:
    """Canonical representative of a modulo p^m Z_(p).

    Returns the truncated p-adic expansion of a below level m: the unique
    rational of the form sum d_k p^k (0 <= d_k < p, k < m) congruent to a.
    """
    res = Fraction(0)
    x = a
    while x != 0:
        k = ord_p(x, p)
        if k >= m:
            break
        pk = Fraction(p) ** k
        u = x / pk
        d = u.numerator * pow(u.denominator, -1, p) % p
        step = d * pk
        res += step
        x -= step
    return res


class BerkPoint:
    """A type I/II/III point of P^1_Berk, bound to a prime p."""

    __slots__ = ("p", "kind", "value", "center", "rexp", "_key")

    def __init__(self, p, kind, value=None, center=None, rexp=None):
        self.p = p
        self.kind = kind
        self.value = value
        self.center = center
        self.rexp = rexp
        self._key = None

    # -- constructors ----------------------------------------------------

    @staticmethod
    def type_i(p: int, value) -> "BerkPoint":
        if value is INFINITY_POINT:
            return BerkPoint(p, "I", value=INFINITY_POINT)
        v = value if isinstance(value, Fraction) else Fraction(value)
        return BerkPoint(p, "I", value=v)

    @staticmethod
    def infinity(p: int) -> "BerkPoint":
        return BerkPoint(p, "I", value=INFINITY_POINT)

    @staticmethod
    def disc(p: int, center, rexp) -> "BerkPoint":
        c = center if isinstance(center, Fraction) else Fraction(center)
        t = ValExp.of(rexp)
        return BerkPoint(p, "disc", center=c, rexp=t)

    @staticmethod
    def gauss(p: int) -> "BerkPoint":
        return BerkPoint.disc(p, 0, 0)

    # -- predicates ------------------------------------------------------

    def is_disc(self) -> bool:
        return self.kind == "disc"

    def is_type_i(self) -> bool:
        return self.kind == "I"

    def is_infinity(self) -> bool:
        return self.kind == "I" and self.value is INFINITY_POINT

    # -- identity --------------------------------------------------------

    def key(self):
        """Hashable canonical form; equal points share the key."""
        if self._key is None:
            if self.kind == "I":
                if self.value is INFINITY_POINT:
                    self._key = (self.p, "I", "inf")
                else:
                    self._key = (self.p, "I", self.value)
            else:
                m = self.rexp.ceil()
                if self.center.denominator == 1:
                    num = self.center.numerator
                    c = Fraction(num % self.p**m) if m > 0 else Fraction(0)
                else:
                    c = reduce_center(self.center, m, self.p)
                self._key = (self.p, "disc", c, self.rexp.rat, self.rexp.s2)
        return self._key

    def __eq__(self, other):
        if not isinstance(other, BerkPoint):
            return NotImplemented
        if self.p != other.p or self.kind != other.kind:
            return False
        if self.kind == "I":
            if self.value is INFINITY_POINT or other.value is INFINITY_POINT:
                return self.value is other.value
            return self.value == other.value
        if self.rexp != other.rexp:
            return False
        return ord_p(self.center - other.center, self.p) >= self.rexp

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.kind == "I":
            return f"TypeI({self.value})"
        return f"Disc({self.center}, {self.rexp})"


def classify(x: BerkPoint) -> str:
    """Berkovich type of a representable point: "I", "II" or "III"."""
    if x.kind == "I":
        return TYPE_I
    return TYPE_II if x.rexp.is_rational() else TYPE_III


def contains(outer: BerkPoint, inner: BerkPoint) -> bool:
    """Membership of inner's disc/point in the closed disc of outer."""
    if not outer.is_disc():
        raise UnsupportedPointError("containment needs a disc point as outer")
    t = outer.rexp
    a = outer.center
    p = outer.p
    if inner.is_type_i():
        if inner.value is INFINITY_POINT:
            return False
        return ord_p(inner.value - a, p) >= t
    return inner.rexp >= t and ord_p(inner.center - a, p) >= t


# -- Moebius action ---------------------------------------------------------


def _affine_image(x: BerkPoint, a: Fraction, b: Fraction) -> BerkPoint:
    """Image of x under z -> a z + b (a nonzero)."""
    p = x.p
    if x.is_type_i():
        if x.value is INFINITY_POINT:
            return x
        return BerkPoint.type_i(p, a * x.value + b)
    return BerkPoint.disc(p, a * x.center + b, x.rexp + ord_p(a, p))


def _inversion_image(x: BerkPoint) -> BerkPoint:
    """Image of x under z -> 1/z."""
    p = x.p
    if x.is_type_i():
        if x.value is INFINITY_POINT:
            return BerkPoint.type_i(p, 0)
        if x.value == 0:
            return BerkPoint.infinity(p)
        return BerkPoint.type_i(p, 1 / x.value)
    t = x.rexp
    oc = ord_p(x.center, p)
    if oc < t:
        # B(c, r) avoids 0: image is B(1/c, r/|c|^2)
        return BerkPoint.disc(p, 1 / x.center, t - 2 * oc)
    # 0 in B(c, r): the image point is the one of B(0, 1/r)
    return BerkPoint.disc(p, 0, -t)


def mobius_apply(h, x: BerkPoint) -> BerkPoint:
    """Image of x under the fractional linear map with matrix h = ((a,b),(c,d)).

    Nonsingular h acts on P^1_Berk; discs map to discs by the explicit
    image formulas for affine maps and inversion, classical points by
    evaluation.
    """
    (a, b), (c, d) = h
    a, b, c, d = (Fraction(t) for t in (a, b, c, d))
    if a * d - b * c == 0:
        raise SingularMatrixError("matrix must be invertible")
    if c == 0:
        return _affine_image(x, a / d, b / d)
    # (az+b)/(cz+d) = a/c + ((bc-ad)/c^2) * 1/(z + d/c)
    y = _affine_image(x, Fraction(1), d / c)
    y = _inversion_image(y)
    return _affine_image(y, (b * c - a * d) / (c * c), a / c)


# -- seminorms ---------------------------------------------------------------


class RationalFunction:
    """A nonzero rational function over Q, stored as coprime num/den."""

    __slots__ = ("num", "den", "deg")

    def __init__(self, num, den=(1,)):
        n = polys.poly(num)
        d = polys.poly(den)
        if polys.is_zero(n) or polys.is_zero(d):
            raise ValueError("numerator and denominator must be nonzero")
        g = polys.pgcd(n, d)
        if polys.degree(g) > 0:
            n = polys.pdivmod(n, g)[0]
            d = polys.pdivmod(d, g)[0]
        self.num = n
        self.den = d
        self.deg = max(polys.degree(n), polys.degree(d))

    def __repr__(self):
        return f"RationalFunction({self.num}, {self.den})"

    def mul(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(
            polys.mul(self.num, other.num), polys.mul(self.den, other.den)
        )


def poly_seminorm_log(g: list, x: BerkPoint):
    """-log_p of the sup-seminorm [g]_x of a nonzero polynomial g.

    For a disc point B(a, p^-t) this is min_k (ord c_k + k t) over the
    shifted coefficients c_k of g(T + a); for classical points it is the
    valuation of the value, with infinities at zeros and at the pole of a
    nonconstant polynomial at infinity.
    """
    if polys.is_zero(g):
        raise ValueError("seminorm of the zero polynomial")
    p = x.p
    if x.is_type_i():
        if x.value is INFINITY_POINT:
            if polys.degree(g) >= 1:
                return MINUS_INFINITY
            return ValExp.of(ord_p(g[0], p))
        val = polys.eval_at(g, x.value)
        if val == 0:
            return PLUS_INFINITY
        return ValExp.of(ord_p(val, p))
    t = x.rexp
    best = None
    for k, c in enumerate(polys.shift(g, x.center)):
        if c:
            cand = t * k + ord_p(c, p)
            if best is None or cand < best:
                best = cand
    return best


def seminorm_log(f, x: BerkPoint):
    """-log_p [f]_x for a rational function f.

    Returns a ValExp, or PLUS_INFINITY at a type I zero of f and
    MINUS_INFINITY at a type I pole (including the behavior at infinity).
    """
    if isinstance(f, RationalFunction):
        num, den = f.num, f.den
    else:
        num, den = polys.poly(f), [Fraction(1)]
    p = x.p
    if x.is_type_i() and x.value is INFINITY_POINT:
        dn, dd = polys.degree(num), polys.degree(den)
        if dn > dd:
            return MINUS_INFINITY
        if dn < dd:
            return PLUS_INFINITY
        return ValExp.of(ord_p(num[-1], p) - ord_p(den[-1], p))
    a = poly_seminorm_log(num, x)
    b = poly_seminorm_log(den, x)
    if is_infinite(a):
        return a  # num vanishes at a type I point; den cannot (coprime)
    if is_infinite(b):
        return MINUS_INFINITY
    return a - b


# -- Newton polygons ---------------------------------------------------------


class NewtonPolygon:
    """Lower convex hull of {(k, ord_p c_k)} for a nonzero polynomial.

    `vertices` is the hull as (index, valuation) pairs with strictly
    increasing indices and slopes; `inf_mult` counts the zero coefficients
    below the lowest index, i.e. the multiplicity of roots of infinite
    valuation.
    """

    __slots__ = ("vertices", "inf_mult")

    def __init__(self, vertices, inf_mult):
        self.vertices = vertices
        self.inf_mult = inf_mult

    @staticmethod
    def of(g: list, p: int) -> "NewtonPolygon":
        pts = [(k, Fraction(ord_p(c, p))) for k, c in enumerate(g) if c]
        if not pts:
            raise ValueError("Newton polygon of the zero polynomial")
        hull = []
        for pt in pts:
            while len(hull) >= 2:
                (x1, y1), (x2, y2) = hull[-2], hull[-1]
                # keep hull[-1] only on a strict left turn (strictly convex)
                if (x2 - x1) * (pt[1] - y1) > (pt[0] - x1) * (y2 - y1):
                    break
                hull.pop()
            hull.append(pt)
        return NewtonPolygon(hull, pts[0][0])

    def slopes(self) -> list:
        """(slope, length) per hull segment; root valuations are -slope."""
        out = []
        for (x1, y1), (x2, y2) in zip(self.vertices, self.vertices[1:]):
            out.append((Fraction(y2 - y1, x2 - x1), x2 - x1))
        return out

    def __repr__(self):
        return f"NewtonPolygon({self.vertices}, inf_mult={self.inf_mult})"


def count_zeros(g, center, t, mode: str = CLOSED, p: int | None = None) -> int:
    """Zeros of g in C_p (with multiplicity) with ord(z - center) >= t (> t).

    Counted through the Newton polygon of g(T + center): a hull segment of
    slope s carries (horizontal length) roots of valuation -s, and roots at
    the center itself have valuation +infinity.
    """
    if p is None:
        raise ValueError("count_zeros needs the prime p")
    g = polys.poly(g)
    if polys.is_zero(g):
        raise ValueError("count_zeros of the zero polynomial")
    shifted = polys.shift(g, Fraction(center))
    np_ = NewtonPolygon.of(shifted, p)
    t = ValExp.of(t)
    total = np_.inf_mult
    for slope, length in np_.slopes():
        v = -slope
        if (mode == CLOSED and t <= v) or (mode == OPEN and t < v):
            total += length
    return total
