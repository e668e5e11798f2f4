"""Exact arithmetic substrate: p-adic valuations and the ordered field Q(sqrt 2).

Everything downstream (radii, distances, kernel values, heights) is carried
in "exponent space": a disc of radius p^(-t) is stored as the exponent t.
Exponents live in the real quadratic field Q(sqrt 2), represented exactly as
a pair of rationals.  The rational part corresponds to radii inside the value
group p^Q (type II points); a nonzero sqrt(2) part realizes radii outside it
(type III points).  All comparisons are exact sign computations, never floats.

The two infinities PLUS_INFINITY / MINUS_INFINITY are shared sentinels:
ord_p(0) is PLUS_INFINITY, and -log of a vanishing (resp. unbounded)
seminorm is PLUS_INFINITY (resp. MINUS_INFINITY).
"""

from __future__ import annotations

from fractions import Fraction


class BerklineError(Exception):
    """Base class for domain errors; `code` is a stable machine-readable tag."""

    code = "ERROR"


class Infinite:
    """Signed infinity usable in comparisons and one-sided arithmetic.

    Only the two singletons PLUS_INFINITY and MINUS_INFINITY exist.
    Adding opposite infinities raises, it never silently cancels.
    """

    __slots__ = ("sgn",)

    def __init__(self, sgn):
        self.sgn = sgn

    def __repr__(self):
        return "+oo" if self.sgn > 0 else "-oo"

    def __neg__(self):
        return MINUS_INFINITY if self.sgn > 0 else PLUS_INFINITY

    def __add__(self, other):
        if isinstance(other, Infinite):
            if other.sgn != self.sgn:
                raise ArithmeticError("oo - oo is undefined")
            return self
        return self

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, Infinite) else 0)

    def __rsub__(self, other):
        return -self

    def __mul__(self, other):
        if isinstance(other, Infinite):
            return PLUS_INFINITY if self.sgn == other.sgn else MINUS_INFINITY
        s = _sign_of(other)
        if s == 0:
            raise ArithmeticError("0 * oo is undefined")
        return self if s > 0 else -self

    __rmul__ = __mul__

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return hash(("Infinite", self.sgn))

    def __lt__(self, other):
        if self is other:
            return False
        return self.sgn < 0

    def __le__(self, other):
        return self is other or self.sgn < 0

    def __gt__(self, other):
        if self is other:
            return False
        return self.sgn > 0

    def __ge__(self, other):
        return self is other or self.sgn > 0


PLUS_INFINITY = Infinite(1)
MINUS_INFINITY = Infinite(-1)

#: Valuation of zero; kept under the name the valuation layer uses.
INFINITY = PLUS_INFINITY


def is_infinite(v) -> bool:
    return isinstance(v, Infinite)


def _sign_of(x) -> int:
    if isinstance(x, ValExp):
        return x.sign()
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


class PrimeConfig:
    """The prime p fixing the valuation; q_v = p and all logs are base p."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    def __repr__(self):
        return f"PrimeConfig({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeConfig) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeConfig", self.p))


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def ord_int(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def ord_p(x, cfg):
    """Exact p-adic valuation of a rational; PLUS_INFINITY iff x = 0.

    `x` may be an int or Fraction, `cfg` a PrimeConfig or bare prime.
    """
    p = cfg.p if isinstance(cfg, PrimeConfig) else cfg
    if isinstance(x, int):
        if x == 0:
            return INFINITY
        return ord_int(x, p)
    num = x.numerator
    if num == 0:
        return INFINITY
    return ord_int(num, p) - ord_int(x.denominator, p)


_ZERO = Fraction(0)


class ValExp:
    """An element a + b*sqrt(2) of Q(sqrt 2), with exact total order.

    Used for radius exponents, path distances and log-seminorms.  The
    element is "rational" iff the sqrt(2) part vanishes; a disc point is
    type II precisely when its radius exponent is rational.
    """

    __slots__ = ("rat", "s2")

    def __init__(self, rat=0, s2=0):
        self.rat = rat if isinstance(rat, Fraction) else Fraction(rat)
        self.s2 = s2 if isinstance(s2, Fraction) else Fraction(s2)

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def of(x) -> "ValExp":
        if isinstance(x, ValExp):
            return x
        return ValExp(x)

    def is_rational(self) -> bool:
        return self.s2 == 0

    def is_integer(self) -> bool:
        return self.s2 == 0 and self.rat.denominator == 1

    # -- field operations ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Infinite):
            return other
        if isinstance(other, ValExp):
            return ValExp(self.rat + other.rat, self.s2 + other.s2)
        return ValExp(self.rat + other, self.s2)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Infinite):
            return -other
        if isinstance(other, ValExp):
            return ValExp(self.rat - other.rat, self.s2 - other.s2)
        return ValExp(self.rat - other, self.s2)

    def __rsub__(self, other):
        if isinstance(other, Infinite):
            return other
        return ValExp(other - self.rat, -self.s2)

    def __neg__(self):
        return ValExp(-self.rat, -self.s2)

    def __mul__(self, other):
        if isinstance(other, Infinite):
            return other * self.sign()
        if isinstance(other, ValExp):
            return ValExp(
                self.rat * other.rat + 2 * self.s2 * other.s2,
                self.rat * other.s2 + self.s2 * other.rat,
            )
        return ValExp(self.rat * other, self.s2 * other)

    __rmul__ = __mul__

    def inverse(self) -> "ValExp":
        # 1/(a + b sqrt2) = (a - b sqrt2) / (a^2 - 2 b^2); the norm is nonzero
        # for nonzero elements since sqrt2 is irrational.
        norm = self.rat * self.rat - 2 * self.s2 * self.s2
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt2)")
        return ValExp(self.rat / norm, -self.s2 / norm)

    def __truediv__(self, other):
        if isinstance(other, ValExp):
            return self * other.inverse()
        return ValExp(self.rat / other, self.s2 / other)

    def __rtruediv__(self, other):
        return self.inverse() * other

    # -- exact order ---------------------------------------------------------

    def sign(self) -> int:
        """Sign of a + b*sqrt(2), decided by comparing a^2 against 2 b^2."""
        a, b = self.rat, self.s2
        if b == 0:
            return 1 if a > 0 else (-1 if a < 0 else 0)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # mixed signs: |a| vs |b| sqrt2 decided by a^2 vs 2 b^2 (never equal)
        bigger_rat = a * a > 2 * b * b
        if a > 0:
            return 1 if bigger_rat else -1
        return -1 if bigger_rat else 1

    def _cmp(self, other) -> int:
        return (self - other).sign()

    def __eq__(self, other):
        if isinstance(other, Infinite):
            return False
        if isinstance(other, ValExp):
            return self.rat == other.rat and self.s2 == other.s2
        if isinstance(other, (int, Fraction)):
            return self.s2 == 0 and self.rat == other
        return NotImplemented

    def __hash__(self):
        if self.s2 == 0:
            return hash(self.rat)
        return hash((self.rat, self.s2))

    def __lt__(self, other):
        if isinstance(other, Infinite):
            return other.sgn > 0
        return self._cmp(other) < 0

    def __le__(self, other):
        if isinstance(other, Infinite):
            return other.sgn > 0
        return self._cmp(other) <= 0

    def __gt__(self, other):
        if isinstance(other, Infinite):
            return other.sgn < 0
        return self._cmp(other) > 0

    def __ge__(self, other):
        if isinstance(other, Infinite):
            return other.sgn < 0
        return self._cmp(other) >= 0

    # -- integer bounds ------------------------------------------------------

    def floor(self) -> int:
        """Largest integer <= self, computed exactly."""
        if self.s2 == 0:
            return self.rat.numerator // self.rat.denominator
        # float guess, then correct by exact comparisons
        n = int(float(self.rat) + float(self.s2) * 1.4142135623730951)
        while self._cmp(n) < 0:
            n -= 1
        while self._cmp(n + 1) >= 0:
            n += 1
        return n

    def ceil(self) -> int:
        """Smallest integer >= self."""
        f = self.floor()
        return f if self._cmp(f) == 0 else f + 1

    # -- display -------------------------------------------------------------

    def __repr__(self):
        if self.s2 == 0:
            return str(self.rat)
        if self.rat == 0:
            return f"{self.s2}*sqrt2"
        s = "+" if self.s2 > 0 else "-"
        return f"{self.rat} {s} {abs(self.s2)}*sqrt2"

    def to_float(self) -> float:
        """Approximate real value; display only, never used in comparisons."""
        return float(self.rat) + float(self.s2) * 1.4142135623730951


VALEXP_ZERO = ValExp(0)
VALEXP_ONE = ValExp(1)


def valexp_cmp(a, b) -> int:
    """Exact order of two Q(sqrt2) elements: -1, 0 or +1."""
    return ValExp.of(a)._cmp(ValExp.of(b))


def vmin(*values):
    """Minimum of extended values (ValExp / Fraction / int / infinities)."""
    best = None
    for v in values:
        if best is None or _ext_lt(v, best):
            best = v
    return best


def vmax(*values):
    best = None
    for v in values:
        if best is None or _ext_lt(best, v):
            best = v
    return best


def _ext_lt(a, b) -> bool:
    if isinstance(a, Infinite) or isinstance(b, Infinite):
        if isinstance(a, Infinite):
            return a.sgn < 0 and a is not b
        return b.sgn > 0
    if isinstance(a, ValExp) or isinstance(b, ValExp):
        return ValExp.of(a)._cmp(ValExp.of(b)) < 0
    return a < b


# -- serialization ------------------------------------------------------------


def frac_to_str(x) -> str:
    x = x if isinstance(x, Fraction) else Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def frac_from_str(s: str) -> Fraction:
    s = s.strip()
    if "/" in s:
        num, den = s.split("/")
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def valexp_to_json(v) -> dict:
    v = ValExp.of(v)
    return {"rat": frac_to_str(v.rat), "sqrt2": frac_to_str(v.s2)}


def valexp_from_json(obj) -> ValExp:
    if isinstance(obj, str):
        return ValExp(frac_from_str(obj))
    if isinstance(obj, int):
        return ValExp(obj)
    return ValExp(frac_from_str(obj["rat"]), frac_from_str(obj.get("sqrt2", "0")))
