"""Dense univariate polynomial arithmetic over Q.

Polynomials are plain lists of Fractions, constant term first, with no
trailing zeros ([] is the zero polynomial).  Everything here is exact; these
routines back seminorm evaluation, Newton polygons, resultants and the
homogeneous-lift machinery of the dynamics module.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import ord_int


def poly(coeffs) -> list:
    """Build a trimmed coefficient list from ints/Fractions."""
    out = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
    return trim(out)


def trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def degree(c: list) -> int:
    """Degree; -1 for the zero polynomial."""
    return len(c) - 1


def is_zero(c: list) -> bool:
    return not c


def add(a: list, b: list) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return trim(out)


def neg(a: list) -> list:
    return [-x for x in a]


def sub(a: list, b: list) -> list:
    return add(a, neg(b))


def scal(a: list, s) -> list:
    if s == 0:
        return []
    return [x * s for x in a]


def mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return trim(out)


def pdivmod(a: list, b: list) -> tuple:
    """Quotient and remainder of a by nonzero b."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = r[k + len(b) - 1] * inv_lead
        if c:
            q[k] = c
            for j, y in enumerate(b):
                r[k + j] -= c * y
    return trim(q), trim(r)


def pgcd(a: list, b: list) -> list:
    """Monic gcd."""
    while b:
        a, b = b, pdivmod(a, b)[1]
    if a:
        a = scal(a, 1 / a[-1])
    return a


def xgcd(a: list, b: list) -> tuple:
    """Extended gcd: (g, u, v) with u*a + v*b = g, g monic (or zero)."""
    r0, r1 = list(a), list(b)
    u0, u1 = [Fraction(1)], []
    v0, v1 = [], [Fraction(1)]
    while r1:
        q, r = pdivmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, sub(u0, mul(q, u1))
        v0, v1 = v1, sub(v0, mul(q, v1))
    if r0:
        lead = r0[-1]
        r0 = scal(r0, 1 / lead)
        u0 = scal(u0, 1 / lead)
        v0 = scal(v0, 1 / lead)
    return r0, u0, v0


def eval_at(c: list, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for coef in reversed(c):
        acc = acc * x + coef
    return acc


def derivative(c: list) -> list:
    return trim([c[i] * i for i in range(1, len(c))])


def shift(c: list, a) -> list:
    """Coefficients of c(T + a), by the Ruffini-Horner scheme (O(n^2))."""
    if not c or a == 0:
        return list(c)
    a = a if isinstance(a, Fraction) else Fraction(a)
    n = len(c)
    out = list(c)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] += a * out[j + 1]
    return trim(out)


def compose(outer: list, inner: list) -> list:
    """outer(inner(T)) by Horner."""
    acc: list = []
    for coef in reversed(outer):
        acc = add(mul(acc, inner), [coef] if coef else [])
    return acc


def content_ord(c: list, p: int):
    """Minimum p-adic valuation over the nonzero coefficients."""
    best = None
    for x in c:
        if x:
            v = ord_int(x.numerator, p) - ord_int(x.denominator, p)
            if best is None or v < best:
                best = v
    return best


def _sylvester(a: list, b: list, da: int, db: int) -> list:
    """Sylvester matrix for a (as degree da) and b (as degree db)."""
    ac = list(a) + [Fraction(0)] * (da - degree(a))
    bc = list(b) + [Fraction(0)] * (db - degree(b))
    n = da + db
    rows = []
    for i in range(db):
        row = [Fraction(0)] * n
        for j, x in enumerate(reversed(ac)):
            row[i + j] = x
        rows.append(row)
    for i in range(da):
        row = [Fraction(0)] * n
        for j, x in enumerate(reversed(bc)):
            row[i + j] = x
        rows.append(row)
    return rows


def resultant(a: list, b: list) -> Fraction:
    """Resultant at the natural degrees, as a Sylvester determinant."""
    da, db = degree(a), degree(b)
    if da < 0 or db < 0:
        return Fraction(0)
    if da == 0:
        return a[0] ** db
    if db == 0:
        return b[0] ** da
    return det_fraction(_sylvester(a, b, da, db))


def resultant_form(a: list, b: list, d: int) -> Fraction:
    """Resultant of the degree-d homogenizations of a and b.

    Both are padded with zeros up to degree d, i.e. treated as the binary
    forms X^d a(Y/X) and X^d b(Y/X).
    """
    if degree(a) > d or degree(b) > d:
        raise ValueError("degree exceeds form degree")
    if d == 0:
        return Fraction(1)
    return det_fraction(_sylvester(a, b, d, d))


def det_fraction(m: list) -> Fraction:
    """Determinant of a square Fraction matrix, exact Gaussian elimination."""
    n = len(m)
    m = [row[:] for row in m]
    det = Fraction(1)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] * inv
            if f:
                for cc in range(col, n):
                    m[r][cc] -= f * m[col][cc]
    return det
