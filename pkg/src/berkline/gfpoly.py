"""Polynomial arithmetic and factorization over GF(p).

Coefficient lists of ints in {0,...,p-1}, constant term first, trimmed.
Factorization is squarefree decomposition + distinct-degree splitting +
Cantor-Zassenhaus equal-degree splitting.  The random choices inside
equal-degree splitting are seeded from the input polynomial so that the
whole pipeline is deterministic for identical inputs.
"""

from __future__ import annotations

import random


def gf_trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def gf_poly(coeffs, p: int) -> list:
    return gf_trim([int(x) % p for x in coeffs])


def gf_degree(c: list) -> int:
    return len(c) - 1


def gf_monic(c: list, p: int) -> list:
    if not c or c[-1] == 1:
        return list(c)
    inv = pow(c[-1], -1, p)
    return [(x * inv) % p for x in c]


def gf_add(a: list, b: list, p: int) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] = (out[i] + x) % p
    return gf_trim(out)


def gf_sub(a: list, b: list, p: int) -> list:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, x in enumerate(b):
        out[i] = (out[i] - x) % p
    return gf_trim(out)


def gf_mul(a: list, b: list, p: int) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return gf_trim(out)


def gf_divmod(a: list, b: list, p: int) -> tuple:
    if not b:
        raise ZeroDivisionError
    r = list(a)
    q = [0] * max(0, len(a) - len(b) + 1)
    inv = pow(b[-1], -1, p)
    for k in range(len(a) - len(b), -1, -1):
        c = (r[k + len(b) - 1] * inv) % p
        if c:
            q[k] = c
            for j, y in enumerate(b):
                r[k + j] = (r[k + j] - c * y) % p
    return gf_trim(q), gf_trim(r)


def gf_mod(a: list, b: list, p: int) -> list:
    return gf_divmod(a, b, p)[1]


def gf_gcd(a: list, b: list, p: int) -> list:
    while b:
        a, b = b, gf_mod(a, b, p)
    return gf_monic(a, p)


def gf_powmod(base: list, e: int, mod: list, p: int) -> list:
    result = [1]
    base = gf_mod(base, mod, p)
    while e:
        if e & 1:
            result = gf_mod(gf_mul(result, base, p), mod, p)
        base = gf_mod(gf_mul(base, base, p), mod, p)
        e >>= 1
    return result


def gf_deriv(c: list, p: int) -> list:
    return gf_trim([(c[i] * i) % p for i in range(1, len(c))])


def _squarefree_parts(f: list, p: int) -> list:
    """Yield (squarefree factor, multiplicity) pairs, f monic nonconstant."""
    out = []
    fp = gf_deriv(f, p)
    if not fp:
        # f = g(T^p) = g(T)^p over GF(p) since Frobenius fixes coefficients
        g = gf_trim([f[i] for i in range(0, len(f), p)])
        for h, m in _squarefree_parts(g, p):
            out.append((h, m * p))
        return out
    c = gf_gcd(f, fp, p)
    w = gf_divmod(f, c, p)[0]  # product of squarefree part
    i = 1
    while gf_degree(w) > 0:
        y = gf_gcd(w, c, p)
        z = gf_divmod(w, y, p)[0]
        if gf_degree(z) > 0:
            out.append((z, i))
        w = y
        c = gf_divmod(c, y, p)[0]
        i += 1
    if gf_degree(c) > 0:
        for h, m in _squarefree_parts(c, p):
            out.append((h, m * p))
    return out


def _distinct_degree(f: list, p: int) -> list:
    """Split squarefree monic f into (product, degree-of-irreducibles) parts."""
    out = []
    x = [0, 1]
    h = list(x)
    k = 0
    rest = list(f)
    while gf_degree(rest) >= 2 * (k + 1):
        k += 1
        h = gf_powmod(h, p, rest, p)
        g = gf_gcd(gf_sub(h, x, p), rest, p)
        if gf_degree(g) > 0:
            out.append((g, k))
            rest = gf_divmod(rest, g, p)[0]
            h = gf_mod(h, rest, p)
    if gf_degree(rest) > 0:
        out.append((rest, gf_degree(rest)))
    return out


def _equal_degree(f: list, k: int, p: int, rng: random.Random) -> list:
    """Split monic squarefree f, all of whose factors have degree k."""
    n = gf_degree(f)
    if n == k:
        return [f]
    while True:
        a = [rng.randrange(p) for _ in range(n)]
        a = gf_trim(a)
        if gf_degree(a) < 1:
            continue
        g = gf_gcd(a, f, p)
        if 0 < gf_degree(g) < n:
            break
        if p == 2:
            # trace map T + T^2 + T^4 + ... over GF(2^k)
            t = list(a)
            acc = list(a)
            for _ in range(k - 1):
                t = gf_mod(gf_mul(t, t, p), f, p)
                acc = gf_add(acc, t, p)
            g = gf_gcd(acc, f, p)
        else:
            e = (p**k - 1) // 2
            b = gf_powmod(a, e, f, p)
            g = gf_gcd(gf_sub(b, [1], p), f, p)
        if 0 < gf_degree(g) < n:
            break
    left = _equal_degree(g, k, p, rng)
    right = _equal_degree(gf_divmod(f, g, p)[0], k, p, rng)
    return left + right


def gf_factor(f: list, p: int) -> list:
    """Factor f over GF(p): list of (monic irreducible, multiplicity).

    The unit (leading coefficient) is dropped; f must be nonzero.
    """
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    f = gf_monic(f, p)
    if gf_degree(f) < 1:
        return []
    rng = random.Random(hash((p, tuple(f))) & 0x7FFFFFFF)
    out = []
    for sqfree, mult in _squarefree_parts(f, p):
        for prod, k in _distinct_degree(sqfree, p):
            for irr in _equal_degree(prod, k, p, rng):
                out.append((gf_monic(irr, p), mult))
    out.sort(key=lambda t: (gf_degree(t[0]), t[0]))
    return out


def gf_multiplicity(f: list, g: list, p: int) -> int:
    """Largest e with g^e dividing f (g nonconstant, f nonzero)."""
    e = 0
    while True:
        q, r = gf_divmod(f, g, p)
        if r:
            return e
        e += 1
        f = q
        if gf_degree(f) < gf_degree(g):
            return e
