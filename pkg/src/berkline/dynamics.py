"""Rational-map dynamics on the Berkovich line.

A RationalMap is a pair of coprime polynomials P/Q over Q together with its
homogeneous lift and resultant data.  The module computes images of points
(through the seminorm characterization, with self-verification), analytic
multiplicities at integral type II points by component counting, transport
of discrete measures, iterated local heights, and the restriction of the
height to a metrized graph whose negated Laplacian is the finite-level
approximation of the invariant measure.

Sign convention: the library stores -log_p values everywhere, while the
local height here is the classical "max of logs"; the flip happens in this
module only, pinned by the good-reduction identity h(x) = log max(1,[T]_x).
"""

from __future__ import annotations

import os
from fractions import Fraction

from . import polys
from .exact import (
    BerklineError,
    ValExp,
    is_infinite,
    ord_int,
    ord_p,
    vmin,
)
from .gfpoly import gf_factor, gf_multiplicity, gf_trim
from .graphs import (
    CPAFunction,
    DiscreteMeasure,
    MetrizedGraph,
    laplacian,
    materialize,
    retract,
    span,
    subdivide,
)
from .kernels import meet_exponent, path_distance, umin
from .points import (
    BerkPoint,
    NewtonPolygon,
    UnsupportedPointError,
    poly_seminorm_log,
)

_ZERO = ValExp(0)
_ONE = ValExp(1)

DEFAULT_MAX_DEPTH = 8


class DepthGuardError(BerklineError):
    code = "DEPTH_GUARD"


class VerificationFailedError(BerklineError):
    code = "VERIFICATION_FAILED"


class FiberMultiplicityError(BerklineError):
    code = "FIBER_MULTIPLICITY_MISMATCH"


def max_depth() -> int:
    return int(os.environ.get("BERKLINE_MAX_DEPTH", DEFAULT_MAX_DEPTH))


class RationalMap:
    """The map T -> P(T)/Q(T) with cached lift and distortion data.

    The homogeneous lift is (F1, F2) of degree d = max(deg P, deg Q) with
    F1(1,T) = Q and F2(1,T) = P; b1 and b2 are the resultants of the two
    dehomogenizations, and c1 bounds the sup-norm distortion of the lift:
    | (1/d) log ||F(x,y)|| - log ||(x,y)|| | <= c1 / d on Q^2.
    """

    __slots__ = ("p", "P", "Q", "d", "b1", "b2", "c1", "_lifts")

    def __init__(self, p: int, P, Q=(1,)):
        self.p = p
        self.P = polys.poly(P)
        self.Q = polys.poly(Q)
        if polys.is_zero(self.P) or polys.is_zero(self.Q):
            raise ValueError("P and Q must be nonzero")
        g = polys.pgcd(self.P, self.Q)
        if polys.degree(g) > 0:
            self.P = polys.pdivmod(self.P, g)[0]
            self.Q = polys.pdivmod(self.Q, g)[0]
        self.d = max(polys.degree(self.P), polys.degree(self.Q))
        if self.d < 1:
            raise ValueError("map must be nonconstant")
        self.b1 = polys.resultant_form(self.Q, self.P, self.d)
        rev_q = list(reversed(self.Q + [Fraction(0)] * (self.d - polys.degree(self.Q))))
        rev_p = list(reversed(self.P + [Fraction(0)] * (self.d - polys.degree(self.P))))
        self.b2 = polys.resultant_form(polys.trim(rev_q), polys.trim(rev_p), self.d)
        if self.b1 == 0 or self.b2 == 0:
            raise ValueError("degenerate lift: resultant vanished")
        self.c1 = self._distortion_bound(rev_q, rev_p)
        self._lifts = {1: (self.Q, self.P)}

    def _distortion_bound(self, rev_q, rev_p) -> Fraction:
        """c1 = max(-log B1, log B2): B2 is the largest coefficient norm, and
        B1 = A1/A2 with A1 = min(|b1|, |b2|) and A2 the largest coefficient
        norm among the Bezout cofactors certifying both resultants."""
        p = self.p
        m2 = min(polys.content_ord(self.P, p), polys.content_ord(self.Q, p))
        cof = []
        for f1, f2, b in ((self.Q, self.P, self.b1), (polys.trim(list(rev_q)), polys.trim(list(rev_p)), self.b2)):
            _g, u, v = polys.xgcd(f1, f2)
            cof.extend(polys.scal(u, b))
            cof.extend(polys.scal(v, b))
        a2 = polys.content_ord([c for c in cof if c], p)
        a1 = max(ord_p(self.b1, p), ord_p(self.b2, p))
        return Fraction(max(a1 - a2, -m2))

    def lift(self, n: int):
        """Coefficients of the iterated lift (F1^(n)(1,T), F2^(n)(1,T))."""
        if n > max_depth():
            raise DepthGuardError(f"iteration depth {n} exceeds the guard")
        if n not in self._lifts:
            f1, f2 = self.lift(n - 1)
            self._lifts[n] = _compose_lift(self.Q, self.P, self.d, f1, f2)
        return self._lifts[n]

    def __repr__(self):
        return f"RationalMap(p={self.p}, P={self.P}, Q={self.Q})"


def _compose_lift(Q, P, d, f1, f2):
    """(F1(f1, f2), F2(f1, f2)) for homogeneous degree-d forms F1, F2 with
    F1(1,T) = Q, F2(1,T) = P, evaluated on a polynomial pair."""
    pow1 = [[Fraction(1)]]
    pow2 = [[Fraction(1)]]
    for _ in range(d):
        pow1.append(polys.mul(pow1[-1], f1))
        pow2.append(polys.mul(pow2[-1], f2))
    out = []
    for coeffs in (Q, P):
        padded = list(coeffs) + [Fraction(0)] * (d + 1 - len(coeffs))
        acc = []
        for k, c in enumerate(padded):
            if c:
                acc = polys.add(acc, polys.scal(polys.mul(pow1[d - k], pow2[k]), c))
        out.append(acc)
    return out[0], out[1]


# ---------------------------------------------------------------------------
# Action on points


def _eval_type_i(phi: RationalMap, x: BerkPoint) -> BerkPoint:
    p = phi.p
    if x.value is None:
        raise ValueError("expected a classical point")
    if x.is_infinity():
        dp, dq = polys.degree(phi.P), polys.degree(phi.Q)
        if dp > dq:
            return BerkPoint.infinity(p)
        if dp < dq:
            return BerkPoint.type_i(p, 0)
        return BerkPoint.type_i(p, phi.P[-1] / phi.Q[-1])
    num = polys.eval_at(phi.P, x.value)
    den = polys.eval_at(phi.Q, x.value)
    if den == 0:
        return BerkPoint.infinity(p)
    return BerkPoint.type_i(p, num / den)


def apply_map(phi: RationalMap, x: BerkPoint) -> BerkPoint:
    """The image point, characterized by [g]_phi(x) = [g o phi]_x.

    For a disc point the image center is the argmin over the shifted
    coefficient ratios of the seminorm of P - beta Q, the radius comes from
    that minimum divided by [Q]_x, and the result is checked against the
    seminorm identity on probe linear functions.
    """
    if x.is_type_i():
        return _eval_type_i(phi, x)
    p = phi.p
    a, s = x.center, x.rexp
    pt = polys.shift(phi.P, a)
    qt = polys.shift(phi.Q, a)
    qlog = _shifted_seminorm(qt, s, p)
    candidates = []
    seen = set()
    for k, qk in enumerate(qt):
        if qk:
            beta = (pt[k] if k < len(pt) else Fraction(0)) / qk
            if beta not in seen:
                seen.add(beta)
                candidates.append(beta)
    best_beta = None
    best_val = None
    for beta in candidates:
        diff = polys.sub(pt, polys.scal(qt, beta))
        if polys.is_zero(diff):
            continue
        val = _shifted_seminorm(diff, s, p)
        if best_val is None or val > best_val:
            best_val, best_beta = val, beta
    if best_beta is None:
        raise VerificationFailedError("no admissible image center found")
    rexp = best_val - qlog
    y = BerkPoint.disc(p, best_beta, rexp)
    _verify_image(phi, x, y, pt, qt, qlog)
    return y


def _shifted_seminorm(coeffs, s, p):
    """min_k (ord c_k + k s) over nonzero coefficients (a ValExp)."""
    best = None
    for k, c in enumerate(coeffs):
        if c:
            cand = s * k + ord_p(c, p)
            if best is None or cand < best:
                best = cand
    return best


def _verify_image(phi, x, y, pt, qt, qlog):
    """Probe the defining identity [phi - gamma]_x = delta(y, gamma)_inf on
    five fixed small rationals gamma."""
    p = phi.p
    for gamma in (Fraction(0), Fraction(1), Fraction(p), Fraction(1, p), Fraction(p + 1)):
        diff = polys.sub(pt, polys.scal(qt, gamma))
        if polys.is_zero(diff):
            continue
        lhs = _shifted_seminorm(diff, x.rexp, p) - qlog
        rhs = meet_exponent(y, BerkPoint.type_i(p, gamma))
        if lhs != ValExp.of(rhs):
            raise VerificationFailedError(
                f"image verification failed at gamma={gamma}: {lhs} vs {rhs}"
            )


def lipschitz_check(phi: RationalMap, x: BerkPoint, y: BerkPoint) -> bool:
    """Whether rho(phi x, phi y) <= d * rho(x, y) (always true; test oracle)."""
    if x.is_type_i() or y.is_type_i():
        raise UnsupportedPointError("path distances need non-classical points")
    left = path_distance(apply_map(phi, x), apply_map(phi, y))
    right = phi.d * ValExp.of(path_distance(x, y))
    return ValExp.of(left) <= right


# ---------------------------------------------------------------------------
# Multiplicities


def _component_counts(g, d, a, t, p):
    """Root counts of g relative to the disc B(a, p^-t), t an integer:
    (count outside the closed disc, including infinity with weight
    d - deg g, and a dict of reduced irreducible factors -> count inside
    per residue direction)."""
    gw = polys.shift(g, a)
    # substitute T = p^t w
    gw = [c * Fraction(p) ** (t * k) for k, c in enumerate(gw)]
    gw = polys.trim(gw)
    shift_ord = polys.content_ord(gw, p)
    unit = [c * Fraction(p) ** (-shift_ord) for c in gw]
    red = gf_trim(
        [(c.numerator * pow(c.denominator, -1, p)) % p for c in unit]
    )
    inside = len(red) - 1  # number of roots with |w| <= 1
    outside = polys.degree(gw) - inside + (d - polys.degree(g))
    return outside, red


def multiplicity(phi: RationalMap, q: BerkPoint) -> int:
    """Analytic multiplicity m_{phi, phi(q)}(q) at an integral type II point,
    by component counting: pick classical points b0 (inside the image disc)
    and infinity (outside), count their preimages in each component of the
    complement of q, and sum the positive parts of the differences."""
    if not q.is_disc() or not q.rexp.is_integer():
        raise UnsupportedPointError("multiplicities need integral type II points")
    t = int(q.rexp.rat)
    a = q.center
    p = phi.p
    b = apply_map(phi, q)
    b0 = b.center
    g_a = polys.sub(phi.P, polys.scal(phi.Q, b0))
    g_z = phi.Q
    a_out, a_red = _component_counts(g_a, phi.d, a, t, p)
    z_out, z_red = _component_counts(g_z, phi.d, a, t, p)
    total = max(0, z_out - a_out)
    if len(z_red) > 1:
        for factor, e_z in gf_factor(z_red, p):
            e_a = gf_multiplicity(a_red, factor, p) if len(a_red) > 1 else 0
            deg_f = len(factor) - 1
            total += deg_f * max(0, e_z - e_a)
    assert 1 <= total <= phi.d, "multiplicity out of range"
    return total


def ramification(phi: RationalMap, q: BerkPoint) -> int:
    """R_phi(q) = m_{phi, phi(q)}(q) - 1, an integer in [0, d-1]."""
    return multiplicity(phi, q) - 1


# ---------------------------------------------------------------------------
# Measure transport


def pushforward(phi: RationalMap, nu: DiscreteMeasure) -> DiscreteMeasure:
    """phi_* nu: atoms move through the map, masses merge."""
    return DiscreteMeasure([(apply_map(phi, pt), m) for pt, m in nu.atoms])


def pullback(phi: RationalMap, nu: DiscreteMeasure, fibers) -> DiscreteMeasure:
    """phi^* nu from caller-supplied fibers [(q, multiplicity), ...]:
    each atom (b, m) of nu becomes sum m * mult * delta_q over its fiber,
    so the total mass is multiplied by d.  Multiplicities must sum to d
    over each atom and every fiber point must map onto an atom."""
    images = {}
    for q, mult in fibers:
        y = apply_map(phi, q)
        images.setdefault(y.key(), []).append((q, mult))
    atoms = []
    for b, m in nu.atoms:
        fiber = images.get(b.key())
        if fiber is None:
            raise FiberMultiplicityError(f"no fiber points supplied over {b}")
        if sum(mult for _q, mult in fiber) != phi.d:
            raise FiberMultiplicityError(f"fiber multiplicities over {b} must sum to d")
        for q, mult in fiber:
            atoms.append((q, m * mult))
    return DiscreteMeasure(atoms)


# ---------------------------------------------------------------------------
# Local heights


def good_reduction(phi: RationalMap) -> bool:
    """True iff, after clearing the common power of p that normalizes the
    coefficients to be p-integral with a unit among them, the resultant of
    the degree-d lift is a p-adic unit."""
    p = phi.p
    m2 = min(polys.content_ord(phi.P, p), polys.content_ord(phi.Q, p))
    return ord_p(phi.b1, p) == 2 * phi.d * m2


def call_silverman(phi: RationalMap, x: BerkPoint, n: int) -> ValExp:
    """The n-th local height h^(n)(x) = (1/d^n) max_i log [F_i^(n)(1,T)]_x,
    in the classical sign convention (h >= log max(1, [T]_x) - C).

    Computed without materializing iterated lifts: the lift composition and
    the seminorm functional equation give
    s_n(x) = d^(n-1) * (-log [Q]_x) + s_{n-1}(phi(x)), s_0 = -log max(1,[T]).
    Classical points go through exact homogeneous coordinate iteration.
    """
    if n < 1 or n > max_depth():
        raise DepthGuardError(f"n must be between 1 and {max_depth()}")
    p = phi.p
    if x.is_type_i():
        if x.is_infinity():
            from .exact import PLUS_INFINITY

            return PLUS_INFINITY
        x0, x1 = Fraction(1), x.value
        for _ in range(n):
            x0, x1 = _eval_pair(phi, x0, x1)
        low = vmin(ord_p(x0, p), ord_p(x1, p))
        return ValExp.of(-low) / phi.d**n
    acc = _ZERO
    y = x
    for j in range(n):
        qlog = poly_seminorm_log(phi.Q, y)
        acc = acc + ValExp.of(qlog) * phi.d ** (n - 1 - j)
        y = apply_map(phi, y)
    acc = acc + umin(y)
    return -acc / phi.d**n


def _eval_pair(phi, x0, x1):
    """One homogeneous lift step on projective coordinates (x0 : x1)."""
    d = phi.d
    f1 = sum(
        (c * x0 ** (d - k) * x1**k for k, c in enumerate(phi.Q) if c), Fraction(0)
    )
    f2 = sum(
        (c * x0 ** (d - k) * x1**k for k, c in enumerate(phi.P) if c), Fraction(0)
    )
    return f1, f2


def height_on_graph(phi: RationalMap, graph: MetrizedGraph, n: int):
    """Restriction of h^(n) to the graph as a CPA function on a refinement.

    Along each edge the two lift seminorms are minima of affine functions
    of the radius exponent; edges are cut at every breakpoint of the lower
    envelope, so the returned function is affine on each edge.
    """
    f1, f2 = phi.lift(n)
    p = phi.p
    cuts = []
    for e, (i, j, _ln) in enumerate(graph.edges):
        u, v = graph.vertices[i], graph.vertices[j]
        child = v if v.rexp > u.rexp else u
        lo, hi = (u.rexp, v.rexp) if v.rexp > u.rexp else (v.rexp, u.rexp)
        lines = _envelope_lines(f1, f2, child.center, p)
        for tau in _envelope_breakpoints(lines):
            tv = ValExp.of(tau)
            if lo < tv < hi:
                cuts.append(BerkPoint.disc(p, child.center, tv))
    refined = subdivide(graph, cuts) if cuts else graph
    scale = Fraction(1, phi.d**n)
    values = []
    for vert in refined.vertices:
        s1 = poly_seminorm_log(f1, vert)
        s2 = poly_seminorm_log(f2, vert)
        values.append(-ValExp.of(vmin(s1, s2)) * scale)
    return refined, CPAFunction(refined, values)


def _envelope_lines(f1, f2, center, p):
    """Affine pieces (slope k, intercept ord c_k) of both lift seminorms
    along the ray of discs centered at `center`."""
    lines = []
    for f in (f1, f2):
        for k, c in enumerate(polys.shift(f, center)):
            if c:
                lines.append((k, Fraction(ord_p(c, p))))
    return lines


def _envelope_breakpoints(lines):
    """Exact breakpoints of min_k (v_k + k tau) over the given lines."""
    # lower envelope by the convex-hull duality used for Newton polygons
    pts = {}
    for k, v in lines:
        if k not in pts or v < pts[k]:
            pts[k] = v
    items = sorted(pts.items())
    hull = []
    for k, v in items:
        while len(hull) >= 2:
            (k1, v1), (k2, v2) = hull[-2], hull[-1]
            if (k2 - k1) * (v - v1) > (k - k1) * (v2 - v1):
                break
            hull.pop()
        hull.append((k, v))
    breaks = []
    for (k1, v1), (k2, v2) in zip(hull, hull[1:]):
        breaks.append(Fraction(v1 - v2, k2 - k1))
    return breaks


def lyubich_on_graph(phi: RationalMap, graph: MetrizedGraph, n: int) -> DiscreteMeasure:
    """Finite-level invariant measure retracted to the graph: the negated
    Laplacian of the height restriction, with the point-at-infinity atom
    (which retracts to the top vertex) removed.  Nonnegative of mass 1."""
    refined, h = height_on_graph(phi, graph, n)
    delta = laplacian(h)
    top = materialize(refined, retract(refined, BerkPoint.infinity(phi.p)))
    atoms = [(pt, -m) for pt, m in delta.atoms]
    atoms.append((top, _ONE))
    mu = DiscreteMeasure(atoms)
    assert mu.total_mass() == 1, "finite-level measure must have mass 1"
    assert all(m.sign() >= 0 for _pt, m in mu.atoms), "measure must be nonnegative"
    return mu
