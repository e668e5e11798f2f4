"""Metric and potential kernels on the Berkovich line, in -log_p form.

All values are exponents: a kernel value V stands for p^(-V), so bigger
numbers mean smaller radii/kernels.  This keeps every quantity inside
Q(sqrt 2) where comparisons are exact; callers exponentiate for display only.

The whole family reduces to two primitives on affine points x = B(a, p^-s)
(classical points being discs of exponent +infinity):

  meet exponent   m(x,y) = min(s, t, ord_p(a-b)),   the exponent of the
                  smallest disc containing both;
  unit clamp      u(x) = min(0, ord_p(a), s),       i.e. -log max(1, [T]_x).

The spherical kernel is then m(x,y) - u(x) - u(y), and the Hsia kernel with
arbitrary pole zeta is the normalized quotient
hsia(x,y;zeta) = sph(x,y) - sph(x,zeta) - sph(y,zeta), which for zeta =
infinity collapses back to the meet exponent.
"""

from __future__ import annotations

from .exact import MINUS_INFINITY, PLUS_INFINITY, ValExp, is_infinite, ord_p, vmin
from .points import BerkPoint

_ZERO = ValExp(0)


def _center_rexp(x: BerkPoint):
    """(center, radius exponent) with classical points as zero-radius discs."""
    if x.is_disc():
        return x.center, x.rexp
    if x.is_infinity():
        raise ValueError("infinity has no affine disc form")
    return x.value, PLUS_INFINITY


def meet_exponent(x: BerkPoint, y: BerkPoint):
    """Exponent of the smallest disc containing x and y (+oo for equal type I)."""
    a, s = _center_rexp(x)
    b, t = _center_rexp(y)
    return vmin(s, t, ord_p(a - b, x.p))


def meet_point(x: BerkPoint, y: BerkPoint) -> BerkPoint:
    """The point where the paths from x and y to infinity first meet."""
    m = meet_exponent(x, y)
    if is_infinite(m):
        return x
    a, _ = _center_rexp(x)
    return BerkPoint.disc(x.p, a, m)


def umin(x: BerkPoint) -> ValExp:
    """min(0, ord_p center, rexp); equals -log_p max(1, [T]_x)."""
    a, s = _center_rexp(x)
    return ValExp.of(vmin(_ZERO, ord_p(a, x.p), s))


def spherical_log(x: BerkPoint, y: BerkPoint):
    """j_{zeta_0}(x, y): -log_p of the spherical kernel ||x,y||.

    Nonnegative; vanishes exactly when the paths to the Gauss point meet
    there; PLUS_INFINITY for equal classical points.
    """
    if x.is_infinity() and y.is_infinity():
        return PLUS_INFINITY
    if x.is_infinity():
        return -umin(y)
    if y.is_infinity():
        return -umin(x)
    m = meet_exponent(x, y)
    if is_infinite(m):
        return PLUS_INFINITY
    return ValExp.of(m) - umin(x) - umin(y)


def hsia_log(x: BerkPoint, y: BerkPoint, zeta: BerkPoint):
    """-log_p of the Hsia kernel delta(x,y)_zeta, normalized by the
    spherical-quotient formula (its scaling freedom is fixed this way).

    PLUS_INFINITY when x = y is classical; MINUS_INFINITY when a classical
    pole coincides with an argument.
    """
    if zeta.is_type_i() and (x == zeta or y == zeta):
        return MINUS_INFINITY
    sxy = spherical_log(x, y)
    sxz = spherical_log(x, zeta)
    syz = spherical_log(y, zeta)
    return sxy - sxz - syz


def diam_log(x: BerkPoint, zeta: BerkPoint):
    """-log_p diam_zeta(x) = hsia_log(x, x, zeta)."""
    return hsia_log(x, x, zeta)


def path_distance(x: BerkPoint, y: BerkPoint):
    """Logarithmic path distance rho in the big model.

    A metric on non-classical points; PLUS_INFINITY as soon as a classical
    point is involved (except rho(x, x) = 0).
    """
    if x == y:
        return _ZERO
    if x.is_type_i() or y.is_type_i():
        return PLUS_INFINITY
    m = meet_exponent(x, y)
    return (x.rexp - m) + (y.rexp - m)


def meet_wrt(x: BerkPoint, y: BerkPoint, zeta: BerkPoint) -> BerkPoint:
    """First common point of the paths [x, zeta] and [y, zeta].

    Equals the median of (x, y, zeta) in the tree; computed as the deepest
    of the three pairwise meets relative to infinity.
    """
    if x == y:
        return x
    if zeta.is_infinity():
        return meet_point(x, y)
    if x == zeta or y == zeta:
        return zeta
    if x.is_infinity():
        return meet_point(y, zeta)
    if y.is_infinity():
        return meet_point(x, zeta)
    w1 = meet_point(x, y)
    w2 = meet_point(x, zeta)
    w3 = meet_point(y, zeta)
    best = w1
    if w2.rexp > best.rexp:
        best = w2
    if w3.rexp > best.rexp:
        best = w3
    return best


def j_kernel(x: BerkPoint, y: BerkPoint, z: BerkPoint):
    """Potential kernel j_z(x,y) = rho(z, meet of x and y seen from z).

    Symmetric in x and y, with j_z(z, y) = 0; PLUS_INFINITY when z is
    classical and distinct from the meet (e.g. j_z(x, x) for classical x).
    """
    w = meet_wrt(x, y, z)
    return path_distance(z, w)
