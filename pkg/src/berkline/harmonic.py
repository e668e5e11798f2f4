"""Dirichlet solving on simple domains via the Cantor matrix.

A simple domain here is a (punctured) disc with finitely many boundary
points x_1..x_m, none classical.  The unique harmonic function with
prescribed boundary values A_i is c_0 + sum c_i * (-log delta(x, x_i)_z)
where the coefficients solve the bordered linear system whose interior is
the matrix of pairwise -log Hsia kernel values with auxiliary point z.
The solution is independent of z; the default is the Gauss point.
"""

from __future__ import annotations

from .exact import BerklineError, ValExp
from .kernels import hsia_log
from .linalg import solve_linear
from .points import BerkPoint

_ZERO = ValExp(0)
_ONE = ValExp(1)


class BoundaryError(BerklineError):
    code = "BAD_BOUNDARY"


class SimpleDomainBoundary:
    """The boundary x_1..x_m of a punctured disc: distinct non-classical points."""

    __slots__ = ("points", "p")

    def __init__(self, points):
        pts = list(points)
        if not pts:
            raise BoundaryError("boundary needs at least one point")
        keys = set()
        for x in pts:
            if not x.is_disc():
                raise BoundaryError("boundary points must be non-classical")
            if x.key() in keys:
                raise BoundaryError("boundary points must be distinct")
            keys.add(x.key())
        self.points = pts
        self.p = pts[0].p

    def __len__(self):
        return len(self.points)


class CantorMatrix:
    """The bordered (m+1)x(m+1) matrix: zero corner, unit border, and
    -log delta(x_i, x_j)_z in the interior."""

    __slots__ = ("entries", "z", "boundary")

    def __init__(self, boundary: SimpleDomainBoundary, z: BerkPoint):
        m = len(boundary)
        rows = [[_ZERO] + [_ONE] * m]
        for i in range(m):
            row = [_ONE]
            for j in range(m):
                row.append(ValExp.of(hsia_log(boundary.points[i], boundary.points[j], z)))
            rows.append(row)
        self.entries = rows
        self.z = z
        self.boundary = boundary


class HarmonicSolution:
    """Coefficients (c_0, c_1..c_m) of the Poisson representation, with the
    side constraint sum c_i = 0."""

    __slots__ = ("c0", "coeffs", "z", "boundary", "values")

    def __init__(self, c0, coeffs, z, boundary, values):
        self.c0 = c0
        self.coeffs = coeffs
        self.z = z
        self.boundary = boundary
        self.values = values


def _check_z(boundary: SimpleDomainBoundary, z: BerkPoint):
    for x in boundary.points:
        if x == z:
            raise BoundaryError("auxiliary point z must avoid the boundary")


def solve_dirichlet(boundary: SimpleDomainBoundary, values, z: BerkPoint | None = None) -> HarmonicSolution:
    """Exact solve of the bordered system for prescribed boundary values."""
    if z is None:
        z = BerkPoint.gauss(boundary.p)
    _check_z(boundary, z)
    vals = [ValExp.of(v) for v in values]
    if len(vals) != len(boundary):
        raise BoundaryError("need one value per boundary point")
    mat = CantorMatrix(boundary, z)
    rhs = [_ZERO] + vals
    sol = solve_linear(mat.entries, rhs)
    return HarmonicSolution(sol[0], sol[1:], z, boundary, vals)


def evaluate_harmonic(sol: HarmonicSolution, x: BerkPoint) -> ValExp:
    """Value of the harmonic extension at x (boundary points reproduce A_i)."""
    if sol.z.is_type_i() and x == sol.z:
        # the representation degenerates at a classical z; the limit is c0
        return sol.c0
    acc = sol.c0
    for c, xi in zip(sol.coeffs, sol.boundary.points):
        if c != 0:
            acc = acc + c * ValExp.of(hsia_log(x, xi, sol.z))
    return acc


def harmonic_measures(boundary: SimpleDomainBoundary, z: BerkPoint):
    """h_i(z) for i = 1..m: the harmonic function that is 1 at x_i and 0 at
    the other boundary points, evaluated at z.  Nonnegative, summing to 1."""
    _check_z(boundary, z)
    m = len(boundary)
    out = []
    for i in range(m):
        unit = [_ONE if j == i else _ZERO for j in range(m)]
        sol = solve_dirichlet(boundary, unit, z)
        out.append(sol.c0)
    return out


def green_function(discs, zeta: BerkPoint, z: BerkPoint) -> ValExp:
    """Green's function G(z, zeta; E) = V_zeta(E) - u_E(z, zeta) for a finite
    union of closed discs E."""
    from .capacity import DiscUnion, equilibrium

    E = discs if isinstance(discs, DiscUnion) else DiscUnion(discs)
    res = equilibrium(E, zeta)
    u = _ZERO
    for pt, mass in res.measure.atoms:
        u = u + mass * ValExp.of(hsia_log(z, pt, zeta))
    return res.robin - u
