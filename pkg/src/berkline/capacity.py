"""Capacities and equilibrium measures for finite unions of closed discs.

The energy of a discrete measure against the Hsia kernel with pole zeta is
a quadratic form; by the support theorem the equilibrium problem for a disc
union reduces to a finite quadratic program over the disc boundary points.
Two exact solvers are provided:

  * a dense stationarity solver (K w = V 1, sum w = 1) with active-set
    descent, the reference implementation for small boundary sets;
  * a tree solver that reads the same quadratic form as the energy of a
    unit flow through the convex-hull tree of the boundary points rooted
    where zeta attaches, so the minimizer is the harmonic current and the
    Robin constant is an effective resistance.  This is near-linear and
    carries the p^n-point ring-of-integers approximations comfortably.

Both produce exactly the same measure; the test suite asserts it.  The tree
pipeline works on raw (center, exponent) arrays with an all-integer fast
path, since the large inputs of interest have integer data.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import (
    PLUS_INFINITY,
    BerklineError,
    ValExp,
    is_infinite,
    ord_int,
    ord_p,
)
from .graphs import DiscreteMeasure, _dkey
from .kernels import diam_log, hsia_log, meet_exponent, meet_wrt, spherical_log
from .linalg import solve_linear
from .points import BerkPoint, contains, reduce_center

_ZERO = ValExp(0)
_ONE = ValExp(1)

DENSE_LIMIT = 24


class ZetaInSupportError(BerklineError):
    code = "ZETA_IN_SUPPORT"


class CandidatesOutsideError(BerklineError):
    code = "CANDIDATES_OUTSIDE_E"


class TypeIAtomError(BerklineError):
    code = "TYPE_I_ATOM"


# ---------------------------------------------------------------------------
# Raw disc arrays
#
# The scans below work on parallel lists (centers, rexps).  When every
# center is an integer and every exponent an int, centers are reduced mod
# p^hi and everything stays in machine/bignum ints; otherwise centers are
# Fractions and exponents ValExp values.


def _raw_arrays(pts):
    p = pts[0].p
    all_int = True
    for x in pts:
        if x.center.denominator != 1 or not x.rexp.is_integer():
            all_int = False
            break
    if all_int:
        centers = [x.center.numerator for x in pts]
        rexps = [int(x.rexp.rat) for x in pts]
    else:
        centers = [x.center for x in pts]
        rexps = [x.rexp for x in pts]
    return p, all_int, centers, rexps


def _meet_raw(p, all_int, c1, r1, c2, r2):
    """min(r1, r2, ord(c1 - c2)) on raw data."""
    m = r2 if r2 < r1 else r1
    d = c1 - c2
    if d == 0:
        return m
    o = ord_int(d, p) if all_int else ord_p(d, p)
    return o if o < m else m


def _sort_order(p, all_int, centers, rexps):
    """Indices in p-adic lexicographic order of the centers (digits of the
    canonically reduced center, low position first), exponents as tie-break."""
    n = len(centers)
    if all_int:
        hi = max(1, max(rexps))
        ph = p**hi
        keys = []
        for i in range(n):
            c = centers[i] % ph
            packed = 0
            for _ in range(hi):
                c, d = divmod(c, p)
                packed = packed * p + d
            keys.append((packed, rexps[i]))
        return sorted(range(n), key=keys.__getitem__)
    lo = 0
    for c in centers:
        o = ord_p(c, p)
        if not is_infinite(o) and o < lo:
            lo = o
    hi = max(1, max(r.ceil() for r in rexps))
    width = hi - lo
    keys = []
    for i in range(n):
        c = reduce_center(centers[i], hi, p)
        m = int(c * Fraction(p) ** (-lo))
        digs = []
        for _ in range(width):
            m, d = divmod(m, p)
            digs.append(d)
        keys.append((tuple(digs), rexps[i].rat, rexps[i].s2))
    return sorted(range(n), key=keys.__getitem__)


def _normalize_disjoint(pts):
    """Drop duplicate discs and discs contained in a larger one.

    In p-adic sorted order every containment shows up against the most
    recently kept disc, so one stack scan suffices."""
    p, all_int, centers, rexps = _raw_arrays(pts)
    order = _sort_order(p, all_int, centers, rexps)
    kept = []
    for idx in order:
        drop = False
        while kept:
            prev = kept[-1]
            m = _meet_raw(p, all_int, centers[prev], rexps[prev], centers[idx], rexps[idx])
            if not m < rexps[prev]:
                drop = True  # prev contains idx (or they are equal)
                break
            if not m < rexps[idx]:
                kept.pop()  # idx contains prev
                continue
            break
        if not drop:
            kept.append(idx)
    return [pts[i] for i in kept]


class DiscUnion:
    """A finite union of closed discs, normalized so no disc contains
    another (closed discs in an ultrametric are nested or disjoint, so the
    normalized discs are pairwise disjoint)."""

    __slots__ = ("p", "discs")

    def __init__(self, discs):
        pts = list(discs)
        if not pts:
            raise ValueError("empty disc union")
        for d in pts:
            if not (isinstance(d, BerkPoint) and d.is_disc()):
                raise ValueError("disc union entries must be disc points")
        self.p = pts[0].p
        self.discs = _normalize_disjoint(pts)

    def boundary_points(self):
        return list(self.discs)

    def contains_point(self, x: BerkPoint) -> bool:
        return any(contains(d, x) for d in self.discs)

    def __len__(self):
        return len(self.discs)

    def __repr__(self):
        return f"DiscUnion({self.discs})"


# ---------------------------------------------------------------------------
# Energy and potentials


def _check_probability(nu: DiscreteMeasure, name: str):
    if not nu.is_probability():
        raise ValueError(f"{name} must be a probability measure")


def energy(nu: DiscreteMeasure, zeta: BerkPoint):
    """The energy sum_{i,j} m_i m_j (-log delta(x_i, x_j)_zeta); infinite as
    soon as an atom is classical."""
    _check_probability(nu, "nu")
    for pt, _m in nu.atoms:
        if pt == zeta:
            raise ZetaInSupportError("zeta lies in the support of nu")
    if any(pt.is_type_i() for pt, _m in nu.atoms):
        return PLUS_INFINITY
    acc = _ZERO
    for i, (xi, mi) in enumerate(nu.atoms):
        acc = acc + mi * mi * ValExp.of(hsia_log(xi, xi, zeta))
        for xj, mj in nu.atoms[i + 1 :]:
            acc = acc + 2 * mi * mj * ValExp.of(hsia_log(xi, xj, zeta))
    return acc


def potential(nu: DiscreteMeasure, x: BerkPoint, zeta: BerkPoint):
    """u_nu(x, zeta) = sum_i m_i (-log delta(x, x_i)_zeta)."""
    acc = _ZERO
    for pt, m in nu.atoms:
        v = hsia_log(x, pt, zeta)
        if is_infinite(v):
            return v * m.sign()
        acc = acc + m * ValExp.of(v)
    return acc


# ---------------------------------------------------------------------------
# Equilibrium measures


class EquilibriumResult:
    """Equilibrium measure, Robin constant V, and -V (the log-capacity)."""

    __slots__ = ("measure", "robin", "capacity_log")

    def __init__(self, measure: DiscreteMeasure, robin: ValExp):
        self.measure = measure
        self.robin = robin
        self.capacity_log = -robin

    def __repr__(self):
        return f"EquilibriumResult(V={self.robin}, {self.measure})"


def equilibrium(E: DiscUnion, zeta: BerkPoint, method: str = "auto") -> EquilibriumResult:
    """Energy-minimizing probability measure on a disc union, seen from zeta."""
    if E.contains_point(zeta):
        raise ZetaInSupportError("zeta must lie outside the disc union")
    return equilibrium_of_points(E.boundary_points(), zeta, method=method)


def equilibrium_of_points(points, zeta: BerkPoint, method: str = "auto") -> EquilibriumResult:
    """Equilibrium over probability measures supported on the given
    non-classical points (the finite reduction of the disc-union problem).

    The "tree" method requires pairwise disjoint discs; the dense method
    accepts any distinct points (e.g. nested domain boundaries).
    """
    pts = list(points)
    if not pts:
        raise ValueError("no support points")
    for x in pts:
        if not x.is_disc():
            raise TypeIAtomError("support points must be non-classical")
        if x == zeta:
            raise ZetaInSupportError("zeta coincides with a support point")
    if method == "dense" or (method == "auto" and len(pts) <= DENSE_LIMIT):
        return _equilibrium_dense(pts, zeta)
    return _equilibrium_tree(pts, zeta)


def _equilibrium_dense(pts, zeta) -> EquilibriumResult:
    """Stationarity system K w = V 1, sum w = 1, with active-set descent:
    drop the most negative mass and re-solve until all masses are >= 0."""
    kernel = {}

    def K(i, j):
        if (i, j) not in kernel:
            v = ValExp.of(hsia_log(pts[i], pts[j], zeta))
            kernel[(i, j)] = kernel[(j, i)] = v
        return kernel[(i, j)]

    active = list(range(len(pts)))
    while True:
        n = len(active)
        rows = []
        for i in active:
            rows.append([K(i, j) for j in active] + [ValExp(-1)])
        rows.append([_ONE] * n + [_ZERO])
        rhs = [_ZERO] * n + [_ONE]
        sol = solve_linear(rows, rhs)
        weights, V = sol[:n], sol[n]
        worst = None
        for k, w in enumerate(weights):
            if w.sign() < 0 and (worst is None or w < weights[worst]):
                worst = k
        if worst is None:
            atoms = [(pts[i], w) for i, w in zip(active, weights)]
            mu = DiscreteMeasure(atoms)
            # dropped atoms must satisfy the Frostman inequality u <= V
            for i in range(len(pts)):
                if i not in active:
                    u = _ZERO
                    for j, w in zip(active, weights):
                        u = u + w * K(i, j)
                    assert u <= V, "active-set solution violates Frostman"
            return EquilibriumResult(mu, V)
        del active[worst]
        if not active:
            raise AssertionError("active set emptied; input degenerate")


def _equilibrium_tree(pts, zeta) -> EquilibriumResult:
    """Unit-current solver on the convex hull tree of the support points.

    With the tree rooted at the point w0 where zeta attaches, the energy of
    a probability vector w equals diam_zeta(w0) plus the sum over edges of
    length * (mass below)^2, the dissipation of the unit flow from w0 into
    the leaves; the minimizer is the harmonic current.
    """
    p, all_int, centers0, rexps0 = _raw_arrays(pts)
    order = _sort_order(p, all_int, centers0, rexps0)
    leaves = [pts[i] for i in order]
    centers = [centers0[i] for i in order]
    rexps = [rexps0[i] for i in order]
    n = len(leaves)

    # adjacent meets; also validates pairwise disjointness
    meets = []
    for k in range(1, n):
        m = _meet_raw(p, all_int, centers[k - 1], rexps[k - 1], centers[k], rexps[k])
        if not (m < rexps[k - 1] and m < rexps[k]):
            raise ValueError("support points must be pairwise disjoint discs")
        meets.append(m)

    depth, center, parents, root = _hull_tree(centers, rexps, meets)

    root_pt = BerkPoint.disc(p, center[root], depth[root])
    if zeta.is_infinity():
        w0 = root_pt
    else:
        best = None
        best_key = None
        for i in range(n):
            k = ValExp.of(_dkey(zeta, leaves[i]))
            if best_key is None or k < best_key:
                best, best_key = i, k
        w0 = meet_wrt(root_pt, leaves[best], zeta)
    t0 = ValExp.of(diam_log(w0, zeta))

    # zeta attaches at (or below) a support point: all mass sits there
    for i in range(n):
        if w0 == leaves[i]:
            return EquilibriumResult(DiscreteMeasure([(leaves[i], _ONE)]), t0)

    adj, root_id, data_int = _orient_from(depth, center, parents, w0, p, all_int)
    masses, resistance = _unit_current(adj, root_id, n, data_int)
    atoms = [(leaves[i], ValExp.of(masses[i])) for i in range(n)]
    V = t0 + ValExp.of(resistance)
    return EquilibriumResult(DiscreteMeasure(atoms), V)


def _hull_tree(centers, rexps, meets):
    """Containment tree of pairwise disjoint discs in p-adic order.

    Nodes 0..n-1 are the leaves; appended nodes are branch points.  Built by
    the stack algorithm over the adjacent-meet sequence: popping keeps the
    rightmost path, and each adjacent meet either lands on an existing
    branch point or creates one.
    """
    n = len(centers)
    depth = list(rexps)
    center = list(centers)
    parents = [-1] * n
    if n == 1:
        return depth, center, parents, 0
    stack = [0]
    for k in range(1, n):
        m = meets[k - 1]
        x = None
        while stack and depth[stack[-1]] > m:
            y = stack.pop()
            if x is not None:
                parents[x] = y
            x = y
        assert x is not None, "nested leaves reached the hull builder"
        if stack and depth[stack[-1]] == m:
            parents[x] = stack[-1]
        else:
            depth.append(m)
            center.append(center[x])
            parents.append(-1)
            v = len(depth) - 1
            parents[x] = v
            stack.append(v)
        stack.append(k)
    x = None
    while stack:
        y = stack.pop()
        if x is not None:
            parents[x] = y
        x = y
    return depth, center, parents, x


def _orient_from(depth, center, parents, w0: BerkPoint, p, all_int):
    """Children lists of the hull tree re-rooted at the attach point w0,
    inserting a node if w0 falls strictly inside an edge (or above the
    root).  Edge values are lengths."""
    if all_int and w0.rexp.is_integer() and w0.center.denominator == 1:
        w_depth = int(w0.rexp.rat)
        w_center = w0.center.numerator
    else:
        if all_int:
            # mixed data: lift everything to exact generic values
            depth = [ValExp.of(d) for d in depth]
            center = [Fraction(c) for c in center]
            all_int = False
        w_depth = w0.rexp
        w_center = w0.center
    n = len(depth)

    def same_class(i):
        d = center[i] - w_center
        if d == 0:
            return True
        o = ord_int(d, p) if all_int else ord_p(d, p)
        return not o < w_depth

    root_id = None
    for i in range(n):
        if depth[i] == w_depth and same_class(i):
            root_id = i
            break
    lengths = {}
    for i in range(n):
        if parents[i] >= 0:
            lengths[i] = depth[i] - depth[parents[i]]
    if root_id is None:
        host = None
        for i in range(n):
            j = parents[i]
            if depth[i] > w_depth and (j < 0 or depth[j] < w_depth) and same_class(i):
                host = i
                break
        depth = depth + [w_depth]
        center = center + [w_center]
        parents = list(parents)
        root_id = n
        if host is not None:
            old = parents[host]
            parents[host] = n
            lengths[host] = depth[host] - w_depth
            parents.append(old)
            if old >= 0:
                lengths[n] = w_depth - depth[old]
        else:
            raise AssertionError("attach point not on the hull")
        n += 1
    und = [[] for _ in range(n)]
    for i in range(n):
        j = parents[i]
        if j >= 0:
            und[i].append((j, lengths[i]))
            und[j].append((i, lengths[i]))
    seen = [False] * n
    seen[root_id] = True
    stack = [root_id]
    adj = [[] for _ in range(n)]
    while stack:
        u = stack.pop()
        for v, ln in und[u]:
            if not seen[v]:
                seen[v] = True
                adj[u].append((v, ln))
                stack.append(v)
    return adj, root_id, all_int


def _unit_current(adj, root, n_leaves, all_int):
    """Leaf masses of the unit current from the root, and the effective
    resistance root <-> leaf set.

    Integer edge data runs on raw reduced (num, den) pairs to keep the big
    ring-of-integers instances fast; anything else goes through Q(sqrt 2).
    """
    n = len(adj)
    order = []
    stack = [root]
    while stack:
        u = stack.pop()
        order.append(u)
        for v, _ln in adj[u]:
            stack.append(v)

    rational = all_int or all(
        (not isinstance(ln, ValExp)) or ln.s2 == 0 for kids in adj for _c, ln in kids
    )
    if rational:
        from math import gcd

        def to_pair(x):
            if isinstance(x, int):
                return (x, 1)
            f = x.rat if isinstance(x, ValExp) else Fraction(x)
            return (f.numerator, f.denominator)

        # resistances and the per-edge totals t = length + R_child as pairs
        res = [(0, 1)] * n
        totals = {}
        for u in reversed(order):
            if not adj[u]:
                continue
            sn, sd = 0, 1  # conductance sum
            for v, ln in adj[u]:
                la, lb = to_pair(ln)
                rn, rd = res[v]
                tn, td = la * rd + lb * rn, lb * rd
                g = gcd(tn, td)
                if g > 1:
                    tn //= g
                    td //= g
                totals[v] = (tn, td)
                sn, sd = sn * tn + sd * td, sd * tn
                g = gcd(sn, sd)
                if g > 1:
                    sn //= g
                    sd //= g
            res[u] = (sd, sn)
        masses = [Fraction(0)] * n_leaves
        share = {root: (1, 1)}
        for u in order:
            cur = share.get(u)
            if cur is None:
                continue
            if not adj[u]:
                if u < n_leaves:
                    masses[u] = Fraction(cur[0], cur[1])
                continue
            cn, cd = cur
            rn, rd = res[u]
            for v, _ln in adj[u]:
                tn, td = totals[v]
                num, den = cn * rn * td, cd * rd * tn
                g = gcd(num, den)
                if g > 1:
                    num //= g
                    den //= g
                share[v] = (num, den)
        return masses, Fraction(res[root][0], res[root][1])

    one, zero = _ONE, _ZERO
    conv = ValExp.of
    resistance = [zero] * n
    for u in reversed(order):
        if adj[u]:
            s = zero
            for v, ln in adj[u]:
                s = s + one / (conv(ln) + resistance[v])
            resistance[u] = one / s
    masses = [zero] * n_leaves
    share = {root: one}
    for u in order:
        cur = share.get(u, zero)
        if not adj[u]:
            if u < n_leaves:
                masses[u] = cur
            continue
        if cur == 0:
            continue
        for v, ln in adj[u]:
            share[v] = cur * resistance[u] / (conv(ln) + resistance[v])
    return masses, resistance[root]


# ---------------------------------------------------------------------------
# Transfinite diameter and Chebyshev constants

RESTRICTED = "RESTRICTED"
UNRESTRICTED = "UNRESTRICTED"


def transfinite_diameter(E: DiscUnion, n: int, candidates, zeta: BerkPoint | None = None):
    """-log d_n over the candidate set: the minimal average pairwise kernel
    value over n-point multisets (repetition allowed)."""
    if not 2 <= n <= 8:
        raise ValueError("n must be between 2 and 8")
    if zeta is None:
        zeta = BerkPoint.infinity(E.p)
    cands = list(candidates)
    for x in cands:
        if not E.contains_point(x):
            raise CandidatesOutsideError(f"{x} is not in the disc union")
    c = len(cands)
    K = [[None] * c for _ in range(c)]
    for i in range(c):
        for j in range(i, c):
            K[i][j] = K[j][i] = hsia_log(cands[i], cands[j], zeta)

    best = [None]

    def rec(start, chosen, acc):
        if len(chosen) == n:
            if best[0] is None or acc < best[0]:
                best[0] = acc
            return
        for k in range(start, c):
            delta = _ZERO
            ok = True
            for m in chosen:
                v = K[m][k]
                if is_infinite(v):
                    ok = False
                    break
                delta = delta + 2 * ValExp.of(v)
            if ok:
                chosen.append(k)
                rec(k, chosen, acc + delta)
                chosen.pop()

    rec(0, [], _ZERO)
    if best[0] is None:
        return PLUS_INFINITY
    return best[0] / (n * (n - 1))


def chebyshev(E: DiscUnion, n: int, mode: str, candidates, zeta: BerkPoint | None = None):
    """-log CH_n over the candidate set: maximize over n-point multisets
    {a_i} the minimum over boundary points of the averaged pseudo-polynomial
    exponent (the sup of the product over E is attained on boundary points)."""
    if not 1 <= n <= 8:
        raise ValueError("n must be between 1 and 8")
    if zeta is None:
        zeta = BerkPoint.infinity(E.p)
    cands = list(candidates)
    if mode == RESTRICTED:
        cands = [x for x in cands if E.contains_point(x)]
        if not cands:
            raise CandidatesOutsideError("no candidates inside E")
    elif mode != UNRESTRICTED:
        raise ValueError("mode must be RESTRICTED or UNRESTRICTED")
    boundary = E.boundary_points()
    c = len(cands)
    K = [[ValExp.of(hsia_log(b, a, zeta)) for a in cands] for b in boundary]

    best = [None]

    def rec(start, depth, sums):
        if depth == n:
            val = sums[0]
            for s in sums[1:]:
                if s < val:
                    val = s
            if best[0] is None or val > best[0]:
                best[0] = val
            return
        for k in range(start, c):
            nxt = [s + K[b][k] for b, s in enumerate(sums)]
            rec(k, depth + 1, nxt)

    rec(0, 0, [_ZERO] * len(boundary))
    return best[0] / n


# ---------------------------------------------------------------------------
# Frostman certificate and the mu-energy


def frostman_check(E: DiscUnion, result: EquilibriumResult, zeta: BerkPoint, samples):
    """Verify the optimality certificate of an equilibrium measure:
    u(x) = V exactly on support atoms, u <= V at boundary points and at the
    given samples.  Returns a report dict with a witness on failure."""
    V = result.robin
    mu = result.measure
    report = {"ok": True, "support_equalities": 0, "inequalities": 0, "witness": None}
    for pt, _m in mu.atoms:
        u = potential(mu, pt, zeta)
        if u != V:
            report["ok"] = False
            report["witness"] = ("support", pt, u)
            return report
        report["support_equalities"] += 1
    for x in list(E.boundary_points()) + list(samples):
        if x == zeta:
            continue
        u = potential(mu, x, zeta)
        if not u <= V:
            report["ok"] = False
            report["witness"] = ("inequality", x, u)
            return report
        report["inequalities"] += 1
    return report


def mu_energy(mu: DiscreteMeasure, nu: DiscreteMeasure):
    """The energy of nu against the normalized potential kernel of mu:
    I_mu(nu) = sum nu_x nu_y g_mu(x,y) with g_mu = int -log delta(x,y)_zeta
    dmu(zeta) + C and C fixed so that I_mu(mu) = 0.  Nonnegative, vanishing
    only at nu = mu."""
    _check_probability(mu, "mu")
    _check_probability(nu, "nu")
    for pt, _m in list(mu.atoms) + list(nu.atoms):
        if pt.is_type_i():
            raise TypeIAtomError("atoms must be non-classical")

    def raw(x, y):
        acc = _ZERO
        for z, mz in mu.atoms:
            acc = acc + mz * ValExp.of(hsia_log(x, y, z))
        return acc

    # C = iint j_{gauss}(x,y) dmu(x) dmu(y)
    C = _ZERO
    for i, (xi, mi) in enumerate(mu.atoms):
        C = C + mi * mi * ValExp.of(spherical_log(xi, xi))
        for xj, mj in mu.atoms[i + 1 :]:
            C = C + 2 * mi * mj * ValExp.of(spherical_log(xi, xj))
    acc = C
    for i, (xi, mi) in enumerate(nu.atoms):
        acc = acc + mi * mi * raw(xi, xi)
        for xj, mj in nu.atoms[i + 1 :]:
            acc = acc + 2 * mi * mj * raw(xi, xj)
    return acc
