"""Finite metrized trees inside the Berkovich line.

A MetrizedGraph is the convex hull of finitely many non-classical points:
vertices are disc points closed under pairwise meets, edges join each vertex
to its closest strict ancestor in the containment order, and edge lengths
are path distances.  Graphs are immutable; refinement returns a new graph.

Graph points are addressed either as a vertex index ("V", i) or as an
interior position ("E", e, offset) with the offset measured from the edge's
first endpoint.
"""

from __future__ import annotations

import functools

from .exact import BerklineError, ValExp, valexp_cmp
from .kernels import meet_exponent, meet_point, meet_wrt, path_distance
from .points import BerkPoint

_ZERO = ValExp(0)


class PointNotOnGraphError(BerklineError):
    code = "POINT_NOT_ON_GRAPH"


class MetrizedGraph:
    """Immutable finite tree of non-classical points with exact edge lengths."""

    __slots__ = ("p", "vertices", "edges", "adj", "root")

    def __init__(self, p, vertices, edges):
        self.p = p
        self.vertices = list(vertices)
        self.edges = list(edges)
        self.adj = [[] for _ in self.vertices]
        for e, (i, j, _ln) in enumerate(self.edges):
            self.adj[i].append((j, e))
            self.adj[j].append((i, e))
        if len(self.edges) != len(self.vertices) - 1:
            raise ValueError("graph must be a tree")
        # root: the unique vertex of minimal radius exponent
        self.root = min(
            range(len(self.vertices)),
            key=functools.cmp_to_key(
                lambda i, j: valexp_cmp(self.vertices[i].rexp, self.vertices[j].rexp)
            ),
        )

    def __len__(self):
        return len(self.vertices)

    def vertex_index(self, x: BerkPoint):
        for i, v in enumerate(self.vertices):
            if v == x:
                return i
        return None

    def edge_length(self, e: int) -> ValExp:
        return self.edges[e][2]

    def __repr__(self):
        return f"MetrizedGraph({len(self.vertices)} vertices, {len(self.edges)} edges)"


def _sorted_unique(points):
    seen = {}
    for x in points:
        seen.setdefault(x.key(), x)
    out = list(seen.values())

    def cmp(a, b):
        c = valexp_cmp(a.rexp, b.rexp)
        if c:
            return c
        ka, kb = a.key(), b.key()
        return -1 if ka < kb else (1 if ka > kb else 0)

    out.sort(key=functools.cmp_to_key(cmp))
    return out


def span(points, anchor: BerkPoint | None = None) -> MetrizedGraph:
    """Convex hull tree of the given non-classical points (plus an anchor,
    the Gauss point by default): vertices closed under pairwise meets,
    each vertex joined to its nearest strict ancestor."""
    pts = list(points)
    if not pts and anchor is None:
        raise ValueError("span of an empty point set")
    p = (pts[0] if pts else anchor).p
    if anchor is None:
        anchor = BerkPoint.gauss(p)
    pts.append(anchor)
    for x in pts:
        if not x.is_disc():
            raise PointNotOnGraphError("span points must be non-classical")
    verts = _sorted_unique(pts)
    # close under pairwise meets (meets of meets add nothing new)
    extra = []
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            extra.append(meet_point(verts[i], verts[j]))
    verts = _sorted_unique(verts + extra)

    edges = []
    for i, v in enumerate(verts):
        parent = None
        for j, u in enumerate(verts):
            if u.rexp < v.rexp and ord_ge(u, v):
                if parent is None or u.rexp > verts[parent].rexp:
                    parent = j
        if parent is not None:
            edges.append((parent, i, v.rexp - verts[parent].rexp))
    return MetrizedGraph(p, verts, edges)


def ord_ge(u: BerkPoint, v: BerkPoint) -> bool:
    """True iff the disc of u contains the disc of v (u.rexp <= v.rexp known)."""
    return meet_exponent(u, v) >= u.rexp


def materialize(graph: MetrizedGraph, gp) -> BerkPoint:
    """The BerkPoint at a graph position."""
    if gp[0] == "V":
        return graph.vertices[gp[1]]
    _, e, offset = gp
    i, j, ln = graph.edges[e]
    u, v = graph.vertices[i], graph.vertices[j]
    offset = ValExp.of(offset)
    if offset < 0 or offset > ln:
        raise PointNotOnGraphError("offset outside edge")
    child = v if v.rexp > u.rexp else u
    anchor_exp = u.rexp
    sign = 1 if v.rexp > u.rexp else -1
    return BerkPoint.disc(graph.p, child.center, anchor_exp + sign * offset)


def _dkey(x: BerkPoint, q: BerkPoint) -> ValExp:
    """Monotone surrogate for rho(x, q) over candidates q, finite even when
    x is classical: distances to graph points differ by finite amounts."""
    if x.is_infinity():
        return q.rexp
    if x.is_disc():
        return ValExp.of(path_distance(x, q))
    return q.rexp - 2 * ValExp.of(meet_exponent(x, q))


def retract(graph: MetrizedGraph, x: BerkPoint):
    """Nearest point of the graph on the path from x; identity on the graph.

    Returns ("V", index) or ("E", edge_index, offset-from-first-endpoint).
    """
    idx = graph.vertex_index(x)
    if idx is not None:
        return ("V", idx)
    best = None
    best_key = None
    for e, (i, j, _ln) in enumerate(graph.edges):
        u, v = graph.vertices[i], graph.vertices[j]
        q = meet_wrt(u, v, x)
        key = _dkey(x, q)
        if best_key is None or key < best_key:
            best, best_key = (e, q), key
    if best is None:
        # single-vertex graph
        return ("V", 0)
    e, q = best
    i, j, _ln = graph.edges[e]
    for end in (i, j):
        if graph.vertices[end] == q:
            return ("V", end)
    off = q.rexp - graph.vertices[i].rexp
    if off < 0:
        off = -off
    return ("E", e, off)


def on_graph(graph: MetrizedGraph, x: BerkPoint):
    """Graph position of x if x lies on the graph, else None."""
    gp = retract(graph, x)
    return gp if materialize(graph, gp) == x else None


class DiscreteMeasure:
    """Finite signed atomic measure; atoms merged by point identity.

    Masses live in Q(sqrt 2) (they are ratios of CPA increments by edge
    lengths); in all probability-measure uses they are plain rationals.
    """

    __slots__ = ("p", "atoms")

    def __init__(self, atoms):
        merged = {}
        order = []
        for point, mass in atoms:
            mass = ValExp.of(mass)
            k = point.key()
            if k in merged:
                merged[k] = (merged[k][0], merged[k][1] + mass)
            else:
                merged[k] = (point, mass)
                order.append(k)
        self.atoms = [merged[k] for k in order if merged[k][1] != 0]
        self.p = self.atoms[0][0].p if self.atoms else None

    def total_mass(self) -> ValExp:
        t = _ZERO
        for _pt, m in self.atoms:
            t = t + m
        return t

    def mass_at(self, point: BerkPoint) -> ValExp:
        k = point.key()
        for pt, m in self.atoms:
            if pt.key() == k:
                return m
        return _ZERO

    def is_probability(self) -> bool:
        return all(m.sign() >= 0 for _pt, m in self.atoms) and self.total_mass() == 1

    def support(self):
        return [pt for pt, _m in self.atoms]

    def __eq__(self, other):
        if not isinstance(other, DiscreteMeasure):
            return NotImplemented
        a = {pt.key(): m for pt, m in self.atoms}
        b = {pt.key(): m for pt, m in other.atoms}
        return a == b

    def __repr__(self):
        return f"DiscreteMeasure({self.atoms})"


def scale_measure(nu: DiscreteMeasure, factor) -> DiscreteMeasure:
    return DiscreteMeasure([(pt, m * ValExp.of(factor)) for pt, m in nu.atoms])


def add_measures(a: DiscreteMeasure, b: DiscreteMeasure) -> DiscreteMeasure:
    return DiscreteMeasure(list(a.atoms) + list(b.atoms))


class CPAFunction:
    """Continuous piecewise-affine function on a graph: one value per vertex,
    affine along every edge."""

    __slots__ = ("graph", "values")

    def __init__(self, graph: MetrizedGraph, values):
        if len(values) != len(graph.vertices):
            raise ValueError("one value per vertex required")
        self.graph = graph
        self.values = [ValExp.of(v) for v in values]

    def evaluate(self, gp) -> ValExp:
        if gp[0] == "V":
            return self.values[gp[1]]
        _, e, offset = gp
        i, j, ln = self.graph.edges[e]
        offset = ValExp.of(offset)
        return self.values[i] + (self.values[j] - self.values[i]) * offset / ln

    def evaluate_point(self, x: BerkPoint) -> ValExp:
        gp = on_graph(self.graph, x)
        if gp is None:
            raise PointNotOnGraphError(f"{x} is not on the graph")
        return self.evaluate(gp)


def laplacian(f: CPAFunction) -> DiscreteMeasure:
    """Graph Laplacian of a CPA function: at each vertex, minus the sum of
    outgoing slopes, as a discrete signed measure (total mass zero)."""
    g = f.graph
    atoms = []
    for i, v in enumerate(g.vertices):
        acc = _ZERO
        for other, e in g.adj[i]:
            ln = g.edges[e][2]
            acc = acc + (f.values[other] - f.values[i]) / ln
        atoms.append((v, -acc))
    return DiscreteMeasure(atoms)


def potential_kernel_graph(graph: MetrizedGraph, z: BerkPoint, x: BerkPoint, y: BerkPoint) -> ValExp:
    """j_z(x, y) for points on the graph: rho(z, w) with w the point where
    the paths from x and y to z first meet (Gromov product in the tree)."""
    for pt in (z, x, y):
        if on_graph(graph, pt) is None:
            raise PointNotOnGraphError(f"{pt} is not on the graph")
    dzx = ValExp.of(path_distance(z, x))
    dzy = ValExp.of(path_distance(z, y))
    dxy = ValExp.of(path_distance(x, y))
    return (dzx + dzy - dxy) / 2


def subdivide(graph: MetrizedGraph, new_points) -> MetrizedGraph:
    """Refined copy with the given on-edge points added as vertices."""
    pts = list(graph.vertices) + [x for x in new_points]
    anchor = graph.vertices[graph.root]
    return span(pts, anchor)


def refine_cpa(f: CPAFunction, refined: MetrizedGraph) -> CPAFunction:
    """Transport a CPA function to a refinement of its graph."""
    values = []
    for v in refined.vertices:
        values.append(f.evaluate_point(v))
    return CPAFunction(refined, values)


def to_dot(graph: MetrizedGraph, measure: DiscreteMeasure | None = None) -> str:
    """Deterministic DOT rendering; vertices labeled by (center, rexp)."""
    lines = ["graph berkline {"]
    for i, v in enumerate(graph.vertices):
        label = f"({v.center}, {v.rexp})"
        if measure is not None:
            m = measure.mass_at(v)
            if m != 0:
                label += f" m={m}"
        lines.append(f'  v{i} [label="{label}"];')
    for i, j, ln in graph.edges:
        lines.append(f'  v{i} -- v{j} [label="{ln}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
