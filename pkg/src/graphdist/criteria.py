"""Combinatorial vertex criteria for dipoles, roses and glued scenarios.

For two-node dipoles and one-node roses every edge matrix is recorded by
the bipartite graph of its nonzero entries (rows on the left, columns on
the right).  A point is a vertex exactly when every such graph is a forest
and the component incidence matrix has rank 2m-1 (with the extra rows
alpha_i = beta_i for roses).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Iterable, Mapping, Sequence

from .exact import RationalMatrix, as_vector, lp_feasible, nullspace_basis, rank, rref
from .polytope import (BudgetExceeded, HullIntersection, StandardFormPolytope,
                       affinely_independent, enumerate_vertices,
                       hull_intersection_unique, is_vertex, vsupp)
from .scenarios import (GraphDistribution, Scenario, build_polytope, complete_bipartite,
                        cycle_matrix, dipole, rose, validate_cycle)

FOREST_BUDGET = 200_000


# ---------------------------------------------------------------------------
# product-simplex vertices and A-sets

@dataclass(frozen=True, order=True)
class ProductSimplexVertex:
    indices: tuple
    m: int

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        if any(not 0 <= i < self.m for i in self.indices):
            raise ValueError("block index out of range")

    def vector(self) -> tuple:
        v = [0] * (len(self.indices) * self.m)
        for j, i in enumerate(self.indices):
            v[j * self.m + i] = 1
        return tuple(Fraction(x) for x in v)

    def __str__(self) -> str:
        return "(" + ",".join("e%d" % i for i in self.indices) + ")"


def scenario_shape(S: Scenario) -> str | None:
    """'rose' for one node with only loops, 'dipole' for two nodes joined by parallel edges."""
    if not S.edges:
        return None
    if len(S.nodes) == 1 and all(e.is_loop for e in S.edges):
        return "rose"
    if len(S.nodes) == 2 and all(not e.is_loop for e in S.edges):
        return "dipole"
    return None


def oriented_matrices(p: GraphDistribution) -> list[tuple]:
    """Edge matrices with reversed dipole edges transposed to match the first edge."""
    S = p.scenario
    ref = S.edges[0]
    out = []
    for e, M in zip(S.edges, p.matrices):
        if not e.is_loop and e.source != ref.source:
            M = tuple(zip(*M))
        out.append(M)
    return out


def a_sets(S: Scenario, p: GraphDistribution) -> list[tuple]:
    if scenario_shape(S) is None:
        raise ValueError("A-sets are defined for dipole and rose scenarios only")
    m = S.outcomes
    return [tuple(ProductSimplexVertex((a, b), m) for a in range(m) for b in range(m) if M[a][b])
            for M in oriented_matrices(p)]


# ---------------------------------------------------------------------------
# support graphs

@dataclass(frozen=True)
class SupportBipartiteGraph:
    m: int
    edges: frozenset  # of (row outcome i, column outcome j)

    @property
    def left(self) -> tuple:
        return tuple(sorted({i for i, _ in self.edges}))

    @property
    def right(self) -> tuple:
        return tuple(sorted({j for _, j in self.edges}))

    def adjacency(self) -> dict:
        adj = {}
        for i, j in sorted(self.edges):
            adj.setdefault("u%d" % i, []).append("w%d" % j)
        return adj


def support_graph(A: Iterable[ProductSimplexVertex]) -> SupportBipartiteGraph:
    A = list(A)
    if not A:
        raise ValueError("empty A-set")
    if any(len(v.indices) != 2 for v in A):
        raise ValueError("support graphs need two blocks")
    return SupportBipartiteGraph(A[0].m, frozenset(v.indices for v in A))


def graph_from_matrix(M: Sequence[Sequence]) -> SupportBipartiteGraph:
    m = len(M)
    return SupportBipartiteGraph(m, frozenset((a, b) for a in range(m) for b in range(m) if M[a][b]))


class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def is_acyclic(H: SupportBipartiteGraph) -> bool:
    dsu = _DSU(2 * H.m)
    return all(dsu.union(i, H.m + j) for i, j in H.edges)


def components(H: SupportBipartiteGraph) -> list[tuple]:
    """Connected components over all 2m vertices, as (left, right) index tuples.

    Vertex u_i has key i and w_j has key m+j; components are ordered by their
    smallest key.  Outcomes without an edge form singleton components.
    """
    m = H.m
    dsu = _DSU(2 * m)
    for i, j in H.edges:
        dsu.union(i, m + j)
    groups = defaultdict(list)
    for k in range(2 * m):
        groups[dsu.find(k)].append(k)
    out = []
    for root in sorted(groups, key=lambda r: min(groups[r])):
        ks = groups[root]
        out.append((tuple(k for k in ks if k < m), tuple(k - m for k in ks if k >= m)))
    return out


@dataclass(frozen=True)
class QMatrix:
    matrix: RationalMatrix
    origins: tuple  # ("component", graph index, left, right) or ("identity", a)

    @property
    def rank(self) -> int:
        return rank(self.matrix)


def q_matrix(Hs: Sequence[SupportBipartiteGraph], m: int, variant: str = "plain") -> QMatrix:
    if variant not in ("plain", "tilde"):
        raise ValueError("variant must be 'plain' or 'tilde'")
    rows = []
    origins = []
    for g, H in enumerate(Hs):
        if H.m != m:
            raise ValueError("graph %d has outcome range %d, expected %d" % (g, H.m, m))
        for left, right in components(H):
            r = [0] * (2 * m)
            for i in left:
                r[i] = 1
            for j in right:
                r[m + j] = -1
            rows.append(r)
            origins.append(("component", g, left, right))
    if variant == "tilde":
        for a in range(m):
            r = [0] * (2 * m)
            r[a], r[m + a] = 1, -1
            rows.append(r)
            origins.append(("identity", a))
    return QMatrix(RationalMatrix(rows, 2 * m), tuple(origins))


# ---------------------------------------------------------------------------
# dipole / rose criterion

@dataclass(frozen=True)
class VertexCertificate:
    shape: str
    m: int
    edge_ids: tuple
    graphs: tuple
    acyclic: tuple
    q: QMatrix
    rank: int
    is_vertex: bool

    @property
    def target_rank(self) -> int:
        return 2 * self.m - 1

    def to_dict(self) -> dict:
        return {
            "shape": self.shape,
            "outcomes": self.m,
            "support_graphs": {eid: {"adjacency": H.adjacency(), "acyclic": ok}
                               for eid, H, ok in zip(self.edge_ids, self.graphs, self.acyclic)},
            "components": [
                {"graph": self.edge_ids[o[1]], "left": ["u%d" % i for i in o[2]],
                 "right": ["w%d" % j for j in o[3]]} if o[0] == "component"
                else {"identity": o[1]} for o in self.q.origins],
            "q_matrix": [[str(v) for v in r] for r in self.q.matrix.rows],
            "rank": self.rank,
            "target_rank": self.target_rank,
            "verdict": "vertex" if self.is_vertex else "not a vertex",
        }

    def to_text(self) -> str:
        lines = ["shape: %s, outcomes: %d" % (self.shape, self.m)]
        for eid, H, ok in zip(self.edge_ids, self.graphs, self.acyclic):
            adj = "; ".join("%s: %s" % (u, " ".join(ws)) for u, ws in H.adjacency().items())
            lines.append("H[%s] %s  (%s)" % (eid, adj, "acyclic" if ok else "has a cycle"))
        lines.append("components:")
        for o, row in zip(self.q.origins, self.q.matrix.rows):
            if o[0] == "component":
                label = "%s {%s}" % (self.edge_ids[o[1]],
                                     ", ".join(["u%d" % i for i in o[2]] + ["w%d" % j for j in o[3]]))
            else:
                label = "identity %d" % o[1]
            lines.append("  %-28s %s" % (label, " ".join("%2s" % v for v in row)))
        lines.append("rank: %d (vertex needs %d)" % (self.rank, self.target_rank))
        lines.append("verdict: %s" % ("vertex" if self.is_vertex else "not a vertex"))
        return "\n".join(lines)


def _criterion(S: Scenario, p: GraphDistribution, shape: str) -> VertexCertificate:
    if scenario_shape(S) != shape:
        raise ValueError("scenario is not a %s" % shape)
    if p.scenario != S:
        raise ValueError("distribution belongs to a different scenario")
    m = S.outcomes
    Hs = tuple(graph_from_matrix(M) for M in oriented_matrices(p))
    acyc = tuple(is_acyclic(H) for H in Hs)
    Q = q_matrix(Hs, m, "tilde" if shape == "rose" else "plain")
    r = Q.rank
    return VertexCertificate(shape, m, tuple(e.id for e in S.edges), Hs, acyc, Q, r,
                             all(acyc) and r == 2 * m - 1)


def dipole_is_vertex(S: Scenario, p: GraphDistribution) -> VertexCertificate:
    return _criterion(S, p, "dipole")


def rose_is_vertex(S: Scenario, p: GraphDistribution) -> VertexCertificate:
    return _criterion(S, p, "rose")


# ---------------------------------------------------------------------------
# glued scenarios

@dataclass(frozen=True)
class GluedPart:
    """One piece of a gluing: its polytope, its point and the linear map to the shared nodes."""
    polytope: StandardFormPolytope
    point: tuple
    glue_map: RationalMatrix
    name: str = ""

    def image(self, x: Sequence) -> tuple:
        return self.glue_map.apply(x)


def node_marginal_map(S: Scenario, nodes: Sequence[str]) -> RationalMatrix:
    """Linear map from edge variables of S to the stacked node vectors of ``nodes``."""
    m = S.outcomes
    n = len(S.edges) * m * m
    rows = []
    for v in nodes:
        inc = S.incidences(v)
        if not inc:
            raise ValueError("node %s is not covered by the part" % v)
        i, side = inc[0]
        for c in range(m):
            r = [0] * n
            for k in range(m):
                a, b = (c, k) if side == "row" else (k, c)
                r[S.variable_index(i, a, b)] = 1
            rows.append(r)
    return RationalMatrix(rows, n)


def glued_decomposition(p: GraphDistribution, parts: Sequence[Sequence[str]],
                        shared: Sequence[str]) -> list[GluedPart]:
    """Split p along the shared node set into the given edge groups."""
    S = p.scenario
    seen = [eid for part in parts for eid in part]
    if sorted(seen) != sorted(e.id for e in S.edges):
        raise ValueError("parts must partition the edge set")
    out = []
    for k, part in enumerate(parts):
        sub = S.subscenario(part)
        others = {v for j, q in enumerate(parts) if j != k for eid in q
                  for v in (S.edge(eid).source, S.edge(eid).target)}
        stray = (set(sub.nodes) & others) - set(shared)
        if stray:
            raise ValueError("parts meet outside the shared nodes at %s" % sorted(stray))
        x = tuple(v for eid in (e.id for e in sub.edges) for r in p.matrix(eid) for v in r)
        out.append(GluedPart(build_polytope(sub), x, node_marginal_map(sub, shared),
                             ",".join(part)))
    return out


def star_decomposition(p: GraphDistribution, centers: Sequence[str]) -> list[GluedPart]:
    """Stars around each center node, glued along all remaining nodes."""
    S = p.scenario
    parts = []
    for c in centers:
        parts.append([e.id for e in S.edges if c in (e.source, e.target)])
    shared = [v for v in S.nodes if v not in set(centers)]
    return glued_decomposition(p, parts, shared)


def edge_decomposition(p: GraphDistribution) -> list[GluedPart]:
    """Every edge on its own, glued along all nodes (dipoles and roses)."""
    S = p.scenario
    return glued_decomposition(p, [[e.id] for e in S.edges], list(S.nodes))


@dataclass(frozen=True)
class PartDiagnostics:
    name: str
    vsupp_size: int
    a_set: tuple
    injective: bool
    independent: bool


@dataclass(frozen=True)
class FiberVerdict:
    kind: str  # "vertex" | "inconclusive"
    parts: tuple
    intersection: HullIntersection | None = None


def _images(parts: Sequence[GluedPart]) -> list[tuple[list, list]]:
    imgs = [P.image(P.point) for P in parts]
    if any(v != imgs[0] for v in imgs[1:]):
        raise ValueError("restrictions disagree on the shared nodes")
    out = []
    for P in parts:
        vs = vsupp(P.polytope, P.point)
        out.append((vs, [P.image(v) for v in vs]))
    return out


def fiber_sufficient_vertex(parts: Sequence[GluedPart]) -> FiberVerdict:
    data = _images(parts)
    diags = []
    sets = []
    ok = True
    for P, (vs, A) in zip(parts, data):
        uniq = sorted(set(A))
        inj = len(uniq) == len(vs)
        ind = inj and affinely_independent(uniq)
        ok = ok and inj and ind
        diags.append(PartDiagnostics(P.name, len(vs), tuple(uniq), inj, ind))
        sets.append(uniq)
    if not ok:
        return FiberVerdict("inconclusive", tuple(diags))
    hull = hull_intersection_unique(sets)
    return FiberVerdict("vertex" if hull.kind == "unique" else "inconclusive", tuple(diags), hull)


def positive_coefficients(points: Sequence[Sequence], target: Sequence) -> tuple | None:
    """Convex weights on ``points`` reproducing ``target`` with every weight > 0, if any exist."""
    pts = [as_vector(q) for q in points]
    t = as_vector(target)
    k = len(pts)
    dim = len(t)
    acc = [Fraction(0)] * k
    for j in range(k):
        # beta >= 0, s >= 0: sum beta_l q_l - s t = 0, sum beta - s = 0, beta_j = 1
        rows = [[q[c] for q in pts] + [-t[c]] for c in range(dim)]
        rows.append([1] * k + [-1])
        rows.append([1 if l == j else 0 for l in range(k)] + [0])
        res = lp_feasible(RationalMatrix(rows, k + 1), [0] * (dim + 1) + [1])
        if not res.feasible:
            return None
        s = res.witness[-1]
        for l in range(k):
            acc[l] += res.witness[l] / s
    return tuple(a / k for a in acc)


@dataclass(frozen=True)
class ConverseReport:
    violations: tuple
    point: tuple | None
    coefficients: tuple  # per part, aligned with a_sets
    a_sets: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def converse_checks(p: GraphDistribution, parts: Sequence[GluedPart]) -> ConverseReport:
    """Necessary conditions every vertex satisfies for a given gluing."""
    if not is_vertex(build_polytope(p.scenario), p.flatten()):
        raise ValueError("distribution is not a vertex")
    data = _images(parts)
    violations = []
    sets = []
    for P, (vs, A) in zip(parts, data):
        uniq = sorted(set(A))
        sets.append(uniq)
        if affinely_independent(vs):
            if len(uniq) != len(vs):
                violations.append("%s: glue map is not injective on the vertex support" % P.name)
            elif not affinely_independent(uniq):
                violations.append("%s: image of an independent vertex support is dependent" % P.name)
    hull = hull_intersection_unique(sets)
    coeffs = []
    if hull.kind != "unique":
        violations.append("hull intersection is %s" % hull.kind)
    else:
        for P, S_ in zip(parts, sets):
            c = positive_coefficients(S_, hull.point)
            if c is None:
                violations.append("%s: no strictly positive coefficients" % P.name)
            coeffs.append(c)
    return ConverseReport(tuple(violations), hull.point, tuple(coeffs), tuple(tuple(s) for s in sets))


# ---------------------------------------------------------------------------
# constructions

class PreconditionError(ValueError):
    pass


def _unique_coefficients(vec_sets: list[list[tuple]]) -> HullIntersection:
    for i, S_ in enumerate(vec_sets):
        if len(set(S_)) != len(S_):
            raise PreconditionError("set %d lists a point twice" % (i + 1))
        if not affinely_independent(S_):
            raise PreconditionError("set %d is affinely dependent" % (i + 1))
    hull = hull_intersection_unique(vec_sets)
    if hull.kind != "unique":
        raise PreconditionError("convex hulls meet in %s" % {"empty": "no point",
                                                             "multiple": "more than one point"}[hull.kind])
    for i, c in enumerate(hull.coefficients):
        if any(a == 0 for a in c):
            raise PreconditionError("set %d gets a zero coefficient" % (i + 1))
    return hull


def _checked(p: GraphDistribution) -> GraphDistribution:
    if not is_vertex(build_polytope(p.scenario), p.flatten()):
        raise PreconditionError("constructed distribution is not a vertex")
    return p


def construct_dipole_vertex(A_sets: Sequence[Sequence[Sequence[int]]], m: int) -> GraphDistribution:
    """Vertex of Dist(D_n, m) whose edge supports are the given (a, b) pairs."""
    verts = [[ProductSimplexVertex(ab, m) for ab in A] for A in A_sets]
    hull = _unique_coefficients([[v.vector() for v in A] for A in verts])
    mats = []
    for A, coeffs in zip(verts, hull.coefficients):
        M = [[Fraction(0)] * m for _ in range(m)]
        for v, c in zip(A, coeffs):
            a, b = v.indices
            M[a][b] += c
        mats.append(M)
    return _checked(GraphDistribution(dipole(len(A_sets), m), mats))


def construct_bipartite_vertex(n1: int, m: int, A_sets: Sequence[Sequence[Sequence[int]]],
                               injections: Sequence[Mapping]) -> GraphDistribution:
    """Vertex of Dist(K_{n1,n2}, m) from A-sets over the left side and outcome injections."""
    if len(injections) != len(A_sets):
        raise PreconditionError("need one injection per A-set")
    verts = []
    for i, (A, f) in enumerate(zip(A_sets, injections)):
        A = [tuple(int(a) for a in v) for v in A]
        if any(len(v) != n1 for v in A):
            raise PreconditionError("set %d has a point with the wrong number of blocks" % (i + 1))
        if len(A) > m:
            raise PreconditionError("set %d has more than m points" % (i + 1))
        f = {tuple(int(a) for a in k): int(val) for k, val in f.items()}
        if set(f) != set(A):
            raise PreconditionError("injection %d is not defined exactly on its set" % (i + 1))
        if len(set(f.values())) != len(f) or any(not 0 <= val < m for val in f.values()):
            raise PreconditionError("map %d is not injective into the outcomes" % (i + 1))
        verts.append((A, f))
    hull = _unique_coefficients([[ProductSimplexVertex(v, m).vector() for v in A] for A, _ in verts])
    S = complete_bipartite(n1, len(A_sets), m)
    mats = {}
    for j, ((A, f), coeffs) in enumerate(zip(verts, hull.coefficients)):
        for k in range(n1):
            M = [[Fraction(0)] * m for _ in range(m)]
            for v, c in zip(A, coeffs):
                M[v[k]][f[v]] += c
            mats["e%d_%d" % (k + 1, j + 1)] = M
    return _checked(GraphDistribution(S, mats))


def construct_rose_vertex(lifts: Sequence[Sequence[Sequence[int]]], m: int) -> GraphDistribution:
    """Vertex of Dist(R_n, m) from one set of cycle distributions per loop."""
    cyc_sets = [[validate_cycle(mu, m) for mu in L] for L in lifts]
    point_sets = []
    for L in cyc_sets:
        pts = []
        for mu in L:
            v = [Fraction(0)] * m
            for a in mu:
                v[a] = Fraction(1, len(mu))
            pts.append(tuple(v))
        point_sets.append(pts)
    hull = _unique_coefficients(point_sets)
    loop = build_polytope(rose(1, m))
    mats = []
    for i, (L, coeffs) in enumerate(zip(cyc_sets, hull.coefficients)):
        M = [[Fraction(0)] * m for _ in range(m)]
        for mu, c in zip(L, coeffs):
            Z = cycle_matrix(mu, m)
            for a in range(m):
                for b in range(m):
                    M[a][b] += c * Z[a][b]
        flat = tuple(v for r in M for v in r)
        allowed = {tuple(v for r in cycle_matrix(mu, m) for v in r) for mu in L}
        if not set(vsupp(loop, flat)) <= allowed:
            raise PreconditionError("lift %d does not generate a face" % (i + 1))
        mats.append(M)
    return _checked(GraphDistribution(rose(len(lifts), m), mats))


# ---------------------------------------------------------------------------
# enumeration through forests

def bipartite_forests(m: int, budget: int = FOREST_BUDGET) -> list[frozenset]:
    """All nonempty forests in K_{m,m}, as edge sets of (row, column) pairs."""
    all_edges = [(a, b) for a in range(m) for b in range(m)]
    out: list[frozenset] = []

    def rec(k, chosen, parent):
        if k == len(all_edges):
            if chosen:
                out.append(frozenset(chosen))
                if len(out) > budget:
                    raise BudgetExceeded("more than %d forests in K_{%d,%d}" % (budget, m, m))
            return
        rec(k + 1, chosen, parent)
        a, b = all_edges[k]

        def find(x, par):
            while par[x] != x:
                x = par[x]
            return x
        ra, rb = find(a, parent), find(m + b, parent)
        if ra != rb:
            par2 = list(parent)
            par2[max(ra, rb)] = min(ra, rb)
            rec(k + 1, chosen + [(a, b)], par2)

    rec(0, [], list(range(2 * m)))
    return out


def _span_key(rows: Iterable[Sequence]) -> tuple:
    """Canonical basis of an integer row space: reduced echelon rows scaled to primitive
    integers with positive pivots."""
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    basis: list[list[int]] = []
    pivots: list[int] = []
    for r in rows:
        for piv, b in zip(pivots, basis):
            f = r[piv]
            if f:
                p = b[piv]
                r = [x * p - f * y for x, y in zip(r, b)]
        c = next((j for j, x in enumerate(r) if x), None)
        if c is None:
            continue
        g = 0
        for x in r:
            g = gcd(g, x)
        if r[c] < 0:
            g = -g
        r = [x // g for x in r]
        for k, b in enumerate(basis):
            f = b[c]
            if f:
                nb = [x * r[c] - f * y for x, y in zip(b, r)]
                g = 0
                for x in nb:
                    g = gcd(g, x)
                if nb[pivots[k]] < 0:
                    g = -g
                basis[k] = [x // g for x in nb]
        basis.append(r)
        pivots.append(c)
    order = sorted(range(len(basis)), key=lambda k: pivots[k])
    return tuple(tuple(basis[k]) for k in order)


def _forest_rows(F: frozenset, m: int) -> list[list[int]]:
    return [[int(v) for v in r] for r in q_matrix([SupportBipartiteGraph(m, F)], m).matrix.rows]


def transport_on_forest(F: frozenset, alpha: Sequence, beta: Sequence) -> dict | None:
    """Unique matrix supported on forest F with the given marginals, if it is strictly positive."""
    m = len(alpha)
    rem = [Fraction(v) for v in alpha] + [Fraction(v) for v in beta]
    adj = defaultdict(set)
    for a, b in F:
        adj[a].add(m + b)
        adj[m + b].add(a)
    present = set(adj)
    if any((rem[k] != 0) != (k in present) for k in range(2 * m)):
        return None
    out = {}
    leaves = [k for k in adj if len(adj[k]) == 1]
    while leaves:
        k = leaves.pop()
        if len(adj[k]) != 1:
            continue
        (nb,) = adj[k]
        val = rem[k]
        if val <= 0:
            return None
        rem[k] = Fraction(0)
        rem[nb] -= val
        adj[k].clear()
        adj[nb].discard(k)
        edge = (k, nb - m) if k < m else (nb, k - m)
        out[edge] = val
        if len(adj[nb]) == 1:
            leaves.append(nb)
        elif not adj[nb] and rem[nb] != 0:
            return None
    if any(rem) or len(out) != len(F):
        return None
    return out


def _vertex_tuples(n: int, m: int, shape: str) -> list[tuple]:
    """(alpha, beta, forests) for every vertex of the dipole or rose polytope."""
    if n < 1 or m < 2:
        raise ValueError("need n >= 1 and m >= 2")
    forests = bipartite_forests(m)
    fkey = {F: _span_key(_forest_rows(F, m)) for F in forests}
    keys = sorted(set(fkey.values()))
    by_vertices: dict[frozenset, list] = defaultdict(list)
    for F in forests:
        by_vertices[frozenset(a for a, _ in F) | frozenset(m + b for _, b in F)].append(F)
    init_rows = [[1 if c == a else -1 if c == m + a else 0 for c in range(2 * m)]
                 for a in range(m)] if shape == "rose" else []
    start = _span_key(init_rows)
    full = 2 * m - 1
    cache: dict[tuple, tuple] = {}

    def step(state, key):
        ck = (state, key)
        if ck not in cache:
            cache[ck] = _span_key(list(state) + list(key))
        return cache[ck]

    # candidate node marginals: kernels of reachable rank 2m-1 states
    level = {start}
    seen = set(level)
    for _ in range(n):
        nxt = set()
        for s in level:
            for k in keys:
                t = step(s, k)
                if len(t) <= full and t not in seen:
                    nxt.add(t)
        seen |= nxt
        level = nxt
    candidates = []
    for s in seen:
        if len(s) != full:
            continue
        (u,) = nullspace_basis(RationalMatrix(list(s), 2 * m))
        tot = sum(u[:m])
        if tot == 0:
            continue
        u = tuple(v / tot for v in u)
        if all(v >= 0 for v in u):
            candidates.append(u)

    results = []
    for u in sorted(set(candidates)):
        alpha, beta = u[:m], u[m:]
        classes: dict[tuple, list] = defaultdict(list)
        for F in by_vertices.get(frozenset(k for k in range(2 * m) if u[k]), ()):
            T = transport_on_forest(F, alpha, beta)
            if T is not None:
                classes[fkey[F]].append((F, T))
        if not classes:
            continue
        ckeys = list(classes)
        memo: dict[tuple, bool] = {}

        def reachable(state, left):
            if left == 0:
                return len(state) == full
            mk = (state, left)
            if mk not in memo:
                memo[mk] = any(reachable(step(state, k), left - 1) for k in ckeys)
            return memo[mk]

        def walk(state, left, chosen):
            if left == 0:
                if len(state) == full:
                    for combo in product(*(classes[k] for k in chosen)):
                        results.append((u, combo))
                return
            for k in ckeys:
                t = step(state, k)
                if reachable(t, left - 1):
                    walk(t, left - 1, chosen + [k])

        walk(start, n, [])
    return results


def _forest_vertices(n: int, m: int, shape: str) -> list[GraphDistribution]:
    S = dipole(n, m) if shape == "dipole" else rose(n, m)
    out = []
    for _, combo in _vertex_tuples(n, m, shape):
        mats = []
        for _, T in combo:
            M = [[Fraction(0)] * m for _ in range(m)]
            for (a, b), v in T.items():
                M[a][b] = v
            mats.append(M)
        out.append(GraphDistribution(S, mats))
    out.sort(key=lambda p: p.flatten())
    return out


def enumerate_dipole_vertices(n: int, m: int) -> list[GraphDistribution]:
    """Vertices of Dist(D_n, m) built from forest supports and the rank condition."""
    return _forest_vertices(n, m, "dipole")


def enumerate_rose_vertices(n: int, m: int) -> list[GraphDistribution]:
    """Vertices of Dist(R_n, m) built from forest supports and the extended rank condition."""
    return _forest_vertices(n, m, "rose")
