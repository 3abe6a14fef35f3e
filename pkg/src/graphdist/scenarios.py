"""Directed multigraph scenarios and their distribution polytopes.

A scenario is a directed multigraph with ``m`` outcomes per node.  A
distribution puts an m-by-m probability matrix on every edge so that row
sums give the source node's vector and column sums give the target's.
Only edge entries are polytope variables; node vectors are derived.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .exact import RationalMatrix, as_rational, lp_feasible
from .polytope import BudgetExceeded, StandardFormPolytope

DETERMINISTIC_COLUMN_LIMIT = 10 ** 6


@dataclass(frozen=True)
class Edge:
    id: str
    source: str
    target: str

    @property
    def is_loop(self) -> bool:
        return self.source == self.target


@dataclass(frozen=True)
class Scenario:
    nodes: tuple
    edges: tuple  # tuple[Edge, ...]
    outcomes: int

    def __init__(self, nodes: Iterable, edges: Iterable, outcomes: int):
        nodes = tuple(str(v) for v in nodes)
        es = []
        for e in edges:
            if not isinstance(e, Edge):
                e = Edge(*(str(x) for x in e))
            es.append(e)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", tuple(es))
        object.__setattr__(self, "outcomes", int(outcomes))
        if len(set(nodes)) != len(nodes):
            raise ValueError("duplicate node id")
        ids = [e.id for e in es]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate edge id")
        known = set(nodes)
        for e in es:
            for v in (e.source, e.target):
                if v not in known:
                    raise ValueError("edge %s references unknown node %s" % (e.id, v))

    @property
    def m(self) -> int:
        return self.outcomes

    def edge(self, eid: str) -> Edge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise KeyError(eid)

    def edge_index(self, eid: str) -> int:
        for i, e in enumerate(self.edges):
            if e.id == eid:
                return i
        raise KeyError(eid)

    def incidences(self, v: str) -> list[tuple[int, str]]:
        """(edge index, side) pairs at node v; side is 'row' at the source, 'col' at the target."""
        out = []
        for i, e in enumerate(self.edges):
            if e.source == v:
                out.append((i, "row"))
            if e.target == v:
                out.append((i, "col"))
        return out

    def variable_index(self, edge_pos: int, a: int, b: int) -> int:
        m = self.outcomes
        return edge_pos * m * m + a * m + b

    def labels(self) -> tuple:
        m = self.outcomes
        return tuple("p[%s](%d,%d)" % (e.id, a, b) for e in self.edges
                     for a in range(m) for b in range(m))

    def is_connected(self) -> bool:
        if not self.nodes:
            return False
        adj = {v: set() for v in self.nodes}
        for e in self.edges:
            adj[e.source].add(e.target)
            adj[e.target].add(e.source)
        seen = {self.nodes[0]}
        stack = [self.nodes[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.nodes)

    def subscenario(self, edge_ids: Iterable[str], extra_nodes: Iterable[str] = ()) -> "Scenario":
        """Scenario spanned by the given edges (plus any extra isolated nodes)."""
        ids = set(edge_ids)
        es = [e for e in self.edges if e.id in ids]
        if len(es) != len(ids):
            raise ValueError("unknown edge in %s" % sorted(ids))
        used = {e.source for e in es} | {e.target for e in es} | set(extra_nodes)
        return Scenario([v for v in self.nodes if v in used], es, self.outcomes)


# ---------------------------------------------------------------------------
# families

def rose(n: int, m: int) -> Scenario:
    return Scenario(["*"], [("s%d" % (i + 1), "*", "*") for i in range(n)], m)


def dipole(n: int, m: int) -> Scenario:
    return Scenario(["x", "y"], [("t%d" % (i + 1), "x", "y") for i in range(n)], m)


def cycle(n: int, m: int) -> Scenario:
    """Directed n-cycle x1 -> x2 -> ... -> xn -> x1 (a single loop when n = 1)."""
    nodes = ["x%d" % (i + 1) for i in range(n)]
    return Scenario(nodes, [("s%d" % (i + 1), nodes[i], nodes[(i + 1) % n]) for i in range(n)], m)


def complete_bipartite(n1: int, n2: int, m: int) -> Scenario:
    xs = ["x%d" % (i + 1) for i in range(n1)]
    ys = ["y%d" % (j + 1) for j in range(n2)]
    edges = [("e%d_%d" % (i + 1, j + 1), xs[i], ys[j]) for j in range(n2) for i in range(n1)]
    return Scenario(xs + ys, edges, m)


# ---------------------------------------------------------------------------
# distributions

def _matrix(rows, m: int) -> tuple:
    mat = tuple(tuple(as_rational(v) for v in r) for r in rows)
    if len(mat) != m or any(len(r) != m for r in mat):
        raise ValueError("edge matrix must be %dx%d" % (m, m))
    return mat


class InfeasibleDistribution(ValueError):
    pass


@dataclass(frozen=True)
class GraphDistribution:
    scenario: Scenario
    matrices: tuple  # one m x m tuple-of-tuples per edge, in scenario edge order

    def __init__(self, scenario: Scenario, matrices: Mapping[str, Sequence] | Sequence):
        m = scenario.outcomes
        if isinstance(matrices, Mapping):
            missing = [e.id for e in scenario.edges if e.id not in matrices]
            if missing:
                raise InfeasibleDistribution("no matrix given for edge %s" % missing[0])
            extra = set(matrices) - {e.id for e in scenario.edges}
            if extra:
                raise InfeasibleDistribution("matrix given for unknown edge %s" % sorted(extra)[0])
            mats = tuple(_matrix(matrices[e.id], m) for e in scenario.edges)
        else:
            mats = tuple(_matrix(x, m) for x in matrices)
            if len(mats) != len(scenario.edges):
                raise InfeasibleDistribution("expected %d matrices" % len(scenario.edges))
        object.__setattr__(self, "scenario", scenario)
        object.__setattr__(self, "matrices", mats)
        self._validate()

    def _validate(self) -> None:
        S = self.scenario
        for e, M in zip(S.edges, self.matrices):
            if any(v < 0 for r in M for v in r):
                raise InfeasibleDistribution("edge %s has a negative entry" % e.id)
            if sum(v for r in M for v in r) != 1:
                raise InfeasibleDistribution("edge %s does not sum to 1" % e.id)
        for v in S.nodes:
            vecs = [self._marginal(i, side) for i, side in S.incidences(v)]
            if any(x != vecs[0] for x in vecs[1:]):
                raise InfeasibleDistribution("marginals disagree at node %s" % v)

    def _marginal(self, i: int, side: str) -> tuple:
        M = self.matrices[i]
        if side == "row":
            return tuple(sum(r) for r in M)
        return tuple(sum(M[a][b] for a in range(len(M))) for b in range(len(M)))

    def matrix(self, eid: str) -> tuple:
        return self.matrices[self.scenario.edge_index(eid)]

    def node_vector(self, v: str) -> tuple | None:
        inc = self.scenario.incidences(v)
        if not inc:
            return None
        return self._marginal(*inc[0])

    def flatten(self) -> tuple:
        return tuple(v for M in self.matrices for r in M for v in r)

    @classmethod
    def from_point(cls, scenario: Scenario, x: Sequence) -> "GraphDistribution":
        m = scenario.outcomes
        k = m * m
        if len(x) != k * len(scenario.edges):
            raise ValueError("point has the wrong length for this scenario")
        mats = [[x[i * k + a * m: i * k + a * m + m] for a in range(m)]
                for i in range(len(scenario.edges))]
        return cls(scenario, mats)

    def is_deterministic(self) -> bool:
        return all(sum(1 for r in M for v in r if v) == 1 for M in self.matrices)

    def __repr__(self) -> str:
        parts = []
        for e, M in zip(self.scenario.edges, self.matrices):
            parts.append("%s=[%s]" % (e.id, "; ".join(" ".join(str(v) for v in r) for r in M)))
        return "GraphDistribution(%s)" % ", ".join(parts)


def build_polytope(S: Scenario) -> StandardFormPolytope:
    m = S.outcomes
    if m < 2:
        raise ValueError("need at least 2 outcomes")
    if not S.edges:
        raise ValueError("scenario has no edges")
    n = len(S.edges) * m * m
    rows: list[list[int]] = []
    rhs: list[int] = []
    for i in range(len(S.edges)):
        r = [0] * n
        for a in range(m):
            for b in range(m):
                r[S.variable_index(i, a, b)] = 1
        rows.append(r)
        rhs.append(1)

    def marginal_row(i, side, c, sign, r):
        for k in range(m):
            a, b = (c, k) if side == "row" else (k, c)
            r[S.variable_index(i, a, b)] += sign

    for v in S.nodes:
        inc = S.incidences(v)
        for other in inc[1:]:
            for c in range(m):
                r = [0] * n
                marginal_row(*inc[0], c, 1, r)
                marginal_row(*other, c, -1, r)
                rows.append(r)
                rhs.append(0)
    return StandardFormPolytope(RationalMatrix(rows, n), rhs, S.labels())


def deterministic(S: Scenario, assignment: Mapping[str, int]) -> GraphDistribution:
    m = S.outcomes
    mats = []
    for e in S.edges:
        M = [[0] * m for _ in range(m)]
        M[assignment[e.source]][assignment[e.target]] = 1
        mats.append(M)
    return GraphDistribution(S, mats)


def deterministic_distributions(S: Scenario) -> list[GraphDistribution]:
    """One distribution per outcome assignment to nodes, in lexicographic assignment order."""
    return [deterministic(S, dict(zip(S.nodes, f)))
            for f in product(range(S.outcomes), repeat=len(S.nodes))]


def validate_cycle(mu: Sequence[int], m: int) -> tuple:
    mu = tuple(int(a) for a in mu)
    if not 1 <= len(mu) <= m:
        raise ValueError("cycle length must be between 1 and m")
    if len(set(mu)) != len(mu):
        raise ValueError("cycle %s repeats an outcome" % list(mu))
    if any(not 0 <= a < m for a in mu):
        raise ValueError("cycle %s has an outcome outside 0..%d" % (list(mu), m - 1))
    return mu


def cycle_matrix(mu: Sequence[int], m: int) -> tuple:
    mu = validate_cycle(mu, m)
    k = len(mu)
    M = [[Fraction(0)] * m for _ in range(m)]
    for j in range(k):
        M[mu[j]][mu[(j + 1) % k]] = Fraction(1, k)
    return tuple(tuple(r) for r in M)


def cycle_distribution(mu: Sequence[int], m: int) -> GraphDistribution:
    return GraphDistribution(rose(1, m), [cycle_matrix(mu, m)])


def all_cycles(m: int) -> list[tuple]:
    """Every cyclic ordering of every nonempty outcome subset, smallest element first."""
    from itertools import combinations, permutations
    out = []
    for k in range(1, m + 1):
        for sub in combinations(range(m), k):
            for rest in permutations(sub[1:]):
                out.append((sub[0],) + rest)
    return out


@dataclass(frozen=True)
class ContextualityVerdict:
    contextual: bool
    # non-contextual: (assignment, weight) pairs reproducing p exactly
    witness: tuple | None = None
    # contextual: Farkas vector y over the LP rows (flattened p, then normalization)
    certificate: tuple | None = None


def classify(S: Scenario, p: GraphDistribution) -> ContextualityVerdict:
    """Exact LP test of membership in the hull of deterministic distributions."""
    if p.scenario != S:
        raise ValueError("distribution belongs to a different scenario")
    cols = S.outcomes ** len(S.nodes)
    if cols > DETERMINISTIC_COLUMN_LIMIT:
        raise BudgetExceeded("%d deterministic columns exceed the limit %d"
                             % (cols, DETERMINISTIC_COLUMN_LIMIT))
    assigns = list(product(range(S.outcomes), repeat=len(S.nodes)))
    m = S.outcomes
    nrows = len(S.edges) * m * m
    col_vecs = []
    for f in assigns:
        c = [0] * (nrows + 1)
        for i, e in enumerate(S.edges):
            c[S.variable_index(i, f[S.nodes.index(e.source)], f[S.nodes.index(e.target)])] = 1
        c[nrows] = 1
        col_vecs.append(c)
    A = RationalMatrix.from_columns(col_vecs, nrows + 1)
    res = lp_feasible(A, list(p.flatten()) + [1])
    if res.feasible:
        wit = tuple((dict(zip(S.nodes, f)), w) for f, w in zip(assigns, res.witness) if w)
        return ContextualityVerdict(False, witness=wit)
    return ContextualityVerdict(True, certificate=res.certificate)


def is_contextual(S: Scenario, p: GraphDistribution) -> bool:
    return classify(S, p).contextual


def restrict(p: GraphDistribution, sub: Scenario) -> GraphDistribution:
    S = p.scenario
    if sub.outcomes != S.outcomes:
        raise ValueError("outcome counts differ")
    for v in sub.nodes:
        if v not in S.nodes:
            raise ValueError("node %s not in the scenario" % v)
    mats = {}
    for e in sub.edges:
        try:
            orig = S.edge(e.id)
        except KeyError:
            raise ValueError("edge %s not in the scenario" % e.id) from None
        if (orig.source, orig.target) != (e.source, e.target):
            raise ValueError("edge %s has different endpoints" % e.id)
        mats[e.id] = p.matrix(e.id)
    return GraphDistribution(sub, mats)


def node_restriction(p: GraphDistribution, nodes: Sequence[str]) -> tuple:
    """Stacked node vectors for the listed nodes."""
    out = []
    for v in nodes:
        vec = p.node_vector(v)
        if vec is None:
            raise ValueError("node %s has no incident edge" % v)
        out.extend(vec)
    return tuple(out)
