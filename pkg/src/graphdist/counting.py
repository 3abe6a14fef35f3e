"""Edge collapsing, spanning-tree counts and vertex counts for roses and dipoles.

``kappa`` counts vertices of Dist(R_n, m) ("rose") or Dist(D_n, m)
("dipole").  ``kappa_tilde`` counts the contextual vertices that carry no
collapsed (diagonal) edge matrix, once by filtering the enumerated vertices
and once by inclusion-exclusion over collapsed edges; the two must agree.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

from .criteria import _DSU, enumerate_dipole_vertices, enumerate_rose_vertices
from .polytope import enumerate_vertices
from .scenarios import GraphDistribution, Scenario, build_polytope, dipole, rose

CODE_VERSION = "1"


# ---------------------------------------------------------------------------
# collapsing

@dataclass(frozen=True)
class CollapseMap:
    source: Scenario
    collapsed: tuple  # edge ids
    quotient: Scenario
    node_map: dict = field(hash=False)
    edge_map: dict = field(hash=False)


def collapse(S: Scenario, T: Iterable[str]) -> CollapseMap:
    """Contract the forest T; every other edge survives with re-anchored endpoints."""
    T = list(dict.fromkeys(T))
    ids = {e.id for e in S.edges}
    for eid in T:
        if eid not in ids:
            raise ValueError("unknown edge %s" % eid)
    pos = {v: i for i, v in enumerate(S.nodes)}
    dsu = _DSU(len(S.nodes))
    for eid in T:
        e = S.edge(eid)
        if e.is_loop:
            raise ValueError("edge %s is a loop and cannot be collapsed" % eid)
        if not dsu.union(pos[e.source], pos[e.target]):
            raise ValueError("collapsed edges contain a cycle (at %s)" % eid)
    node_map = {v: S.nodes[dsu.find(pos[v])] for v in S.nodes}
    qnodes = [v for v in S.nodes if node_map[v] == v]
    tset = set(T)
    qedges = [(e.id, node_map[e.source], node_map[e.target]) for e in S.edges if e.id not in tset]
    Q = Scenario(qnodes, qedges, S.outcomes)
    return CollapseMap(S, tuple(T), Q, node_map, {eid: eid for eid, _, _ in qedges})


def pullback(cm: CollapseMap, p: GraphDistribution) -> GraphDistribution:
    if p.scenario != cm.quotient:
        raise ValueError("distribution is not on the quotient scenario")
    m = cm.source.outcomes
    mats = {}
    for e in cm.source.edges:
        if e.id in cm.edge_map:
            mats[e.id] = p.matrix(cm.edge_map[e.id])
        else:
            vec = p.node_vector(cm.node_map[e.source])
            mats[e.id] = [[vec[a] if a == b else 0 for b in range(m)] for a in range(m)]
    return GraphDistribution(cm.source, mats)


def is_collapsed(Q: Sequence[Sequence]) -> bool:
    return all(v == 0 for a, r in enumerate(Q) for b, v in enumerate(r) if a != b)


# ---------------------------------------------------------------------------
# spanning trees

def integer_determinant(M: list[list[int]]) -> int:
    """Bareiss fraction-free determinant."""
    M = [list(r) for r in M]
    n = len(M)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def spanning_tree_count(S: Scenario) -> int:
    """Matrix-tree count; parallel edges add multiplicity, loops are ignored."""
    if not S.is_connected():
        raise ValueError("scenario is not connected")
    pos = {v: i for i, v in enumerate(S.nodes)}
    n = len(S.nodes)
    L = [[0] * n for _ in range(n)]
    for e in S.edges:
        if e.is_loop:
            continue
        i, j = pos[e.source], pos[e.target]
        L[i][i] += 1
        L[j][j] += 1
        L[i][j] -= 1
        L[j][i] -= 1
    return integer_determinant([r[1:] for r in L[1:]])


# ---------------------------------------------------------------------------
# memo store

class KappaStore:
    """Directory of small JSON files, one per (kind, family, n, m, code version)."""

    def __init__(self, directory: str | os.PathLike):
        self.dir = Path(directory)

    @classmethod
    def from_env(cls) -> "KappaStore | None":
        d = os.environ.get("GRAPHDIST_CACHE")
        return cls(d) if d else None

    def _path(self, key: tuple) -> Path:
        digest = hashlib.sha256(json.dumps(list(key) + [CODE_VERSION]).encode()).hexdigest()
        return self.dir / (digest[:32] + ".json")

    def get(self, key: tuple):
        try:
            with open(self._path(key)) as fh:
                rec = json.load(fh)
        except FileNotFoundError:
            return None
        if rec.get("key") != list(key) or rec.get("version") != CODE_VERSION:
            return None
        return rec["value"]

    def put(self, key: tuple, value) -> None:
        self.dir.mkdir(parents=True, exist_ok=True)
        target = self._path(key)
        fd, tmp = tempfile.mkstemp(dir=self.dir, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump({"key": list(key), "version": CODE_VERSION, "value": value}, fh)
        os.replace(tmp, target)


# ---------------------------------------------------------------------------
# counting

@dataclass(frozen=True)
class CountReport:
    family: str
    n: int
    m: int
    total: int
    deterministic: int
    contextual: int
    # collapsed-edge pattern ("1" = collapsed) -> number of vertices
    breakdown: dict = field(hash=False)
    collapse_free_contextual: int = 0
    method: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def family_scenario(family: str, n: int, m: int) -> Scenario:
    if family == "rose":
        return rose(n, m)
    if family == "dipole":
        return dipole(n, m)
    raise ValueError("family must be 'rose' or 'dipole'")


def family_vertices(family: str, n: int, m: int, method: str = "forest") -> list[tuple]:
    """Flattened vertices of the rose or dipole polytope, sorted."""
    if method == "forest":
        f = enumerate_rose_vertices if family == "rose" else enumerate_dipole_vertices
        return sorted(p.flatten() for p in f(n, m))
    if method in ("dd", "naive"):
        return enumerate_vertices(build_polytope(family_scenario(family, n, m)), engine=method)
    raise ValueError("unknown method %r" % method)


def _report(family: str, n: int, m: int, verts: list[tuple], method: str) -> CountReport:
    k = m * m
    det = 0
    clean = 0
    breakdown: dict[str, int] = {}
    for x in verts:
        is_det = sum(1 for v in x if v) == n
        det += is_det
        pat = "".join("1" if all(x[i * k + a * m + b] == 0 for a in range(m) for b in range(m) if a != b)
                      else "0" for i in range(n))
        breakdown[pat] = breakdown.get(pat, 0) + 1
        if not is_det and "1" not in pat:
            clean += 1
    return CountReport(family, n, m, len(verts), det, len(verts) - det, breakdown, clean, method)


def kappa(family: str, n: int, m: int, method: str = "auto",
          store: KappaStore | None = None) -> CountReport:
    """Vertex count of Dist(R_n, m) or Dist(D_n, m) with its deterministic/contextual split.

    ``auto`` enumerates through forests and, when the polytope has at most 36
    variables, cross-checks the vertex set against double description.
    """
    family_scenario(family, max(n, 1), m)
    if m < 2:
        raise ValueError("need m >= 2")
    if n == 0 and family == "rose":
        return CountReport("rose", 0, m, m, m, 0, {"": m}, 0, "simplex")
    if n < 1:
        raise ValueError("need n >= 1")
    key = ("kappa", family, n, m)
    if store is not None:
        hit = store.get(key)
        if hit is not None:
            return CountReport(**hit)
    if method == "auto":
        verts = family_vertices(family, n, m, "forest")
        if n * m * m <= 36:
            if verts != family_vertices(family, n, m, "dd"):
                raise AssertionError("forest and double-description vertex sets differ")
            method = "forest+dd"
        else:
            method = "forest"
    else:
        verts = family_vertices(family, n, m, method)
    rep = _report(family, n, m, verts, method)
    if store is not None:
        store.put(key, rep.to_dict())
    return rep


def tilde_by_filter(rep: CountReport) -> int:
    """Contextual vertices whose edge matrices are all non-collapsed."""
    return rep.collapse_free_contextual


def _rose_total(n: int, m: int, method: str, store) -> int:
    return kappa("rose", n, m, method, store).total


def tilde_by_inclusion_exclusion(family: str, n: int, m: int, method: str = "auto",
                                 store: KappaStore | None = None) -> int:
    if family == "rose":
        if n == 0:
            return 0
        return sum((-1) ** k * comb(n, k) * _rose_total(n - k, m, method, store) for k in range(n + 1))
    if family == "dipole":
        total = kappa("dipole", n, m, method, store).total
        with_collapsed = sum((-1) ** (k + 1) * comb(n, k) * _rose_total(n - k, m, method, store)
                             for k in range(1, n + 1))
        return total - with_collapsed - m * (m - 1)
    raise ValueError("family must be 'rose' or 'dipole'")


def kappa_tilde(family: str, n: int, m: int, method: str = "auto",
                store: KappaStore | None = None) -> int:
    """Both computations of the collapse-free contextual count; they must agree."""
    if family == "rose" and n == 0:
        return 0
    key = ("kappa_tilde", family, n, m)
    if store is not None:
        hit = store.get(key)
        if hit is not None:
            return hit
    direct = tilde_by_filter(kappa(family, n, m, method, store))
    ie = tilde_by_inclusion_exclusion(family, n, m, method, store)
    if direct != ie:
        raise AssertionError("filter gives %d, inclusion-exclusion gives %d" % (direct, ie))
    if store is not None:
        store.put(key, direct)
    return direct


# ---------------------------------------------------------------------------
# lower bounds

def lower_bound_rose(n1: int, n2: int, m: int, store: KappaStore | None = None) -> int:
    """Contextual-vertex lower bound for K_{n1,n2} through spanning trees and roses."""
    if n1 < 2 or n2 < 2:
        raise ValueError("K_{%d,%d} is a tree; the bound is vacuous" % (n1, n2))
    return kappa_tilde("rose", (n1 - 1) * (n2 - 1), m, store=store) * n1 ** (n2 - 1) * n2 ** (n1 - 1)


def lower_bound_dipole(n1: int, n2: int, m: int, store: KappaStore | None = None) -> int:
    """Contextual-vertex lower bound for K_{n1,n2} through block collapses onto dipoles."""
    total = 0
    for k in range(1, n1):
        for r in range(1, n2):
            edges = k * (n2 - r) + (n1 - k) * r
            total += comb(n1, k) * comb(n2, r) * kappa_tilde("dipole", edges, m, store=store)
    return total


def general_lower_bound(S: Scenario, m: int | None = None, store: KappaStore | None = None) -> int:
    """Collapse-free rose count at the cycle rank times the number of spanning trees."""
    if not S.is_connected():
        raise ValueError("scenario is not connected")
    m = S.outcomes if m is None else m
    c = len(S.edges) - len(S.nodes) + 1
    if c == 0:
        return 0
    return kappa_tilde("rose", c, m, store=store) * spanning_tree_count(S)
