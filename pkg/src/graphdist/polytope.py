"""Standard-form polytopes {x : Ax = b, x >= 0}.

Vertex enumeration has two engines with the same output contract:

* ``naive``: walk column subsets of size rank(A) depth first, pivoting a
  fraction-free tableau so that dependent prefixes are pruned early.
* ``dd``: double description on the cone over the affine hull, with
  integer rays and a combinatorial adjacency test on bitsets.

Both return vertices as tuples of Fractions in lexicographic order.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd, lcm
from typing import Iterable, Sequence

from .exact import (RationalMatrix, as_vector, independent_rows, lp_feasible,
                    rank, solve_affine)

Point = tuple  # tuple[Fraction, ...]

NAIVE_BUDGET = 5_000_000
AUTO_NAIVE_LIMIT = 20_000


class BudgetExceeded(RuntimeError):
    """A combinatorial guardrail refused the instance."""


def naive_budget() -> int:
    return int(os.environ.get("GRAPHDIST_NAIVE_BUDGET", NAIVE_BUDGET))


def dd_ray_budget() -> int | None:
    v = os.environ.get("GRAPHDIST_DD_RAY_BUDGET")
    return int(v) if v else None


@dataclass(frozen=True)
class StandardFormPolytope:
    A: RationalMatrix
    b: tuple
    labels: tuple = field(default=())

    def __post_init__(self):
        b = as_vector(self.b)
        object.__setattr__(self, "b", b)
        if len(b) != self.A.nrows:
            raise ValueError("b has length %d but A has %d rows" % (len(b), self.A.nrows))
        labels = tuple(self.labels) or tuple("x%d" % i for i in range(self.A.ncols))
        if len(labels) != self.A.ncols:
            raise ValueError("need one label per column")
        object.__setattr__(self, "labels", labels)
        if not _is_bounded(self.A):
            raise ValueError("polytope is unbounded: some nonzero x >= 0 has Ax = 0")

    @property
    def dim_ambient(self) -> int:
        return self.A.ncols

    def contains(self, x: Sequence) -> bool:
        x = as_vector(x)
        return len(x) == self.A.ncols and all(v >= 0 for v in x) and self.A.apply(x) == self.b

    def face(self, keep: Sequence[int]) -> "StandardFormPolytope":
        """The face where every coordinate outside ``keep`` is zero (in ``keep``'s coordinates)."""
        keep = list(keep)
        return StandardFormPolytope(self.A.columns(keep), self.b,
                                    tuple(self.labels[j] for j in keep))


def _is_bounded(A: RationalMatrix) -> bool:
    n = A.ncols
    if n == 0:
        return True
    # quick certificate: nonnegative rows covering every column
    covered = set()
    for r in A.rows:
        if all(v >= 0 for v in r) or all(v <= 0 for v in r):
            covered.update(j for j, v in enumerate(r) if v)
    if len(covered) == n:
        return True
    ones = RationalMatrix(list(A.rows) + [[1] * n], n)
    return not lp_feasible(ones, [0] * A.nrows + [1]).feasible


# ---------------------------------------------------------------------------
# supports and vertex tests

def support(x: Sequence) -> tuple:
    return tuple(i for i, v in enumerate(x) if v != 0)


def preceq(y: Sequence, x: Sequence) -> bool:
    """True iff supp(y) is contained in supp(x)."""
    if len(y) != len(x):
        raise ValueError("points live in different spaces")
    return all(xv != 0 for yv, xv in zip(y, x) if yv != 0)


def is_vertex(P: StandardFormPolytope, x: Sequence) -> bool:
    x = as_vector(x)
    if not P.contains(x):
        raise ValueError("point is not in the polytope")
    s = support(x)
    return rank(P.A.columns(s)) == len(s) if s else True


def vsupp(P: StandardFormPolytope, x: Sequence, engine: str = "auto") -> list[Point]:
    """All vertices v of P with supp(v) inside supp(x)."""
    x = as_vector(x)
    if not P.contains(x):
        raise ValueError("point is not in the polytope")
    s = support(x)
    n = P.A.ncols
    out = []
    for v in enumerate_vertices(P.face(s), engine=engine):
        full = [Fraction(0)] * n
        for j, val in zip(s, v):
            full[j] = val
        out.append(tuple(full))
    out.sort()
    return out


def affinely_independent(points: Sequence[Sequence]) -> bool:
    pts = [as_vector(p) for p in points]
    if not pts:
        return True
    return rank([list(p) + [1] for p in pts]) == len(pts)


def linearly_independent(vectors: Sequence[Sequence]) -> bool:
    vs = [as_vector(v) for v in vectors]
    return not vs or rank(vs) == len(vs)


def convex_combination(points: Sequence[Sequence], target: Sequence) -> tuple | None:
    """Weights lam >= 0, sum 1, with sum lam_i points_i = target; None if impossible."""
    pts = [as_vector(p) for p in points]
    t = as_vector(target)
    if not pts:
        return None
    rows = [[p[c] for p in pts] for c in range(len(t))] + [[1] * len(pts)]
    res = lp_feasible(RationalMatrix(rows, len(pts)), list(t) + [1])
    return res.witness if res.feasible else None


# ---------------------------------------------------------------------------
# vertex enumeration

def enumerate_vertices(P: StandardFormPolytope, engine: str = "auto") -> list[Point]:
    """Sorted, deduplicated vertex list of ``P``."""
    red = independent_rows(P.A, P.b)
    if red is None:
        return []
    A, b = red
    n, r = A.ncols, A.nrows
    if engine == "auto":
        engine = "naive" if comb(n, r) <= AUTO_NAIVE_LIMIT else "dd"
    if engine == "naive":
        verts = _naive(A, b)
    elif engine == "dd":
        verts = _double_description(A, b)
    else:
        raise ValueError("unknown engine %r" % engine)
    return sorted(set(verts))


def _integer_rows(A: RationalMatrix, b: tuple) -> list[list[int]]:
    out = []
    for row, bi in zip(A.rows, b):
        vals = list(row) + [bi]
        L = lcm(*(v.denominator for v in vals))
        out.append([int(v * L) for v in vals])
    return out


def _naive(A: RationalMatrix, b: tuple) -> list[Point]:
    n, r = A.ncols, A.nrows
    if r == 0:
        return [tuple([Fraction(0)] * n)]
    budget = naive_budget()
    if comb(n, r) > budget:
        raise BudgetExceeded("naive engine: C(%d,%d) = %d column subsets exceeds budget %d; "
                             "use the dd engine" % (n, r, comb(n, r), budget))
    T0 = _integer_rows(A, b)
    # degenerate vertices come back once per feasible basis
    found: set[Point] = set()

    def dfs(T, det, free_rows, basis, start):
        k = len(basis)
        if k == r:
            x = [Fraction(0)] * n
            for i, j in basis:
                num = T[i][n]
                if num * det < 0:
                    return
                x[j] = Fraction(num, det)
            found.add(tuple(x))
            return
        for j in range(start, n - (r - k) + 1):
            i = next((i for i in free_rows if T[i][j] != 0), None)
            if i is None:
                continue
            p = T[i][j]
            prow = T[i]
            U = []
            for kk, row in enumerate(T):
                if kk == i:
                    U.append(row)
                    continue
                f = row[j]
                if f:
                    U.append([(v * p - f * w) // det for v, w in zip(row, prow)])
                elif p != det:
                    U.append([(v * p) // det for v in row])
                else:
                    U.append(row)
            dfs(U, p, [q for q in free_rows if q != i], basis + [(i, j)], j + 1)

    dfs(T0, 1, list(range(r)), [], 0)
    return list(found)


def _primitive(v: list[int]) -> tuple:
    g = 0
    for a in v:
        g = gcd(g, a)
    if g > 1:
        v = [a // g for a in v]
    return tuple(v)


def _double_description(A: RationalMatrix, b: tuple) -> list[Point]:
    sol = solve_affine(A, b)
    if sol is None:
        return []
    x0, N = sol
    d = len(N)
    n = A.ncols
    if d == 0:
        return [x0] if all(v >= 0 for v in x0) else []
    if all(v == 0 for v in b):
        # bounded cone {x >= 0, Ax = 0} is {0}
        return [tuple([Fraction(0)] * n)]

    # cone over the affine hull: z = (t, y), constraints t*x0_i + N_i y >= 0 and t >= 0
    rows: dict[tuple, None] = {}
    for i in range(n):
        vals = [x0[i]] + [N[k][i] for k in range(d)]
        if all(v == 0 for v in vals[1:]):
            if vals[0] < 0:
                return []
            continue
        L = lcm(*(v.denominator for v in vals))
        rows[_primitive([int(v * L) for v in vals])] = None
    rows[tuple([1] + [0] * d)] = None
    cons = sorted(rows, key=lambda c: -sum(1 for v in c if v))

    # initial simplicial cone from d+1 independent constraints
    chosen: list[int] = []
    for idx, c in enumerate(cons):
        if rank([cons[j] for j in chosen] + [c]) == len(chosen) + 1:
            chosen.append(idx)
            if len(chosen) == d + 1:
                break
    if len(chosen) < d + 1:
        raise RuntimeError("cone is not pointed; polytope should have been rejected")
    B = RationalMatrix([cons[j] for j in chosen])
    inv = _inverse(B)
    order = chosen + [j for j in range(len(cons)) if j not in set(chosen)]
    cons = [cons[j] for j in order]
    rays: list[tuple] = []
    zeros: list[int] = []
    full = (1 << (d + 1)) - 1
    for k in range(d + 1):
        colv = [inv[i][k] for i in range(d + 1)]
        L = lcm(*(v.denominator for v in colv))
        rays.append(_primitive([int(v * L) for v in colv]))
        zeros.append(full & ~(1 << k))

    budget = dd_ray_budget()
    for j in range(d + 1, len(cons)):
        a = cons[j]
        nz = [(k, v) for k, v in enumerate(a) if v]
        vals = [sum(v * z[k] for k, v in nz) for z in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        if not neg:
            bit = 1 << j
            zeros = [zz | bit if vals[i] == 0 else zz for i, zz in enumerate(zeros)]
            continue
        # ray bitsets per processed constraint
        raysets = [0] * j
        for ri, zz in enumerate(zeros):
            rb = 1 << ri
            while zz:
                low = zz & -zz
                raysets[low.bit_length() - 1] |= rb
                zz ^= low
        new_rays = []
        new_zeros = []
        bit = 1 << j
        # an empty common zero set is shared by every current ray
        everyone = (1 << len(rays)) - 1
        for pi in pos:
            zp = zeros[pi]
            for ni in neg:
                common = zp & zeros[ni]
                if common.bit_count() < d - 1:
                    continue
                acc = everyone
                target = (1 << pi) | (1 << ni)
                cc = common
                while cc:
                    low = cc & -cc
                    acc &= raysets[low.bit_length() - 1]
                    if acc == target:
                        break
                    cc ^= low
                if acc != target:
                    continue
                vp, vn = vals[pi], -vals[ni]
                zp_, zn_ = rays[pi], rays[ni]
                new_rays.append(_primitive([vp * u + vn * w for u, w in zip(zn_, zp_)]))
                new_zeros.append(common | bit)
        keep = [i for i, v in enumerate(vals) if v >= 0]
        rays = [rays[i] for i in keep] + new_rays
        zeros = [zeros[i] | bit if vals[i] == 0 else zeros[i] for i in keep] + new_zeros
        if budget is not None and len(rays) > budget:
            raise BudgetExceeded("dd engine: %d intermediate rays exceed budget %d" % (len(rays), budget))

    out = []
    for z in rays:
        t = z[0]
        if t <= 0:
            raise RuntimeError("recession direction found in a bounded polytope")
        x = tuple(x0[i] + sum((N[k][i] * z[k + 1] for k in range(d) if z[k + 1]), Fraction(0)) / t
                  for i in range(n))
        out.append(x)
    return out


def _inverse(B: RationalMatrix) -> list[list[Fraction]]:
    n = B.nrows
    aug = RationalMatrix([list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(B.rows)])
    from .exact import rref
    R, rk, _ = rref(aug)
    if rk < n or any(R[i, i] != 1 for i in range(n)):
        raise ValueError("singular matrix")
    return [list(R.row(i)[n:]) for i in range(n)]


# ---------------------------------------------------------------------------
# intersections of convex hulls

@dataclass(frozen=True)
class HullIntersection:
    kind: str  # "unique" | "multiple" | "empty"
    point: tuple | None = None
    coefficients: tuple | None = None  # one tuple per input set, aligned with it


def hull_intersection_unique(A_sets: Sequence[Sequence[Sequence]],
                             engine: str = "auto") -> HullIntersection:
    """Decide whether the convex hulls of the given point sets meet in exactly one point."""
    sets = [[as_vector(v) for v in S] for S in A_sets]
    if not sets:
        raise ValueError("need at least one set")
    if any(not S for S in sets):
        raise ValueError("empty point set")
    dim = len(sets[0][0])
    if any(len(v) != dim for S in sets for v in S):
        raise ValueError("points have different dimensions")
    offsets = []
    total = 0
    for S in sets:
        offsets.append(total)
        total += len(S)
    rows = []
    rhs = []
    for i, S in enumerate(sets):
        r = [0] * total
        for k in range(len(S)):
            r[offsets[i] + k] = 1
        rows.append(r)
        rhs.append(1)
    base = sets[0]
    for i in range(1, len(sets)):
        S = sets[i]
        for c in range(dim):
            r = [Fraction(0)] * total
            for k, v in enumerate(S):
                r[offsets[i] + k] += v[c]
            for k, v in enumerate(base):
                r[offsets[0] + k] -= v[c]
            rows.append(r)
            rhs.append(0)
    C = StandardFormPolytope(RationalMatrix(rows, total), rhs)
    if not lp_feasible(C.A, C.b).feasible:
        return HullIntersection("empty")

    def image(alpha):
        return tuple(sum((alpha[offsets[0] + k] * v[c] for k, v in enumerate(base)), Fraction(0))
                     for c in range(dim))

    verts = enumerate_vertices(C, engine=engine)
    pts = {image(a) for a in verts}
    if len(pts) != 1:
        return HullIntersection("multiple")
    point = pts.pop()
    coeffs = None
    if all(affinely_independent(S) for S in sets):
        a = verts[0]
        coeffs = tuple(tuple(a[offsets[i] + k] for k in range(len(S))) for i, S in enumerate(sets))
    return HullIntersection("unique", point, coeffs)
