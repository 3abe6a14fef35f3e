"""Exact rational matrices, row reduction and LP feasibility.

Everything here works over ``fractions.Fraction``; there is no tolerance
anywhere.  Matrices are small and dense, so rows are stored as tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction
Vector = tuple  # tuple[Fraction, ...]


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and strings like ``"3/4"`` to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'num/den' string")
    return Fraction(value)


def as_vector(values: Iterable) -> tuple:
    return tuple(as_rational(v) for v in values)


class RationalMatrix:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(as_vector(r) for r in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged rows: expected %d columns, got %d" % (ncols, len(r)))
        self._rows = data
        self.nrows = len(data)
        self.ncols = ncols

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RationalMatrix":
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> "RationalMatrix":
        return cls([[c[i] for c in cols] for i in range(nrows)], len(cols))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def rows(self) -> tuple:
        return self._rows

    def row(self, i: int) -> tuple:
        return self._rows[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._rows)

    def __getitem__(self, key):
        i, j = key
        return self._rows[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.ncols, self._rows))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self._rows)
        return "RationalMatrix(%dx%d: %s)" % (self.nrows, self.ncols, body)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(zip(*self._rows) if self.nrows else [], self.nrows)

    def columns(self, idx: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix([[r[j] for j in idx] for r in self._rows], len(idx))

    def vstack(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.ncols != other.ncols:
            raise ValueError("column counts differ")
        return RationalMatrix(self._rows + other._rows, self.ncols)

    def hstack(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.nrows != other.nrows:
            raise ValueError("row counts differ")
        return RationalMatrix([a + b for a, b in zip(self._rows, other._rows)],
                              self.ncols + other.ncols)

    def apply(self, x: Sequence) -> tuple:
        """Matrix-vector product."""
        if len(x) != self.ncols:
            raise ValueError("vector length %d does not match %d columns" % (len(x), self.ncols))
        nz = [(j, v) for j, v in enumerate(x) if v]
        return tuple(sum((r[j] * v for j, v in nz), Fraction(0)) for r in self._rows)

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.ncols != other.nrows:
            raise ValueError("inner dimensions differ")
        cols = [other.col(j) for j in range(other.ncols)]
        return RationalMatrix([[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols]
                               for r in self._rows], other.ncols)


# ---------------------------------------------------------------------------
# row reduction

def _rref_rows(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """In-place Gauss-Jordan elimination; returns (rows, pivot columns)."""
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        if piv != 1:
            rows[r] = [v / piv for v in rows[r]]
        prow = rows[r]
        nz = [(j, v) for j, v in enumerate(prow) if v]
        for i in range(nrows):
            f = rows[i][c]
            if i != r and f:
                ri = rows[i]
                for j, v in nz:
                    ri[j] -= f * v
        pivots.append(c)
        r += 1
    return rows, pivots


def rref(M: RationalMatrix) -> tuple[RationalMatrix, int, list[int]]:
    """Reduced row echelon form, rank and pivot columns of ``M``."""
    rows, pivots = _rref_rows([list(r) for r in M.rows], M.ncols)
    return RationalMatrix(rows, M.ncols), len(pivots), pivots


def rank(M: RationalMatrix | Sequence[Sequence]) -> int:
    if not isinstance(M, RationalMatrix):
        M = RationalMatrix(M)
    return len(_rref_rows([list(r) for r in M.rows], M.ncols)[1])


def nullspace_basis(M: RationalMatrix) -> list[tuple]:
    """Basis of {x : Mx = 0}, one vector per free column."""
    R, _, pivots = rref(M)
    free = [j for j in range(M.ncols) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * M.ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -R[i, f]
        basis.append(tuple(v))
    return basis


def solve_affine(A: RationalMatrix, b: Sequence) -> tuple[tuple, list[tuple]] | None:
    """Particular solution and kernel basis of Ax = b, or None if inconsistent."""
    b = as_vector(b)
    if len(b) != A.nrows:
        raise ValueError("b has length %d, A has %d rows" % (len(b), A.nrows))
    rows = [list(r) + [bi] for r, bi in zip(A.rows, b)]
    rows, pivots = _rref_rows(rows, A.ncols + 1)
    if pivots and pivots[-1] == A.ncols:
        return None
    x0 = [Fraction(0)] * A.ncols
    for i, p in enumerate(pivots):
        x0[p] = rows[i][-1]
    pset = set(pivots)
    kernel = []
    for f in range(A.ncols):
        if f in pset:
            continue
        v = [Fraction(0)] * A.ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -rows[i][f]
        kernel.append(tuple(v))
    return tuple(x0), kernel


def independent_rows(A: RationalMatrix, b: Sequence) -> tuple[RationalMatrix, tuple] | None:
    """Equivalent full-row-rank system (RREF rows), or None if Ax = b is inconsistent."""
    b = as_vector(b)
    rows = [list(r) + [bi] for r, bi in zip(A.rows, b)]
    rows, pivots = _rref_rows(rows, A.ncols + 1)
    if pivots and pivots[-1] == A.ncols:
        return None
    k = len(pivots)
    return (RationalMatrix([r[:-1] for r in rows[:k]], A.ncols),
            tuple(r[-1] for r in rows[:k]))


# ---------------------------------------------------------------------------
# LP feasibility

@dataclass(frozen=True)
class LPResult:
    """Outcome of a feasibility check for {x : Ax = b, x >= 0}.

    When feasible, ``witness`` is an exact solution.  When infeasible,
    ``certificate`` is a vector y with yA >= 0 and yb < 0 (Farkas).
    """
    feasible: bool
    witness: tuple | None = None
    certificate: tuple | None = None


def lp_feasible(A: RationalMatrix, b: Sequence) -> LPResult:
    """Phase-one simplex with Bland's rule."""
    b = as_vector(b)
    if len(b) != A.nrows:
        raise ValueError("b has length %d, A has %d rows" % (len(b), A.nrows))
    m, n = A.shape
    sign = [(-1 if bi < 0 else 1) for bi in b]
    # tableau columns: x (n), artificials (m), rhs
    T = []
    for i in range(m):
        s = sign[i]
        row = [s * v for v in A.row(i)] + [Fraction(0)] * m + [s * b[i]]
        row[n + i] = Fraction(1)
        T.append(row)
    basis = [n + i for i in range(m)]
    # reduced costs for min sum(artificials): c_j - sum_i T[i][j]
    width = n + m + 1
    cost = [Fraction(0)] * width
    for j in range(n):
        cost[j] = -sum((T[i][j] for i in range(m)), Fraction(0))
    cost[-1] = -sum((T[i][-1] for i in range(m)), Fraction(0))

    while True:
        enter = next((j for j in range(n + m) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # cannot happen in phase one (objective bounded below)
            raise RuntimeError("unbounded phase-one direction")
        _pivot(T, cost, leave, enter)
        basis[leave] = enter

    if cost[-1] != 0:
        # optimum sum of artificials is -cost[-1] > 0; duals y_i = 1 - rc(artificial_i)
        y = [Fraction(1) - cost[n + i] for i in range(m)]
        cert = tuple(-y[i] * sign[i] for i in range(m))
        return LPResult(False, certificate=cert)
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = T[i][-1]
    return LPResult(True, witness=tuple(x))


def _pivot(T: list[list[Fraction]], cost: list[Fraction], r: int, c: int) -> None:
    piv = T[r][c]
    if piv != 1:
        T[r] = [v / piv for v in T[r]]
    prow = T[r]
    nz = [(j, v) for j, v in enumerate(prow) if v]
    for i, row in enumerate(T):
        f = row[c]
        if i != r and f:
            for j, v in nz:
                row[j] -= f * v
    f = cost[c]
    if f:
        for j, v in nz:
            cost[j] -= f * v


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))
