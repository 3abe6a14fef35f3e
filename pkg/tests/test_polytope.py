import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphdist.exact import RationalMatrix
from graphdist.polytope import (BudgetExceeded, StandardFormPolytope, affinely_independent,
                                convex_combination, enumerate_vertices, hull_intersection_unique,
                                is_vertex, preceq, support, vsupp)
from graphdist.scenarios import build_polytope, cycle, dipole, rose


def simplex(n):
    return StandardFormPolytope(RationalMatrix([[1] * n]), (1,))


def test_unbounded_set_rejected():
    with pytest.raises(ValueError):
        StandardFormPolytope(RationalMatrix([[1, -1]]), (0,))


def test_segment_keeps_both_endpoints():
    # two rays with no common zero constraint are adjacent in a 2-dimensional cone
    P = transport_polytope([1, 2], [2, 1])
    assert enumerate_vertices(P, "dd") == enumerate_vertices(P, "naive")
    assert len(enumerate_vertices(P, "dd")) == 2


def test_simplex_vertices():
    for engine in ("naive", "dd"):
        V = enumerate_vertices(simplex(4), engine)
        assert len(V) == 4
        assert all(sum(v) == 1 and sorted(v) == [0, 0, 0, 1] for v in V)


def test_empty_polytope_has_no_vertices():
    P = StandardFormPolytope(RationalMatrix([[1, 1], [1, 1]]), (1, 2))
    assert enumerate_vertices(P) == []


def test_support_order():
    assert support((0, F(1, 2), 0, F(1, 2))) == (1, 3)
    assert preceq((0, 1, 0), (1, 1, 0))
    assert not preceq((1, 0, 1), (1, 1, 0))


def test_is_vertex_and_vsupp_on_a_simplex():
    # one edge between two nodes: the 3-simplex of 2x2 probability matrices
    P = build_polytope(dipole(1, 2))
    mid = (F(1, 4),) * 4
    assert not is_vertex(P, mid)
    vs = vsupp(P, mid)
    assert len(vs) == 4
    assert all(is_vertex(P, v) for v in vs)
    assert convex_combination(vs, mid) is not None


def test_is_vertex_rejects_infeasible_points():
    with pytest.raises(ValueError):
        is_vertex(simplex(3), (1, 1, 0))


def test_naive_budget_guard(monkeypatch):
    monkeypatch.setenv("GRAPHDIST_NAIVE_BUDGET", "10")
    with pytest.raises(BudgetExceeded):
        enumerate_vertices(build_polytope(cycle(4, 2)), "naive")


def test_dd_ray_budget_guard(monkeypatch):
    monkeypatch.setenv("GRAPHDIST_DD_RAY_BUDGET", "3")
    with pytest.raises(BudgetExceeded):
        enumerate_vertices(build_polytope(cycle(4, 2)), "dd")


@pytest.mark.parametrize("S", [rose(1, 3), rose(2, 2), dipole(2, 2), cycle(3, 2), cycle(4, 2)])
def test_engines_agree_on_small_scenarios(S):
    P = build_polytope(S)
    assert enumerate_vertices(P, "naive") == enumerate_vertices(P, "dd")


def test_vertices_are_sorted_and_unique():
    V = enumerate_vertices(build_polytope(rose(2, 3)))
    assert V == sorted(set(V))


def transport_polytope(rows, cols):
    """Nonnegative matrices with the given integer margins."""
    r, c = len(rows), len(cols)
    A = []
    for i in range(r):
        A.append([1 if k // c == i else 0 for k in range(r * c)])
    for j in range(c):
        A.append([1 if k % c == j else 0 for k in range(r * c)])
    return StandardFormPolytope(RationalMatrix(A), tuple(rows) + tuple(cols))


margins = st.integers(2, 3).flatmap(
    lambda r: st.integers(2, 3).flatmap(
        lambda c: st.lists(st.integers(1, 4), min_size=r, max_size=r).flatmap(
            lambda rows: st.lists(st.integers(1, 4), min_size=c, max_size=c)
            .filter(lambda cols: sum(cols) == sum(rows))
            .map(lambda cols: (rows, cols)))))


@settings(max_examples=25, deadline=None)
@given(margins)
def test_transportation_polytopes_engines_agree(rc):
    P = transport_polytope(*rc)
    naive = enumerate_vertices(P, "naive")
    assert naive == enumerate_vertices(P, "dd")
    assert naive and all(is_vertex(P, v) for v in naive)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_midpoints_of_distinct_vertices_are_not_vertices(seed):
    rng = random.Random(seed)
    P = build_polytope(rose(2, 3))
    V = enumerate_vertices(P)
    a, b = rng.sample(V, 2)
    mid = tuple((x + y) / 2 for x, y in zip(a, b))
    assert not is_vertex(P, mid)
    assert a in vsupp(P, mid) and b in vsupp(P, mid)


def test_affine_independence():
    assert affinely_independent([(0, 0), (1, 0), (0, 1)])
    assert not affinely_independent([(0, 0), (1, 1), (2, 2)])


def test_hull_intersection_kinds():
    seg1 = [(0, 0), (2, 2)]
    seg2 = [(0, 2), (2, 0)]
    h = hull_intersection_unique([seg1, seg2])
    assert h.kind == "unique"
    assert h.point == (1, 1)
    assert h.coefficients == ((F(1, 2), F(1, 2)), (F(1, 2), F(1, 2)))
    assert hull_intersection_unique([seg1, [(0, 1), (0, 2)]]).kind == "empty"
    assert hull_intersection_unique([seg1, [(0, 0), (1, 1)]]).kind == "multiple"
