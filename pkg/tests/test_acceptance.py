"""Acceptance criteria AC1-AC12.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary ends
with one PASS/FAIL line per criterion.
"""

import random
import time
from fractions import Fraction as F
from itertools import product
from math import comb, factorial

import pytest

from graphdist.counting import (kappa, kappa_tilde, lower_bound_dipole, lower_bound_rose,
                                spanning_tree_count, tilde_by_filter,
                                tilde_by_inclusion_exclusion)
from graphdist.criteria import (dipole_is_vertex, edge_decomposition, enumerate_dipole_vertices,
                                enumerate_rose_vertices, fiber_sufficient_vertex, rose_is_vertex,
                                star_decomposition)
from graphdist.io import parse_scenario
from graphdist.polytope import enumerate_vertices, is_vertex
from graphdist.scenarios import (GraphDistribution, build_polytope, classify, complete_bipartite,
                                 cycle, dipole, is_contextual, rose)
from helpers import FIXTURES, load, random_tree, random_tree_distribution


# AC1 ------------------------------------------------------------------------

def test_ac01_single_loop_three_outcomes():
    t = time.perf_counter()
    V = enumerate_vertices(build_polytope(rose(1, 3)))
    elapsed = time.perf_counter() - t
    # cyclic orders of every nonempty subset of three outcomes
    assert len(V) == sum(comb(3, k) * factorial(k - 1) for k in range(1, 4)) == 8
    assert elapsed < 1.0


# AC2 ------------------------------------------------------------------------

@pytest.mark.parametrize("n,expected", [(2, 56), (3, 488)])
def test_ac02_rose_counts_by_double_description(n, expected):
    assert len(enumerate_vertices(build_polytope(rose(n, 3)), "dd")) == expected


# AC3 ------------------------------------------------------------------------

def test_ac03_four_loops_three_outcomes(store):
    rep = kappa("rose", 4, 3, store=store)
    assert rep.total == 4088
    direct = tilde_by_filter(rep)
    by_ie = tilde_by_inclusion_exclusion("rose", 4, 3, store=store)
    assert direct == by_ie == 2443
    assert rep.total - direct == 1645
    assert kappa_tilde("rose", 4, 3, store=store) == 2443


# AC4 ------------------------------------------------------------------------

def test_ac04_three_edge_dipole(store):
    forest = [p.flatten() for p in enumerate_dipole_vertices(3, 3)]
    dd = enumerate_vertices(build_polytope(dipole(3, 3)), "dd")
    assert forest == dd
    assert len(dd) == 561
    rep = kappa("dipole", 3, 3, store=store)
    assert rep.total == 561
    assert tilde_by_filter(rep) == tilde_by_inclusion_exclusion("dipole", 3, 3, store=store) == 408
    assert kappa_tilde("dipole", 3, 3, store=store) == 408


# AC5 ------------------------------------------------------------------------

def test_ac05_bipartite_lower_bounds(store):
    # (3-1)(3-1) = 4 loops, 3^2 * 3^2 = 81 spanning trees
    assert kappa_tilde("rose", 4, 3, store=store) * 81 == 197883
    assert lower_bound_rose(3, 3, 3, store=store) == 197883
    # K_{3,2}: blocks (k, r) in {1,2} x {1}; every block collapse leaves a 3-edge dipole
    assert 3 * 2 * kappa_tilde("dipole", 3, 3, store=store) * 2 == 4896
    assert lower_bound_dipole(3, 2, 3, store=store) == 4896


# AC6 ------------------------------------------------------------------------

@pytest.mark.parametrize("n1,n2", [(a, b) for a in range(2, 5) for b in range(2, 5)])
def test_ac06_spanning_trees_of_complete_bipartite(n1, n2):
    assert spanning_tree_count(complete_bipartite(n1, n2, 2)) == n1 ** (n2 - 1) * n2 ** (n1 - 1)


# AC7 ------------------------------------------------------------------------

def test_ac07_rank_fixtures():
    S, p = load("dipole4_m3", "dipole4_m3_fifths")
    assert dipole_is_vertex(S, p).q.rank == 5
    for name in ("rose3_m4_vertex", "rose3_m4_dependent_vertex"):
        S, p = load("rose3_m4", name)
        assert rose_is_vertex(S, p).q.rank == 7


@pytest.mark.parametrize("scenario,dist,check", [
    ("dipole4_m3", "dipole4_m3_quarters", dipole_is_vertex),
    ("dipole4_m3", "dipole4_m3_fifths", dipole_is_vertex),
    ("rose2_m3", "rose2_m3_vertex", rose_is_vertex),
    ("rose3_m4", "rose3_m4_vertex", rose_is_vertex),
    ("rose3_m4", "rose3_m4_dependent_vertex", rose_is_vertex),
])
def test_ac07_criterion_verdicts(scenario, dist, check):
    S, p = load(scenario, dist)
    assert check(S, p).is_vertex
    assert is_vertex(build_polytope(S), p.flatten())


# AC8 ------------------------------------------------------------------------

CRITERION_CASES = [(shape, n, m) for shape in ("dipole", "rose") for n in (1, 2, 3) for m in (2, 3)]


def test_ac08_criterion_matches_direct_test():
    rng = random.Random(8)
    per_case = -(-1000 // len(CRITERION_CASES))
    midpoints = 0
    disagreements = []
    for shape, n, m in CRITERION_CASES:
        S = dipole(n, m) if shape == "dipole" else rose(n, m)
        check = dipole_is_vertex if shape == "dipole" else rose_is_vertex
        P = build_polytope(S)
        V = enumerate_vertices(P, "dd")
        for x in V:
            p = GraphDistribution.from_point(S, x)
            if check(S, p).is_vertex is not True or not is_vertex(P, x):
                disagreements.append((shape, n, m, "vertex", x))
        for _ in range(per_case):
            a, b = rng.sample(V, 2)
            x = tuple((u + v) / 2 for u, v in zip(a, b))
            p = GraphDistribution.from_point(S, x)
            if check(S, p).is_vertex != is_vertex(P, x) or is_vertex(P, x):
                disagreements.append((shape, n, m, "midpoint", x))
            midpoints += 1
    assert midpoints >= 1000
    assert disagreements == []


# AC9 ------------------------------------------------------------------------

def _glued_families():
    out = []
    for n in (2, 3):
        for m in (2, 3):
            out.append((dipole(n, m), edge_decomposition))
            out.append((rose(n, m), edge_decomposition))
    for S in (complete_bipartite(2, 2, 2), complete_bipartite(2, 3, 2), complete_bipartite(3, 2, 2)):
        ys = [v for v in S.nodes if v.startswith("y")]
        xs = [v for v in S.nodes if v.startswith("x")]
        out.append((S, lambda p, ys=ys: star_decomposition(p, ys)))
        out.append((S, lambda p, xs=xs: star_decomposition(p, xs)))
    return out


def test_ac09_fiber_criterion_is_sound():
    rng = random.Random(9)
    families = [(S, split, build_polytope(S)) for S, split in _glued_families()]
    verts = {id(P): enumerate_vertices(P, "dd") for _, _, P in families}
    said_vertex = 0
    unsound = []
    for _ in range(1000):
        S, split, P = rng.choice(families)
        V = verts[id(P)]
        k = rng.choice([1, 1, 2, 3])
        chosen = rng.sample(V, k)
        w = [rng.randint(1, 5) for _ in chosen]
        x = tuple(sum(F(wi, sum(w)) * v[i] for wi, v in zip(w, chosen)) for i in range(len(V[0])))
        verdict = fiber_sufficient_vertex(split(GraphDistribution.from_point(S, x)))
        if verdict.kind == "vertex":
            said_vertex += 1
            if not is_vertex(P, x):
                unsound.append(x)
    assert unsound == []
    assert said_vertex > 0


def test_ac09_dependent_star_is_inconclusive():
    S, p = load("k25_m4", "k25_m4_vertex")
    verdict = fiber_sufficient_vertex(star_decomposition(p, ["y%d" % j for j in range(1, 6)]))
    assert verdict.kind == "inconclusive"
    assert is_vertex(build_polytope(S), p.flatten())


# AC10 -----------------------------------------------------------------------

def test_ac10_trees_are_noncontextual():
    rng = random.Random(10)
    for _ in range(50):
        S = random_tree(rng, rng.randint(2, 6), rng.randint(2, 3))
        p = random_tree_distribution(rng, S)
        assert is_contextual(S, p) is False


# AC11 -----------------------------------------------------------------------

def cycle_order_distributions(n, m):
    """Every k-order cycle distribution on the n-cycle, built from its defining tuples."""
    S = cycle(n, m)
    out = set()
    for k in range(1, m + 1):
        for seq in product(product(range(m), repeat=n), repeat=k):
            if any(len({seq[j][i] for j in range(k)}) < k for i in range(n)):
                continue
            mats = [[[F(0)] * m for _ in range(m)] for _ in range(n)]
            for j in range(k):
                for i in range(n - 1):
                    mats[i][seq[j][i]][seq[j][i + 1]] += F(1, k)
                mats[n - 1][seq[j][n - 1]][seq[(j + 1) % k][0]] += F(1, k)
            out.add(GraphDistribution(S, mats).flatten())
    return out


def test_ac11_pr_box():
    S, p = load("cycle4_m2", "cycle4_m2_pr_box")
    P = build_polytope(S)
    assert is_vertex(P, p.flatten())
    assert classify(S, p).contextual
    V = enumerate_vertices(P)
    oracle = cycle_order_distributions(4, 2)
    assert len(oracle) == 24
    assert set(V) == oracle
    assert p.flatten() in oracle


# AC12 -----------------------------------------------------------------------

SMALL_CORPUS = sorted(
    f.stem for f in FIXTURES.glob("*.scenario")
    if (lambda S: len(S.edges) * S.outcomes ** 2 <= 30)(parse_scenario(f)))


def test_ac12_corpus_is_covered():
    assert {"cycle4_m2", "rose2_m3", "rose1_m3"} <= set(SMALL_CORPUS)


@pytest.mark.parametrize("name", SMALL_CORPUS)
def test_ac12_engines_agree_on_corpus(name):
    P = build_polytope(load(name))
    assert enumerate_vertices(P, "naive") == enumerate_vertices(P, "dd")
