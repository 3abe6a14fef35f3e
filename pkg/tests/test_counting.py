import random
from fractions import Fraction as F

import pytest

from graphdist.counting import (KappaStore, collapse, general_lower_bound, integer_determinant,
                                is_collapsed, kappa, kappa_tilde, lower_bound_dipole,
                                lower_bound_rose, pullback, spanning_tree_count,
                                tilde_by_inclusion_exclusion)
from graphdist.polytope import enumerate_vertices, is_vertex
from graphdist.scenarios import (GraphDistribution, build_polytope, complete_bipartite, cycle,
                                 dipole, is_contextual, rose)
from helpers import load, random_tree


def test_integer_determinant():
    assert integer_determinant([[2, 1], [1, 2]]) == 3
    assert integer_determinant([[0, 1], [1, 0]]) == -1
    assert integer_determinant([[1, 2], [2, 4]]) == 0
    assert integer_determinant([]) == 1


def test_spanning_trees_of_small_graphs():
    assert spanning_tree_count(cycle(5, 2)) == 5
    assert spanning_tree_count(dipole(3, 2)) == 3
    assert spanning_tree_count(rose(4, 2)) == 1
    rng = random.Random(3)
    assert spanning_tree_count(random_tree(rng, 6, 2)) == 1


def test_collapse_contracts_a_forest():
    S = complete_bipartite(2, 2, 2)
    cm = collapse(S, ["e1_1", "e2_2"])
    Q = cm.quotient
    assert Q.nodes == ("x1", "x2")
    assert [(e.id, e.source, e.target) for e in Q.edges] == [("e2_1", "x2", "x1"),
                                                             ("e1_2", "x1", "x2")]
    with pytest.raises(ValueError, match="cycle"):
        collapse(S, ["e1_1", "e2_1", "e1_2", "e2_2"])
    with pytest.raises(ValueError, match="loop"):
        collapse(rose(1, 2), ["s1"])
    with pytest.raises(ValueError, match="unknown"):
        collapse(S, ["zz"])


def test_pullback_preserves_vertices_and_contextuality():
    S = cycle(3, 2)
    cm = collapse(S, ["s1"])
    Q = cm.quotient
    P_q = build_polytope(Q)
    P_s = build_polytope(S)
    for x in enumerate_vertices(P_q):
        q = GraphDistribution.from_point(Q, x)
        p = pullback(cm, q)
        assert is_vertex(P_s, p.flatten())
        assert is_collapsed(p.matrix("s1"))
        assert is_contextual(S, p) == is_contextual(Q, q)


def test_store_round_trip(tmp_path):
    st = KappaStore(tmp_path)
    assert st.get(("x", 1)) is None
    st.put(("x", 1), {"a": 2})
    assert st.get(("x", 1)) == {"a": 2}
    assert not list(tmp_path.glob("*.tmp"))


def test_store_from_env(monkeypatch, tmp_path):
    monkeypatch.setenv("GRAPHDIST_CACHE", str(tmp_path))
    assert KappaStore.from_env().dir == tmp_path
    monkeypatch.delenv("GRAPHDIST_CACHE")
    assert KappaStore.from_env() is None


def test_kappa_small_values(store):
    # one loop: every cyclic arrangement of every nonempty outcome subset
    assert kappa("rose", 1, 2, store=store).total == 3
    assert kappa("rose", 1, 4, store=store).total == 4 + 6 + 8 + 6
    assert kappa("rose", 0, 5).total == 5
    rep = kappa("dipole", 2, 2, store=store)
    assert (rep.total, rep.deterministic, rep.contextual) == (6, 4, 2)


def test_kappa_methods_agree():
    for method in ("forest", "dd", "naive"):
        assert kappa("dipole", 2, 3, method).total == 39


def test_kappa_is_cached(store):
    kappa("rose", 2, 2, store=store)
    assert store.get(("kappa", "rose", 2, 2))["total"] == 5


def test_tilde_two_outcomes(store):
    # with two outcomes, the only collapse-free contextual rose vertex is the swap on every loop
    for n in range(1, 4):
        assert kappa_tilde("rose", n, 2, store=store) == 1
    assert kappa_tilde("rose", 0, 2) == 0
    assert kappa_tilde("dipole", 2, 2, store=store) == 0
    assert tilde_by_inclusion_exclusion("dipole", 3, 2, store=store) == \
        kappa("dipole", 3, 2, store=store).collapse_free_contextual


def test_bound_inputs():
    with pytest.raises(ValueError):
        lower_bound_rose(1, 3, 3)
    assert lower_bound_dipole(1, 4, 2) == 0


def test_general_bound_small(store):
    assert general_lower_bound(cycle(4, 2), store=store) == 4
    assert lower_bound_rose(2, 2, 2, store=store) == 4
    assert general_lower_bound(random_tree(random.Random(1), 4, 2)) == 0


def test_bad_family():
    with pytest.raises(ValueError):
        kappa("cube", 2, 2)
