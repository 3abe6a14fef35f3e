"""Fixture loading and random instance generators shared by the test modules."""

import random
from fractions import Fraction
from pathlib import Path

from graphdist.io import parse_distribution, parse_scenario
from graphdist.scenarios import GraphDistribution, Scenario

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load(scenario: str, dist: str | None = None):
    S = parse_scenario(FIXTURES / (scenario + ".scenario"))
    if dist is None:
        return S
    return S, parse_distribution(FIXTURES / (dist + ".dist"), S)


def random_probability_vector(rng: random.Random, m: int, zero_chance: float = 0.3) -> list[Fraction]:
    while True:
        w = [0 if rng.random() < zero_chance else rng.randint(1, 6) for _ in range(m)]
        if any(w):
            t = sum(w)
            return [Fraction(v, t) for v in w]


def random_tree(rng: random.Random, n_nodes: int, m: int) -> Scenario:
    """Uniform attachment tree with random edge orientations."""
    nodes = ["v%d" % i for i in range(n_nodes)]
    edges = []
    for i in range(1, n_nodes):
        j = rng.randrange(i)
        a, b = (nodes[j], nodes[i]) if rng.random() < 0.5 else (nodes[i], nodes[j])
        edges.append(("e%d" % i, a, b))
    return Scenario(nodes, edges, m)


def random_tree_distribution(rng: random.Random, S: Scenario) -> GraphDistribution:
    """Random couplings grown outward from the first node, so marginals agree by construction."""
    m = S.outcomes
    vec = {S.nodes[0]: random_probability_vector(rng, m)}
    mats = {}
    pending = list(S.edges)
    while pending:
        for e in list(pending):
            if e.source in vec or e.target in vec:
                known = e.source if e.source in vec else e.target
                alpha = vec[known]
                # row a of the coupling is alpha[a] times a random stochastic row
                M = [[alpha[a] * w for w in random_probability_vector(rng, m)] for a in range(m)]
                if known == e.target:
                    M = [list(r) for r in zip(*M)]
                other = e.target if known == e.source else e.source
                if known == e.source:
                    vec[other] = [sum(M[a][b] for a in range(m)) for b in range(m)]
                else:
                    vec[other] = [sum(M[a]) for a in range(m)]
                mats[e.id] = M
                pending.remove(e)
    return GraphDistribution(S, mats)
