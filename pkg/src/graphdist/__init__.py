"""Exact vertex enumeration and vertex criteria for graph-distribution polytopes."""

from .exact import LPResult, RationalMatrix, lp_feasible, nullspace_basis, rank, rref
from .polytope import (BudgetExceeded, HullIntersection, StandardFormPolytope,
                       affinely_independent, enumerate_vertices, hull_intersection_unique,
                       is_vertex, preceq, support, vsupp)
from .scenarios import (GraphDistribution, Scenario, build_polytope, classify,
                        complete_bipartite, cycle, cycle_distribution, deterministic_distributions,
                        dipole, is_contextual, restrict, rose)

__version__ = "0.1.0"
