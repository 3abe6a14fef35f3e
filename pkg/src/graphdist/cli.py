"""Command-line front end.

    graphdist vertices SCENARIO [--engine auto|naive|dd]
    graphdist check SCENARIO DIST
    graphdist classify SCENARIO DIST
    graphdist count --family rose|dipole -n N -m M [--tilde]
    graphdist bound (--bipartite N1 N2 | --scenario FILE) -m M [--via rose|dipole]
    graphdist collapse SCENARIO --edges E [E ...] [-o OUT]
    graphdist construct ASETS [-o OUT]

Every subcommand takes ``--format text|json``.  Exit codes: 0 success
(including negative verdicts), 1 usage error, 2 parse or infeasible input,
3 budget exceeded.  GRAPHDIST_NAIVE_BUDGET and GRAPHDIST_DD_RAY_BUDGET
override the enumeration guardrails; GRAPHDIST_CACHE names a directory for
memoized counts.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import counting, criteria
from .exact import rank
from .io import (ParseError, parse_asets_text, parse_distribution, parse_scenario,
                 serialize_distribution, serialize_scenario)
from .polytope import BudgetExceeded, enumerate_vertices, is_vertex, support
from .scenarios import (GraphDistribution, InfeasibleDistribution, build_polytope,
                        classify, complete_bipartite)

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError("%s: %s" % (self.prog, message))


def _matrices_json(p: GraphDistribution) -> dict:
    return {e.id: [[str(v) for v in r] for r in M] for e, M in zip(p.scenario.edges, p.matrices)}


def _emit(args, text: str, data: dict) -> None:
    out = json.dumps(data, indent=2) + "\n" if args.format == "json" else text
    if getattr(args, "output", None):
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)


# ---------------------------------------------------------------------------
# subcommands

def cmd_vertices(args) -> None:
    S = parse_scenario(args.scenario)
    verts = enumerate_vertices(build_polytope(S), engine=args.engine)
    items = []
    lines = ["%d vertices" % len(verts)]
    for k, x in enumerate(verts):
        p = GraphDistribution.from_point(S, x)
        # a vertex lies in the deterministic hull only if it is itself deterministic
        tag = "deterministic" if p.is_deterministic() else "contextual"
        items.append({"tag": tag, "edges": _matrices_json(p)})
        lines.append("# vertex %d %s" % (k + 1, tag))
        lines.append(serialize_distribution(p).rstrip())
    _emit(args, "\n".join(lines) + "\n", {"count": len(verts), "vertices": items})


def _rank_certificate(S, p) -> dict:
    P = build_polytope(S)
    x = p.flatten()
    s = support(x)
    r = rank(P.A.columns(s)) if s else 0
    return {"method": "support-columns", "support": [P.labels[i] for i in s],
            "support_size": len(s), "column_rank": r,
            "verdict": "vertex" if r == len(s) else "not a vertex"}


def cmd_check(args) -> None:
    S = parse_scenario(args.scenario)
    p = parse_distribution(args.dist, S)
    shape = criteria.scenario_shape(S)
    if shape == "dipole":
        cert = criteria.dipole_is_vertex(S, p)
    elif shape == "rose":
        cert = criteria.rose_is_vertex(S, p)
    else:
        cert = None
    if cert is not None:
        vertex = cert.is_vertex
        cdata, ctext = cert.to_dict(), cert.to_text()
    else:
        cdata = _rank_certificate(S, p)
        vertex = cdata["verdict"] == "vertex"
        ctext = "support columns: %d, rank: %d\nverdict: %s" % (
            cdata["support_size"], cdata["column_rank"], cdata["verdict"])
    if vertex:
        contextual = not p.is_deterministic()
    else:
        contextual = classify(S, p).contextual
    tag = "contextual" if contextual else "non-contextual"
    text = ctext + "\n%s, %s\n" % ("vertex" if vertex else "not a vertex", tag)
    _emit(args, text, {"vertex": vertex, "contextual": contextual, "certificate": cdata})


def cmd_classify(args) -> None:
    S = parse_scenario(args.scenario)
    p = parse_distribution(args.dist, S)
    v = classify(S, p)
    if v.contextual:
        cert = [str(y) for y in v.certificate]
        text = ("contextual\nFarkas vector over (edge entries..., normalization): %s\n"
                % " ".join(cert))
        data = {"contextual": True, "farkas_certificate": cert,
                "row_labels": list(build_polytope(S).labels) + ["sum"]}
    else:
        wit = [{"assignment": a, "weight": str(w)} for a, w in v.witness]
        text = "non-contextual\n" + "\n".join(
            "%s  %s" % (w["weight"], " ".join("%s=%d" % kv for kv in w["assignment"].items()))
            for w in wit) + "\n"
        data = {"contextual": False, "convex_combination": wit}
    _emit(args, text, data)


def cmd_count(args) -> None:
    store = counting.KappaStore(args.cache) if args.cache else counting.KappaStore.from_env()
    if args.tilde:
        val = counting.kappa_tilde(args.family, args.n, args.m, args.method, store)
        _emit(args, "%d\n" % val, {"family": args.family, "n": args.n, "m": args.m,
                                   "kappa_tilde": val})
        return
    rep = counting.kappa(args.family, args.n, args.m, args.method, store)
    text = "%d\n" % rep.total
    if args.verbose:
        text += "deterministic %d\ncontextual %d\ncollapse-free contextual %d\n" % (
            rep.deterministic, rep.contextual, rep.collapse_free_contextual)
        text += "".join("pattern %s: %d\n" % kv for kv in sorted(rep.breakdown.items()))
    _emit(args, text, rep.to_dict())


def cmd_bound(args) -> None:
    store = counting.KappaStore(args.cache) if args.cache else counting.KappaStore.from_env()
    if args.bipartite:
        n1, n2 = args.bipartite
        if args.via == "dipole":
            val = counting.lower_bound_dipole(n1, n2, args.m, store)
        else:
            val = counting.lower_bound_rose(n1, n2, args.m, store)
        desc = {"graph": "K_%d,%d" % (n1, n2), "via": args.via}
    else:
        S = parse_scenario(args.scenario)
        m = args.m or S.outcomes
        val = counting.general_lower_bound(S, m, store)
        desc = {"scenario": args.scenario, "spanning_trees": counting.spanning_tree_count(S),
                "cycle_rank": len(S.edges) - len(S.nodes) + 1}
    _emit(args, "%d\n" % val, dict(desc, m=args.m, lower_bound=val))


def cmd_collapse(args) -> None:
    S = parse_scenario(args.scenario)
    cm = counting.collapse(S, args.edges)
    text = serialize_scenario(cm.quotient)
    _emit(args, text, {"quotient": text, "node_map": cm.node_map, "collapsed": list(cm.collapsed)})


def cmd_construct(args) -> None:
    asets_doc = parse_asets_text(Path(args.asets).read_text(), args.asets)
    if asets_doc.family == "dipole":
        p = criteria.construct_dipole_vertex(asets_doc.sets, asets_doc.m)
    elif asets_doc.family == "rose":
        p = criteria.construct_rose_vertex(asets_doc.sets, asets_doc.m)
    else:
        p = criteria.construct_bipartite_vertex(asets_doc.left, asets_doc.m, asets_doc.sets, asets_doc.injections)
    text = "# scenario\n" + "".join("# " + ln + "\n" for ln in
                                   serialize_scenario(p.scenario).splitlines())
    text += serialize_distribution(p)
    _emit(args, text, {"scenario": serialize_scenario(p.scenario), "edges": _matrices_json(p),
                       "verdict": "vertex"})


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="graphdist", description="Exact tools for graph-distribution polytopes.")
    ap.add_argument("--budget", type=int, help="naive-engine column-subset budget")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--format", choices=["text", "json"], default="text")
        sp.set_defaults(func=fn)
        return sp

    sp = add("vertices", cmd_vertices, "enumerate vertices of Dist(X, m)")
    sp.add_argument("scenario")
    sp.add_argument("--engine", choices=["auto", "naive", "dd"], default="auto")
    sp.add_argument("-o", "--output")

    sp = add("check", cmd_check, "vertex test with certificate")
    sp.add_argument("scenario")
    sp.add_argument("dist")

    sp = add("classify", cmd_classify, "contextuality test")
    sp.add_argument("scenario")
    sp.add_argument("dist")

    sp = add("count", cmd_count, "vertex counts of roses and dipoles")
    sp.add_argument("--family", choices=["rose", "dipole"], required=True)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("-m", type=int, required=True)
    sp.add_argument("--tilde", action="store_true", help="collapse-free contextual count")
    sp.add_argument("--method", choices=["auto", "forest", "dd", "naive"], default="auto")
    sp.add_argument("--cache", help="memo directory")
    sp.add_argument("-v", "--verbose", action="store_true")

    sp = add("bound", cmd_bound, "contextual-vertex lower bounds")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--bipartite", nargs=2, type=int, metavar=("N1", "N2"))
    g.add_argument("--scenario")
    sp.add_argument("-m", type=int)
    sp.add_argument("--via", choices=["rose", "dipole"], default="rose")
    sp.add_argument("--cache", help="memo directory")

    sp = add("collapse", cmd_collapse, "contract a forest of edges")
    sp.add_argument("scenario")
    sp.add_argument("--edges", nargs="+", required=True)
    sp.add_argument("-o", "--output")

    sp = add("construct", cmd_construct, "build a vertex from an A-set file")
    sp.add_argument("asets")
    sp.add_argument("-o", "--output")
    return ap


def main(argv=None) -> int:
    saved_budget = os.environ.get("GRAPHDIST_NAIVE_BUDGET")
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("graphdist: a subcommand is required")
        if args.command == "bound" and args.bipartite and args.m is None:
            raise UsageError("graphdist bound: -m is required with --bipartite")
        if args.budget is not None:
            os.environ["GRAPHDIST_NAIVE_BUDGET"] = str(args.budget)
        args.func(args)
        return EXIT_OK
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, InfeasibleDistribution) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print("budget exceeded: %s" % exc, file=sys.stderr)
        return EXIT_BUDGET
    except FileNotFoundError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except (criteria.PreconditionError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    finally:
        # --budget applies to this invocation only
        if saved_budget is None:
            os.environ.pop("GRAPHDIST_NAIVE_BUDGET", None)
        else:
            os.environ["GRAPHDIST_NAIVE_BUDGET"] = saved_budget


if __name__ == "__main__":
    sys.exit(main())
