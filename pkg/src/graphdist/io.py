"""Text formats for scenarios, distributions and A-set files.

Scenario::

    outcomes 3
    node x
    node y
    edge t1 x y

Distribution (one block per edge, m rows of m rationals)::

    edge t1
    1/4 0 1/4
    0 1/4 0
    1/4 0 0

A-set file for ``construct``::

    family dipole          # dipole | bipartite | rose
    outcomes 3
    left 2                 # bipartite only: size of the left side
    set
    0 0
    1 2
    set
    ...

Dipole lines are ``a b`` pairs, bipartite lines are ``i_1 ... i_n1 -> j``
and rose lines list one cycle of outcomes.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .scenarios import GraphDistribution, InfeasibleDistribution, Scenario

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None,
                 source: str = "<input>"):
        self.message, self.line, self.col, self.source = message, line, col, source
        where = source
        if line is not None:
            where += ":%d" % line
            if col is not None:
                where += ":%d" % col
        super().__init__("%s: %s" % (where, message))


def _tokens(text: str):
    """Yield (line number, [(column, token), ...]) for non-blank lines."""
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", line)]
        if toks:
            yield ln, toks


def parse_rational(tok: str, line: int, col: int, source: str) -> Fraction:
    if not _RATIONAL.match(tok):
        raise ParseError("malformed rational %r" % tok, line, col, source)
    try:
        return Fraction(tok)
    except ZeroDivisionError:
        raise ParseError("zero denominator in %r" % tok, line, col, source) from None


def parse_scenario_text(text: str, source: str = "<input>") -> Scenario:
    m = None
    nodes: list[str] = []
    edges: list[tuple] = []
    for ln, toks in _tokens(text):
        kw = toks[0][1]
        if kw == "outcomes":
            if len(toks) != 2 or not toks[1][1].isdigit():
                raise ParseError("expected 'outcomes <m>'", ln, toks[0][0], source)
            m = int(toks[1][1])
            if m < 2:
                raise ParseError("need at least 2 outcomes", ln, toks[1][0], source)
        elif kw == "node":
            if len(toks) != 2:
                raise ParseError("expected 'node <id>'", ln, toks[0][0], source)
            if toks[1][1] in nodes:
                raise ParseError("duplicate node %s" % toks[1][1], ln, toks[1][0], source)
            nodes.append(toks[1][1])
        elif kw == "edge":
            if len(toks) != 4:
                raise ParseError("expected 'edge <id> <source> <target>'", ln, toks[0][0], source)
            for col, v in toks[2:]:
                if v not in nodes:
                    raise ParseError("unknown node %s" % v, ln, col, source)
            if any(e[0] == toks[1][1] for e in edges):
                raise ParseError("duplicate edge %s" % toks[1][1], ln, toks[1][0], source)
            edges.append((toks[1][1], toks[2][1], toks[3][1]))
        else:
            raise ParseError("unknown keyword %r" % kw, ln, toks[0][0], source)
    if m is None:
        raise ParseError("missing 'outcomes' line", None, None, source)
    if not edges:
        raise ParseError("scenario has no edges", None, None, source)
    return Scenario(nodes, edges, m)


def serialize_scenario(S: Scenario) -> str:
    lines = ["outcomes %d" % S.outcomes]
    lines += ["node %s" % v for v in S.nodes]
    lines += ["edge %s %s %s" % (e.id, e.source, e.target) for e in S.edges]
    return "\n".join(lines) + "\n"


def parse_distribution_text(text: str, S: Scenario, source: str = "<input>") -> GraphDistribution:
    m = S.outcomes
    known = {e.id for e in S.edges}
    mats: dict[str, list] = {}
    starts: dict[str, int] = {}
    current = None
    for ln, toks in _tokens(text):
        if toks[0][1] == "edge":
            if current is not None and len(mats[current]) != m:
                raise ParseError("edge %s has %d rows, expected %d" % (current, len(mats[current]), m),
                                 ln, 1, source)
            if len(toks) != 2:
                raise ParseError("expected 'edge <id>'", ln, toks[0][0], source)
            eid = toks[1][1]
            if eid not in known:
                raise ParseError("unknown edge %s" % eid, ln, toks[1][0], source)
            if eid in mats:
                raise ParseError("edge %s given twice" % eid, ln, toks[1][0], source)
            current = eid
            mats[eid] = []
            starts[eid] = ln
            continue
        if current is None:
            raise ParseError("matrix row before any 'edge' line", ln, toks[0][0], source)
        if len(mats[current]) == m:
            raise ParseError("edge %s has more than %d rows" % (current, m), ln, toks[0][0], source)
        if len(toks) != m:
            raise ParseError("expected %d entries, found %d" % (m, len(toks)), ln, toks[0][0], source)
        mats[current].append([parse_rational(t, ln, c, source) for c, t in toks])
    if current is not None and len(mats[current]) != m:
        raise ParseError("edge %s has %d rows, expected %d" % (current, len(mats[current]), m),
                         starts[current], 1, source)
    missing = [e.id for e in S.edges if e.id not in mats]
    if missing:
        raise ParseError("no matrix for edge %s" % missing[0], None, None, source)
    try:
        return GraphDistribution(S, mats)
    except InfeasibleDistribution as exc:
        hit = re.match(r"edge (\S+) ", str(exc))
        line = starts.get(hit.group(1)) if hit else None
        raise ParseError(str(exc), line, None, source) from None


def serialize_distribution(p: GraphDistribution) -> str:
    lines = []
    for e, M in zip(p.scenario.edges, p.matrices):
        lines.append("edge %s" % e.id)
        lines += [" ".join(str(v) for v in r) for r in M]
    return "\n".join(lines) + "\n"


def parse_scenario(path: str | Path) -> Scenario:
    return parse_scenario_text(Path(path).read_text(), str(path))


def parse_distribution(path: str | Path, S: Scenario) -> GraphDistribution:
    return parse_distribution_text(Path(path).read_text(), S, str(path))


@dataclass(frozen=True)
class ASetSpec:
    family: str
    m: int
    left: int | None
    sets: tuple  # tuple of tuples of index tuples
    injections: tuple | None  # bipartite only: one dict per set


def parse_asets_text(text: str, source: str = "<input>") -> ASetSpec:
    family = m = left = None
    sets: list[list[tuple]] = []
    maps: list[dict] = []
    for ln, toks in _tokens(text):
        kw = toks[0][1]
        if kw == "family":
            if len(toks) != 2 or toks[1][1] not in ("dipole", "bipartite", "rose"):
                raise ParseError("expected 'family dipole|bipartite|rose'", ln, toks[0][0], source)
            family = toks[1][1]
        elif kw in ("outcomes", "left"):
            if len(toks) != 2 or not toks[1][1].isdigit():
                raise ParseError("expected '%s <count>'" % kw, ln, toks[0][0], source)
            if kw == "outcomes":
                m = int(toks[1][1])
            else:
                left = int(toks[1][1])
        elif kw == "set":
            sets.append([])
            maps.append({})
        else:
            if not sets:
                raise ParseError("point before any 'set' line", ln, toks[0][0], source)
            words = [t for _, t in toks]
            target = None
            if "->" in words:
                k = words.index("->")
                if k != len(words) - 2:
                    raise ParseError("expected '<indices> -> <outcome>'", ln, toks[0][0], source)
                target = words[-1]
                toks = toks[:k]
            vals = []
            for col, t in toks + ([(0, target)] if target is not None else []):
                if not re.match(r"^\d+$", t):
                    raise ParseError("expected a nonnegative integer, got %r" % t, ln, col, source)
                vals.append(int(t))
            if target is not None:
                pt = tuple(vals[:-1])
                maps[-1][pt] = vals[-1]
            else:
                pt = tuple(vals)
            sets[-1].append(pt)
    if family is None or m is None:
        raise ParseError("need 'family' and 'outcomes' lines", None, None, source)
    if family == "bipartite":
        if left is None:
            raise ParseError("bipartite A-set files need a 'left' line", None, None, source)
        if any(len(mp) != len(S_) for mp, S_ in zip(maps, sets)):
            raise ParseError("every bipartite point needs '-> <outcome>'", None, None, source)
    if not sets or any(not S_ for S_ in sets):
        raise ParseError("need at least one nonempty set", None, None, source)
    return ASetSpec(family, m, left, tuple(tuple(S_) for S_ in sets),
                    tuple(maps) if family == "bipartite" else None)
