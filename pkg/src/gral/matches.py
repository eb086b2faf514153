"""Matches, sets of matches and the operations on them.

Everything derives from :func:`merge`: join, bind, filter and construct are
thin wrappers supplying a per-match family of match sets. Match sets are
real sets, so duplicates produced by restriction disappear.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Mapping
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Iterator

from .graph import (
    EMPTY,
    TRUE,
    Const,
    Graph,
    Label,
    Triple,
    Var,
    graph_union,
    image_of_graph,
    is_subgraph,
    render,
    union_all,
)


class AlgebraError(ValueError):
    pass


class Match(Mapping):
    """An assignment of labels to variables, hashable and immutable.

    Constants are fixed implicitly, so only variables are stored.
    """

    __slots__ = ("_d", "_hash")

    def __init__(self, assignment: Mapping[Var, Label] | Iterable = ()):
        self._d = dict(assignment)
        self._hash = None

    def __getitem__(self, key):
        return self._d[key]

    def __iter__(self):
        return iter(self._d)

    def __len__(self):
        return len(self._d)

    def __contains__(self, key):
        return key in self._d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Match):
            return self._d == other._d
        return NotImplemented

    def __repr__(self):
        inner = ", ".join(f"{k}: {render(v)}" for k, v in sorted(self._d.items(), key=lambda kv: kv[0].name))
        return "{" + inner + "}"

    def apply(self, label: Label) -> Label:
        return self._d.get(label, label) if isinstance(label, Var) else label

    def restricted(self, variables: Iterable[Var]) -> Match:
        return Match({v: self._d[v] for v in variables})


def compatible(m1: Mapping, m2: Mapping) -> bool:
    if len(m2) < len(m1):
        m1, m2 = m2, m1
    for k, v in m1.items():
        w = m2.get(k, v)
        if w != v:
            return False
    return True


def bowtie(m1: Mapping, m2: Mapping) -> Match:
    if not compatible(m1, m2):
        raise AlgebraError("incompatible matches")
    d = dict(m1)
    d.update(m2)
    return Match(d)


def sort_key(columns: tuple[Var, ...]) -> Callable[[Match], tuple[str, ...]]:
    return lambda m: tuple(render(m[c]) for c in columns)


@dataclass(frozen=True)
class MatchSet:
    """A set of matches from ``domain`` to ``range``.

    Iteration follows the canonical order: rows sorted by the rendered labels
    of the variables of the domain taken in name order.
    """

    domain: Graph
    range: Graph
    matches: frozenset

    def __init__(self, domain: Graph, range: Graph, matches: Iterable[Match] = ()):
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "range", range)
        object.__setattr__(self, "matches", frozenset(matches))

    @cached_property
    def columns(self) -> tuple[Var, ...]:
        return tuple(sorted(self.domain.variables, key=lambda v: v.name))

    @cached_property
    def ordered(self) -> tuple[Match, ...]:
        return tuple(sorted(self.matches, key=sort_key(self.columns)))

    def __iter__(self) -> Iterator[Match]:
        return iter(self.ordered)

    def __len__(self):
        return len(self.matches)

    def __contains__(self, m):
        return m in self.matches

    def check(self) -> None:
        """Raise AlgebraError unless every member is a match domain -> range."""
        variables = self.domain.variables
        for m in self.matches:
            if set(m) != variables:
                raise AlgebraError(f"match {m!r} does not assign exactly the domain variables")
            for n in self.domain.nodes:
                if m.apply(n) not in self.range.nodes:
                    raise AlgebraError(f"match {m!r} does not preserve node {render(n)}")
            for t in self.domain.triples:
                if Triple(*(m.apply(x) for x in t)) not in self.range.triples:
                    raise AlgebraError(f"match {m!r} does not preserve triple {t}")


def unit() -> MatchSet:
    """The single empty match over the empty graph; the unit of join."""
    return MatchSet(EMPTY, EMPTY, [Match()])


# -- enumeration of all matches ----------------------------------------------

def _triple_order(triples: Iterable[Triple]) -> list[Triple]:
    pending = sorted(triples, key=lambda t: tuple(map(render, t)))
    bound: set[Var] = set()
    order = []
    while pending:
        def free(t):
            return sum(1 for x in t if isinstance(x, Var) and x not in bound)
        best = min(pending, key=lambda t: (free(t), isinstance(t.predicate, Var)))
        pending.remove(best)
        order.append(best)
        bound.update(x for x in best if isinstance(x, Var))
    return order


def enumerate_matches(x: Graph, g: Graph) -> MatchSet:
    """All matches from ``x`` to ``g``.

    Backtracks over the triples of ``x`` (most bound positions first), using
    a predicate index on ``g``, then maps the remaining variable nodes to any
    node of ``g``.
    """
    for n in x.nodes:
        if isinstance(n, Const) and n not in g.nodes:
            return MatchSet(x, g)

    by_predicate: dict[Label, list[Triple]] = defaultdict(list)
    for t in g.triples:
        by_predicate[t.predicate].append(t)
    all_triples = list(g.triples)

    order = _triple_order(x.triples)
    var_nodes = sorted((n for n in x.nodes if isinstance(n, Var)), key=lambda v: v.name)
    g_nodes = list(g.nodes)
    found: list[Match] = []
    assignment: dict[Var, Label] = {}

    def unify(pattern: Triple, target: Triple) -> list[Var] | None:
        added = []
        for px, tx in zip(pattern, target):
            if isinstance(px, Var):
                cur = assignment.get(px)
                if cur is None:
                    assignment[px] = tx
                    added.append(px)
                elif cur != tx:
                    for v in added:
                        del assignment[v]
                    return None
            elif px != tx:
                for v in added:
                    del assignment[v]
                return None
        return added

    def nodes_step(i: int) -> None:
        if i == len(var_nodes):
            found.append(Match(assignment))
            return
        v = var_nodes[i]
        cur = assignment.get(v)
        if cur is not None:
            if cur in g.nodes:
                nodes_step(i + 1)
            return
        for n in g_nodes:
            assignment[v] = n
            nodes_step(i + 1)
        assignment.pop(v, None)

    def triples_step(i: int) -> None:
        if i == len(order):
            nodes_step(0)
            return
        t = order[i]
        pred = t.predicate
        if isinstance(pred, Var):
            candidates = by_predicate.get(assignment[pred], ()) if pred in assignment else all_triples
        else:
            candidates = by_predicate.get(pred, ())
        for target in candidates:
            added = unify(t, target)
            if added is None:
                continue
            triples_step(i + 1)
            for v in added:
                del assignment[v]

    triples_step(0)
    return MatchSet(x, g, found)


# -- the primitive operations --------------------------------------------------

def merge(ms: MatchSet, family: Callable[[Match], MatchSet], domain: Graph) -> MatchSet:
    """Merge ``ms`` along ``family``: ``{m ⋈ p | m in ms, p in family(m), m ~ p}``.

    ``domain`` is the common domain of the family's match sets; it has to be
    given explicitly because ``ms`` may be empty. The family is called once
    per match, in canonical order.
    """
    out = []
    ranges = [ms.range]
    for m in ms:
        pm = family(m)
        if pm.domain != domain:
            raise AlgebraError("family domain mismatch")
        ranges.append(pm.range)
        for p in pm.matches:
            if compatible(m, p):
                out.append(bowtie(m, p))
    return MatchSet(graph_union(ms.domain, domain), union_all(ranges), out)


def restrict(ms: MatchSet, y: Graph, h: Graph | None = None) -> MatchSet:
    if h is None:
        h = ms.range
    if not is_subgraph(y, ms.domain) or not is_subgraph(h, ms.range):
        raise AlgebraError("invalid restriction")
    variables = y.variables
    out = set()
    for m in ms.matches:
        r = m.restricted(variables)
        if h is not ms.range and not is_subgraph(image_of_graph(r, y), h):
            raise AlgebraError("invalid restriction")
        out.add(r)
    return MatchSet(y, h, out)


def extend(ms: MatchSet, h: Graph) -> MatchSet:
    if not is_subgraph(ms.range, h):
        raise AlgebraError("range not contained")
    return MatchSet(ms.domain, h, ms.matches)


# -- derived operations ----------------------------------------------------------

def join(a: MatchSet, b: MatchSet) -> MatchSet:
    return merge(a, lambda m: b, b.domain)


def bind(ms: MatchSet, values: Mapping[Match, Const], x: Var) -> MatchSet:
    """Merge with the one-match family ``{x -> values[m]}``.

    When ``x`` is new, each match is extended; when ``x`` is already a
    variable of the domain, only the matches with ``m(x) == values[m]`` stay.
    """
    domain = Graph([x])

    def family(m: Match) -> MatchSet:
        c = values[m]
        return MatchSet(domain, Graph([c]), [Match({x: c})])

    return merge(ms, family, domain)


class FreshNames:
    """Mints variables ``?_f1``, ``?_f2``, ... for one evaluation."""

    def __init__(self, prefix: str = "_f"):
        self.prefix = prefix
        self.count = 0

    def mint(self, avoid: frozenset | set = frozenset()) -> Var:
        while True:
            self.count += 1
            v = Var(f"{self.prefix}{self.count}")
            if v not in avoid:
                return v


def filter_matches(ms: MatchSet, values: Mapping[Match, Const]) -> MatchSet:
    """Keep the matches whose value is ``true``, via two binds and a restriction."""
    taken = ms.domain.variables
    i = 0
    while (x := Var(f"_filter{i}")) in taken:
        i += 1
    tagged = bind(ms, values, x)
    selected = bind(tagged, {m: TRUE for m in tagged.matches}, x)
    return restrict(selected, ms.domain, ms.range)


def construct(ms: MatchSet, r: Graph, fresh: FreshNames | None = None) -> MatchSet:
    """Matches from the template ``r``: shared variables keep their value,
    the others get one fresh variable per match."""
    if fresh is None:
        fresh = FreshNames()
    bound = ms.domain.variables
    template_vars = sorted(r.variables, key=lambda v: v.name)
    avoid = set(bound) | set(r.variables) | set(ms.range.variables)

    def family(m: Match) -> MatchSet:
        assignment = {}
        for v in template_vars:
            if v in bound:
                assignment[v] = m[v]
            else:
                w = fresh.mint(avoid)
                avoid.add(w)
                assignment[v] = w
        p = Match(assignment)
        return MatchSet(r, image_of_graph(p, r), [p])

    return restrict(merge(ms, family, r), r)


def union_matches(a: MatchSet, b: MatchSet) -> MatchSet:
    if a.domain != b.domain:
        raise AlgebraError("union domain mismatch")
    h = graph_union(a.range, b.range)
    return MatchSet(a.domain, h, extend(a, h).matches | extend(b, h).matches)


# -- assignment tables --------------------------------------------------------------

@dataclass(frozen=True)
class AssignmentTable:
    columns: tuple[str, ...]
    rows: tuple[tuple[Label, ...], ...]

    def rendered(self) -> list[list[str]]:
        return [[render(x) for x in row] for row in self.rows]

    def __len__(self):
        return len(self.rows)


def assignment_table(ms: MatchSet) -> AssignmentTable:
    cols = ms.columns
    rows = tuple(tuple(m[c] for c in cols) for m in ms)
    return AssignmentTable(tuple(str(c) for c in cols), rows)
