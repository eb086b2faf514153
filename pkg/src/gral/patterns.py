"""Patterns, queries and their evaluation.

A pattern evaluates over a graph ``G`` to a set of matches from a graph
that depends only on the pattern to a graph containing ``G``. Subpatterns
are always evaluated first, left before right, and the right operand of
JOIN and UNION is evaluated over the range produced by the left one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .expr import Expr, check_expr, eval_expr
from .graph import Const, Graph, Kind, Triple, Var, find_isomorphism, image_of_graph_by_set, union_all
from .matches import (
    FreshNames,
    MatchSet,
    bind,
    construct,
    enumerate_matches,
    filter_matches,
    join,
    union_matches,
)


@dataclass(frozen=True)
class Pattern:
    span: object = field(default=None, compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class Basic(Pattern):
    graph: Graph


@dataclass(frozen=True)
class Join(Pattern):
    left: Pattern
    right: Pattern


@dataclass(frozen=True)
class Bind(Pattern):
    left: Pattern
    expr: Expr
    var: Var


@dataclass(frozen=True)
class Filter(Pattern):
    left: Pattern
    expr: Expr


@dataclass(frozen=True)
class Construct(Pattern):
    left: Pattern
    template: Graph


@dataclass(frozen=True)
class Union(Pattern):
    left: Pattern
    right: Pattern


@dataclass(frozen=True)
class Query:
    pattern: Pattern
    span: object = field(default=None, compare=False, repr=False)

    @property
    def template(self) -> Graph:
        t = template_of(self.pattern)
        if t is None:
            raise ValidationError([(self.span, "a query needs a CONSTRUCT or UNION pattern")])
        return t


class ValidationError(ValueError):
    def __init__(self, problems: list[tuple[object, str]]):
        self.problems = problems
        super().__init__("; ".join(msg for _, msg in problems))


def pattern_vars(p: Pattern) -> frozenset[Var]:
    """In-scope variables of a pattern."""
    if isinstance(p, Basic):
        return p.graph.variables
    if isinstance(p, Join):
        return pattern_vars(p.left) | pattern_vars(p.right)
    if isinstance(p, Bind):
        return pattern_vars(p.left) | {p.var}
    if isinstance(p, Filter):
        return pattern_vars(p.left)
    if isinstance(p, Construct):
        return p.template.variables
    if isinstance(p, Union):
        t = template_of(p)
        return t.variables if t is not None else pattern_vars(p.left)
    raise TypeError(f"not a pattern: {p!r}")


def template_of(p: Pattern) -> Graph | None:
    if isinstance(p, Construct):
        return p.template
    if isinstance(p, Union):
        return template_of(p.left)
    return None


def subpatterns(p: Pattern) -> list[Pattern]:
    if isinstance(p, (Join, Union)):
        return [p.left, p.right]
    if isinstance(p, (Bind, Filter, Construct)):
        return [p.left]
    return []


def validate_pattern(p: Pattern) -> list[tuple[object, str]]:
    problems: list[tuple[object, str]] = []

    def walk(q: Pattern):
        for sub in subpatterns(q):
            walk(sub)
        if isinstance(q, (Bind, Filter)):
            problems.extend(check_expr(q.expr, pattern_vars(q.left)))
        elif isinstance(q, Union):
            t1, t2 = template_of(q.left), template_of(q.right)
            if t1 is None or t2 is None:
                problems.append((q.span, "both sides of UNION need a template"))
            elif t1 != t2:
                problems.append((q.span, "the two sides of UNION have different templates"))

    walk(p)
    return problems


def validate_query(q: Query) -> list[tuple[object, str]]:
    problems = validate_pattern(q.pattern)
    if not isinstance(q.pattern, (Construct, Union)):
        problems.insert(0, (q.span, "a query needs a CONSTRUCT or UNION pattern"))
    return problems


def check_pattern(p: Pattern) -> None:
    problems = validate_pattern(p)
    if problems:
        raise ValidationError(problems)


Trace = Callable[[Pattern, MatchSet], None]


def eval_pattern(p: Pattern, g: Graph, fresh: FreshNames | None = None, trace: Trace | None = None) -> MatchSet:
    """Evaluate ``p`` over ``g``. One ``fresh`` context must be shared by a
    whole evaluation so that fresh variables never collide."""
    if fresh is None:
        fresh = FreshNames()

    def ev(q: Pattern, graph: Graph) -> MatchSet:
        if isinstance(q, Basic):
            out = enumerate_matches(q.graph, graph)
        elif isinstance(q, Join):
            left = ev(q.left, graph)
            out = join(left, ev(q.right, left.range))
        elif isinstance(q, Union):
            left = ev(q.left, graph)
            out = union_matches(left, ev(q.right, left.range))
        elif isinstance(q, Bind):
            left = ev(q.left, graph)
            out = bind(left, eval_expr(left, q.expr), q.var)
        elif isinstance(q, Filter):
            left = ev(q.left, graph)
            out = filter_matches(left, eval_expr(left, q.expr))
        elif isinstance(q, Construct):
            out = construct(ev(q.left, graph), q.template, fresh)
        else:
            raise TypeError(f"not a pattern: {q!r}")
        if trace is not None:
            trace(q, out)
        return out

    return ev(p, g)


def run_query(q: Query, g: Graph, fresh: FreshNames | None = None, trace: Trace | None = None) -> Graph:
    """The result graph: the image of the template by the pattern's matches."""
    template = q.template
    ms = eval_pattern(q.pattern, g, fresh, trace)
    return image_of_graph_by_set(ms.matches, template)


# -- bounded equivalence checks ------------------------------------------------

_ROW = "\0row"


def _with_table(ms: MatchSet) -> Graph:
    encoded = []
    rows = []
    for i, m in enumerate(ms.ordered):
        row = Var(f"{_ROW}{i}")
        rows.append(row)
        for v in ms.columns:
            encoded.append(Triple(row, Const(Kind.STR, f"\0col{v}"), m[v]))
    return union_all([ms.range, Graph(rows, encoded)])


def matchsets_isomorphic(a: MatchSet, b: MatchSet, fixed: Iterable[Var] = ()) -> bool:
    """Equal up to a renaming of the variables outside ``fixed`` (fresh ones)."""
    if a.domain != b.domain or len(a) != len(b):
        return False
    return find_isomorphism(_with_table(a), _with_table(b), fixed) is not None


def patterns_equivalent_bounded(p1: Pattern, p2: Pattern, corpus: Iterable[Graph]) -> bool:
    """Same value over every graph of ``corpus``, up to the choice of fresh names."""
    for g in corpus:
        a = eval_pattern(p1, g)
        b = eval_pattern(p2, g)
        if not matchsets_isomorphic(a, b, fixed=g.variables):
            return False
    return True


def queries_equivalent_bounded(q1: Query, q2: Query, corpus: Iterable[Graph]) -> bool:
    if q1.template != q2.template:
        return False
    return all(
        find_isomorphism(run_query(q1, g), run_query(q2, g), g.variables) is not None for g in corpus
    )
