"""Expressions and their evaluation against a set of matches.

The value of an expression is a family of constants indexed by the matches.
Basic operators act pointwise; an aggregate without BY gives one value for
the whole set, and with BY one value per group of matches agreeing on the
group expressions. Anomalies evaluate to ``err``, which absorbs every basic
operator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .graph import ERR, INT_MAX, INT_MIN, Const, Kind, Label, Var, boolean, render, string
from .matches import Match, MatchSet

UNARY_OPS = ("NEG", "NOT")
BINARY_OPS = ("ADD", "SUB", "MUL", "DIV", "EQ", "GT", "LT", "AND", "OR", "CONCAT")
AGG_OPS = ("COUNT", "MAX", "MIN", "SUM", "AVG")


@dataclass(frozen=True)
class Expr:
    span: object = field(default=None, compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class Lit(Expr):
    value: Const


@dataclass(frozen=True)
class Ref(Expr):
    var: Var


@dataclass(frozen=True)
class Unary(Expr):
    op: str
    arg: Expr


@dataclass(frozen=True)
class Binary(Expr):
    op: str
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Agg(Expr):
    op: str
    distinct: bool
    arg: Expr
    by: tuple[Expr, ...] | None = None

    def __post_init__(self):
        if self.by is not None and not self.by:
            raise ValueError("a BY group needs at least one expression")


def in_scope_vars(e: Expr) -> frozenset[Var]:
    """Variables an expression needs from the pattern; BY groups do not count."""
    if isinstance(e, Lit):
        return frozenset()
    if isinstance(e, Ref):
        return frozenset([e.var])
    if isinstance(e, Unary):
        return in_scope_vars(e.arg)
    if isinstance(e, Binary):
        return in_scope_vars(e.lhs) | in_scope_vars(e.rhs)
    if isinstance(e, Agg):
        return in_scope_vars(e.arg)
    raise TypeError(f"not an expression: {e!r}")


def all_vars(e: Expr) -> frozenset[Var]:
    if isinstance(e, Agg):
        out = all_vars(e.arg)
        for g in e.by or ():
            out |= all_vars(g)
        return out
    if isinstance(e, Unary):
        return all_vars(e.arg)
    if isinstance(e, Binary):
        return all_vars(e.lhs) | all_vars(e.rhs)
    return in_scope_vars(e)


def check_expr(e: Expr, scope: Iterable[Var]) -> list[tuple[object, str]]:
    """Static problems of ``e`` against the variables ``scope`` of a pattern.

    Every variable, including those of BY groups, must be bound by the
    pattern, and the variables of a BY group must not occur in the
    aggregated expression.
    """
    scope = frozenset(scope)
    problems = []

    def walk(x: Expr):
        if isinstance(x, Ref):
            if x.var not in scope:
                problems.append((x.span, f"variable {x.var} is not in scope"))
        elif isinstance(x, Unary):
            walk(x.arg)
        elif isinstance(x, Binary):
            walk(x.lhs)
            walk(x.rhs)
        elif isinstance(x, Agg):
            walk(x.arg)
            if x.by is not None:
                inner = all_vars(x.arg)
                for g in x.by:
                    clash = all_vars(g) & inner
                    if clash:
                        names = ", ".join(sorted(map(str, clash)))
                        problems.append((g.span or x.span, f"BY group shares variables with the aggregated expression: {names}"))
                    walk(g)

    walk(e)
    return problems


# -- basic operators ------------------------------------------------------------

def _is_num(c: Label) -> bool:
    return isinstance(c, Const) and c.kind in (Kind.INT, Kind.FLOAT)


def _make_number(value) -> Const:
    if isinstance(value, int):
        if INT_MIN <= value <= INT_MAX:
            return Const(Kind.INT, value)
        return ERR
    try:
        return Const(Kind.FLOAT, float(value))
    except ValueError:  # inf / nan
        return ERR


def _text(c: Label) -> str | None:
    if not isinstance(c, Const) or c.kind is Kind.ERR:
        return None
    if c.kind in (Kind.STR, Kind.SYMBOL):
        return c.value
    return render(c)


def apply_unary(op: str, a: Label) -> Const:
    if op == "NEG":
        if _is_num(a):
            return _make_number(-a.value)
        return ERR
    if op == "NOT":
        if isinstance(a, Const) and a.kind is Kind.BOOL:
            return boolean(not a.value)
        return ERR
    raise ValueError(f"unknown unary operator {op}")


def apply_binary(op: str, a: Label, b: Label) -> Const:
    if a == ERR or b == ERR:
        return ERR
    if op in ("ADD", "SUB", "MUL", "DIV"):
        if not (_is_num(a) and _is_num(b)):
            return ERR
        x, y = a.value, b.value
        if op == "ADD":
            return _make_number(x + y if type(x) is type(y) else float(x) + float(y))
        if op == "SUB":
            return _make_number(x - y if type(x) is type(y) else float(x) - float(y))
        if op == "MUL":
            return _make_number(x * y if type(x) is type(y) else float(x) * float(y))
        if y == 0:
            return ERR
        return _make_number(float(x) / float(y))
    if op == "EQ":
        if _is_num(a) and _is_num(b):
            return boolean(a.value == b.value)
        return boolean(a == b)
    if op in ("GT", "LT"):
        if _is_num(a) and _is_num(b):
            x, y = a.value, b.value
        elif isinstance(a, Const) and isinstance(b, Const) and a.kind == b.kind and a.kind in (Kind.STR, Kind.SYMBOL):
            x, y = a.value, b.value
        else:
            return ERR
        return boolean(x > y if op == "GT" else x < y)
    if op in ("AND", "OR"):
        if not all(isinstance(c, Const) and c.kind is Kind.BOOL for c in (a, b)):
            return ERR
        return boolean(a.value and b.value if op == "AND" else a.value or b.value)
    if op == "CONCAT":
        x, y = _text(a), _text(b)
        if x is None or y is None:
            return ERR
        return string(x + y)
    raise ValueError(f"unknown binary operator {op}")


# -- aggregates -------------------------------------------------------------------

def apply_aggregate(op: str, distinct: bool, values: Sequence[Label]) -> Const:
    """Aggregate a multiset. DISTINCT first reduces it to its underlying set.

    COUNT counts every element (err included); the numeric aggregates give
    err on any non-numeric element. SUM and COUNT of nothing are 0, the
    others are err.
    """
    if distinct:
        values = list(dict.fromkeys(values))
    if op == "COUNT":
        return Const(Kind.INT, len(values))
    if not all(_is_num(v) for v in values):
        return ERR
    if op == "SUM":
        if all(v.kind is Kind.INT for v in values):
            return _make_number(sum(v.value for v in values))
        return _make_number(sum(float(v.value) for v in values))
    if not values:
        return ERR
    if op == "AVG":
        if all(v.kind is Kind.INT for v in values):
            return _make_number(sum(v.value for v in values) / len(values))
        return _make_number(sum(float(v.value) for v in values) / len(values))
    if op == "MAX":
        return max(values, key=lambda v: v.value)
    if op == "MIN":
        return min(values, key=lambda v: v.value)
    raise ValueError(f"unknown aggregate {op}")


# -- evaluation --------------------------------------------------------------------

def _as_constant(label: Label) -> Const:
    return label if isinstance(label, Const) else ERR


def _values(matches: Sequence[Match], e: Expr) -> list[Const]:
    n = len(matches)
    if isinstance(e, Lit):
        return [e.value] * n
    if isinstance(e, Ref):
        return [_as_constant(m[e.var]) for m in matches]
    if isinstance(e, Unary):
        return [apply_unary(e.op, a) for a in _values(matches, e.arg)]
    if isinstance(e, Binary):
        lhs = _values(matches, e.lhs)
        rhs = _values(matches, e.rhs)
        return [apply_binary(e.op, a, b) for a, b in zip(lhs, rhs)]
    if isinstance(e, Agg):
        if e.by is None:
            return [apply_aggregate(e.op, e.distinct, _values(matches, e.arg))] * n
        keys = list(zip(*(_values(matches, g) for g in e.by)))
        groups: dict[tuple, list[int]] = {}
        for i, k in enumerate(keys):
            groups.setdefault(k, []).append(i)
        out: list[Const] = [ERR] * n
        for members in groups.values():
            sub = [matches[i] for i in members]
            value = apply_aggregate(e.op, e.distinct, _values(sub, e.arg))
            for i in members:
                out[i] = value
        return out
    raise TypeError(f"not an expression: {e!r}")


def eval_expr(ms: MatchSet, e: Expr) -> dict[Match, Const]:
    """The value family of ``e`` with respect to ``ms``.

    A variable bound to a variable label has no constant value and yields
    err wherever it occurs.
    """
    missing = in_scope_vars(e) - ms.domain.variables
    if missing:
        raise ValueError(f"expression is not over the domain: {', '.join(sorted(map(str, missing)))}")
    matches = ms.ordered
    return dict(zip(matches, _values(matches, e)))


def eval_group(ms: MatchSet, group: Sequence[Expr]) -> dict[Match, tuple[Const, ...]]:
    columns = [eval_expr(ms, g) for g in group]
    return {m: tuple(col[m] for col in columns) for m in ms.ordered}


def expressions_equivalent_bounded(e1: Expr, e2: Expr, corpus: Iterable[MatchSet]) -> bool:
    """Same value family on every match set of ``corpus``; a bounded check only."""
    return all(eval_expr(ms, e1) == eval_expr(ms, e2) for ms in corpus)


def family_values(family: Mapping[Match, Const], ms: MatchSet) -> list[Const]:
    """The family listed in the canonical order of ``ms``."""
    return [family[m] for m in ms]
