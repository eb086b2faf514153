"""Labels, triples and graphs that may contain isolated nodes.

A graph is a set of nodes plus a set of triples whose subjects and objects
are nodes. Predicates need not be nodes. Labels are either constants or
variables; graphs are immutable values.
"""

from __future__ import annotations

import enum
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Union

FRESH_PREFIX = "_"  # variable names starting with this are minted by the engine


class Kind(enum.IntEnum):
    SYMBOL = 0
    INT = 1
    FLOAT = 2
    STR = 3
    BOOL = 4
    ERR = 5


INT_MIN = -(2**63)
INT_MAX = 2**63 - 1


@dataclass(frozen=True, slots=True)
class Const:
    """A constant label. ``kind`` keeps ``1``, ``1.0``, ``true`` and ``"1"`` apart."""

    kind: Kind
    value: object = None

    def __post_init__(self):
        if self.kind is Kind.INT:
            if type(self.value) is not int or not INT_MIN <= self.value <= INT_MAX:
                raise ValueError(f"not a 64-bit integer: {self.value!r}")
        elif self.kind is Kind.FLOAT:
            if type(self.value) is not float or not math.isfinite(self.value):
                raise ValueError(f"not a finite float: {self.value!r}")
        elif self.kind is Kind.BOOL:
            if type(self.value) is not bool:
                raise ValueError(f"not a boolean: {self.value!r}")
        elif self.kind in (Kind.SYMBOL, Kind.STR):
            if not isinstance(self.value, str):
                raise ValueError(f"not a string: {self.value!r}")
            if self.kind is Kind.SYMBOL and not self.value:
                raise ValueError("empty symbol")
        elif self.value is not None:
            raise ValueError("err carries no value")

    def __str__(self):
        return render(self)


@dataclass(frozen=True, slots=True)
class Var:
    """A variable label; ``name`` excludes the leading ``?``."""

    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("empty variable name")

    @property
    def is_fresh(self) -> bool:
        return self.name.startswith(FRESH_PREFIX)

    def __str__(self):
        return "?" + self.name


Label = Union[Const, Var]

ERR = Const(Kind.ERR)
TRUE = Const(Kind.BOOL, True)
FALSE = Const(Kind.BOOL, False)


def sym(name: str) -> Const:
    return Const(Kind.SYMBOL, name)


def num(value: int | float) -> Const:
    if isinstance(value, bool):
        raise TypeError("use boolean() for booleans")
    if isinstance(value, int):
        return Const(Kind.INT, value)
    return Const(Kind.FLOAT, float(value))


def string(value: str) -> Const:
    return Const(Kind.STR, value)


def boolean(value: bool) -> Const:
    return TRUE if value else FALSE


def var(name: str) -> Var:
    return Var(name[1:] if name.startswith("?") else name)


_ESCAPES = {'"': '\\"', "\\": "\\\\", "\n": "\\n", "\t": "\\t", "\r": "\\r"}


def quote(text: str) -> str:
    return '"' + "".join(_ESCAPES.get(ch, ch) for ch in text) + '"'


def render_float(value: float) -> str:
    text = repr(value)
    if "." not in text:
        # 1e+20 -> 1.0e+20: a decimal point is what marks a float
        mantissa, _, exponent = text.partition("e")
        text = mantissa + ".0" + ("e" + exponent if exponent else "")
    return text


def render(label: Label) -> str:
    """Concrete text of a label, as written in graph files and tables."""
    if isinstance(label, Var):
        return "?" + label.name
    kind = label.kind
    if kind is Kind.SYMBOL:
        return label.value
    if kind is Kind.INT:
        return str(label.value)
    if kind is Kind.FLOAT:
        return render_float(label.value)
    if kind is Kind.STR:
        return quote(label.value)
    if kind is Kind.BOOL:
        return "true" if label.value else "false"
    return "!err"


def label_key(label: Label) -> str:
    return render(label)


@dataclass(frozen=True, slots=True)
class Triple:
    subject: Label
    predicate: Label
    object: Label

    def __iter__(self):
        return iter((self.subject, self.predicate, self.object))

    def __str__(self):
        return f"{render(self.subject)} {render(self.predicate)} {render(self.object)}"


def triple_key(t: Triple) -> tuple[str, str, str]:
    return (render(t.subject), render(t.predicate), render(t.object))


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """A node set and a triple set over labels.

    Subjects and objects of triples are added to the node set automatically,
    so any iterable of triples plus extra (isolated) nodes builds a valid graph.
    """

    nodes: frozenset = field(default_factory=frozenset)
    triples: frozenset = field(default_factory=frozenset)

    def __init__(self, nodes: Iterable[Label] = (), triples: Iterable[Triple] = ()):
        triples = frozenset(triples)
        nodes = set(nodes)
        for t in triples:
            nodes.add(t.subject)
            nodes.add(t.object)
        object.__setattr__(self, "nodes", frozenset(nodes))
        object.__setattr__(self, "triples", triples)

    @classmethod
    def of(cls, *items) -> Graph:
        """Build from ``(s, p, o)`` tuples and lone labels (isolated nodes)."""
        nodes, triples = [], []
        for item in items:
            if isinstance(item, Triple):
                triples.append(item)
            elif isinstance(item, tuple):
                triples.append(Triple(*item))
            else:
                nodes.append(item)
        return cls(nodes, triples)

    @cached_property
    def predicates(self) -> frozenset:
        return frozenset(t.predicate for t in self.triples)

    @cached_property
    def labels(self) -> frozenset:
        return self.nodes | self.predicates

    @cached_property
    def variables(self) -> frozenset:
        return frozenset(x for x in self.labels if isinstance(x, Var))

    @cached_property
    def constants(self) -> frozenset:
        return frozenset(x for x in self.labels if isinstance(x, Const))

    @cached_property
    def isolated(self) -> frozenset:
        touched = set()
        for t in self.triples:
            touched.add(t.subject)
            touched.add(t.object)
        return self.nodes - touched

    def is_empty(self) -> bool:
        return not self.nodes and not self.triples

    def __or__(self, other: Graph) -> Graph:
        return graph_union(self, other)

    def __le__(self, other: Graph) -> bool:
        return is_subgraph(self, other)

    def __repr__(self):
        return f"Graph({sorted(map(str, self.triples))}, isolated={sorted(map(render, self.isolated))})"

    def check(self) -> None:
        for t in self.triples:
            if t.subject not in self.nodes or t.object not in self.nodes:
                raise GraphError(f"triple {t} has a subject or object that is not a node")


EMPTY = Graph()


def graph_union(a: Graph, b: Graph) -> Graph:
    if b.is_empty():
        return a
    if a.is_empty():
        return b
    return Graph(a.nodes | b.nodes, a.triples | b.triples)


def union_all(graphs: Iterable[Graph]) -> Graph:
    nodes, triples = set(), set()
    for g in graphs:
        nodes |= g.nodes
        triples |= g.triples
    return Graph(nodes, triples)


def is_subgraph(a: Graph, b: Graph) -> bool:
    return a.nodes <= b.nodes and a.triples <= b.triples


def _apply(f: Mapping[Var, Label], label: Label) -> Label:
    if isinstance(label, Var):
        try:
            return f[label]
        except KeyError:
            raise GraphError(f"unbound variable in image: {label}") from None
    return label


def image_of_graph(f: Mapping[Var, Label], x: Graph) -> Graph:
    """The graph ``f(x)``: ``f`` extended to fix constants, applied to nodes and triples."""
    nodes = [_apply(f, n) for n in x.nodes]
    triples = [Triple(_apply(f, s), _apply(f, p), _apply(f, o)) for s, p, o in x.triples]
    return Graph(nodes, triples)


def image_of_graph_by_set(fs: Iterable[Mapping[Var, Label]], x: Graph) -> Graph:
    nodes, triples = set(), set()
    for f in fs:
        image = image_of_graph(f, x)
        nodes |= image.nodes
        triples |= image.triples
    return Graph(nodes, triples)


def rename_variables(g: Graph, renaming: Mapping[Var, Label]) -> Graph:
    """Apply ``renaming`` to the variables it mentions, leaving the others alone."""
    full = {v: renaming.get(v, v) for v in g.variables}
    return image_of_graph(full, g)


# -- isomorphism up to variable renaming ------------------------------------

_HOLE = "\0var"


def _signatures(g: Graph) -> dict[Var, tuple]:
    occ: dict[Var, list] = defaultdict(list)
    for t in g.triples:
        parts = tuple(_HOLE if isinstance(x, Var) else render(x) for x in t)
        for pos, x in enumerate(t):
            if isinstance(x, Var):
                same = tuple(i for i, y in enumerate(t) if y == x)
                occ[x].append((pos, same, parts))
    sigs = {}
    for v in g.variables:
        sigs[v] = (v in g.nodes, tuple(sorted(occ.get(v, ()))))
    return sigs


def find_isomorphism(a: Graph, b: Graph, fixed: Iterable[Var] = ()) -> dict[Var, Var] | None:
    """A variable bijection carrying ``a`` onto ``b``, or None.

    Variables in ``fixed`` must map to themselves. Backtracking over
    candidates with equal occurrence signatures.
    """
    if len(a.nodes) != len(b.nodes) or len(a.triples) != len(b.triples):
        return None
    if a.constants != b.constants:
        return None
    if {n for n in a.nodes if isinstance(n, Const)} != {n for n in b.nodes if isinstance(n, Const)}:
        return None
    va, vb = a.variables, b.variables
    if len(va) != len(vb):
        return None
    fixed = frozenset(fixed)
    sa, sb = _signatures(a), _signatures(b)
    if Counter(sa.values()) != Counter(sb.values()):
        return None

    mapping: dict[Var, Var] = {}
    for v in fixed & va:
        if v not in vb or sa[v] != sb[v]:
            return None
        mapping[v] = v
    used = set(mapping.values())
    free_b = [w for w in vb if w not in fixed]
    by_sig: dict[tuple, list[Var]] = defaultdict(list)
    for w in free_b:
        by_sig[sb[w]].append(w)

    triples_by_var: dict[Var, list[Triple]] = defaultdict(list)
    for t in a.triples:
        for x in set(t):
            if isinstance(x, Var):
                triples_by_var[x].append(t)

    # most-connected first, then neighbours of already ordered variables
    order: list[Var] = []
    remaining = set(va) - set(mapping)
    placed = set(mapping)
    while remaining:
        def score(v):
            links = sum(1 for t in triples_by_var[v] for x in t if x in placed)
            return (-links, -len(triples_by_var[v]), str(v))
        v = min(remaining, key=score)
        order.append(v)
        placed.add(v)
        remaining.discard(v)

    def consistent(v: Var) -> bool:
        for t in triples_by_var[v]:
            if all(not isinstance(x, Var) or x in mapping for x in t):
                if Triple(*(mapping.get(x, x) for x in t)) not in b.triples:
                    return False
        return True

    def search(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in by_sig[sa[v]]:
            if w in used:
                continue
            mapping[v] = w
            used.add(w)
            if consistent(v) and search(i + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    if not all(consistent(v) for v in list(mapping)):
        return None
    if search(0):
        return mapping
    return None


def graphs_isomorphic(a: Graph, b: Graph, fixed: Iterable[Var] = ()) -> bool:
    return find_isomorphism(a, b, fixed) is not None
