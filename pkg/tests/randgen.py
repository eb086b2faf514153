"""Seeded generators for small random graphs, match sets and patterns."""

import random

from gral.expr import Agg, Binary, Lit, Ref, Unary
from gral.graph import FALSE, TRUE, Const, Graph, Kind, Triple, Var, num, string, sym
from gral.patterns import Basic, Bind, Construct, Filter, Join, Union, pattern_vars

SYMBOLS = [sym(f"s{i}") for i in range(4)]
PREDICATES = [sym(f"p{i}") for i in range(3)]
VARIABLES = [Var(f"x{i}") for i in range(4)]


def data_graph(rng: random.Random, max_triples: int = 8, max_isolated: int = 2) -> Graph:
    """A constant-only graph over a small alphabet."""
    nodes = SYMBOLS + [num(1), num(2)]
    triples = [
        Triple(rng.choice(nodes), rng.choice(PREDICATES), rng.choice(nodes))
        for _ in range(rng.randint(0, max_triples))
    ]
    isolated = rng.sample(nodes, rng.randint(0, max_isolated))
    return Graph(isolated, triples)


def pattern_graph(rng: random.Random, max_vars: int = 4, max_triples: int = 4, var_predicates: bool = True) -> Graph:
    """A graph with at most ``max_vars`` variables, used as a basic pattern."""
    vs = VARIABLES[: rng.randint(0, max_vars)]
    nodes = vs + SYMBOLS[:2] if vs else SYMBOLS[:3]
    preds = PREDICATES + (vs if var_predicates else [])
    triples = [
        Triple(rng.choice(nodes), rng.choice(preds), rng.choice(nodes)) for _ in range(rng.randint(0, max_triples))
    ]
    isolated = [v for v in vs if rng.random() < 0.4]
    if rng.random() < 0.15:
        isolated.append(rng.choice(SYMBOLS))
    return Graph(isolated, triples)


def any_label(rng: random.Random):
    """Labels of every kind, for round-trip tests."""
    kind = rng.randrange(8)
    if kind == 0:
        return Var(rng.choice(["x", "y1", "Long_name", "z"]))
    if kind == 1:
        return sym(rng.choice(["a", "b_2", "Node", "COUNT", "WHERE", "err"]))
    if kind == 2:
        return num(rng.randint(-(2**63), 2**63 - 1) if rng.random() < 0.2 else rng.randint(-5, 5))
    if kind == 3:
        return num(rng.choice([0.5, -1.25, 1e20, 3.0, -0.0, 1e-7, rng.uniform(-1e6, 1e6)]))
    if kind == 4:
        alphabet = 'ab "\\\n\t#.{}é'
        return string("".join(rng.choice(alphabet) for _ in range(rng.randint(0, 6))))
    if kind == 5:
        return rng.choice([TRUE, FALSE])
    return sym(f"s{rng.randrange(3)}")


def any_graph(rng: random.Random, max_triples: int = 8) -> Graph:
    triples = [Triple(any_label(rng), any_label(rng), any_label(rng)) for _ in range(rng.randint(0, max_triples))]
    isolated = [any_label(rng) for _ in range(rng.randint(0, 3))]
    return Graph(isolated, triples)


def random_value(rng: random.Random) -> Const:
    return rng.choice([num(0), num(1), num(2), sym("s0"), TRUE, FALSE, Const(Kind.ERR), string("t")])


def random_expr(rng: random.Random, scope: list[Var], depth: int = 2):
    choices = ["lit", "var", "bin", "agg", "aggby", "not"] if depth > 0 else ["lit", "var"]
    kind = rng.choice(choices)
    if kind == "var" and scope:
        return Ref(rng.choice(scope))
    if kind == "bin":
        op = rng.choice(["ADD", "EQ", "LT", "CONCAT", "AND", "MUL"])
        return Binary(op, random_expr(rng, scope, depth - 1), random_expr(rng, scope, depth - 1))
    if kind == "not":
        return Unary("NOT", random_expr(rng, scope, depth - 1))
    if kind == "agg":
        return Agg(rng.choice(["COUNT", "SUM", "MAX"]), rng.random() < 0.3, random_expr(rng, scope, depth - 1))
    if kind == "aggby" and len(scope) >= 1:
        by = rng.choice(scope)
        rest = [v for v in scope if v != by]
        return Agg("COUNT", rng.random() < 0.3, random_expr(rng, rest, depth - 1), (Ref(by),))
    return Lit(random_value(rng))


def random_template(rng: random.Random, scope: list[Var]) -> Graph:
    pool = scope + [Var("new0"), Var("new1")] + SYMBOLS[:2]
    triples = [Triple(rng.choice(pool), rng.choice(PREDICATES), rng.choice(pool)) for _ in range(rng.randint(0, 2))]
    isolated = [v for v in pool[:3] if rng.random() < 0.3]
    return Graph(isolated, triples)


def random_pattern(rng: random.Random, depth: int = 3):
    """A well-formed pattern tree mixing every operator."""
    if depth == 0 or rng.random() < 0.25:
        return Basic(pattern_graph(rng, max_vars=3, max_triples=2))
    kind = rng.choice(["join", "bind", "filter", "construct", "union"])
    left = random_pattern(rng, depth - 1)
    scope = sorted(pattern_vars(left), key=lambda v: v.name)
    if kind == "join":
        return Join(left, random_pattern(rng, depth - 1))
    if kind == "bind":
        target = rng.choice(scope + [Var("b0"), Var("b1")]) if scope and rng.random() < 0.3 else Var(f"b{depth}")
        return Bind(left, random_expr(rng, scope), target)
    if kind == "filter":
        return Filter(left, random_expr(rng, scope))
    template = random_template(rng, scope)
    if kind == "construct":
        return Construct(left, template)
    other = random_pattern(rng, depth - 1)
    return Union(Construct(left, template), Construct(other, template))
