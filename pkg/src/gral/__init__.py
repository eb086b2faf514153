"""GrAL: a graph-to-graph query language over graphs with isolated nodes."""

from .expr import apply_aggregate, eval_expr, eval_group, in_scope_vars
from .graph import (
    ERR,
    FALSE,
    TRUE,
    Const,
    Graph,
    Kind,
    Triple,
    Var,
    graph_union,
    graphs_isomorphic,
    image_of_graph,
    image_of_graph_by_set,
    is_subgraph,
    num,
    string,
    sym,
    var,
)
from .matches import (
    AssignmentTable,
    FreshNames,
    Match,
    MatchSet,
    assignment_table,
    bind,
    bowtie,
    compatible,
    construct,
    enumerate_matches,
    extend,
    filter_matches,
    join,
    merge,
    restrict,
    union_matches,
)
from .patterns import (
    Query,
    eval_pattern,
    pattern_vars,
    patterns_equivalent_bounded,
    run_query,
    template_of,
)
from .serialize import serialize_graph, serialize_table
from .syntax import ParseError, parse_expr, parse_graph, parse_pattern, parse_query

__version__ = "0.1.0"

__all__ = [
    "apply_aggregate",
    "eval_expr",
    "eval_group",
    "in_scope_vars",
    "ERR",
    "FALSE",
    "TRUE",
    "Const",
    "Graph",
    "Kind",
    "Triple",
    "Var",
    "graph_union",
    "graphs_isomorphic",
    "image_of_graph",
    "image_of_graph_by_set",
    "is_subgraph",
    "num",
    "string",
    "sym",
    "var",
    "AssignmentTable",
    "FreshNames",
    "Match",
    "MatchSet",
    "assignment_table",
    "bind",
    "bowtie",
    "compatible",
    "construct",
    "enumerate_matches",
    "extend",
    "filter_matches",
    "join",
    "merge",
    "restrict",
    "union_matches",
    "Query",
    "eval_pattern",
    "pattern_vars",
    "patterns_equivalent_bounded",
    "run_query",
    "template_of",
    "serialize_graph",
    "serialize_table",
    "ParseError",
    "parse_expr",
    "parse_graph",
    "parse_pattern",
    "parse_query",
]
