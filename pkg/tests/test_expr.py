import pytest

from gral.expr import (
    Agg,
    Lit,
    Ref,
    apply_aggregate,
    apply_binary,
    apply_unary,
    check_expr,
    eval_expr,
    expressions_equivalent_bounded,
    family_values,
    in_scope_vars,
)
from gral.graph import ERR, FALSE, TRUE, num, string, sym, var
from gral.matches import MatchSet, enumerate_matches
from gral.syntax import parse_expr

from conftest import g


def values(ms, text):
    return family_values(eval_expr(ms, parse_expr(text)), ms)


def test_count_of_a_constant(m_pl):
    assert values(m_pl, "COUNT(likes)") == [num(5)] * 5


def test_count_by_group(m_pl):
    fam = eval_expr(m_pl, parse_expr("COUNT(likes BY ?a1)"))
    by_author = {m[var("a1")]: v for m, v in fam.items()}
    assert by_author == {sym("auth1"): num(1), sym("auth2"): num(1), sym("auth3"): num(3)}


def test_distinct_count(m_pl):
    assert values(m_pl, "COUNT(DISTINCT ?a1)") == [num(3)] * 5
    assert values(m_pl, "COUNT(?a1)") == [num(5)] * 5


def test_pointwise(m_pl):
    assert values(m_pl, "2 + 3") == [num(5)] * 5
    assert values(m_pl, "NOT(?a1 = ?a2)") == [TRUE] * 5
    assert values(m_pl, "?a1 = ?a2") == [FALSE] * 5


def test_concat(m_ps):
    assert values(m_ps, "CONCAT(?d, ?m)")[0] == string("date1mes1")
    assert apply_binary("CONCAT", string("a"), num(1)) == string("a1")
    assert apply_binary("CONCAT", ERR, string("a")) == ERR


def test_nested_aggregate_over_subgroups(m_pl):
    # the inner count runs over each ?a1 group, the outer max over everything
    assert values(m_pl, "MAX(COUNT(likes BY ?a1))") == [num(3)] * 5


@pytest.mark.parametrize(
    "op,a,b,expected",
    [
        ("ADD", num(2), num(3), num(5)),
        ("ADD", num(2), num(0.5), num(2.5)),
        ("SUB", num(2), num(3), num(-1)),
        ("MUL", num(4), num(3), num(12)),
        ("DIV", num(6), num(3), num(2.0)),
        ("DIV", num(1), num(0), ERR),
        ("ADD", num(2**62), num(2**62), ERR),
        ("ADD", sym("a"), num(1), ERR),
        ("EQ", num(1), num(1.0), TRUE),
        ("EQ", sym("a"), string("a"), FALSE),
        ("EQ", var("x"), var("x"), TRUE),
        ("GT", num(3), num(2), TRUE),
        ("LT", string("a"), string("b"), TRUE),
        ("LT", sym("a"), string("b"), ERR),
        ("AND", TRUE, FALSE, FALSE),
        ("OR", TRUE, FALSE, TRUE),
        ("AND", TRUE, num(1), ERR),
    ],
)
def test_binary(op, a, b, expected):
    assert apply_binary(op, a, b) == expected


@pytest.mark.parametrize("op", ["ADD", "SUB", "MUL", "DIV", "EQ", "GT", "LT", "AND", "OR", "CONCAT"])
def test_err_absorbs(op):
    assert apply_binary(op, ERR, num(1)) == ERR
    assert apply_binary(op, TRUE, ERR) == ERR


def test_unary():
    assert apply_unary("NEG", num(2)) == num(-2)
    assert apply_unary("NOT", TRUE) == FALSE
    assert apply_unary("NOT", num(1)) == ERR
    assert apply_unary("NEG", ERR) == ERR


def test_aggregate_conventions():
    assert apply_aggregate("SUM", False, []) == num(0)
    assert apply_aggregate("COUNT", False, []) == num(0)
    for op in ("MAX", "MIN", "AVG"):
        assert apply_aggregate(op, False, []) == ERR
    nums = [num(1), num(2), num(2)]
    assert apply_aggregate("SUM", False, nums) == num(5)
    assert apply_aggregate("SUM", True, nums) == num(3)
    assert apply_aggregate("AVG", False, [num(1), num(2)]) == num(1.5)
    assert apply_aggregate("MAX", False, nums) == num(2)
    assert apply_aggregate("MIN", False, nums) == num(1)
    assert apply_aggregate("SUM", False, [num(1), sym("a")]) == ERR
    assert apply_aggregate("COUNT", False, [ERR, ERR]) == num(2)
    assert apply_aggregate("COUNT", True, [ERR, ERR]) == num(1)


def test_in_scope_vars_ignores_groups():
    assert in_scope_vars(parse_expr("COUNT(likes BY ?a1)")) == frozenset()
    assert in_scope_vars(parse_expr("SUM(?x BY ?y) + ?z")) == {var("x"), var("z")}


def test_check_expr():
    scope = {var("a1"), var("a2")}
    assert check_expr(parse_expr("NOT(?a1 = ?a2)"), scope) == []
    (problem,) = check_expr(parse_expr("?zz + 1"), scope)
    assert "not in scope" in problem[1]
    (problem,) = check_expr(parse_expr("COUNT(?a1 BY ?a1)"), scope)
    assert "BY group" in problem[1]


def test_eval_rejects_out_of_scope(m_pl):
    with pytest.raises(ValueError, match="not over the domain"):
        eval_expr(m_pl, Ref(var("zz")))


def test_variable_label_is_err():
    ms = enumerate_matches(g("?x p ?y"), g("?u p a"))
    assert values(ms, "?x") == [ERR]
    assert values(ms, "?y") == [sym("a")]
    assert values(ms, "?x = ?x") == [ERR]
    assert values(ms, "COUNT(DISTINCT ?x)") == [num(1)]


def test_eval_on_empty_set():
    ms = MatchSet(g("?x"), g("a"))
    assert eval_expr(ms, parse_expr("COUNT(?x)")) == {}


def test_bounded_equivalence():
    corpus = [
        enumerate_matches(g("?x p ?y"), g(f"a p {i} . b p {i + 1}")) for i in range(3)
    ]
    assert expressions_equivalent_bounded(parse_expr("?y + 0"), parse_expr("?y"), corpus)
    assert not expressions_equivalent_bounded(parse_expr("?y + 1"), parse_expr("?y"), corpus)


def test_agg_needs_nonempty_group():
    with pytest.raises(ValueError):
        Agg("COUNT", False, Lit(num(1)), ())
