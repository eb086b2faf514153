import pytest

from gral.golden import fixtures_dir
from gral.graph import Graph, var
from gral.matches import enumerate_matches
from gral.syntax import parse_graph

G0_TEXT = (fixtures_dir() / "g0.gtf").read_text()


def g(text: str) -> Graph:
    return parse_graph(text, allow_fresh=True)


@pytest.fixture(scope="session")
def g0():
    return parse_graph(G0_TEXT)


@pytest.fixture(scope="session")
def p_ps():
    return g("?a publishes ?m . ?m stampedAt ?d")


@pytest.fixture(scope="session")
def p_pl():
    return g("?a1 publishes ?m . ?a2 likes ?m")


@pytest.fixture(scope="session")
def p_prp():
    return g("?a1 publishes ?m1 . ?m1 refersTo ?m2 . ?a2 publishes ?m2")


@pytest.fixture(scope="session")
def m_ps(p_ps, g0):
    return enumerate_matches(p_ps, g0)


@pytest.fixture(scope="session")
def m_pl(p_pl, g0):
    return enumerate_matches(p_pl, g0)


def rows(ms, *names):
    """Rows of a match set as tuples of rendered labels, in the given column order."""
    from gral.graph import render

    cols = [var(n) for n in names]
    return sorted(tuple(render(m[c]) for c in cols) for m in ms.matches)


# acceptance report -------------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
