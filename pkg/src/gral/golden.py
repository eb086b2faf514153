"""The built-in golden corpus: the running example graph, its queries and tables.

A fixture directory holds ``g0.gtf`` and ``*.gral`` files. A ``NAME.gral``
with ``NAME.expected.gtf`` is run as a query and compared to the expected
graph up to variable renaming; with ``NAME.expected.tsv`` its pattern is
evaluated and the assignment table compared exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .graph import graphs_isomorphic
from .matches import assignment_table
from .patterns import eval_pattern, run_query
from .serialize import serialize_graph, serialize_table
from .syntax import ParseError, parse_graph, parse_pattern, parse_query


def fixtures_dir() -> Path:
    return Path(str(resources.files("gral") / "fixtures"))


@dataclass
class Check:
    name: str
    kind: str  # "query" or "table"
    ok: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} {self.kind:5} {self.name}" + (f": {self.detail}" if self.detail else "")


def _read(path: Path) -> str:
    return path.read_text(encoding="utf-8")


def run_golden(directory: Path | None = None) -> list[Check]:
    directory = Path(directory) if directory is not None else fixtures_dir()
    graph = parse_graph(_read(directory / "g0.gtf"), str(directory / "g0.gtf"))
    checks = []
    for source in sorted(directory.glob("*.gral")):
        name = source.stem
        text = _read(source)
        expected_graph = directory / f"{name}.expected.gtf"
        expected_table = directory / f"{name}.expected.tsv"
        if expected_graph.exists():
            try:
                want = parse_graph(_read(expected_graph), str(expected_graph), allow_fresh=True)
                got = run_query(parse_query(text, str(source)), graph)
            except ParseError as exc:
                checks.append(Check(name, "query", False, str(exc)))
            else:
                ok = graphs_isomorphic(got, want, fixed=graph.variables)
                detail = "" if ok else "got:\n" + serialize_graph(got)
                checks.append(Check(name, "query", ok, detail))
        if expected_table.exists():
            try:
                got_text = serialize_table(assignment_table(eval_pattern(parse_pattern(text, str(source)), graph)), "tsv")
            except ParseError as exc:
                checks.append(Check(name, "table", False, str(exc)))
            else:
                want_text = _read(expected_table).rstrip("\n")
                ok = got_text == want_text
                checks.append(Check(name, "table", ok, "" if ok else "got:\n" + got_text))
    return checks
