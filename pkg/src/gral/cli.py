"""Command-line entry point.

Exit codes: 0 success, 1 golden mismatch, 2 parse or validation error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .golden import run_golden
from .matches import FreshNames, MatchSet, assignment_table
from .patterns import Pattern, eval_pattern, run_query
from .serialize import TABLE_FORMATS, serialize_graph, serialize_table
from .syntax import ParseError, parse_graph, parse_pattern, parse_query, tokenize

EXIT_OK, EXIT_MISMATCH, EXIT_PARSE, EXIT_IO = 0, 1, 2, 3


class _Failure(Exception):
    def __init__(self, code: int, lines: list[str]):
        self.code = code
        self.lines = lines


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Failure(EXIT_IO, [f"{path}: {exc.strerror or exc}"]) from None


def _parse(fn, path: str):
    text = _read(path)
    try:
        return fn(text, path)
    except ParseError as exc:
        raise _Failure(EXIT_PARSE, [str(e) for e in exc.errors]) from None


def _write(text: str, out: str | None) -> None:
    text = text + "\n" if text else ""
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise _Failure(EXIT_IO, [f"{out}: {exc.strerror or exc}"]) from None


def _tracer(fmt: str):
    def trace(p: Pattern, ms: MatchSet) -> None:
        where = str(p.span) if p.span is not None else "?"
        print(f"-- {type(p).__name__} at {where}: {len(ms)} match(es)", file=sys.stderr)
        print(serialize_table(assignment_table(ms), fmt), file=sys.stderr)

    return trace


def cmd_eval(args) -> int:
    graph = _parse(parse_graph, args.graph)
    query = _parse(parse_query, args.query)
    result = run_query(query, graph, FreshNames(), _tracer(args.format) if args.trace else None)
    _write(serialize_graph(result), args.out)
    return EXIT_OK


def cmd_matches(args) -> int:
    graph = _parse(parse_graph, args.graph)
    pattern = _parse(parse_pattern, args.query)
    ms = eval_pattern(pattern, graph, FreshNames(), _tracer(args.format) if args.trace else None)
    _write(serialize_table(assignment_table(ms), args.format), args.out)
    return EXIT_OK


def _check_query_file(text: str, path: str):
    first = tokenize(text, path)[0]
    if first.type == "ident" and first.text == "GRAPH":
        return parse_query(text, path)
    return parse_pattern(text, path)


def cmd_check(args) -> int:
    targets = []
    if args.graph:
        targets.append((args.graph, parse_graph))
    if args.query:
        targets.append((args.query, _check_query_file))
    for path in args.files:
        targets.append((path, parse_graph if path.endswith(".gtf") else _check_query_file))
    if not targets:
        print("check: nothing to check", file=sys.stderr)
        return EXIT_PARSE
    code = EXIT_OK
    for path, fn in targets:
        try:
            _parse(fn, path)
        except _Failure as failure:
            code = max(code, failure.code)
            for line in failure.lines:
                print(line, file=sys.stderr)
        else:
            print(f"ok {path}", file=sys.stderr)
    return code


def cmd_golden(args) -> int:
    try:
        checks = run_golden(args.fixtures)
    except OSError as exc:
        raise _Failure(EXIT_IO, [str(exc)]) from None
    except ParseError as exc:
        raise _Failure(EXIT_PARSE, [str(exc)]) from None
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.ok]
    n_query = sum(c.kind == "query" for c in checks)
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed ({n_query} query, {len(checks) - n_query} table)")
    if failed:
        print("mismatches: " + ", ".join(f"{c.name} ({c.kind})" for c in failed), file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gral", description="Evaluate GrAL queries over graph files.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, query_required: bool):
        p.add_argument("--graph", required=True, help="graph file (.gtf)")
        p.add_argument("--query", required=query_required, help="query or pattern file (.gral)")
        p.add_argument("--out", help="output file (default: standard output)")
        p.add_argument("--format", choices=TABLE_FORMATS, default="markdown", help="table format")
        p.add_argument("--trace", action="store_true", help="print every subpattern's table to standard error")

    p = sub.add_parser("eval", help="run a GRAPH query and print the result graph")
    common(p, True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("matches", help="print the assignment table of a pattern")
    common(p, True)
    p.set_defaults(func=cmd_matches)

    p = sub.add_parser("check", help="parse and validate files")
    p.add_argument("--graph")
    p.add_argument("--query")
    p.add_argument("files", nargs="*", help="more files; .gtf are graphs, anything else queries or patterns")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("golden", help="run the built-in example corpus")
    p.add_argument("--fixtures", type=Path, help="fixture directory (default: the bundled one)")
    p.set_defaults(func=cmd_golden)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Failure as failure:
        for line in failure.lines:
            print(line, file=sys.stderr)
        return failure.code


if __name__ == "__main__":
    sys.exit(main())
