"""Lexer and recursive-descent parser for graph files and GrAL queries.

Graph files (GTF) are ``.``-separated statements of one term (an isolated
node) or three terms (a triple). Queries look like::

    GRAPH (
      CONSTRUCT { ?a1 nbOfLikes ?n }
      WHERE { ?a1 publishes ?m . ?a2 likes ?m
              FILTER (NOT(?a1 = ?a2))
              BIND COUNT(likes BY ?a1) AS ?n }
    )

A pattern body is a basic graph (or a nested ``CONSTRUCT ... WHERE`` block,
or a parenthesized body) followed by clauses that apply left to right.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .expr import AGG_OPS, Agg, Binary, Expr, Lit, Ref, Unary
from .graph import (
    FALSE,
    FRESH_PREFIX,
    INT_MAX,
    INT_MIN,
    TRUE,
    Const,
    Graph,
    Kind,
    Triple,
    Var,
    sym,
)
from .patterns import Basic, Bind, Construct, Filter, Join, Pattern, Query, Union, validate_pattern, validate_query

KEYWORDS = frozenset(
    {"GRAPH", "CONSTRUCT", "WHERE", "JOIN", "BIND", "AS", "FILTER", "UNION", "NOT", "AND", "OR", "BY", "DISTINCT", "CONCAT"}
    | set(AGG_OPS)
)


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int

    def __str__(self):
        return f"{self.file}:{self.line}:{self.column}"


class ParseError(Exception):
    """A lexical, syntactic or validation error at a source position.

    ``errors`` lists this error followed by any further validation problems
    found in the same file.
    """

    def __init__(self, span: SourceSpan, kind: str, message: str):
        super().__init__(f"{span}: {kind} error: {message}")
        self.span = span
        self.kind = kind
        self.message = message
        self.errors = [self]


@dataclass(frozen=True)
class Token:
    type: str
    text: str
    value: object
    span: SourceSpan


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<float>[0-9]+\.[0-9]+(?:[eE][+-]?[0-9]+)?)
  | (?P<int>[0-9]+(?![0-9A-Za-z_]))
  | (?P<var>\?[A-Za-z_][A-Za-z0-9_]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>")
  | (?P<punct>[{}().,=<>+\-*/])
    """,
    re.VERBOSE,
)

_STRING_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t", "r": "\r"}


def tokenize(text: str, file: str = "<input>") -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        span = SourceSpan(file, line, pos - line_start + 1)
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text.startswith("!err", pos):
                raise ParseError(span, "lexical", "the err constant cannot be written in source text")
            if text[pos].isdigit():
                raise ParseError(span, "lexical", "malformed number")
            raise ParseError(span, "lexical", f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        if kind == "string":
            value, end = _scan_string(text, pos + 1, span)
            tokens.append(Token("string", text[pos:end], value, span))
            pos = end
            continue
        chunk = m.group()
        if kind == "ws" or kind == "comment":
            newlines = chunk.count("\n")
            if newlines:
                line += newlines
                line_start = pos + chunk.rfind("\n") + 1
        elif kind == "float":
            value = float(chunk)
            if value in (float("inf"), float("-inf")):
                raise ParseError(span, "lexical", f"float out of range: {chunk}")
            tokens.append(Token("float", chunk, value, span))
        elif kind == "int":
            tokens.append(Token("int", chunk, int(chunk), span))
        elif kind == "var":
            tokens.append(Token("var", chunk, chunk[1:], span))
        elif kind == "ident":
            tokens.append(Token("ident", chunk, chunk, span))
        else:
            tokens.append(Token(chunk, chunk, None, span))
        pos = m.end()
    tokens.append(Token("eof", "", None, SourceSpan(file, line, pos - line_start + 1)))
    return tokens


def _scan_string(text: str, pos: int, span: SourceSpan) -> tuple[str, int]:
    out = []
    while pos < len(text):
        ch = text[pos]
        if ch == '"':
            return "".join(out), pos + 1
        if ch == "\n":
            break
        if ch == "\\":
            esc = text[pos + 1 : pos + 2]
            if esc not in _STRING_ESCAPES:
                raise ParseError(span, "lexical", f"unknown escape \\{esc} in string")
            out.append(_STRING_ESCAPES[esc])
            pos += 2
            continue
        out.append(ch)
        pos += 1
    raise ParseError(span, "lexical", "unterminated string")


class Parser:
    def __init__(self, text: str, file: str = "<input>", allow_fresh: bool = False):
        self.tokens = tokenize(text, file)
        self.pos = 0
        self.allow_fresh = allow_fresh

    # -- token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.type != "eof":
            self.pos += 1
        return t

    def is_kw(self, word: str, tok: Token | None = None) -> bool:
        tok = tok or self.tok
        return tok.type == "ident" and tok.text == word

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(tok.span, "syntactic", message)

    def describe(self, tok: Token) -> str:
        return "end of input" if tok.type == "eof" else repr(tok.text)

    def expect(self, type_: str) -> Token:
        if self.tok.type != type_:
            raise self.error(f"expected {type_!r}, found {self.describe(self.tok)}")
        return self.advance()

    def expect_kw(self, word: str) -> Token:
        if not self.is_kw(word):
            raise self.error(f"expected {word}, found {self.describe(self.tok)}")
        return self.advance()

    # -- terms and graphs

    def variable(self, tok: Token) -> Var:
        name = tok.value
        if name.startswith(FRESH_PREFIX) and not self.allow_fresh:
            raise ParseError(tok.span, "syntactic", f"variable names starting with ?{FRESH_PREFIX} are reserved: {tok.text}")
        return Var(name)

    def number(self, tok: Token, negative: bool) -> Const:
        value = -tok.value if negative else tok.value
        if tok.type == "float":
            return Const(Kind.FLOAT, value)
        if not INT_MIN <= value <= INT_MAX:
            raise ParseError(tok.span, "lexical", f"integer out of 64-bit range: {tok.text}")
        return Const(Kind.INT, value)

    def at_term(self, keywords_end: bool) -> bool:
        t = self.tok
        if t.type in ("var", "int", "float", "string"):
            return True
        if t.type in ("-", "+"):
            return self.peek().type in ("int", "float")
        if t.type == "ident":
            return not (keywords_end and t.text in KEYWORDS)
        return False

    def term(self):
        t = self.advance()
        if t.type == "var":
            return self.variable(t)
        if t.type in ("int", "float"):
            return self.number(t, False)
        if t.type in ("-", "+"):
            return self.number(self.advance(), t.type == "-")
        if t.type == "string":
            return Const(Kind.STR, t.value)
        if t.text == "true":
            return TRUE
        if t.text == "false":
            return FALSE
        return sym(t.value)

    def gtf(self, keywords_end: bool) -> Graph:
        """Statements up to ``}``, ``)``, end of input or (if asked) a keyword."""
        nodes, triples = [], []
        while True:
            start = self.tok
            terms = []
            while self.at_term(keywords_end):
                terms.append(self.term())
            if not terms:
                if self.tok.type == ".":
                    raise self.error("empty statement")
                if self.tok.type not in ("}", ")", "eof") and not (keywords_end and self.tok.type == "ident"):
                    raise self.error(f"unexpected {self.describe(self.tok)} in graph")
                break
            if len(terms) == 1:
                nodes.append(terms[0])
            elif len(terms) == 3:
                triples.append(Triple(*terms))
            else:
                raise ParseError(start.span, "syntactic", f"a statement has one or three terms, not {len(terms)}")
            if self.tok.type == ".":
                self.advance()
                continue
            if self.tok.type not in ("}", ")", "eof") and not (keywords_end and self.tok.type == "ident"):
                raise self.error(f"expected '.' between statements, found {self.describe(self.tok)}")
            break
        return Graph(nodes, triples)

    def braced_graph(self) -> Graph:
        self.expect("{")
        g = self.gtf(keywords_end=False)
        self.expect("}")
        return g

    # -- patterns

    def body(self) -> Pattern:
        start = self.tok
        if self.is_kw("CONSTRUCT"):
            self.advance()
            template = self.braced_graph()
            self.expect_kw("WHERE")
            self.expect("{")
            inner = self.body()
            self.expect("}")
            p: Pattern = Construct(inner, template, span=start.span)
        elif self.tok.type == "(":
            self.advance()
            p = self.body()
            self.expect(")")
        else:
            p = Basic(self.gtf(keywords_end=True), span=start.span)
        while True:
            t = self.tok
            if self.is_kw("JOIN"):
                self.advance()
                self.expect("{")
                right = self.body()
                self.expect("}")
                p = Join(p, right, span=t.span)
            elif self.is_kw("BIND"):
                self.advance()
                e = self.expr()
                self.expect_kw("AS")
                v = self.expect("var")
                p = Bind(p, e, self.variable(v), span=t.span)
            elif self.is_kw("FILTER"):
                self.advance()
                self.expect("(")
                e = self.expr()
                self.expect(")")
                p = Filter(p, e, span=t.span)
            elif self.is_kw("CONSTRUCT"):
                self.advance()
                p = Construct(p, self.braced_graph(), span=t.span)
            elif self.is_kw("UNION"):
                self.advance()
                self.expect("(")
                right = self.body()
                self.expect(")")
                p = Union(p, right, span=t.span)
            else:
                if t.type == "ident" and t.text in KEYWORDS:
                    raise self.error(f"unexpected keyword {t.text}")
                return p

    def query(self) -> Query:
        start = self.expect_kw("GRAPH")
        self.expect("(")
        p = self.body()
        self.expect(")")
        return Query(p, span=start.span)

    # -- expressions

    def expr(self) -> Expr:
        return self.or_expr()

    def _left_assoc(self, sub, ops: dict[str, str]) -> Expr:
        lhs = sub()
        while True:
            t = self.tok
            key = t.text if t.type == "ident" else t.type
            if key not in ops or (t.type == "ident" and key not in KEYWORDS):
                return lhs
            self.advance()
            lhs = Binary(ops[key], lhs, sub(), span=t.span)

    def or_expr(self) -> Expr:
        return self._left_assoc(self.and_expr, {"OR": "OR"})

    def and_expr(self) -> Expr:
        return self._left_assoc(self.cmp_expr, {"AND": "AND"})

    def cmp_expr(self) -> Expr:
        return self._left_assoc(self.add_expr, {"=": "EQ", "<": "LT", ">": "GT"})

    def add_expr(self) -> Expr:
        return self._left_assoc(self.mul_expr, {"+": "ADD", "-": "SUB"})

    def mul_expr(self) -> Expr:
        return self._left_assoc(self.unary_expr, {"*": "MUL", "/": "DIV"})

    def unary_expr(self) -> Expr:
        t = self.tok
        if t.type == "-":
            self.advance()
            if self.tok.type in ("int", "float"):
                return Lit(self.number(self.advance(), True), span=t.span)
            return Unary("NEG", self.unary_expr(), span=t.span)
        if self.is_kw("NOT"):
            self.advance()
            return Unary("NOT", self.unary_expr(), span=t.span)
        return self.primary()

    def primary(self) -> Expr:
        t = self.tok
        if t.type == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if t.type == "var":
            self.advance()
            return Ref(self.variable(t), span=t.span)
        if t.type in ("int", "float"):
            self.advance()
            return Lit(self.number(t, False), span=t.span)
        if t.type == "string":
            self.advance()
            return Lit(Const(Kind.STR, t.value), span=t.span)
        if t.type == "ident":
            if t.text in AGG_OPS:
                return self.aggregate()
            if t.text == "CONCAT":
                self.advance()
                self.expect("(")
                a = self.expr()
                self.expect(",")
                b = self.expr()
                self.expect(")")
                return Binary("CONCAT", a, b, span=t.span)
            if t.text in KEYWORDS:
                raise self.error(f"unexpected keyword {t.text} in expression")
            self.advance()
            if t.text in ("true", "false"):
                return Lit(TRUE if t.text == "true" else FALSE, span=t.span)
            return Lit(sym(t.text), span=t.span)
        raise self.error(f"expected an expression, found {self.describe(t)}")

    def aggregate(self) -> Expr:
        t = self.advance()
        self.expect("(")
        distinct = False
        if self.is_kw("DISTINCT"):
            self.advance()
            distinct = True
        arg = self.expr()
        by = None
        if self.is_kw("BY"):
            self.advance()
            items = [self.expr()]
            while self.tok.type == ",":
                self.advance()
                items.append(self.expr())
            by = tuple(items)
        self.expect(")")
        return Agg(t.text, distinct, arg, by, span=t.span)

    def finish(self):
        if self.tok.type != "eof":
            raise self.error(f"unexpected {self.describe(self.tok)} after the end")


def _raise_problems(problems, fallback: SourceSpan) -> None:
    if not problems:
        return
    errors = [ParseError(span or fallback, "validation", msg) for span, msg in problems]
    first = errors[0]
    first.errors = errors
    raise first


def parse_graph(text: str, file: str = "<input>", allow_fresh: bool = False) -> Graph:
    """Parse a GTF document. ``allow_fresh`` admits engine-minted ``?_`` names,
    e.g. when reading back a query result."""
    p = Parser(text, file, allow_fresh)
    g = p.gtf(keywords_end=False)
    p.finish()
    return g


def parse_query(text: str, file: str = "<input>") -> Query:
    p = Parser(text, file)
    q = p.query()
    p.finish()
    _raise_problems(validate_query(q), q.span)
    return q


def parse_pattern(text: str, file: str = "<input>") -> Pattern:
    """Parse a bare pattern body; a ``GRAPH ( ... )`` wrapper is accepted and dropped."""
    p = Parser(text, file)
    start = p.tok.span
    if p.is_kw("GRAPH"):
        pattern = p.query().pattern
    else:
        pattern = p.body()
    p.finish()
    _raise_problems(validate_pattern(pattern), pattern.span or start)
    return pattern


def parse_expr(text: str, file: str = "<input>") -> Expr:
    p = Parser(text, file)
    e = p.expr()
    p.finish()
    return e
