"""Canonical text for graphs and assignment tables."""

from __future__ import annotations

import json

from .graph import Graph, render, triple_key
from .matches import AssignmentTable

TABLE_FORMATS = ("tsv", "markdown", "json")


def serialize_graph(g: Graph) -> str:
    """Sorted triples, then sorted isolated nodes, one ``.``-terminated statement per line."""
    lines = [" ".join(key) + " ." for key in sorted(map(triple_key, g.triples))]
    lines += [n + " ." for n in sorted(map(render, g.isolated))]
    return "\n".join(lines)


def _md_cell(text: str) -> str:
    return text.replace("|", "\\|")


def serialize_table(table: AssignmentTable, format: str = "markdown") -> str:
    rows = table.rendered()
    if format == "tsv":
        return "\n".join(["\t".join(table.columns)] + ["\t".join(r) for r in rows])
    if format == "markdown":
        cols = table.columns or ("",)
        lines = ["| " + " | ".join(map(_md_cell, cols)) + " |", "|" + "|".join(" --- " for _ in cols) + "|"]
        for r in rows:
            lines.append("| " + " | ".join(map(_md_cell, r or [""])) + " |")
        return "\n".join(lines)
    if format == "json":
        return json.dumps({"columns": list(table.columns), "rows": rows}, indent=2)
    raise ValueError(f"unknown table format {format!r}; expected one of {', '.join(TABLE_FORMATS)}")
