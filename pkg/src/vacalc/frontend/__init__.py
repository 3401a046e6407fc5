from .parser import ParseError, parse_definition, parse_conformal_expr, parse_vertex_expr
from .render import render_definition, render_result
from .query import Query, parse_query, run_query

__all__ = [
    "ParseError",
    "Query",
    "parse_conformal_expr",
    "parse_definition",
    "parse_query",
    "parse_vertex_expr",
    "render_definition",
    "render_result",
    "run_query",
]
