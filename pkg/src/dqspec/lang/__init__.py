"""The quality-specification language: AST, parser, checker, formatter."""

from . import ast
from .checker import ValidatedSpec, check_spec, spec_hash
from .diagnostics import (
    NO_POS,
    Pos,
    SemanticIssue,
    SpecEncodingError,
    SpecSyntaxError,
    SpecValidationError,
)
from .formatter import format_expr, format_field_decl, format_spec
from .parser import parse_expression, parse_spec

__all__ = [
    "ast",
    "parse_spec",
    "parse_expression",
    "check_spec",
    "spec_hash",
    "format_spec",
    "format_expr",
    "format_field_decl",
    "ValidatedSpec",
    "Pos",
    "NO_POS",
    "SemanticIssue",
    "SpecEncodingError",
    "SpecSyntaxError",
    "SpecValidationError",
]
