"""Lexer, parser and unparser for the restricted workflow scripting subset."""

from .lexer import LexError, tokenize
from .nodes import (
    Arm,
    Assign,
    Binary,
    Break,
    Call,
    Continue,
    Expr,
    ExprStmt,
    For,
    FStringLit,
    If,
    Import,
    Index,
    IntLit,
    ListLit,
    MethodCall,
    Name,
    Node,
    NullLit,
    Pass,
    Program,
    Stmt,
    StringLit,
    Unary,
    While,
    BoolLit,
    dump,
)
from .parser import ScriptSyntaxError, UnsupportedConstructError, parse, parse_source
from .tokens import Token, TokenKind
from .unparse import unparse

__all__ = [
    "Arm",
    "Assign",
    "Binary",
    "BoolLit",
    "Break",
    "Call",
    "Continue",
    "Expr",
    "ExprStmt",
    "For",
    "FStringLit",
    "If",
    "Import",
    "Index",
    "IntLit",
    "LexError",
    "ListLit",
    "MethodCall",
    "Name",
    "Node",
    "NullLit",
    "Pass",
    "Program",
    "ScriptSyntaxError",
    "Stmt",
    "StringLit",
    "Token",
    "TokenKind",
    "Unary",
    "UnsupportedConstructError",
    "While",
    "dump",
    "parse",
    "parse_source",
    "tokenize",
    "unparse",
]
