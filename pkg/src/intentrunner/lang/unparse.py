"""Canonical source emission for the scripting subset.

Produces 4-space indentation and double-quoted strings (alternating quotes
inside f-strings). Parenthesization is driven by operator precedence so that
re-parsing the output yields a structurally equal AST.
"""

from __future__ import annotations

from typing import List

from .nodes import (
    Assign,
    Binary,
    BoolLit,
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
    NullLit,
    Pass,
    Program,
    Stmt,
    StringLit,
    Unary,
    While,
)

_INDENT = "    "

_BIN_PREC = {
    "or": 1,
    "and": 2,
    "==": 4,
    "!=": 4,
    "<": 4,
    "<=": 4,
    ">": 4,
    ">=": 4,
    "in": 4,
    "is-null": 4,
    "is-not-null": 4,
    "+": 5,
    "-": 5,
    "*": 6,
    "/": 6,
}
_NONASSOC = frozenset({"==", "!=", "<", "<=", ">", ">=", "in", "is-null", "is-not-null"})


def unparse(program: Program) -> str:
    """Render a program back to source text (trailing newline when non-empty)."""
    lines: List[str] = []
    for stmt in program.statements:
        _emit_stmt(stmt, 0, lines)
    return "\n".join(lines) + ("\n" if lines else "")


def unparse_expression(expr: Expr) -> str:
    return _emit_expr(expr, '"')


# -- statements ---------------------------------------------------------------


def _emit_stmt(stmt: Stmt, depth: int, lines: List[str]) -> None:
    pad = _INDENT * depth
    if isinstance(stmt, Assign):
        lines.append(f"{pad}{stmt.target} {stmt.op} {_emit_expr(stmt.value, chr(34))}")
    elif isinstance(stmt, ExprStmt):
        lines.append(pad + _emit_expr(stmt.value, '"'))
    elif isinstance(stmt, Pass):
        lines.append(pad + "pass")
    elif isinstance(stmt, Break):
        lines.append(pad + "break")
    elif isinstance(stmt, Continue):
        lines.append(pad + "continue")
    elif isinstance(stmt, Import):
        lines.append(f"{pad}import {stmt.module}")
    elif isinstance(stmt, If):
        for i, arm in enumerate(stmt.arms):
            head = "if" if i == 0 else "elif"
            lines.append(f"{pad}{head} {_emit_expr(arm.cond, chr(34))}:")
            _emit_body(arm.body, depth + 1, lines)
        if stmt.else_body is not None:
            lines.append(pad + "else:")
            _emit_body(stmt.else_body, depth + 1, lines)
    elif isinstance(stmt, While):
        lines.append(f"{pad}while {_emit_expr(stmt.cond, chr(34))}:")
        _emit_body(stmt.body, depth + 1, lines)
    elif isinstance(stmt, For):
        lines.append(f"{pad}for {stmt.var} in {_emit_expr(stmt.iterable, chr(34))}:")
        _emit_body(stmt.body, depth + 1, lines)
    else:
        raise TypeError(f"cannot unparse statement {stmt!r}")


def _emit_body(body, depth: int, lines: List[str]) -> None:
    if not body:
        lines.append(_INDENT * depth + "pass")
        return
    for stmt in body:
        _emit_stmt(stmt, depth, lines)


# -- expressions ---------------------------------------------------------------


def _prec(expr: Expr) -> int:
    if isinstance(expr, Binary):
        return _BIN_PREC[expr.op]
    if isinstance(expr, Unary):
        return 3 if expr.op == "not" else 7
    if isinstance(expr, (Call, MethodCall, Index)):
        return 8
    return 9


def _emit_expr(expr: Expr, strquote: str) -> str:
    if isinstance(expr, NullLit):
        return "None"
    if isinstance(expr, BoolLit):
        return "True" if expr.value else "False"
    if isinstance(expr, IntLit):
        return str(expr.value)
    if isinstance(expr, StringLit):
        return _quote_string(expr.value, strquote)
    if isinstance(expr, FStringLit):
        return _emit_fstring(expr, strquote)
    if isinstance(expr, ListLit):
        return "[" + ", ".join(_emit_expr(item, strquote) for item in expr.items) + "]"
    if isinstance(expr, Name):
        return expr.ident
    if isinstance(expr, Call):
        args = ", ".join(_emit_expr(a, strquote) for a in expr.args)
        return f"{expr.callee}({args})"
    if isinstance(expr, MethodCall):
        recv = _child(expr.receiver, 8, strict=False, strquote=strquote)
        args = ", ".join(_emit_expr(a, strquote) for a in expr.args)
        return f"{recv}.{expr.method}({args})"
    if isinstance(expr, Index):
        recv = _child(expr.receiver, 8, strict=False, strquote=strquote)
        return f"{recv}[{_emit_expr(expr.index, strquote)}]"
    if isinstance(expr, Unary):
        prec = 3 if expr.op == "not" else 7
        operand = _child(expr.operand, prec, strict=False, strquote=strquote)
        return f"not {operand}" if expr.op == "not" else f"-{operand}"
    if isinstance(expr, Binary):
        prec = _BIN_PREC[expr.op]
        nonassoc = expr.op in _NONASSOC
        lhs = _child(expr.lhs, prec, strict=nonassoc, strquote=strquote)
        if expr.op == "is-null":
            return f"{lhs} is None"
        if expr.op == "is-not-null":
            return f"{lhs} is not None"
        rhs = _child(expr.rhs, prec, strict=True, strquote=strquote)
        return f"{lhs} {expr.op} {rhs}"
    raise TypeError(f"cannot unparse expression {expr!r}")


def _child(expr: Expr, parent_prec: int, strict: bool, strquote: str) -> str:
    text = _emit_expr(expr, strquote)
    child_prec = _prec(expr)
    if child_prec < parent_prec or (strict and child_prec == parent_prec):
        return f"({text})"
    return text


def _quote_string(value: str, quote: str) -> str:
    out = [quote]
    for ch in value:
        if ch == "\\":
            out.append("\\\\")
        elif ch == quote:
            out.append("\\" + quote)
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        else:
            out.append(ch)
    out.append(quote)
    return "".join(out)


def _emit_fstring(expr: FStringLit, strquote: str) -> str:
    quote = strquote
    inner_quote = "'" if quote == '"' else '"'
    out = ["f", quote]
    for part in expr.parts:
        if isinstance(part, str):
            out.append(_escape_fstring_text(part, quote))
        else:
            out.append("{" + _emit_expr(part, inner_quote) + "}")
    out.append(quote)
    return "".join(out)


def _escape_fstring_text(text: str, quote: str) -> str:
    out = []
    for ch in text:
        if ch == "\\":
            out.append("\\\\")
        elif ch == quote:
            out.append("\\" + quote)
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        elif ch == "{":
            out.append("{{")
        elif ch == "}":
            out.append("}}")
        else:
            out.append(ch)
    return "".join(out)
