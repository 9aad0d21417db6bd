"""AST node definitions for the scripting subset.

Nodes are frozen dataclasses; source line numbers ride along for error
reporting but are excluded from equality, so structural comparison works
across reformatting (the parse/unparse round-trip relies on this).
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Optional, Tuple, Union


@dataclass(frozen=True)
class Node:
    line: int = field(default=0, kw_only=True, compare=False, repr=False)


@dataclass(frozen=True)
class Expr(Node):
    pass


@dataclass(frozen=True)
class Stmt(Node):
    pass


# -- expressions --------------------------------------------------------------


@dataclass(frozen=True)
class NullLit(Expr):
    pass


@dataclass(frozen=True)
class BoolLit(Expr):
    value: bool


@dataclass(frozen=True)
class IntLit(Expr):
    value: int


@dataclass(frozen=True)
class StringLit(Expr):
    value: str


@dataclass(frozen=True)
class FStringLit(Expr):
    """Interleaved literal text (str) and embedded expressions (Expr)."""

    parts: Tuple[Union[str, Expr], ...]


@dataclass(frozen=True)
class ListLit(Expr):
    items: Tuple[Expr, ...]


@dataclass(frozen=True)
class Name(Expr):
    ident: str


@dataclass(frozen=True)
class Call(Expr):
    callee: str
    args: Tuple[Expr, ...]


@dataclass(frozen=True)
class MethodCall(Expr):
    receiver: Expr
    method: str
    args: Tuple[Expr, ...]


@dataclass(frozen=True)
class Index(Expr):
    receiver: Expr
    index: Expr


@dataclass(frozen=True)
class Unary(Expr):
    op: str  # "not" | "-"
    operand: Expr


@dataclass(frozen=True)
class Binary(Expr):
    # "+ - * / == != < <= > >= and or in is-null is-not-null"
    op: str
    lhs: Expr
    rhs: Expr


# -- statements ---------------------------------------------------------------


@dataclass(frozen=True)
class Assign(Stmt):
    target: str
    op: str  # "=" | "+="
    value: Expr


@dataclass(frozen=True)
class ExprStmt(Stmt):
    value: Expr


@dataclass(frozen=True)
class Arm(Node):
    """One condition/body pair of an if/elif chain."""

    cond: Expr
    body: Tuple[Stmt, ...]


@dataclass(frozen=True)
class If(Stmt):
    arms: Tuple[Arm, ...]
    else_body: Optional[Tuple[Stmt, ...]] = None


@dataclass(frozen=True)
class While(Stmt):
    cond: Expr
    body: Tuple[Stmt, ...]


@dataclass(frozen=True)
class For(Stmt):
    var: str
    iterable: Expr
    body: Tuple[Stmt, ...]


@dataclass(frozen=True)
class Break(Stmt):
    pass


@dataclass(frozen=True)
class Continue(Stmt):
    pass


@dataclass(frozen=True)
class Pass(Stmt):
    pass


@dataclass(frozen=True)
class Import(Stmt):
    """Representable but never executable; running one is an authorization failure."""

    module: str


@dataclass(frozen=True)
class Program(Node):
    statements: Tuple[Stmt, ...] = ()


# -- debug dump ---------------------------------------------------------------


def dump(node: Node) -> str:
    """Stable, position-free textual rendering of an AST for inspection."""
    out: list = []
    _dump_into(node, 0, out)
    return "\n".join(out)


def _dump_into(node: Node, depth: int, out: list) -> None:
    pad = "  " * depth
    scalars = []
    children = []
    for f in fields(node):
        if f.name == "line":
            continue
        if isinstance(node, If) and f.name == "else_body":
            continue  # dumped separately under an "else" marker
        value = getattr(node, f.name)
        if isinstance(value, Node):
            children.append(value)
        elif isinstance(value, tuple):
            children.append((f.name, value))
        elif value is None:
            continue
        else:
            scalars.append(f"{f.name}={value!r}")
    head = type(node).__name__
    if scalars:
        head += " " + " ".join(scalars)
    out.append(pad + head)
    for child in children:
        if isinstance(child, Node):
            _dump_into(child, depth + 1, out)
            continue
        name, items = child
        for item in items:
            if isinstance(item, Node):
                _dump_into(item, depth + 1, out)
            else:
                out.append("  " * (depth + 1) + f"text {item!r}")
    if isinstance(node, If) and node.else_body is not None:
        out.append(pad + "  else")
        for stmt in node.else_body:
            _dump_into(stmt, depth + 2, out)
