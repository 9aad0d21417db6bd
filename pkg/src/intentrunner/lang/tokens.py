"""Token model for the scripting subset."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, unique


@unique
class TokenKind(Enum):
    IDENT = "ident"
    INT = "int"
    STRING = "string"
    FSTRING = "fstring"
    KEYWORD = "keyword"
    OP = "op"
    NEWLINE = "newline"
    INDENT = "indent"
    DEDENT = "dedent"
    EOF = "eof"

    def __repr__(self) -> str:
        return f"TokenKind.{self.name}"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    line: int
    col: int

    def __repr__(self) -> str:
        return f"Token({self.kind.name}, {self.text!r}, {self.line}:{self.col})"


# Reserved words. `is` is deliberately absent: it lexes as an operator.
KEYWORDS = frozenset(
    {
        "False",
        "None",
        "True",
        "and",
        "as",
        "assert",
        "async",
        "await",
        "break",
        "class",
        "continue",
        "def",
        "del",
        "elif",
        "else",
        "except",
        "finally",
        "for",
        "from",
        "global",
        "if",
        "import",
        "in",
        "lambda",
        "nonlocal",
        "not",
        "or",
        "pass",
        "raise",
        "return",
        "try",
        "while",
        "with",
        "yield",
    }
)
