"""Indentation-aware lexer for the scripting subset.

Logical lines end in NEWLINE tokens; indentation changes at line starts become
INDENT/DEDENT pairs. Blank lines and comment-only lines produce no tokens and
never touch the indentation stack. Inside brackets, newlines and indentation
are ignored (implicit line joining).
"""

from __future__ import annotations

from typing import List

from .tokens import KEYWORDS, Token, TokenKind


class LexError(Exception):
    """Lexical error with a 1-based source position."""

    def __init__(self, line: int, col: int, reason: str) -> None:
        super().__init__(f"line {line}, col {col}: {reason}")
        self.line = line
        self.col = col
        self.reason = reason


_ESCAPES = {"n": "\n", "t": "\t", "\\": "\\", "'": "'", '"': '"'}
_TWO_CHAR_OPS = ("==", "!=", "<=", ">=", "+=", "-=", "*=", "/=")
_ONE_CHAR_OPS = set("+-*/<>=()[]{},:.;")


def tokenize(source: str) -> List[Token]:
    """Tokenize source text, raising LexError on malformed input."""
    return _Lexer(source).run()


class _Lexer:
    def __init__(self, source: str) -> None:
        self.src = source.replace("\r\n", "\n").replace("\r", "\n")
        self.pos = 0
        self.line = 1
        self.col = 1
        self.tokens: List[Token] = []
        self.indents = [""]
        self.bracket_depth = 0
        self.line_has_content = False

    # -- character stream -------------------------------------------------

    def _at_end(self) -> bool:
        return self.pos >= len(self.src)

    def _peek(self, offset: int = 0) -> str:
        idx = self.pos + offset
        return self.src[idx] if idx < len(self.src) else ""

    def _advance(self) -> str:
        ch = self.src[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return ch

    def _emit(self, kind: TokenKind, text: str, line: int, col: int) -> None:
        self.tokens.append(Token(kind, text, line, col))
        if kind not in (TokenKind.NEWLINE, TokenKind.INDENT, TokenKind.DEDENT):
            self.line_has_content = True

    def _error(self, reason: str, line: int | None = None, col: int | None = None) -> LexError:
        return LexError(line if line is not None else self.line,
                        col if col is not None else self.col, reason)

    # -- line structure ----------------------------------------------------

    def run(self) -> List[Token]:
        self._begin_line()
        while not self._at_end():
            ch = self._peek()
            if ch == "\n":
                line, col = self.line, self.col
                self._advance()
                if self.bracket_depth == 0:
                    self._emit(TokenKind.NEWLINE, "\n", line, col)
                    self.line_has_content = False
                    self._begin_line()
                continue
            if ch in " \t":
                self._advance()
                continue
            if ch == "#":
                while not self._at_end() and self._peek() != "\n":
                    self._advance()
                continue
            self._scan_token()
        if self.line_has_content:
            self._emit(TokenKind.NEWLINE, "", self.line, self.col)
        while len(self.indents) > 1:
            self.indents.pop()
            self._emit(TokenKind.DEDENT, "", self.line, self.col)
        self.tokens.append(Token(TokenKind.EOF, "", self.line, self.col))
        return self.tokens

    def _begin_line(self) -> None:
        """Consume indentation at a line start, skipping blank and comment lines."""
        while True:
            start_line, start_col = self.line, self.col
            indent_chars: List[str] = []
            while self._peek() in (" ", "\t"):
                indent_chars.append(self._advance())
            nxt = self._peek()
            if nxt == "":
                return
            if nxt == "\n":
                self._advance()
                continue
            if nxt == "#":
                while not self._at_end() and self._peek() != "\n":
                    self._advance()
                continue
            indent = "".join(indent_chars)
            if " " in indent and "\t" in indent:
                raise self._error(
                    "mixed tabs and spaces in indentation", start_line, start_col
                )
            self._apply_indent(indent, start_line)
            return

    def _apply_indent(self, indent: str, line: int) -> None:
        top = self.indents[-1]
        if indent == top:
            return
        if indent.startswith(top):
            self.indents.append(indent)
            self._emit(TokenKind.INDENT, indent, line, 1)
            return
        while len(self.indents) > 1 and len(self.indents[-1]) > len(indent):
            self.indents.pop()
            self._emit(TokenKind.DEDENT, "", line, 1)
        if self.indents[-1] != indent:
            raise self._error(
                "unindent does not match any outer indentation level", line, 1
            )

    # -- individual tokens ---------------------------------------------------

    def _scan_token(self) -> None:
        line, col = self.line, self.col
        ch = self._peek()

        if ch in "fF" and self._peek(1) in ("'", '"'):
            self._scan_fstring(line, col)
            return
        if ch in ("'", '"'):
            self._scan_string(line, col)
            return
        if ch.isdigit():
            self._scan_number(line, col)
            return
        if ch == "_" or ("a" <= ch <= "z") or ("A" <= ch <= "Z"):
            self._scan_word(line, col)
            return

        two = self._peek() + self._peek(1)
        if two in _TWO_CHAR_OPS:
            self._advance()
            self._advance()
            self._emit(TokenKind.OP, two, line, col)
            return
        if ch in _ONE_CHAR_OPS:
            self._advance()
            if ch in "([{":
                self.bracket_depth += 1
            elif ch in ")]}" and self.bracket_depth > 0:
                self.bracket_depth -= 1
            self._emit(TokenKind.OP, ch, line, col)
            return
        raise self._error(f"unexpected character {ch!r}", line, col)

    def _scan_word(self, line: int, col: int) -> None:
        start = self.pos
        while True:
            ch = self._peek()
            if ch == "_" or ch.isdigit() or ("a" <= ch <= "z") or ("A" <= ch <= "Z"):
                self._advance()
            else:
                break
        text = self.src[start : self.pos]
        if text == "is":
            self._emit(TokenKind.OP, text, line, col)
        elif text in KEYWORDS:
            self._emit(TokenKind.KEYWORD, text, line, col)
        else:
            self._emit(TokenKind.IDENT, text, line, col)

    def _scan_number(self, line: int, col: int) -> None:
        start = self.pos
        while self._peek().isdigit():
            self._advance()
        nxt = self._peek()
        if nxt == "." and self._peek(1).isdigit():
            raise self._error("decimal numbers are not supported")
        if nxt == "_" or nxt.isalpha():
            raise self._error("invalid number literal")
        self._emit(TokenKind.INT, self.src[start : self.pos], line, col)

    def _scan_string(self, line: int, col: int) -> None:
        start = self.pos
        quote = self._advance()
        while True:
            if self._at_end() or self._peek() == "\n":
                raise self._error("unterminated string literal", line, col)
            ch = self._advance()
            if ch == "\\":
                if self._at_end():
                    raise self._error("unterminated string literal", line, col)
                esc = self._advance()
                if esc not in _ESCAPES:
                    raise self._error(f"unsupported escape sequence '\\{esc}'")
                continue
            if ch == quote:
                break
        self._emit(TokenKind.STRING, self.src[start : self.pos], line, col)

    def _scan_fstring(self, line: int, col: int) -> None:
        start = self.pos
        self._advance()  # f
        quote = self._advance()
        depth = 0
        while True:
            if self._at_end() or self._peek() == "\n":
                raise self._error("unterminated f-string literal", line, col)
            ch = self._advance()
            if depth == 0:
                if ch == quote:
                    break
                if ch == "\\":
                    if self._at_end():
                        raise self._error("unterminated f-string literal", line, col)
                    esc = self._advance()
                    if esc not in _ESCAPES:
                        raise self._error(f"unsupported escape sequence '\\{esc}'")
                elif ch == "{":
                    if self._peek() == "{":
                        self._advance()
                    else:
                        depth = 1
                elif ch == "}":
                    if self._peek() == "}":
                        self._advance()
                    else:
                        raise self._error("single '}' in f-string", line, col)
            else:
                if ch in ("'", '"'):
                    self._skip_quoted_run(ch, line, col)
                elif ch == "{":
                    depth += 1
                elif ch == "}":
                    depth -= 1
        self._emit(TokenKind.FSTRING, self.src[start : self.pos], line, col)

    def _skip_quoted_run(self, quote: str, line: int, col: int) -> None:
        """Skip a quoted string inside an f-string expression, verbatim."""
        while True:
            if self._at_end() or self._peek() == "\n":
                raise self._error("unterminated f-string literal", line, col)
            ch = self._advance()
            if ch == "\\":
                if not self._at_end():
                    self._advance()
                continue
            if ch == quote:
                return


# -- lexeme decoding, shared with the parser ---------------------------------


def decode_string(lexeme: str) -> str:
    """Cooked value of a validated STRING lexeme (quotes stripped, escapes applied)."""
    body = lexeme[1:-1]
    out: List[str] = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\":
            out.append(_ESCAPES[body[i + 1]])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def split_fstring(lexeme: str) -> List[tuple]:
    """Split a validated FSTRING lexeme into ("lit", text) / ("expr", source) pieces.

    Literal pieces come back cooked; expression pieces are raw source for
    re-tokenizing. Adjacent literal runs are merged.
    """
    body = lexeme[2:-1]
    pieces: List[tuple] = []
    lit: List[str] = []

    def flush() -> None:
        if lit:
            pieces.append(("lit", "".join(lit)))
            lit.clear()

    i = 0
    n = len(body)
    while i < n:
        ch = body[i]
        if ch == "\\":
            lit.append(_ESCAPES[body[i + 1]])
            i += 2
            continue
        if ch == "{":
            if i + 1 < n and body[i + 1] == "{":
                lit.append("{")
                i += 2
                continue
            flush()
            i += 1
            depth = 1
            expr: List[str] = []
            while i < n and depth > 0:
                c = body[i]
                if c in ("'", '"'):
                    expr.append(c)
                    i += 1
                    while i < n:
                        if body[i] == "\\":
                            expr.append(body[i])
                            i += 1
                            if i < n:
                                expr.append(body[i])
                                i += 1
                            continue
                        expr.append(body[i])
                        i += 1
                        if expr[-1] == c:
                            break
                    continue
                if c == "{":
                    depth += 1
                elif c == "}":
                    depth -= 1
                    if depth == 0:
                        i += 1
                        break
                expr.append(c)
                i += 1
            pieces.append(("expr", "".join(expr)))
            continue
        if ch == "}":
            lit.append("}")
            i += 2
            continue
        lit.append(ch)
        i += 1
    flush()
    return pieces
