"""Recursive-descent parser for the scripting subset.

Anything outside the subset is rejected with a classified error: plain
malformed input raises ScriptSyntaxError, while recognizable Python features
the subset deliberately excludes (def, class, comprehensions, slices, ...)
raise UnsupportedConstructError so callers can account for them separately.
"""

from __future__ import annotations

from typing import List, Optional, Tuple

from .lexer import LexError, decode_string, split_fstring, tokenize
from .nodes import (
    Arm,
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
from .tokens import Token, TokenKind


class ScriptSyntaxError(Exception):
    """Malformed input, with the position and what was expected."""

    def __init__(self, line: int, col: int, message: str) -> None:
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col
        self.reason = message


class UnsupportedConstructError(Exception):
    """A recognizable construct the subset does not admit."""

    def __init__(self, construct: str, line: int) -> None:
        super().__init__(f"line {line}: unsupported construct: {construct}")
        self.construct = construct
        self.line = line


# Each nesting level costs ~10 interpreter stack frames while parsing, so the
# budget must stay well under Python's recursion limit.
_MAX_DEPTH = 64

_UNSUPPORTED_STMT_KEYWORDS = frozenset(
    {
        "assert",
        "async",
        "await",
        "class",
        "def",
        "del",
        "global",
        "nonlocal",
        "raise",
        "return",
        "try",
        "with",
        "yield",
    }
)

_COMPARE_OPS = frozenset({"==", "!=", "<", "<=", ">", ">="})
_UNSUPPORTED_AUG_OPS = frozenset({"-=", "*=", "/="})


def parse(tokens: List[Token]) -> Program:
    """Parse a token stream (as produced by tokenize) into a Program."""
    return _Parser(tokens).parse_program()


def parse_source(source: str) -> Program:
    """Tokenize and parse in one step."""
    return parse(tokenize(source))


class _Parser:
    def __init__(self, tokens: List[Token], depth_budget: int = _MAX_DEPTH) -> None:
        self.tokens = tokens
        self.pos = 0
        self.depth = 0
        self.depth_budget = depth_budget
        self.loop_depth = 0

    # -- token helpers -----------------------------------------------------

    def _peek(self, offset: int = 0) -> Token:
        idx = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[idx]

    def _advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != TokenKind.EOF:
            self.pos += 1
        return tok

    def _syntax_error(self, tok: Token, message: str) -> ScriptSyntaxError:
        # Errors at end of input point at the last real token instead of the
        # position past the final newline. Synthetic tokens (EOF, the NEWLINE
        # injected when input ends mid-line) have empty text.
        idx = self.pos
        probe = tok
        while idx > 0 and (
            probe.kind == TokenKind.EOF
            or (probe.kind == TokenKind.NEWLINE and probe.text == "")
        ):
            idx -= 1
            probe = self.tokens[idx]
        return ScriptSyntaxError(probe.line, probe.col, message)

    def _check_op(self, text: str) -> bool:
        tok = self._peek()
        return tok.kind == TokenKind.OP and tok.text == text

    def _check_keyword(self, text: str) -> bool:
        tok = self._peek()
        return tok.kind == TokenKind.KEYWORD and tok.text == text

    def _expect_op(self, text: str) -> Token:
        if not self._check_op(text):
            raise self._syntax_error(self._peek(), f"expected '{text}'")
        return self._advance()

    def _expect_ident(self, what: str) -> Token:
        tok = self._peek()
        if tok.kind != TokenKind.IDENT:
            raise self._syntax_error(tok, f"expected {what}")
        return self._advance()

    def _expect_newline(self) -> None:
        tok = self._peek()
        if tok.kind != TokenKind.NEWLINE:
            raise self._syntax_error(
                tok, f"expected end of line, found {_describe(tok)}"
            )
        self._advance()

    def _enter(self) -> None:
        self.depth += 1
        if self.depth > self.depth_budget:
            tok = self._peek()
            raise ScriptSyntaxError(tok.line, tok.col, "nesting too deep")

    def _exit(self) -> None:
        self.depth -= 1

    # -- program and statements ---------------------------------------------

    def parse_program(self) -> Program:
        statements: List[Stmt] = []
        while self._peek().kind != TokenKind.EOF:
            statements.extend(self.parse_statement())
        return Program(tuple(statements))

    def parse_statement(self) -> List[Stmt]:
        self._enter()
        try:
            tok = self._peek()
            if tok.kind == TokenKind.INDENT:
                raise ScriptSyntaxError(tok.line, tok.col, "unexpected indent")
            if tok.kind in (TokenKind.NEWLINE, TokenKind.DEDENT):
                raise ScriptSyntaxError(tok.line, tok.col, "expected a statement")
            if tok.kind == TokenKind.KEYWORD:
                if tok.text == "if":
                    return [self._parse_if()]
                if tok.text == "while":
                    return [self._parse_while()]
                if tok.text == "for":
                    return [self._parse_for()]
            return self._parse_simple_statement()
        finally:
            self._exit()

    def _parse_simple_statement(self) -> List[Stmt]:
        tok = self._peek()
        if tok.kind == TokenKind.KEYWORD:
            if tok.text in ("pass", "break", "continue"):
                self._advance()
                if tok.text in ("break", "continue") and self.loop_depth == 0:
                    raise ScriptSyntaxError(
                        tok.line, tok.col, f"'{tok.text}' outside a loop"
                    )
                self._expect_newline()
                if tok.text == "pass":
                    return [Pass(line=tok.line)]
                if tok.text == "break":
                    return [Break(line=tok.line)]
                return [Continue(line=tok.line)]
            if tok.text == "import":
                return self._parse_import()
            if tok.text == "from":
                return self._parse_from_import()
            if tok.text in _UNSUPPORTED_STMT_KEYWORDS:
                raise UnsupportedConstructError(tok.text, tok.line)
            if tok.text in ("elif", "else"):
                raise ScriptSyntaxError(
                    tok.line, tok.col, f"'{tok.text}' without a matching 'if'"
                )
            if tok.text in ("except", "finally", "as", "in", "and", "or"):
                raise ScriptSyntaxError(tok.line, tok.col, f"unexpected '{tok.text}'")
        if tok.kind == TokenKind.IDENT:
            nxt = self._peek(1)
            if nxt.kind == TokenKind.OP and nxt.text in ("=", "+="):
                return [self._parse_assign()]
            if nxt.kind == TokenKind.OP and nxt.text in _UNSUPPORTED_AUG_OPS:
                raise UnsupportedConstructError(
                    f"augmented assignment '{nxt.text}'", tok.line
                )
        value = self.parse_expression()
        nxt = self._peek()
        if nxt.kind == TokenKind.OP and nxt.text == "=":
            raise ScriptSyntaxError(nxt.line, nxt.col, "cannot assign to this expression")
        if nxt.kind == TokenKind.OP and nxt.text == ",":
            raise UnsupportedConstructError("tuple", nxt.line)
        self._expect_newline()
        return [ExprStmt(value, line=tok.line)]

    def _parse_assign(self) -> Stmt:
        target = self._advance()
        op = self._advance()
        value = self.parse_expression()
        self._expect_newline()
        return Assign(target.text, op.text, value, line=target.line)

    def _parse_import(self) -> List[Stmt]:
        kw = self._advance()
        stmts: List[Stmt] = [Import(self._parse_dotted_name(), line=kw.line)]
        self._maybe_skip_alias()
        while self._check_op(","):
            self._advance()
            stmts.append(Import(self._parse_dotted_name(), line=kw.line))
            self._maybe_skip_alias()
        self._expect_newline()
        return stmts

    def _parse_from_import(self) -> List[Stmt]:
        kw = self._advance()
        module = self._parse_dotted_name()
        tok = self._peek()
        if not (tok.kind == TokenKind.KEYWORD and tok.text == "import"):
            raise ScriptSyntaxError(tok.line, tok.col, "expected 'import'")
        self._advance()
        # Imported names never execute; validate loosely and discard them.
        saw_name = False
        while True:
            tok = self._peek()
            if tok.kind == TokenKind.NEWLINE:
                break
            if tok.kind == TokenKind.IDENT or (
                tok.kind == TokenKind.KEYWORD and tok.text == "as"
            ):
                saw_name = True
                self._advance()
                continue
            if tok.kind == TokenKind.OP and tok.text in ("*", ",", "(", ")"):
                saw_name = saw_name or tok.text == "*"
                self._advance()
                continue
            raise ScriptSyntaxError(tok.line, tok.col, "malformed import")
        if not saw_name:
            raise ScriptSyntaxError(kw.line, kw.col, "malformed import")
        self._expect_newline()
        return [Import(module, line=kw.line)]

    def _parse_dotted_name(self) -> str:
        parts = [self._expect_ident("a module name").text]
        while self._check_op("."):
            self._advance()
            parts.append(self._expect_ident("a module name").text)
        return ".".join(parts)

    def _maybe_skip_alias(self) -> None:
        if self._check_keyword("as"):
            self._advance()
            self._expect_ident("an alias name")

    def _parse_if(self) -> Stmt:
        kw = self._advance()
        arms = [self._parse_arm(kw.line)]
        while self._check_keyword("elif"):
            arm_kw = self._advance()
            arms.append(self._parse_arm(arm_kw.line))
        else_body: Optional[Tuple[Stmt, ...]] = None
        if self._check_keyword("else"):
            self._advance()
            else_body = self._parse_suite()
        return If(tuple(arms), else_body, line=kw.line)

    def _parse_arm(self, line: int) -> Arm:
        cond = self.parse_expression()
        body = self._parse_suite()
        return Arm(cond, body, line=line)

    def _parse_while(self) -> Stmt:
        kw = self._advance()
        cond = self.parse_expression()
        self.loop_depth += 1
        try:
            body = self._parse_suite()
        finally:
            self.loop_depth -= 1
        return While(cond, body, line=kw.line)

    def _parse_for(self) -> Stmt:
        kw = self._advance()
        var = self._expect_ident("a loop variable")
        if self._check_op(","):
            raise UnsupportedConstructError("tuple", var.line)
        tok = self._peek()
        if not (tok.kind == TokenKind.KEYWORD and tok.text == "in"):
            raise ScriptSyntaxError(tok.line, tok.col, "expected 'in'")
        self._advance()
        iterable = self.parse_expression()
        self.loop_depth += 1
        try:
            body = self._parse_suite()
        finally:
            self.loop_depth -= 1
        return For(var.text, iterable, body, line=kw.line)

    def _parse_suite(self) -> Tuple[Stmt, ...]:
        self._expect_op(":")
        if self._peek().kind != TokenKind.NEWLINE:
            tok = self._peek()
            if tok.kind == TokenKind.KEYWORD and tok.text in ("if", "while", "for"):
                raise ScriptSyntaxError(
                    tok.line, tok.col, "compound statement not allowed on one line"
                )
            return tuple(self._parse_simple_statement())
        self._advance()
        tok = self._peek()
        if tok.kind != TokenKind.INDENT:
            raise ScriptSyntaxError(tok.line, tok.col, "expected an indented block")
        self._advance()
        statements: List[Stmt] = []
        while True:
            tok = self._peek()
            if tok.kind == TokenKind.DEDENT:
                self._advance()
                break
            if tok.kind == TokenKind.EOF:
                raise ScriptSyntaxError(tok.line, tok.col, "expected dedent")
            statements.extend(self.parse_statement())
        return tuple(statements)

    # -- expressions ---------------------------------------------------------

    def parse_expression(self) -> Expr:
        expr = self._parse_or()
        if self._check_keyword("if"):
            raise UnsupportedConstructError("conditional expression", self._peek().line)
        return expr

    def _parse_or(self) -> Expr:
        self._enter()
        try:
            expr = self._parse_and()
            while self._check_keyword("or"):
                tok = self._advance()
                expr = Binary("or", expr, self._parse_and(), line=tok.line)
            return expr
        finally:
            self._exit()

    def _parse_and(self) -> Expr:
        expr = self._parse_not()
        while self._check_keyword("and"):
            tok = self._advance()
            expr = Binary("and", expr, self._parse_not(), line=tok.line)
        return expr

    def _parse_not(self) -> Expr:
        self._enter()
        try:
            if self._check_keyword("not"):
                tok = self._advance()
                return Unary("not", self._parse_not(), line=tok.line)
            return self._parse_comparison()
        finally:
            self._exit()

    def _parse_comparison(self) -> Expr:
        left = self._parse_additive()
        result = None
        tok = self._peek()
        if tok.kind == TokenKind.OP and tok.text in _COMPARE_OPS:
            self._advance()
            result = Binary(tok.text, left, self._parse_additive(), line=tok.line)
        elif tok.kind == TokenKind.KEYWORD and tok.text == "in":
            self._advance()
            result = Binary("in", left, self._parse_additive(), line=tok.line)
        elif (
            tok.kind == TokenKind.KEYWORD
            and tok.text == "not"
            and self._peek(1).kind == TokenKind.KEYWORD
            and self._peek(1).text == "in"
        ):
            self._advance()
            self._advance()
            inner = Binary("in", left, self._parse_additive(), line=tok.line)
            result = Unary("not", inner, line=tok.line)
        elif tok.kind == TokenKind.OP and tok.text == "is":
            self._advance()
            negated = False
            if self._check_keyword("not"):
                self._advance()
                negated = True
            if self._check_keyword("None"):
                none_tok = self._advance()
                op = "is-not-null" if negated else "is-null"
                result = Binary(op, left, NullLit(line=none_tok.line), line=tok.line)
            else:
                raise UnsupportedConstructError(
                    "identity comparison with a non-None operand", tok.line
                )
        if result is None:
            return left
        nxt = self._peek()
        if (nxt.kind == TokenKind.OP and (nxt.text in _COMPARE_OPS or nxt.text == "is")) or (
            nxt.kind == TokenKind.KEYWORD and nxt.text == "in"
        ):
            raise UnsupportedConstructError("chained comparison", nxt.line)
        return result

    def _parse_additive(self) -> Expr:
        expr = self._parse_multiplicative()
        while self._peek().kind == TokenKind.OP and self._peek().text in ("+", "-"):
            tok = self._advance()
            expr = Binary(tok.text, expr, self._parse_multiplicative(), line=tok.line)
        return expr

    def _parse_multiplicative(self) -> Expr:
        expr = self._parse_unary()
        while self._peek().kind == TokenKind.OP and self._peek().text in ("*", "/"):
            tok = self._advance()
            expr = Binary(tok.text, expr, self._parse_unary(), line=tok.line)
        return expr

    def _parse_unary(self) -> Expr:
        self._enter()
        try:
            if self._check_op("-"):
                tok = self._advance()
                return Unary("-", self._parse_unary(), line=tok.line)
            return self._parse_postfix()
        finally:
            self._exit()

    def _parse_postfix(self) -> Expr:
        expr = self._parse_primary()
        while True:
            if self._check_op("."):
                dot = self._advance()
                name = self._peek()
                if name.kind != TokenKind.IDENT:
                    raise ScriptSyntaxError(
                        name.line, name.col, "expected a method name after '.'"
                    )
                self._advance()
                if not self._check_op("("):
                    raise UnsupportedConstructError(
                        "attribute access without a call", dot.line
                    )
                args = self._parse_call_args()
                expr = MethodCall(expr, name.text, tuple(args), line=dot.line)
                continue
            if self._check_op("["):
                bracket = self._advance()
                if self._check_op(":"):
                    raise UnsupportedConstructError("slice", bracket.line)
                index = self.parse_expression()
                if self._check_op(":"):
                    raise UnsupportedConstructError("slice", bracket.line)
                self._expect_op("]")
                expr = Index(expr, index, line=bracket.line)
                continue
            if self._check_op("("):
                tok = self._peek()
                raise ScriptSyntaxError(
                    tok.line, tok.col, "only named functions can be called"
                )
            return expr

    def _parse_call_args(self) -> List[Expr]:
        self._expect_op("(")
        args: List[Expr] = []
        if self._check_op(")"):
            self._advance()
            return args
        while True:
            tok = self._peek()
            if tok.kind == TokenKind.OP and tok.text == "*":
                raise UnsupportedConstructError("star argument", tok.line)
            if (
                tok.kind == TokenKind.IDENT
                and self._peek(1).kind == TokenKind.OP
                and self._peek(1).text == "="
            ):
                raise UnsupportedConstructError("keyword argument", tok.line)
            args.append(self.parse_expression())
            if self._check_keyword("for"):
                raise UnsupportedConstructError("comprehension", self._peek().line)
            if self._check_op(","):
                self._advance()
                if self._check_op(")"):
                    break
                continue
            break
        self._expect_op(")")
        return args

    def _parse_primary(self) -> Expr:
        tok = self._peek()
        if tok.kind == TokenKind.INT:
            self._advance()
            return IntLit(int(tok.text), line=tok.line)
        if tok.kind == TokenKind.STRING:
            self._advance()
            return StringLit(decode_string(tok.text), line=tok.line)
        if tok.kind == TokenKind.FSTRING:
            self._advance()
            return self._parse_fstring(tok)
        if tok.kind == TokenKind.KEYWORD:
            if tok.text == "None":
                self._advance()
                return NullLit(line=tok.line)
            if tok.text == "True":
                self._advance()
                return BoolLit(True, line=tok.line)
            if tok.text == "False":
                self._advance()
                return BoolLit(False, line=tok.line)
            if tok.text == "lambda":
                raise UnsupportedConstructError("lambda", tok.line)
            if tok.text == "yield":
                raise UnsupportedConstructError("yield", tok.line)
            if tok.text == "await":
                raise UnsupportedConstructError("await", tok.line)
            raise ScriptSyntaxError(
                tok.line, tok.col, f"expected an expression, found '{tok.text}'"
            )
        if tok.kind == TokenKind.IDENT:
            self._advance()
            if self._check_op("("):
                args = self._parse_call_args()
                return Call(tok.text, tuple(args), line=tok.line)
            return Name(tok.text, line=tok.line)
        if tok.kind == TokenKind.OP:
            if tok.text == "(":
                self._advance()
                if self._check_op(")"):
                    raise UnsupportedConstructError("tuple", tok.line)
                inner = self.parse_expression()
                if self._check_op(","):
                    raise UnsupportedConstructError("tuple", tok.line)
                if self._check_keyword("for"):
                    raise UnsupportedConstructError("comprehension", tok.line)
                self._expect_op(")")
                return inner
            if tok.text == "[":
                return self._parse_list_literal()
            if tok.text == "{":
                raise UnsupportedConstructError("dict or set literal", tok.line)
        raise self._syntax_error(tok, f"expected an expression, found {_describe(tok)}")

    def _parse_list_literal(self) -> Expr:
        open_tok = self._advance()
        items: List[Expr] = []
        if self._check_op("]"):
            self._advance()
            return ListLit((), line=open_tok.line)
        while True:
            items.append(self.parse_expression())
            if self._check_keyword("for"):
                raise UnsupportedConstructError("comprehension", self._peek().line)
            if self._check_op(","):
                self._advance()
                if self._check_op("]"):
                    break
                continue
            break
        self._expect_op("]")
        return ListLit(tuple(items), line=open_tok.line)

    # -- f-strings -----------------------------------------------------------

    def _parse_fstring(self, tok: Token) -> Expr:
        parts: List = []
        for kind, text in split_fstring(tok.text):
            if kind == "lit":
                parts.append(text)
                continue
            if not text.strip():
                raise ScriptSyntaxError(
                    tok.line, tok.col, "empty expression in f-string"
                )
            _reject_fstring_directives(text, tok)
            parts.append(self._parse_embedded_expression(text, tok))
        return FStringLit(tuple(parts), line=tok.line)

    def _parse_embedded_expression(self, text: str, tok: Token) -> Expr:
        try:
            sub_tokens = tokenize(text)
        except LexError as exc:
            raise ScriptSyntaxError(
                tok.line, tok.col, f"invalid f-string expression: {exc.reason}"
            ) from exc
        sub = _Parser(sub_tokens, depth_budget=self.depth_budget - self.depth)
        try:
            expr = sub.parse_expression()
            nxt = sub._peek()
            if nxt.kind == TokenKind.NEWLINE:
                sub._advance()
                nxt = sub._peek()
            if nxt.kind != TokenKind.EOF:
                raise ScriptSyntaxError(
                    tok.line, tok.col, "malformed f-string expression"
                )
        except ScriptSyntaxError as exc:
            raise ScriptSyntaxError(
                tok.line, tok.col, f"invalid f-string expression: {exc.reason}"
            ) from exc
        except UnsupportedConstructError as exc:
            raise UnsupportedConstructError(exc.construct, tok.line) from exc
        return expr


def _reject_fstring_directives(text: str, tok: Token) -> None:
    """Refuse format specs, conversions and '=' annotations inside braces."""
    depth = 0
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c in ("'", '"'):
            quote = c
            i += 1
            while i < n:
                if text[i] == "\\":
                    i += 2
                    continue
                if text[i] == quote:
                    break
                i += 1
        elif c in "([{":
            depth += 1
        elif c in ")]}":
            depth -= 1
        elif depth == 0:
            if c == ":":
                raise UnsupportedConstructError("f-string format specifier", tok.line)
            if c == "!":
                if i + 1 < n and text[i + 1] == "=":
                    i += 1
                else:
                    raise UnsupportedConstructError("f-string conversion", tok.line)
            elif c == "=":
                prev = text[i - 1] if i > 0 else ""
                nxt = text[i + 1] if i + 1 < n else ""
                if nxt == "=":
                    i += 1
                elif prev not in "=<>!":
                    raise UnsupportedConstructError(
                        "f-string '=' specifier", tok.line
                    )
        i += 1


def _describe(tok: Token) -> str:
    if tok.kind == TokenKind.EOF:
        return "end of input"
    if tok.kind == TokenKind.NEWLINE:
        return "end of line"
    if tok.kind == TokenKind.INDENT:
        return "an indent"
    if tok.kind == TokenKind.DEDENT:
        return "a dedent"
    return f"'{tok.text}'"
