from __future__ import annotations

import pytest

from intentrunner.lang import (
    Assign,
    Binary,
    BoolLit,
    Break,
    Call,
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
    ScriptSyntaxError,
    StringLit,
    Unary,
    UnsupportedConstructError,
    While,
    dump,
    parse_source,
)


def expr_of(source: str):
    program = parse_source(source)
    assert len(program.statements) == 1
    return program.statements[0].value


class TestGoldenSample:
    def test_structure(self, golden_code):
        program = parse_source(golden_code)
        assert len(program.statements) == 6
        assert all(isinstance(s, Assign) for s in program.statements[:5])
        outer_if = program.statements[5]
        assert isinstance(outer_if, If)
        assert len(outer_if.arms) == 1
        assert outer_if.else_body is not None
        assert outer_if.arms[0].cond == Binary("is-not-null", Name("contact_id"), NullLit())

    def test_nested_append_branch(self, golden_code):
        program = parse_source(golden_code)
        inner = program.statements[5].arms[0].body
        second_if = inner[1]
        assert isinstance(second_if, If)
        third_if = second_if.arms[0].body[2]
        assert third_if.arms[0].body == (
            ExprStmt(MethodCall(Name("attachments"), "append", (Name("file_id"),))),
        )


class TestStatements:
    def test_assignment_forms(self):
        program = parse_source("x = 1\nx += 2\n")
        assert program.statements == (
            Assign("x", "=", IntLit(1)),
            Assign("x", "+=", IntLit(2)),
        )

    def test_if_elif_else(self):
        program = parse_source(
            "if a:\n    pass\nelif b:\n    pass\nelif c:\n    pass\nelse:\n    pass\n"
        )
        stmt = program.statements[0]
        assert [arm.cond for arm in stmt.arms] == [Name("a"), Name("b"), Name("c")]
        assert stmt.else_body == (Pass(),)

    def test_while_and_for(self):
        program = parse_source("while x:\n    break\nfor i in items:\n    continue\n")
        assert isinstance(program.statements[0], While)
        loop = program.statements[1]
        assert isinstance(loop, For)
        assert loop.var == "i"
        assert loop.iterable == Name("items")

    def test_import_forms(self):
        assert parse_source("import os\n").statements == (Import("os"),)
        assert parse_source("import os.path\n").statements == (Import("os.path"),)
        assert parse_source("import os, sys\n").statements == (
            Import("os"),
            Import("sys"),
        )
        assert parse_source("import numpy as np\n").statements == (Import("numpy"),)
        assert parse_source("from os import path, sep\n").statements == (Import("os"),)
        assert parse_source("from os import *\n").statements == (Import("os"),)

    def test_inline_suite(self):
        program = parse_source("if x: pass\n")
        assert program.statements[0].arms[0].body == (Pass(),)

    def test_empty_sources(self):
        assert parse_source("").statements == ()
        assert parse_source("# just a comment\n").statements == ()


class TestExpressions:
    def test_precedence_arithmetic(self):
        assert expr_of("x = 1 + 2 * 3\n") == Assign(
            "x", "=", Binary("+", IntLit(1), Binary("*", IntLit(2), IntLit(3)))
        ).value

    def test_unary_minus_binds_tighter_than_multiplication(self):
        assert expr_of("x = -2 * 3\n") == Binary(
            "*", Unary("-", IntLit(2)), IntLit(3)
        )

    def test_not_binds_looser_than_comparison(self):
        assert expr_of("x = not a == b\n") == Unary(
            "not", Binary("==", Name("a"), Name("b"))
        )

    def test_and_or_precedence(self):
        assert expr_of("x = a or b and c\n") == Binary(
            "or", Name("a"), Binary("and", Name("b"), Name("c"))
        )

    def test_parentheses_override(self):
        assert expr_of("x = (1 + 2) * 3\n") == Binary(
            "*", Binary("+", IntLit(1), IntLit(2)), IntLit(3)
        )

    def test_none_tests(self):
        assert expr_of("x = a is None\n") == Binary("is-null", Name("a"), NullLit())
        assert expr_of("x = a is not None\n") == Binary(
            "is-not-null", Name("a"), NullLit()
        )

    def test_not_in_desugars(self):
        assert expr_of("x = a not in b\n") == Unary(
            "not", Binary("in", Name("a"), Name("b"))
        )

    def test_calls_methods_indexing(self):
        assert expr_of("x = f(1, g(2), [3])\n") == Call(
            "f", (IntLit(1), Call("g", (IntLit(2),)), ListLit((IntLit(3),)))
        )
        assert expr_of("x = items.append(4)\n") == MethodCall(
            Name("items"), "append", (IntLit(4),)
        )
        assert expr_of("x = files[0]\n") == Index(Name("files"), IntLit(0))
        assert expr_of("x = files[-1]\n") == Index(
            Name("files"), Unary("-", IntLit(1))
        )

    def test_trailing_commas(self):
        assert expr_of("x = f(1,)\n") == Call("f", (IntLit(1),))
        assert expr_of("x = [1, 2,]\n") == ListLit((IntLit(1), IntLit(2)))

    def test_literals(self):
        assert expr_of("x = None\n") == NullLit()
        assert expr_of("x = True\n") == BoolLit(True)
        assert expr_of("x = False\n") == BoolLit(False)
        assert expr_of('x = "hi"\n') == StringLit("hi")

    def test_fstring_parts(self):
        expr = expr_of('x = f"id {file_id} of {n + 1}!"\n')
        assert expr == FStringLit(
            ("id ", Name("file_id"), " of ", Binary("+", Name("n"), IntLit(1)), "!")
        )

    def test_fstring_literal_braces(self):
        assert expr_of('x = f"{{x}}"\n') == FStringLit(("{x}",))


UNSUPPORTED_CASES = [
    ("def f():\n    pass\n", "def"),
    ("class A:\n    pass\n", "class"),
    ("try:\n    pass\n", "try"),
    ("with open(f) as fh:\n    pass\n", "with"),
    ("return 1\n", "return"),
    ("yield 1\n", "yield"),
    ("x = lambda y: y\n", "lambda"),
    ("x = [i for i in items]\n", "comprehension"),
    ("f(*args)\n", "star argument"),
    ("f(key=1)\n", "keyword argument"),
    ("x = a < b < c\n", "chained comparison"),
    ("x = obj.attr\n", "attribute access without a call"),
    ("x = a is b\n", "identity comparison with a non-None operand"),
    ("x = (1, 2)\n", "tuple"),
    ("a, b = f()\n", "tuple"),
    ("x = {}\n", "dict or set literal"),
    ("x = items[1:3]\n", "slice"),
    ("x = 1 if a else 2\n", "conditional expression"),
    ("x -= 1\n", "augmented assignment '-='"),
    ('x = f"{a:>5}"\n', "f-string format specifier"),
    ('x = f"{a!r}"\n', "f-string conversion"),
    ("assert x\n", "assert"),
    ("del x\n", "del"),
    ("raise ValueError\n", "raise"),
    ("global x\n", "global"),
]


@pytest.mark.parametrize("source,construct", UNSUPPORTED_CASES)
def test_unsupported_constructs(source, construct):
    with pytest.raises(UnsupportedConstructError) as err:
        parse_source(source)
    assert err.value.construct == construct


def test_unsupported_reports_line():
    with pytest.raises(UnsupportedConstructError) as err:
        parse_source("x = 1\ndef f():\n    pass\n")
    assert err.value.line == 2


SYNTAX_ERROR_CASES = [
    "if x\n    pass\n",          # missing colon
    "x +\n",                     # dangling operator
    "f(1\n",                     # unclosed call
    "break\n",                   # outside loop
    "continue\n",                # outside loop
    "else:\n    pass\n",         # orphan else
    "elif x:\n    pass\n",       # orphan elif
    "x[0] = 1\n",                # subscript assignment
    "    x = 1\n",               # unexpected indent
    "if x:\n",                   # missing block
    "if x: if y: pass\n",        # inline compound
    "f()(1)\n",                  # calling a call result
    'x = f"{}"\n',               # empty f-string expression
    "import\n",                  # missing module name
    "pass pass\n",               # trailing junk
]


@pytest.mark.parametrize("source", SYNTAX_ERROR_CASES)
def test_syntax_errors(source):
    with pytest.raises(ScriptSyntaxError):
        parse_source(source)


def test_error_position_points_into_offending_line():
    with pytest.raises(ScriptSyntaxError) as err:
        parse_source("x = 1\ny = (2\n")
    assert err.value.line == 2
    assert err.value.col >= 1


def test_deep_nesting_is_rejected_not_crashing():
    source = "x = " + "(" * 300 + "1" + ")" * 300 + "\n"
    with pytest.raises(ScriptSyntaxError) as err:
        parse_source(source)
    assert "nesting" in err.value.reason


def test_import_parses_but_is_flagged_for_executor(golden_code):
    # Grammar admits import; rejection happens at execution time.
    program = parse_source("import os\n")
    assert program.statements == (Import("os"),)


def test_dump_is_stable_and_position_free():
    a = dump(parse_source("if x:\n    y = f(1)\nelse:\n    pass\n"))
    b = dump(parse_source("\n\nif x:\n    y = f(1)\nelse:\n    pass\n"))
    assert a == b
    assert "If" in a and "Call callee='f'" in a and "else" in a
