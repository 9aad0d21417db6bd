from __future__ import annotations

import pytest

from intentrunner.lang import parse_source, unparse
from intentrunner.lang.nodes import Assign, IntLit, Pass, Program

from conftest import corpus_sources
from genprograms import ProgramGenerator


def roundtrips(source: str) -> None:
    first = parse_source(source)
    again = parse_source(unparse(first))
    assert again == first


class TestUnparseBasics:
    def test_pass(self):
        assert unparse(Program((Pass(),))) == "pass\n"

    def test_assignment(self):
        assert unparse(Program((Assign("x", "=", IntLit(1)),))) == "x = 1\n"

    def test_empty_program(self):
        assert unparse(Program(())) == ""

    def test_canonical_indentation_and_quotes(self):
        source = "if x:\n  y = 'hi'\n"
        assert unparse(parse_source(source)) == 'if x:\n    y = "hi"\n'


TRICKY_SOURCES = [
    "x = 1 + 2 * 3 - 4 / 5\n",
    "x = (1 + 2) * 3\n",
    "x = not a == b or c and not d\n",
    "x = a is None\n",
    "x = a is not None\n",
    "x = a not in b\n",
    "x = -x + -2 * 3\n",
    "x = - -y\n",
    "x = \"quotes \\\" and \\' and \\\\ and \\n and \\t\"\n",
    "x = [1, [2, [3]], []]\n",
    "x = f(g(h(1), 2), [3], i())\n",
    "x = items.append([1])\n",
    "x = (a + b).append(1)\n",
    "x = files[0][1]\n",
    "x = (a or b)[0]\n",
    'x = f"a {x} b {y + 1} c"\n',
    'x = f"{x}"\n',
    'x = f""\n',
    'x = f"{{literal}} {x}"\n',
    'x = f"nested {f(\'quoted\')} end"\n',
    "if a:\n    pass\nelif b:\n    x = 1\nelse:\n    y = 2\n",
    "while a and b:\n    if c:\n        break\n    continue\n",
    "for i in range(10):\n    total += i\n",
    "import os.path\n",
    "x = 1 == (2 == 3)\n",
    "x = (a < b) != (c > d)\n",
    "x = a in (b in c)\n",
    "if x: pass\n",
]


@pytest.mark.parametrize("source", TRICKY_SOURCES)
def test_tricky_sources_roundtrip(source):
    roundtrips(source)


@pytest.mark.parametrize("name,code", corpus_sources())
def test_golden_corpus_roundtrips(name, code):
    roundtrips(code)


def test_generated_programs_roundtrip_quick():
    for seed in range(150):
        program = ProgramGenerator(seed).program()
        source = unparse(program)
        assert parse_source(source) == program, f"seed {seed} failed:\n{source}"


def test_unparse_is_stable_fixed_point():
    for seed in range(40):
        program = ProgramGenerator(seed).program()
        once = unparse(program)
        assert unparse(parse_source(once)) == once
