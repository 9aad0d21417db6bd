from __future__ import annotations

import pytest

from intentrunner.functable import FunctionTable, default_stub_table, parse_signature, FunctionEntry
from intentrunner.prompting import (
    ROLE_MESSAGE,
    EmptyIntentionError,
    Intention,
    PromptBundle,
    render_prompt,
)

INTENTION_1 = "Please send my car title to my insurance company"


def single_function_table():
    sig = parse_signature("function get_weather(city: String): String")
    return FunctionTable((FunctionEntry(sig, lambda args: ""),))


def test_golden_prompt_byte_exact(stub_table, golden_prompt):
    bundle = render_prompt(Intention(INTENTION_1), stub_table)
    assert bundle.body == golden_prompt


def test_role_message(stub_table):
    bundle = render_prompt(Intention("x"), stub_table)
    assert bundle.role == "You are a Python 3 code generator"
    assert ROLE_MESSAGE not in bundle.body


def test_minimal_table_gives_five_line_body():
    bundle = render_prompt(Intention("x"), single_function_table())
    assert bundle.body == (
        "You have the following application programming interface:\n"
        "\n"
        "function get_weather(city: String): String\n"
        "\n"
        "Write Python 3 code only, which uses the application programming "
        "interface for the instruction\n"
        '"x"'
    )
    assert len(bundle.body.split("\n")) == 6


def test_embedded_quote_is_substituted_literally(stub_table):
    bundle = render_prompt(Intention('say "hi"'), stub_table)
    assert bundle.body.endswith('\n"say "hi""')


def test_no_trailing_newline(stub_table):
    body = render_prompt(Intention("x"), stub_table).body
    assert not body.endswith("\n")


def test_pure_function(stub_table):
    a = render_prompt(Intention(INTENTION_1), stub_table)
    b = render_prompt(Intention(INTENTION_1), stub_table)
    assert a == b == PromptBundle(a.role, a.body)


def test_body_contains_docs_block(stub_table):
    bundle = render_prompt(Intention("x"), stub_table)
    assert stub_table.render_docs() in bundle.body


def test_function_line_count_matches_table_size(stub_table):
    bundle = render_prompt(Intention("x"), stub_table)
    count = sum(1 for line in bundle.body.split("\n") if line.startswith("function "))
    assert count == len(stub_table)


@pytest.mark.parametrize("text", ["", "   ", "\n\t"])
def test_empty_intention_rejected(text):
    with pytest.raises(EmptyIntentionError):
        Intention(text)
