"""Prompt construction from an intention and a function table."""

from __future__ import annotations

from dataclasses import dataclass

from .functable import FunctionTable

ROLE_MESSAGE = "You are a Python 3 code generator"

_API_HEADER = "You have the following application programming interface:"
_INSTRUCTION = (
    "Write Python 3 code only, "
    "which uses the application programming interface for the instruction"
)


class EmptyIntentionError(ValueError):
    pass


@dataclass(frozen=True)
class Intention:
    """A user goal in natural language. Must contain visible characters."""

    text: str

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise EmptyIntentionError("intention text is empty")


@dataclass(frozen=True)
class PromptBundle:
    """Role message plus rendered prompt body, carried separately so chat
    backends can send them as system and user messages."""

    role: str
    body: str


def render_prompt(
    intention: Intention,
    table: FunctionTable,
    role: str = ROLE_MESSAGE,
) -> PromptBundle:
    """Render the prompt body for an intention.

    The intention is substituted literally between double quotes, with no
    escaping or normalization; the output carries LF line endings and no
    trailing newline.
    """
    body = (
        f"{_API_HEADER}\n"
        "\n"
        f"{table.render_docs()}\n"
        "\n"
        f"{_INSTRUCTION}\n"
        f'"{intention.text}"'
    )
    return PromptBundle(role=role, body=body)
