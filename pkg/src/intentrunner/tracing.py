"""Trace events recording every function-table invocation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List

from .values import Value, copy_value, render_value

TraceSink = Callable[["TraceEvent"], None]


def render_trace_line(function: str, args: list) -> str:
    """Canonical one-line rendering of an invocation.

    Zero-argument calls end after ``arguments `` with nothing quoted.
    """
    rendered_args = ", ".join('"' + render_value(arg) + '"' for arg in args)
    return f'Execute "{function}" and arguments {rendered_args}'


@dataclass(frozen=True)
class TraceEvent:
    """One successful invocation: name, argument snapshot, rendered line."""

    function: str
    args: tuple
    rendered: str

    @classmethod
    def for_call(cls, function: str, args: list) -> "TraceEvent":
        # Snapshot the arguments: lists are mutable and may change after the call.
        snapshot = tuple(copy_value(arg) for arg in args)
        return cls(function=function, args=snapshot, rendered=render_trace_line(function, args))


class TraceCollector:
    """Callable sink that accumulates events in order."""

    def __init__(self) -> None:
        self.events: List[TraceEvent] = []

    def __call__(self, event: TraceEvent) -> None:
        self.events.append(event)

    @property
    def lines(self) -> list:
        return [event.rendered for event in self.events]
