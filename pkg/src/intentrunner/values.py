"""Runtime value universe shared by the function table and the interpreter.

Values are plain Python objects restricted to five shapes: ``None``, ``bool``,
``int``, ``str`` and ``list`` (of further values). All operations on them go
through the helpers here so that the semantics stay under our control instead
of inheriting Python quirks (``True == 1`` is false here, for example).
"""

from __future__ import annotations

from typing import Union

Value = Union[None, bool, int, str, list]


def is_int(value: Value) -> bool:
    """True for integers. Booleans are a distinct variant, not integers."""
    return isinstance(value, int) and not isinstance(value, bool)


def type_name(value: Value) -> str:
    """Short name of a value's variant, for error messages."""
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, int):
        return "integer"
    if isinstance(value, str):
        return "string"
    if isinstance(value, list):
        return "list"
    raise TypeError(f"not a runtime value: {value!r}")


def render_value(value: Value) -> str:
    """Render a value the way it appears in trace lines.

    Strings render as their characters with no quotes or escaping; lists
    render bracketed with string items quoted.
    """
    if value is None:
        return "None"
    if isinstance(value, bool):
        return "True" if value else "False"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return value
    if isinstance(value, list):
        return "[" + ", ".join(_render_item(item) for item in value) + "]"
    raise TypeError(f"not a runtime value: {value!r}")


def _render_item(value: Value) -> str:
    if isinstance(value, str):
        return '"' + value + '"'
    return render_value(value)


def truthiness(value: Value) -> bool:
    """Condition semantics: null is false, containers are true when non-empty."""
    if value is None:
        return False
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return value != 0
    if isinstance(value, (str, list)):
        return len(value) > 0
    raise TypeError(f"not a runtime value: {value!r}")


def values_equal(a: Value, b: Value) -> bool:
    """Structural equality. Values of different variants are never equal."""
    if a is None or b is None:
        return a is None and b is None
    if isinstance(a, bool) or isinstance(b, bool):
        return isinstance(a, bool) and isinstance(b, bool) and a == b
    if isinstance(a, int) and isinstance(b, int):
        return a == b
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(values_equal(x, y) for x, y in zip(a, b))
    return False


def copy_value(value: Value) -> Value:
    """Deep copy; only lists carry mutable state."""
    if isinstance(value, list):
        return [copy_value(item) for item in value]
    return value
