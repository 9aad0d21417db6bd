"""Typed registry of the functions generated code is allowed to call.

The table serves two purposes: it renders the API documentation block that is
embedded in prompts, and it mediates every invocation at runtime (argument
checking, consent gating for privileged entries, trace emission). Handlers are
plain callables from an argument list to a value; the default table wires stub
handlers that return canned values so workflows run end to end without real
side effects.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from .consent import AUTO_DENY, ConsentPolicy
from .tracing import TraceEvent, TraceSink
from .values import Value, is_int, type_name

BASE_TYPES = ("String", "Integer", "File")

_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class FunctionTableError(Exception):
    """Base class for table construction and invocation errors."""


class InvalidSignatureError(FunctionTableError):
    pass


class DuplicateNameError(FunctionTableError):
    def __init__(self, name: str) -> None:
        super().__init__(f"function '{name}' is already registered")
        self.name = name


class EmptyTableError(FunctionTableError):
    pass


class UnknownFunctionError(FunctionTableError):
    def __init__(self, name: str) -> None:
        super().__init__(f"unknown function '{name}'")
        self.name = name


class ArityMismatchError(FunctionTableError):
    def __init__(self, name: str, expected: int, got: int) -> None:
        super().__init__(f"{name}() takes {expected} argument(s), got {got}")
        self.name = name
        self.expected = expected
        self.got = got


class ArgumentTypeError(FunctionTableError):
    def __init__(self, name: str, param: str, expected: str, got: str) -> None:
        super().__init__(
            f"{name}(): parameter '{param}' expects {expected}, got {got}"
        )
        self.name = name
        self.param = param
        self.expected = expected
        self.got = got


class ResultTypeError(FunctionTableError):
    def __init__(self, name: str, expected: str, got: str) -> None:
        super().__init__(f"handler for '{name}' returned {got}, expected {expected}")
        self.name = name


class PrivilegedDeniedError(FunctionTableError):
    def __init__(self, name: str) -> None:
        super().__init__(f"privileged function '{name}' was denied by the consent policy")
        self.name = name


@dataclass(frozen=True)
class TypeExpr:
    """A parameter or return type: a base name, optionally nullable or a collection.

    ``void`` is only valid bare and only as a return type. Nullable and
    collection never nest.
    """

    base: str
    nullable: bool = False
    collection: bool = False

    def __post_init__(self) -> None:
        if self.base not in BASE_TYPES and self.base != "void":
            raise InvalidSignatureError(f"unknown type name '{self.base}'")
        if self.nullable and self.collection:
            raise InvalidSignatureError("a type cannot be both nullable and a collection")
        if self.base == "void" and (self.nullable or self.collection):
            raise InvalidSignatureError("'void' cannot be wrapped")

    def render(self) -> str:
        if self.collection:
            return f"Collection<{self.base}>"
        if self.nullable:
            return f"{self.base}|null"
        return self.base

    def accepts(self, value: Value) -> bool:
        """Shallow structural check of a runtime value against this type."""
        if self.base == "void":
            return value is None
        if value is None:
            return self.nullable
        if self.collection:
            return isinstance(value, list) and all(_matches_base(self.base, v) for v in value)
        return _matches_base(self.base, value)


def _matches_base(base: str, value: Value) -> bool:
    if base == "String":
        return isinstance(value, str)
    # File values are represented by integer handles at runtime.
    return is_int(value)


def parse_type(text: str) -> TypeExpr:
    text = text.strip()
    m = re.fullmatch(r"Collection<\s*([A-Za-z]+)\s*>", text)
    if m:
        return TypeExpr(m.group(1), collection=True)
    m = re.fullmatch(r"([A-Za-z]+)\s*\|\s*null", text)
    if m:
        return TypeExpr(m.group(1), nullable=True)
    if re.fullmatch(r"[A-Za-z]+", text):
        return TypeExpr(text)
    raise InvalidSignatureError(f"cannot parse type {text!r}")


@dataclass(frozen=True)
class Param:
    name: str
    type: TypeExpr


@dataclass(frozen=True)
class FunctionSignature:
    """Name, ordered parameters and return type of a callable function.

    ``doc_line`` preserves the exact source line when the signature was parsed
    from documentation text; prompt rendering reuses it byte for byte. It is
    ignored for equality.
    """

    name: str
    params: Tuple[Param, ...]
    return_type: TypeExpr
    doc_line: Optional[str] = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not _IDENT_RE.match(self.name):
            raise InvalidSignatureError(f"invalid function name {self.name!r}")
        seen = set()
        for param in self.params:
            if not _IDENT_RE.match(param.name):
                raise InvalidSignatureError(f"invalid parameter name {param.name!r}")
            if param.name in seen:
                raise InvalidSignatureError(
                    f"duplicate parameter '{param.name}' in '{self.name}'"
                )
            seen.add(param.name)
            if param.type.base == "void":
                raise InvalidSignatureError("'void' is not a parameter type")

    def render(self) -> str:
        """Canonical signature line."""
        params = ", ".join(f"{p.name}: {p.type.render()}" for p in self.params)
        return f"function {self.name}({params}): {self.return_type.render()}"

    def doc(self) -> str:
        """Line used in rendered documentation; exact source wins over canonical."""
        return self.doc_line if self.doc_line is not None else self.render()


_SIGNATURE_RE = re.compile(
    r"^function\s+([A-Za-z_][A-Za-z0-9_]*)\((.*)\)\s*:\s*(.+?)\s*$"
)


def parse_signature(line: str) -> FunctionSignature:
    """Parse one documentation line back into a signature.

    Accepts flexible spacing around colons; the original line is preserved as
    the signature's ``doc_line``.
    """
    m = _SIGNATURE_RE.match(line.strip())
    if not m:
        raise InvalidSignatureError(f"cannot parse signature line {line!r}")
    name, params_text, ret_text = m.groups()
    params: List[Param] = []
    if params_text.strip():
        for chunk in params_text.split(","):
            if ":" not in chunk:
                raise InvalidSignatureError(f"malformed parameter {chunk!r} in {line!r}")
            pname, ptype = chunk.split(":", 1)
            params.append(Param(pname.strip(), parse_type(ptype)))
    return_type = TypeExpr("void") if ret_text == "void" else parse_type(ret_text)
    return FunctionSignature(
        name=name,
        params=tuple(params),
        return_type=return_type,
        doc_line=line.strip(),
    )


Handler = Callable[[List[Value]], Value]


@dataclass(frozen=True)
class FunctionEntry:
    signature: FunctionSignature
    handler: Handler
    privileged: bool = False


@dataclass(frozen=True)
class FunctionTable:
    """Immutable, ordered collection of function entries.

    Iteration and documentation rendering follow registration order.
    ``register`` returns a new table rather than mutating.
    """

    entries: Tuple[FunctionEntry, ...] = ()

    def __post_init__(self) -> None:
        names = [entry.signature.name for entry in self.entries]
        for name in names:
            if names.count(name) > 1:
                raise DuplicateNameError(name)
        object.__setattr__(
            self, "_by_name", {e.signature.name: e for e in self.entries}
        )

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[FunctionEntry]:
        return iter(self.entries)

    def names(self) -> List[str]:
        return [entry.signature.name for entry in self.entries]

    def get(self, name: str) -> Optional[FunctionEntry]:
        by_name: Dict[str, FunctionEntry] = getattr(self, "_by_name")
        return by_name.get(name)

    def __contains__(self, name: str) -> bool:
        return self.get(name) is not None

    def register(self, entry: FunctionEntry) -> "FunctionTable":
        if entry.signature.name in self:
            raise DuplicateNameError(entry.signature.name)
        return FunctionTable(self.entries + (entry,))

    def render_docs(self) -> str:
        """One signature line per entry, newline-joined, no trailing newline."""
        if not self.entries:
            raise EmptyTableError("cannot render documentation for an empty table")
        return "\n".join(entry.signature.doc() for entry in self.entries)

    def invoke(
        self,
        name: str,
        args: List[Value],
        consent: ConsentPolicy = AUTO_DENY,
        tracer: Optional[TraceSink] = None,
    ) -> Value:
        """Invoke a table function, emitting exactly one trace event on success.

        Failed invocations (unknown name, bad arguments, denied consent, bad
        handler result) emit nothing.
        """
        entry = self.get(name)
        if entry is None:
            raise UnknownFunctionError(name)
        sig = entry.signature
        if len(args) != len(sig.params):
            raise ArityMismatchError(name, len(sig.params), len(args))
        for param, value in zip(sig.params, args):
            if not param.type.accepts(value):
                raise ArgumentTypeError(
                    name, param.name, param.type.render(), type_name(value)
                )
        if entry.privileged and not consent.allows(name):
            raise PrivilegedDeniedError(name)
        result = entry.handler(list(args))
        if not sig.return_type.accepts(result):
            raise ResultTypeError(name, sig.return_type.render(), type_name(result))
        if tracer is not None:
            tracer(TraceEvent.for_call(name, args))
        return result


# Signature lines are rendered into prompts verbatim; keep their formatting
# exactly as published, including the missing space in the third line.
STUB_SIGNATURE_LINES = (
    "function find_file_id(expression: String): Integer|null",
    "function find_contact_id(expression: String): Integer|null",
    "function find_contact_email(contact_id: Integer):String|null",
    "function play_voice(text: String): void",
    "function ask_question(question: String): String",
    "function play_audio_file(file: File): void",
    "function send_email(email: String, subject: String, text: String, attachments: Collection<Integer>): void",
    "function print_screen(text: String): void",
    "function shell(command: String): String",
)

STUB_CONTACT_EMAIL = "john.doe@example.com"


def _const(value: Value) -> Handler:
    return lambda args: value


def default_stub_table(
    ask_question_reply: str = "",
    shell_reply: str = "",
) -> FunctionTable:
    """The built-in table of stub functions.

    Stubs perform no real work; invocation tracing is the observable effect.
    Lookups return fixed handles (file and contact id 1, a fixed email
    address) so multi-step workflows proceed through their happy path. Only
    ``shell`` is privileged.
    """
    handlers: Dict[str, Handler] = {
        "find_file_id": _const(1),
        "find_contact_id": _const(1),
        "find_contact_email": _const(STUB_CONTACT_EMAIL),
        "play_voice": _const(None),
        "ask_question": _const(ask_question_reply),
        "play_audio_file": _const(None),
        "send_email": _const(None),
        "print_screen": _const(None),
        "shell": _const(shell_reply),
    }
    entries = []
    for line in STUB_SIGNATURE_LINES:
        sig = parse_signature(line)
        entries.append(
            FunctionEntry(
                signature=sig,
                handler=handlers[sig.name],
                privileged=(sig.name == "shell"),
            )
        )
    return FunctionTable(tuple(entries))


def _default_for(type_expr: TypeExpr) -> Value:
    if type_expr.base == "void":
        return None
    if type_expr.collection:
        return []
    if type_expr.base == "String":
        return ""
    return 1


def load_table_file(path: str) -> FunctionTable:
    """Load a custom table from a text file of signature lines.

    Blank lines and ``#`` comments are skipped. A ``privileged `` prefix marks
    an entry as consent-gated. Handlers are echo stubs returning a default for
    the declared return type.
    """
    table = FunctionTable()
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            privileged = False
            if line.startswith("privileged "):
                privileged = True
                line = line[len("privileged "):].strip()
            sig = parse_signature(line)
            entry = FunctionEntry(
                signature=sig,
                handler=_const(_default_for(sig.return_type)),
                privileged=privileged,
            )
            table = table.register(entry)
    if len(table) == 0:
        raise EmptyTableError(f"no signatures found in {path}")
    return table
