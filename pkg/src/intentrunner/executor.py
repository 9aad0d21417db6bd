"""Sandboxed tree-walking interpreter for parsed workflow programs.

The function table is the only effect boundary: every observable action of a
program is a table invocation, recorded as a trace event. The interpreter
itself performs no I/O. Failures never raise out of ``execute``; they come
back classified inside the result, with the trace of everything that happened
before the failing step.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, List, Optional, Tuple

from .consent import AUTO_DENY, ConsentPolicy
from .functable import (
    ArgumentTypeError,
    ArityMismatchError,
    FunctionTable,
    PrivilegedDeniedError,
    ResultTypeError,
)
from .lang import nodes as ast
from .tracing import TraceCollector, TraceEvent, TraceSink
from .values import (
    Value,
    is_int,
    render_value,
    truthiness,
    type_name,
    values_equal,
)

__all__ = [
    "BuiltinError",
    "DEFAULT_BUILTINS",
    "ExecutionResult",
    "Failure",
    "FailureKind",
    "Limits",
    "builtin_call",
    "execute",
    "render_value",
    "truthiness",
]

INT_MIN = -(2**63)
INT_MAX = 2**63 - 1


class FailureKind(str, Enum):
    UNAUTHORIZED_ACCESS = "UnauthorizedAccess"
    SCOPING_VIOLATION = "ScopingViolation"
    TYPE_ERROR = "TypeError"
    DIVISION_BY_ZERO = "DivisionByZero"
    STEP_LIMIT = "StepLimitExceeded"
    PRIVILEGED_DENIED = "PrivilegedDenied"


@dataclass(frozen=True)
class Failure:
    kind: FailureKind
    message: str
    line: int


@dataclass(frozen=True)
class Limits:
    """Hard execution bounds guaranteeing termination and bounded memory."""

    max_steps: int = 10_000
    max_list_len: int = 10_000
    max_string_len: int = 1_000_000

    def __post_init__(self) -> None:
        if self.max_steps <= 0 or self.max_list_len <= 0 or self.max_string_len <= 0:
            raise ValueError("all limits must be positive")


@dataclass(frozen=True)
class ExecutionResult:
    failure: Optional[Failure]
    trace: Tuple[TraceEvent, ...]
    steps_used: int

    @property
    def ok(self) -> bool:
        return self.failure is None

    @property
    def trace_lines(self) -> List[str]:
        return [event.rendered for event in self.trace]

    def trace_text(self) -> str:
        """One rendered event per line, each LF-terminated."""
        return "".join(line + "\n" for line in self.trace_lines)


DEFAULT_BUILTINS: FrozenSet[str] = frozenset({"len", "str", "int", "range"})


class BuiltinError(Exception):
    def __init__(self, kind: FailureKind, message: str) -> None:
        super().__init__(message)
        self.kind = kind
        self.message = message


def builtin_call(name: str, args: List[Value], limits: Limits = Limits()) -> Value:
    """Evaluate one of the pure builtin functions (len, str, int, range)."""
    if name == "len":
        _expect_arity(name, args, 1)
        value = args[0]
        if isinstance(value, (str, list)):
            return len(value)
        raise BuiltinError(
            FailureKind.TYPE_ERROR, f"len() does not accept {type_name(value)}"
        )
    if name == "str":
        _expect_arity(name, args, 1)
        text = render_value(args[0])
        if len(text) > limits.max_string_len:
            raise BuiltinError(FailureKind.TYPE_ERROR, "string length limit exceeded")
        return text
    if name == "int":
        _expect_arity(name, args, 1)
        value = args[0]
        if is_int(value):
            return value
        if isinstance(value, str):
            try:
                parsed = int(value.strip(), 10)
            except ValueError:
                raise BuiltinError(
                    FailureKind.TYPE_ERROR,
                    f"cannot convert {value!r} to an integer",
                ) from None
            return _check_int_range(parsed)
        raise BuiltinError(
            FailureKind.TYPE_ERROR, f"int() does not accept {type_name(value)}"
        )
    if name == "range":
        _expect_arity(name, args, 1)
        value = args[0]
        if not is_int(value):
            raise BuiltinError(
                FailureKind.TYPE_ERROR, f"range() does not accept {type_name(value)}"
            )
        return list(range(min(max(value, 0), limits.max_list_len)))
    raise BuiltinError(FailureKind.UNAUTHORIZED_ACCESS, f"call to unknown function '{name}'")


def _expect_arity(name: str, args: List[Value], expected: int) -> None:
    if len(args) != expected:
        raise BuiltinError(
            FailureKind.TYPE_ERROR,
            f"{name}() takes exactly {expected} argument(s), got {len(args)}",
        )


def _check_int_range(value: int) -> int:
    if value < INT_MIN or value > INT_MAX:
        raise BuiltinError(FailureKind.TYPE_ERROR, "integer overflow")
    return value


def execute(
    program: ast.Program,
    table: FunctionTable,
    limits: Limits = Limits(),
    consent: ConsentPolicy = AUTO_DENY,
    on_event: Optional[TraceSink] = None,
    builtins: FrozenSet[str] = DEFAULT_BUILTINS,
) -> ExecutionResult:
    """Run a program to completion or to its first classified failure."""
    return _Interpreter(program, table, limits, consent, on_event, builtins).run()


class _BreakSignal(Exception):
    pass


class _ContinueSignal(Exception):
    pass


class _Abort(Exception):
    def __init__(self, failure: Failure) -> None:
        super().__init__(failure.message)
        self.failure = failure


class _Interpreter:
    def __init__(
        self,
        program: ast.Program,
        table: FunctionTable,
        limits: Limits,
        consent: ConsentPolicy,
        on_event: Optional[TraceSink],
        builtins: FrozenSet[str],
    ) -> None:
        self.program = program
        self.table = table
        self.limits = limits
        self.consent = consent
        self.builtins = builtins
        self.scope: dict = {}
        self.steps = 0
        self.collector = TraceCollector()
        self.on_event = on_event

    def run(self) -> ExecutionResult:
        try:
            for stmt in self.program.statements:
                self._exec_stmt(stmt)
        except _Abort as abort:
            return ExecutionResult(abort.failure, tuple(self.collector.events), self.steps)
        except RecursionError:
            # Extremely deep expression trees (long operator chains) classify
            # as a resource failure instead of crashing.
            failure = Failure(FailureKind.STEP_LIMIT, "evaluation depth limit exceeded", 0)
            return ExecutionResult(failure, tuple(self.collector.events), self.steps)
        return ExecutionResult(None, tuple(self.collector.events), self.steps)

    def _fail(self, kind: FailureKind, message: str, line: int) -> None:
        raise _Abort(Failure(kind, message, line))

    def _tick(self, line: int) -> None:
        if self.steps >= self.limits.max_steps:
            self._fail(FailureKind.STEP_LIMIT, "step limit exceeded", line)
        self.steps += 1

    def _sink(self, event: TraceEvent) -> None:
        self.collector(event)
        if self.on_event is not None:
            self.on_event(event)

    # -- statements ----------------------------------------------------------

    def _exec_stmt(self, stmt: ast.Stmt) -> None:
        self._tick(stmt.line)
        if isinstance(stmt, ast.Assign):
            self._exec_assign(stmt)
        elif isinstance(stmt, ast.ExprStmt):
            self._eval(stmt.value)
        elif isinstance(stmt, ast.If):
            self._exec_if(stmt)
        elif isinstance(stmt, ast.While):
            self._exec_while(stmt)
        elif isinstance(stmt, ast.For):
            self._exec_for(stmt)
        elif isinstance(stmt, ast.Break):
            raise _BreakSignal()
        elif isinstance(stmt, ast.Continue):
            raise _ContinueSignal()
        elif isinstance(stmt, ast.Pass):
            pass
        elif isinstance(stmt, ast.Import):
            self._fail(
                FailureKind.UNAUTHORIZED_ACCESS,
                f"import of '{stmt.module}' is not permitted",
                stmt.line,
            )
        else:
            raise TypeError(f"cannot execute statement {stmt!r}")

    def _exec_assign(self, stmt: ast.Assign) -> None:
        if stmt.op == "+=":
            current = self._read(stmt.target, stmt.line)
            value = self._eval(stmt.value)
            self.scope[stmt.target] = self._binary("+", current, value, stmt.line)
            return
        self.scope[stmt.target] = self._eval(stmt.value)

    def _exec_if(self, stmt: ast.If) -> None:
        for arm in stmt.arms:
            if truthiness(self._eval(arm.cond)):
                self._exec_block(arm.body)
                return
        if stmt.else_body is not None:
            self._exec_block(stmt.else_body)

    def _exec_while(self, stmt: ast.While) -> None:
        while truthiness(self._eval(stmt.cond)):
            try:
                self._exec_block(stmt.body)
            except _ContinueSignal:
                continue
            except _BreakSignal:
                break

    def _exec_for(self, stmt: ast.For) -> None:
        iterable = self._eval(stmt.iterable)
        if isinstance(iterable, list):
            items: List[Value] = list(iterable)
        elif isinstance(iterable, str):
            items = list(iterable)
        else:
            self._fail(
                FailureKind.TYPE_ERROR,
                f"cannot iterate over {type_name(iterable)}",
                stmt.line,
            )
            return
        for item in items:
            self._tick(stmt.line)
            self.scope[stmt.var] = item
            try:
                self._exec_block(stmt.body)
            except _ContinueSignal:
                continue
            except _BreakSignal:
                break

    def _exec_block(self, body: Tuple[ast.Stmt, ...]) -> None:
        for stmt in body:
            self._exec_stmt(stmt)

    # -- expressions -----------------------------------------------------------

    def _read(self, ident: str, line: int) -> Value:
        if ident not in self.scope:
            self._fail(
                FailureKind.SCOPING_VIOLATION,
                f"variable '{ident}' is not defined",
                line,
            )
        return self.scope[ident]

    def _eval(self, expr: ast.Expr) -> Value:
        self._tick(expr.line)
        if isinstance(expr, ast.NullLit):
            return None
        if isinstance(expr, ast.BoolLit):
            return expr.value
        if isinstance(expr, ast.IntLit):
            return expr.value
        if isinstance(expr, ast.StringLit):
            return expr.value
        if isinstance(expr, ast.FStringLit):
            return self._eval_fstring(expr)
        if isinstance(expr, ast.ListLit):
            return [self._eval(item) for item in expr.items]
        if isinstance(expr, ast.Name):
            return self._read(expr.ident, expr.line)
        if isinstance(expr, ast.Call):
            args = [self._eval(arg) for arg in expr.args]
            return self._call(expr.callee, args, expr.line)
        if isinstance(expr, ast.MethodCall):
            return self._method_call(expr)
        if isinstance(expr, ast.Index):
            return self._index(expr)
        if isinstance(expr, ast.Unary):
            return self._unary(expr)
        if isinstance(expr, ast.Binary):
            return self._eval_binary(expr)
        raise TypeError(f"cannot evaluate expression {expr!r}")

    def _eval_fstring(self, expr: ast.FStringLit) -> Value:
        pieces = []
        for part in expr.parts:
            if isinstance(part, str):
                pieces.append(part)
            else:
                pieces.append(render_value(self._eval(part)))
        text = "".join(pieces)
        if len(text) > self.limits.max_string_len:
            self._fail(FailureKind.TYPE_ERROR, "string length limit exceeded", expr.line)
        return text

    def _call(self, name: str, args: List[Value], line: int) -> Value:
        if name in self.table:
            try:
                return self.table.invoke(name, args, self.consent, self._sink)
            except PrivilegedDeniedError as exc:
                self._fail(FailureKind.PRIVILEGED_DENIED, str(exc), line)
            except (ArityMismatchError, ArgumentTypeError, ResultTypeError) as exc:
                self._fail(FailureKind.TYPE_ERROR, str(exc), line)
        if name in self.builtins:
            try:
                return builtin_call(name, args, self.limits)
            except BuiltinError as exc:
                self._fail(exc.kind, exc.message, line)
        self._fail(
            FailureKind.UNAUTHORIZED_ACCESS,
            f"call to unknown function '{name}'",
            line,
        )
        return None  # unreachable; _fail always raises

    def _method_call(self, expr: ast.MethodCall) -> Value:
        receiver = self._eval(expr.receiver)
        if expr.method != "append":
            self._fail(
                FailureKind.TYPE_ERROR,
                f"unknown method '{expr.method}'",
                expr.line,
            )
        if not isinstance(receiver, list):
            self._fail(
                FailureKind.TYPE_ERROR,
                f"append() requires a list, not {type_name(receiver)}",
                expr.line,
            )
        if len(expr.args) != 1:
            self._fail(
                FailureKind.TYPE_ERROR,
                f"append() takes exactly 1 argument, got {len(expr.args)}",
                expr.line,
            )
        if len(receiver) >= self.limits.max_list_len:
            self._fail(FailureKind.TYPE_ERROR, "list length limit exceeded", expr.line)
        receiver.append(self._eval(expr.args[0]))
        return None

    def _index(self, expr: ast.Index) -> Value:
        receiver = self._eval(expr.receiver)
        index = self._eval(expr.index)
        if not is_int(index):
            self._fail(
                FailureKind.TYPE_ERROR,
                f"index must be an integer, not {type_name(index)}",
                expr.line,
            )
        if not isinstance(receiver, (list, str)):
            self._fail(
                FailureKind.TYPE_ERROR,
                f"cannot index into {type_name(receiver)}",
                expr.line,
            )
        try:
            return receiver[index]
        except IndexError:
            self._fail(FailureKind.TYPE_ERROR, "index out of range", expr.line)
        return None  # unreachable

    def _unary(self, expr: ast.Unary) -> Value:
        operand = self._eval(expr.operand)
        if expr.op == "not":
            return not truthiness(operand)
        if not is_int(operand):
            self._fail(
                FailureKind.TYPE_ERROR,
                f"cannot negate {type_name(operand)}",
                expr.line,
            )
        return -operand

    def _eval_binary(self, expr: ast.Binary) -> Value:
        if expr.op == "and":
            lhs = self._eval(expr.lhs)
            return self._eval(expr.rhs) if truthiness(lhs) else lhs
        if expr.op == "or":
            lhs = self._eval(expr.lhs)
            return lhs if truthiness(lhs) else self._eval(expr.rhs)
        if expr.op == "is-null":
            return self._eval(expr.lhs) is None
        if expr.op == "is-not-null":
            return self._eval(expr.lhs) is not None
        lhs = self._eval(expr.lhs)
        rhs = self._eval(expr.rhs)
        return self._binary(expr.op, lhs, rhs, expr.line)

    def _binary(self, op: str, lhs: Value, rhs: Value, line: int) -> Value:
        if op == "+":
            if is_int(lhs) and is_int(rhs):
                return self._int_result(lhs + rhs, line)
            if isinstance(lhs, str) and isinstance(rhs, str):
                text = lhs + rhs
                if len(text) > self.limits.max_string_len:
                    self._fail(
                        FailureKind.TYPE_ERROR, "string length limit exceeded", line
                    )
                return text
            self._fail(
                FailureKind.TYPE_ERROR,
                f"cannot add {type_name(lhs)} and {type_name(rhs)}",
                line,
            )
        if op in ("-", "*"):
            if is_int(lhs) and is_int(rhs):
                result = lhs - rhs if op == "-" else lhs * rhs
                return self._int_result(result, line)
            self._fail(
                FailureKind.TYPE_ERROR,
                f"'{op}' requires integers, got {type_name(lhs)} and {type_name(rhs)}",
                line,
            )
        if op == "/":
            if not (is_int(lhs) and is_int(rhs)):
                self._fail(
                    FailureKind.TYPE_ERROR,
                    f"'/' requires integers, got {type_name(lhs)} and {type_name(rhs)}",
                    line,
                )
            if rhs == 0:
                self._fail(FailureKind.DIVISION_BY_ZERO, "division by zero", line)
            quotient = abs(lhs) // abs(rhs)
            if (lhs < 0) != (rhs < 0):
                quotient = -quotient
            return self._int_result(quotient, line)
        if op == "==":
            return values_equal(lhs, rhs)
        if op == "!=":
            return not values_equal(lhs, rhs)
        if op in ("<", "<=", ">", ">="):
            ok_ints = is_int(lhs) and is_int(rhs)
            ok_strs = isinstance(lhs, str) and isinstance(rhs, str)
            if not (ok_ints or ok_strs):
                self._fail(
                    FailureKind.TYPE_ERROR,
                    f"cannot order {type_name(lhs)} and {type_name(rhs)}",
                    line,
                )
            if op == "<":
                return lhs < rhs
            if op == "<=":
                return lhs <= rhs
            if op == ">":
                return lhs > rhs
            return lhs >= rhs
        if op == "in":
            if isinstance(rhs, list):
                return any(values_equal(lhs, item) for item in rhs)
            if isinstance(rhs, str):
                if not isinstance(lhs, str):
                    self._fail(
                        FailureKind.TYPE_ERROR,
                        f"'in' on a string requires a string, got {type_name(lhs)}",
                        line,
                    )
                return lhs in rhs
            self._fail(
                FailureKind.TYPE_ERROR,
                f"'in' requires a list or string, got {type_name(rhs)}",
                line,
            )
        raise TypeError(f"unknown binary operator {op!r}")

    def _int_result(self, value: int, line: int) -> int:
        if value < INT_MIN or value > INT_MAX:
            self._fail(FailureKind.TYPE_ERROR, "integer overflow", line)
        return value
