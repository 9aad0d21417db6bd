"""Trial runner and benchmark reporting.

A trial drives the full pipeline for one intention: render the prompt, obtain
generated code from a backend, extract and parse it, then execute it in the
sandbox. Every failure mode along the way is data in the trial record, not an
exception; a bench run is just the trial loop with per-intention aggregation.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .backends import (
    Backend,
    BackendError,
    FixtureMissingError,
    FixtureSet,
    GenerationParams,
    NoCodeError,
    extract_code,
)
from .consent import AUTO_DENY, ConsentPolicy
from .executor import FailureKind, Limits, execute
from .functable import FunctionTable, default_stub_table
from .lang import (
    LexError,
    ScriptSyntaxError,
    UnsupportedConstructError,
    parse,
    tokenize,
)
from .prompting import Intention, render_prompt

DEFAULT_INTENTIONS: Tuple[Intention, ...] = (
    Intention("Please send my car title to my insurance company"),
    Intention("Please tell me the current temperature"),
    Intention("Please play the song beat it by michael jackson"),
    Intention("Please tell me all files in my home directory"),
)


def default_fixture_root() -> Path:
    """Directory of the replay fixtures shipped with the package."""
    return Path(__file__).resolve().parent / "fixtures"


def intentions_from_file(path: str) -> List[Intention]:
    """Load a corpus from a plain-text file, one intention per line."""
    intentions = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            text = line.strip()
            if text:
                intentions.append(Intention(text))
    return intentions


class FailureClass(str, Enum):
    UNAUTHORIZED_ACCESS = "UnauthorizedAccess"
    SCOPING_VIOLATION = "ScopingViolation"
    SYNTAX = "Syntax"
    LEX = "Lex"
    UNSUPPORTED = "Unsupported"
    TYPE_ERROR = "TypeError"
    DIVISION_BY_ZERO = "DivisionByZero"
    STEP_LIMIT = "StepLimit"
    PRIVILEGED_DENIED = "PrivilegedDenied"
    BACKEND_ERROR = "BackendError"
    NO_CODE = "NoCode"


_KIND_TO_CLASS = {
    FailureKind.UNAUTHORIZED_ACCESS: FailureClass.UNAUTHORIZED_ACCESS,
    FailureKind.SCOPING_VIOLATION: FailureClass.SCOPING_VIOLATION,
    FailureKind.TYPE_ERROR: FailureClass.TYPE_ERROR,
    FailureKind.DIVISION_BY_ZERO: FailureClass.DIVISION_BY_ZERO,
    FailureKind.STEP_LIMIT: FailureClass.STEP_LIMIT,
    FailureKind.PRIVILEGED_DENIED: FailureClass.PRIVILEGED_DENIED,
}


@dataclass(frozen=True)
class TrialRecord:
    """Outcome and timings of one intention trial.

    ``response_time_ms`` and ``ttft_ms`` come from the generation step;
    ``exec_time_ms`` is the separately measured sandbox execution wall time.
    """

    intention_index: int
    trial_index: int
    success: bool
    failure_class: Optional[FailureClass]
    failure_message: str
    response_time_ms: float
    ttft_ms: float
    exec_time_ms: float
    code: str
    trace: Tuple[str, ...]

    def to_json_dict(self) -> dict:
        return {
            "intention_index": self.intention_index,
            "trial_index": self.trial_index,
            "success": self.success,
            "failure_class": self.failure_class.value if self.failure_class else None,
            "failure_message": self.failure_message,
            "response_time_ms": self.response_time_ms,
            "ttft_ms": self.ttft_ms,
            "exec_time_ms": self.exec_time_ms,
            "code": self.code,
            "trace": list(self.trace),
        }


@dataclass(frozen=True)
class BenchRow:
    intention_index: int
    intention_text: str
    successes: int
    trials: int
    avg_response_time_ms: float
    avg_ttft_ms: float


@dataclass(frozen=True)
class BenchReport:
    rows: Tuple[BenchRow, ...]
    trials: Tuple[TrialRecord, ...]


class EmptyReportError(ValueError):
    pass


def run_trial(
    intention: Intention,
    backend: Backend,
    table: FunctionTable,
    limits: Limits = Limits(),
    consent: ConsentPolicy = AUTO_DENY,
    *,
    slot: Tuple[int, int] = (1, 1),
    params: Optional[GenerationParams] = None,
) -> TrialRecord:
    """Run one full pipeline pass; the first failing stage classifies the trial.

    A missing replay fixture is a configuration defect rather than a model
    failure, so FixtureMissingError propagates instead of being recorded.
    """
    params = params or GenerationParams()
    intention_index, trial_index = slot

    def failed(
        failure_class: FailureClass,
        message: str,
        response_ms: float = 0.0,
        ttft_ms: float = 0.0,
        exec_ms: float = 0.0,
        code: str = "",
        trace: Tuple[str, ...] = (),
    ) -> TrialRecord:
        return TrialRecord(
            intention_index=intention_index,
            trial_index=trial_index,
            success=False,
            failure_class=failure_class,
            failure_message=message,
            response_time_ms=response_ms,
            ttft_ms=ttft_ms,
            exec_time_ms=exec_ms,
            code=code,
            trace=trace,
        )

    bundle = render_prompt(intention, table)
    try:
        generation = backend.generate(bundle, params, slot=slot)
    except FixtureMissingError:
        raise
    except BackendError as exc:
        return failed(FailureClass.BACKEND_ERROR, str(exc))

    return run_generated(
        generation.raw_text,
        table,
        limits,
        consent,
        slot=slot,
        response_time_ms=generation.total_ms,
        ttft_ms=generation.ttft_ms,
    )


def run_generated(
    raw_text: str,
    table: FunctionTable,
    limits: Limits = Limits(),
    consent: ConsentPolicy = AUTO_DENY,
    *,
    slot: Tuple[int, int] = (1, 1),
    response_time_ms: float = 0.0,
    ttft_ms: float = 0.0,
) -> TrialRecord:
    """Classify and execute raw model output that has already been generated."""
    intention_index, trial_index = slot

    def failed(
        failure_class: FailureClass,
        message: str,
        exec_ms: float = 0.0,
        code: str = "",
        trace: Tuple[str, ...] = (),
    ) -> TrialRecord:
        return TrialRecord(
            intention_index=intention_index,
            trial_index=trial_index,
            success=False,
            failure_class=failure_class,
            failure_message=message,
            response_time_ms=response_time_ms,
            ttft_ms=ttft_ms,
            exec_time_ms=exec_ms,
            code=code,
            trace=trace,
        )

    try:
        code = extract_code(raw_text)
    except NoCodeError as exc:
        return failed(FailureClass.NO_CODE, str(exc), code=raw_text)

    try:
        tokens = tokenize(code)
    except LexError as exc:
        return failed(FailureClass.LEX, str(exc), code=code)
    try:
        program = parse(tokens)
    except ScriptSyntaxError as exc:
        return failed(FailureClass.SYNTAX, str(exc), code=code)
    except UnsupportedConstructError as exc:
        return failed(FailureClass.UNSUPPORTED, str(exc), code=code)

    started = time.perf_counter()
    result = execute(program, table, limits, consent)
    exec_ms = (time.perf_counter() - started) * 1000.0
    trace = tuple(result.trace_lines)

    if result.failure is not None:
        return failed(
            _KIND_TO_CLASS[result.failure.kind],
            result.failure.message,
            exec_ms,
            code,
            trace,
        )
    return TrialRecord(
        intention_index=intention_index,
        trial_index=trial_index,
        success=True,
        failure_class=None,
        failure_message="",
        response_time_ms=response_time_ms,
        ttft_ms=ttft_ms,
        exec_time_ms=exec_ms,
        code=code,
        trace=trace,
    )


def run_bench(
    intentions: Sequence[Intention],
    backend: Backend,
    trials_per_intention: int = 5,
    table: Optional[FunctionTable] = None,
    limits: Limits = Limits(),
    consent: ConsentPolicy = AUTO_DENY,
    params: Optional[GenerationParams] = None,
) -> BenchReport:
    """Run every intention for the given number of trials, intention-major.

    Trials run sequentially so that timing measurements never contend.
    Averages include failed trials; failures still produce generations.
    """
    if trials_per_intention < 1:
        raise ValueError("trials_per_intention must be at least 1")
    table = table if table is not None else default_stub_table()
    records: List[TrialRecord] = []
    rows: List[BenchRow] = []
    for i, intention in enumerate(intentions, start=1):
        intention_records = []
        for j in range(1, trials_per_intention + 1):
            record = run_trial(
                intention,
                backend,
                table,
                limits,
                consent,
                slot=(i, j),
                params=params,
            )
            intention_records.append(record)
        records.extend(intention_records)
        rows.append(
            BenchRow(
                intention_index=i,
                intention_text=intention.text,
                successes=sum(1 for r in intention_records if r.success),
                trials=len(intention_records),
                avg_response_time_ms=_mean(r.response_time_ms for r in intention_records),
                avg_ttft_ms=_mean(r.ttft_ms for r in intention_records),
            )
        )
    return BenchReport(rows=tuple(rows), trials=tuple(records))


def _mean(values) -> float:
    items = list(values)
    return sum(items) / len(items) if items else 0.0


REPORT_FORMATS = ("markdown", "csv", "jsonl")


def render_report(report: BenchReport, format: str = "markdown") -> str:
    """Serialize a report. Seconds print with 2 decimals, milliseconds with 1."""
    if not report.rows:
        raise EmptyReportError("report contains no rows")
    if format == "markdown":
        lines = [
            "| Intention | Successes | Average Response Time (s) "
            "| Average Time to First Token (ms) |",
            "| --- | --- | --- | --- |",
        ]
        for row in report.rows:
            lines.append(
                f"| {row.intention_index} | {row.successes} "
                f"| {row.avg_response_time_ms / 1000.0:.2f} | {row.avg_ttft_ms:.1f} |"
            )
        return "\n".join(lines) + "\n"
    if format == "csv":
        lines = ["intention,successes,avg_response_time_s,avg_ttft_ms"]
        for row in report.rows:
            lines.append(
                f"{row.intention_index},{row.successes},"
                f"{row.avg_response_time_ms / 1000.0:.2f},{row.avg_ttft_ms:.1f}"
            )
        return "\n".join(lines) + "\n"
    if format == "jsonl":
        return "".join(
            json.dumps(record.to_json_dict(), sort_keys=True) + "\n"
            for record in report.trials
        )
    raise ValueError(f"unknown report format {format!r}")


def record_fixtures(
    intentions: Sequence[Intention],
    backend: Backend,
    out_dir: str,
    *,
    trials_per_intention: int = 5,
    table: Optional[FunctionTable] = None,
    params: Optional[GenerationParams] = None,
    force: bool = False,
) -> FixtureSet:
    """Capture live generations as replay fixtures (text plus timing sidecars).

    Refuses to write into an existing non-empty directory unless forced.
    """
    root = Path(out_dir)
    if root.exists() and any(root.iterdir()) and not force:
        raise FileExistsError(f"refusing to overwrite non-empty directory {root}")
    root.mkdir(parents=True, exist_ok=True)
    table = table if table is not None else default_stub_table()
    params = params or GenerationParams()
    fixtures = FixtureSet(root)
    for i, intention in enumerate(intentions, start=1):
        bundle = render_prompt(intention, table)
        for j in range(1, trials_per_intention + 1):
            generation = backend.generate(bundle, params, slot=(i, j))
            fixtures.write(i, j, generation.raw_text, generation.ttft_ms, generation.total_ms)
    return fixtures
