"""Intent resolution through LLM-generated workflow scripts.

The pipeline: a registered function table is rendered into a prompt for a
user intention, a backend produces script code, and a sandboxed interpreter
executes it with the table as its only effect boundary, emitting a trace of
every invocation. A bench harness repeats the protocol and reports success
counts and latency statistics.
"""

from .backends import (
    AuthError,
    Backend,
    BackendError,
    EmptyResponseError,
    FixtureMissingError,
    FixtureSet,
    GenerationParams,
    GenerationResult,
    HttpBackend,
    MockBackend,
    NetworkError,
    NoCodeError,
    ReplayBackend,
    extract_code,
)
from .consent import (
    AUTO_ALLOW,
    AUTO_DENY,
    AutoAllow,
    AutoDeny,
    ConsentPolicy,
    InteractiveConsent,
    policy_from_name,
)
from .executor import (
    DEFAULT_BUILTINS,
    ExecutionResult,
    Failure,
    FailureKind,
    Limits,
    builtin_call,
    execute,
)
from .functable import (
    ArgumentTypeError,
    ArityMismatchError,
    DuplicateNameError,
    EmptyTableError,
    FunctionEntry,
    FunctionSignature,
    FunctionTable,
    FunctionTableError,
    InvalidSignatureError,
    Param,
    PrivilegedDeniedError,
    TypeExpr,
    UnknownFunctionError,
    default_stub_table,
    load_table_file,
    parse_signature,
)
from .harness import (
    DEFAULT_INTENTIONS,
    BenchReport,
    BenchRow,
    EmptyReportError,
    FailureClass,
    TrialRecord,
    default_fixture_root,
    intentions_from_file,
    record_fixtures,
    render_report,
    run_bench,
    run_generated,
    run_trial,
)
from .lang import (
    LexError,
    Program,
    ScriptSyntaxError,
    UnsupportedConstructError,
    parse,
    parse_source,
    tokenize,
    unparse,
)
from .prompting import (
    ROLE_MESSAGE,
    EmptyIntentionError,
    Intention,
    PromptBundle,
    render_prompt,
)
from .tracing import TraceCollector, TraceEvent, render_trace_line
from .values import Value, render_value, truthiness

__version__ = "0.1.0"
