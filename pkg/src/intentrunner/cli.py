"""Command-line interface: run, bench, repl, render-prompt and trace.

Exit status contract: 0 on success, 1 on a classified trial failure, 2 on
configuration or environment errors. Bench exits 0 even when individual
trials fail; failed trials are results, not errors.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Optional, Tuple

import click

from . import __version__
from .backends import (
    Backend,
    FixtureMissingError,
    FixtureSet,
    GenerationParams,
    HttpBackend,
    MockBackend,
    ReplayBackend,
)
from .consent import ConsentPolicy, InteractiveConsent, policy_from_name
from .executor import Limits
from .functable import FunctionTable, FunctionTableError, default_stub_table, load_table_file
from .harness import (
    DEFAULT_INTENTIONS,
    REPORT_FORMATS,
    default_fixture_root,
    intentions_from_file,
    render_report,
    run_bench,
    run_generated,
    run_trial,
)
from .lang import LexError, ScriptSyntaxError, UnsupportedConstructError, dump, parse_source
from .prompting import EmptyIntentionError, Intention, render_prompt

ENV_PREFIX = "INTENTRUNNER_"


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class Config:
    backend: str = "replay"
    endpoint: str = "https://api.openai.com/v1"
    model: str = "gpt-4o-mini"
    credential_env: str = "OPENAI_API_KEY"
    fixtures: str = ""
    consent: str = ""
    trials: int = 5
    max_steps: int = 10_000
    max_list_len: int = 10_000
    max_string_len: int = 1_000_000
    temperature: float = 0.2
    max_tokens: int = 1024
    timeout_s: float = 60.0
    mock_ttft_ms: float = 0.0
    mock_total_ms: float = 0.0
    table_file: str = ""

    def limits(self) -> Limits:
        return Limits(self.max_steps, self.max_list_len, self.max_string_len)

    def generation_params(self) -> GenerationParams:
        return GenerationParams(
            model=self.model,
            temperature=self.temperature,
            max_tokens=self.max_tokens,
            timeout_s=self.timeout_s,
        )


_INT_FIELDS = {"trials", "max_steps", "max_list_len", "max_string_len", "max_tokens"}
_FLOAT_FIELDS = {"temperature", "timeout_s", "mock_ttft_ms", "mock_total_ms"}


def load_config(config_path: Optional[str], overrides: dict) -> Config:
    """Layer configuration: defaults, then file, then environment, then flags.

    The file is a flat key-value document (``key = value`` per line, ``#``
    comments). Credentials never appear in it; only the name of the
    environment variable holding them does.
    """
    values: dict = {}
    path = config_path
    if path is None and Path("intentrunner.toml").is_file():
        path = "intentrunner.toml"
    if path is not None:
        values.update(_parse_config_file(path))
    for f in fields(Config):
        env_value = os.environ.get(ENV_PREFIX + f.name.upper())
        if env_value is not None:
            values[f.name] = env_value
    for key, value in overrides.items():
        if value is not None:
            values[key] = value
    config = Config()
    for key, value in values.items():
        if key not in {f.name for f in fields(Config)}:
            raise ConfigError(f"unknown configuration key {key!r}")
        if key in _INT_FIELDS:
            try:
                value = int(value)
            except (TypeError, ValueError):
                raise ConfigError(f"configuration key {key!r} expects an integer") from None
        elif key in _FLOAT_FIELDS:
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise ConfigError(f"configuration key {key!r} expects a number") from None
        config = replace(config, **{key: value})
    _validate(config)
    return config


def _parse_config_file(path: str) -> dict:
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for number, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{number}: expected 'key = value'")
                key, value = line.split("=", 1)
                values[key.strip()] = value.strip().strip('"')
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    return values


def _validate(config: Config) -> None:
    if config.backend not in ("http", "replay", "mock"):
        raise ConfigError(f"unknown backend {config.backend!r}")
    if config.consent and config.consent not in ("auto-allow", "auto-deny", "interactive"):
        raise ConfigError(f"unknown consent policy {config.consent!r}")
    if config.trials < 1:
        raise ConfigError("trials must be at least 1")
    if min(config.max_steps, config.max_list_len, config.max_string_len) < 1:
        raise ConfigError("limits must be positive")
    if config.backend == "http" and not config.endpoint:
        raise ConfigError("http backend requires an endpoint")
    if config.backend == "http" and not config.credential_env:
        raise ConfigError("http backend requires a credential environment variable name")


def _fixture_set(config: Config) -> FixtureSet:
    root = Path(config.fixtures) if config.fixtures else default_fixture_root()
    if not root.is_dir():
        raise ConfigError(f"fixture directory not found: {root}")
    return FixtureSet(root)


def _build_backend(config: Config) -> Backend:
    if config.backend == "replay":
        return ReplayBackend(_fixture_set(config))
    if config.backend == "mock":
        text = _golden_mock_text()
        return MockBackend(
            text, ttft_ms=config.mock_ttft_ms, total_ms=config.mock_total_ms
        )
    return HttpBackend(base_url=config.endpoint, credential_env=config.credential_env)


def _golden_mock_text() -> str:
    sample = default_fixture_root() / "intention-1" / "trial-1.txt"
    if sample.is_file():
        return sample.read_text(encoding="utf-8")
    return 'print_screen("ok")\n'


def _build_table(config: Config) -> FunctionTable:
    if config.table_file:
        try:
            return load_table_file(config.table_file)
        except (OSError, FunctionTableError) as exc:
            raise ConfigError(f"cannot load table file: {exc}") from exc
    return default_stub_table()


def _consent(config: Config, default: str, ask=None) -> ConsentPolicy:
    return policy_from_name(config.consent or default, ask)


def _intention_slot(text: str, trial: int) -> Tuple[int, int]:
    """Map an intention onto a fixture slot; unknown texts use slot 1."""
    for i, intention in enumerate(DEFAULT_INTENTIONS, start=1):
        if intention.text == text:
            return (i, trial)
    return (1, trial)


def _fail_config(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


_CONFIG_OPTIONS = [
    click.option("--config", "config_path", type=click.Path(), default=None,
                 help="Path to a flat key-value config file."),
    click.option("--backend", type=click.Choice(["http", "replay", "mock"]), default=None,
                 help="Code generation backend."),
    click.option("--model", default=None, help="Model identifier for generation."),
    click.option("--endpoint", default=None, help="Base URL of the chat-completions API."),
    click.option("--fixtures", type=click.Path(), default=None,
                 help="Replay fixture directory (defaults to the shipped corpus)."),
    click.option("--consent", type=click.Choice(["auto-allow", "auto-deny", "interactive"]),
                 default=None, help="Consent policy for privileged functions."),
    click.option("--max-steps", "max_steps", type=int, default=None,
                 help="Interpreter step limit."),
    click.option("--table", "table_file", type=click.Path(), default=None,
                 help="Custom function table file (signature lines)."),
]


def _with_config_options(command):
    for option in reversed(_CONFIG_OPTIONS):
        command = option(command)
    return command


def _load(config_path: Optional[str], **overrides) -> Config:
    try:
        return load_config(config_path, overrides)
    except ConfigError as exc:
        _fail_config(str(exc))
        raise AssertionError("unreachable")


@click.group()
@click.version_option(version=__version__, prog_name="intentrunner")
def main() -> None:
    """Resolve natural-language intentions through generated workflow scripts."""


@main.command("run")
@click.argument("intention_text")
@_with_config_options
@click.option("--trial", type=int, default=1, help="Replay trial index to use.")
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Also write the trace to this file.")
def cmd_run(intention_text: str, config_path: Optional[str], trial: int,
            out_path: Optional[str], **overrides) -> None:
    """Resolve one intention: generate, execute, print code, trace and status."""
    config = _load(config_path, **overrides)
    try:
        intention = Intention(intention_text)
    except EmptyIntentionError as exc:
        _fail_config(str(exc))
        return
    try:
        backend = _build_backend(config)
        table = _build_table(config)
    except ConfigError as exc:
        _fail_config(str(exc))
        return
    consent = _consent(config, "auto-deny", ask=_ask_on_terminal)
    try:
        record = run_trial(
            intention,
            backend,
            table,
            config.limits(),
            consent,
            slot=_intention_slot(intention.text, trial),
            params=config.generation_params(),
        )
    except FixtureMissingError as exc:
        _fail_config(str(exc))
        return
    if record.code:
        click.echo(record.code)
    for line in record.trace:
        click.echo(line)
    if out_path:
        Path(out_path).write_text(
            "".join(line + "\n" for line in record.trace), encoding="utf-8"
        )
    if record.success:
        click.echo("status: success")
        sys.exit(0)
    click.echo(
        f"status: failure ({record.failure_class.value}): {record.failure_message}"
    )
    sys.exit(1)


@main.command("bench")
@_with_config_options
@click.option("--trials", type=int, default=None, help="Trials per intention.")
@click.option("--intentions", "intentions_path", type=click.Path(), default=None,
              help="Corpus file, one intention per line (defaults to the built-in four).")
@click.option("--format", "formats", type=click.Choice(REPORT_FORMATS), multiple=True,
              help="Report format(s); defaults to markdown.")
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Write the report here instead of stdout.")
@click.option("--mock-ttft", "mock_ttft_ms", type=float, default=None,
              help="Mock backend: time to first token in milliseconds.")
@click.option("--mock-total", "mock_total_ms", type=float, default=None,
              help="Mock backend: total response time in milliseconds.")
def cmd_bench(config_path: Optional[str], trials: Optional[int],
              intentions_path: Optional[str], formats: Tuple[str, ...],
              out_path: Optional[str], **overrides) -> None:
    """Run the benchmark protocol and emit a report."""
    overrides["trials"] = trials
    config = _load(config_path, **overrides)
    try:
        backend = _build_backend(config)
        table = _build_table(config)
        intentions = (
            intentions_from_file(intentions_path)
            if intentions_path
            else list(DEFAULT_INTENTIONS)
        )
    except ConfigError as exc:
        _fail_config(str(exc))
        return
    except OSError as exc:
        _fail_config(f"cannot read intentions file: {exc}")
        return
    if not intentions:
        _fail_config("intention corpus is empty")
        return
    consent = _consent(config, "auto-deny")
    try:
        report = run_bench(
            intentions,
            backend,
            trials_per_intention=config.trials,
            table=table,
            limits=config.limits(),
            consent=consent,
            params=config.generation_params(),
        )
    except FixtureMissingError as exc:
        _fail_config(str(exc))
        return
    selected = formats or ("markdown",)
    try:
        _write_reports(report, selected, out_path)
    except OSError as exc:
        _fail_config(f"cannot write report: {exc}")
    sys.exit(0)


_FORMAT_SUFFIX = {"markdown": ".md", "csv": ".csv", "jsonl": ".jsonl"}


def _write_reports(report, formats: Tuple[str, ...], out_path: Optional[str]) -> None:
    for fmt in formats:
        text = render_report(report, fmt)
        if out_path is None:
            click.echo(text, nl=False)
            continue
        target = Path(out_path)
        if len(formats) > 1:
            target = target.with_suffix(_FORMAT_SUFFIX[fmt])
        target.write_text(text, encoding="utf-8")
        click.echo(f"wrote {fmt} report to {target}", err=True)


@main.command("repl")
@_with_config_options
def cmd_repl(config_path: Optional[str], **overrides) -> None:
    """Interactive loop: type intentions, review code, approve execution."""
    config = _load(config_path, **overrides)
    try:
        backend = _build_backend(config)
        table = _build_table(config)
    except ConfigError as exc:
        _fail_config(str(exc))
        return
    click.echo("type an intention, or 'exit' to quit")
    while True:
        try:
            line = input("intention> ")
        except EOFError:
            break
        text = line.strip()
        if not text:
            continue
        if text == "exit":
            break
        try:
            _repl_iteration(text, config, backend, table)
        except Exception as exc:  # per-iteration errors never kill the loop
            click.echo(f"error: {exc}")
    sys.exit(0)


def _repl_iteration(text: str, config: Config, backend: Backend,
                    table: FunctionTable) -> None:
    intention = Intention(text)
    run_consent = _consent(config, "interactive", ask=_ask_on_terminal)
    bundle = render_prompt(intention, table)
    generation = backend.generate(
        bundle, config.generation_params(), slot=_intention_slot(text, 1)
    )
    click.echo(generation.raw_text)
    try:
        answer = input("execute? [y/N] ")
    except EOFError:
        answer = ""
    if answer.strip().lower() not in ("y", "yes"):
        click.echo("skipped")
        return
    record = run_generated(
        generation.raw_text,
        table,
        config.limits(),
        run_consent,
        response_time_ms=generation.total_ms,
        ttft_ms=generation.ttft_ms,
    )
    for trace_line in record.trace:
        click.echo(trace_line)
    if record.success:
        click.echo("status: success")
    else:
        click.echo(
            f"status: failure ({record.failure_class.value}): {record.failure_message}"
        )


def _ask_on_terminal(function_name: str) -> bool:
    try:
        answer = input(f"allow privileged function '{function_name}'? [y/N] ")
    except EOFError:
        return False
    return answer.strip().lower() in ("y", "yes")


@main.command("render-prompt")
@click.argument("intention_text")
@_with_config_options
@click.option("--show-role", is_flag=True, help="Print the role message to stderr.")
def cmd_render_prompt(intention_text: str, config_path: Optional[str],
                      show_role: bool, **overrides) -> None:
    """Print the exact prompt body for an intention."""
    config = _load(config_path, **overrides)
    try:
        intention = Intention(intention_text)
        table = _build_table(config)
    except (EmptyIntentionError, ConfigError) as exc:
        _fail_config(str(exc))
        return
    bundle = render_prompt(intention, table)
    if show_role:
        click.echo(f"role: {bundle.role}", err=True)
    sys.stdout.write(bundle.body)
    sys.stdout.flush()
    sys.exit(0)


@main.command("trace")
@click.argument("source", type=click.Path())
def cmd_trace(source: str) -> None:
    """Parse a script file and print its AST."""
    try:
        text = Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        _fail_config(f"cannot read {source}: {exc}")
        return
    try:
        program = parse_source(text)
    except (LexError, ScriptSyntaxError, UnsupportedConstructError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(dump(program))
    sys.exit(0)


if __name__ == "__main__":
    main()
