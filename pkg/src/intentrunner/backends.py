"""Code-generation backends and model-output post-processing.

Three interchangeable backends produce raw model text plus timing:

* ReplayBackend serves recorded fixtures deterministically (text from
  ``intention-<i>/trial-<j>.txt``, timings from the ``.timing`` sidecar).
* MockBackend fabricates a response after configurable delays, measuring
  elapsed time like a real client would.
* HttpBackend talks to an OpenAI-compatible chat-completions endpoint with
  streaming enabled, so time to first token is actually observable.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple

import requests

from .prompting import PromptBundle


class BackendError(Exception):
    pass


class NetworkError(BackendError):
    pass


class AuthError(BackendError):
    pass


class EmptyResponseError(BackendError):
    pass


class FixtureMissingError(BackendError):
    def __init__(self, path: Path) -> None:
        super().__init__(f"missing fixture file: {path}")
        self.path = path


class NoCodeError(Exception):
    """Model output contained no usable code."""


@dataclass(frozen=True)
class GenerationParams:
    model: str = "gpt-4o-mini"
    temperature: float = 0.2
    max_tokens: int = 1024
    timeout_s: float = 60.0

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_tokens <= 0:
            raise ValueError("max_tokens must be positive")
        if self.timeout_s <= 0:
            raise ValueError("timeout must be positive")


@dataclass(frozen=True)
class GenerationResult:
    raw_text: str
    ttft_ms: float
    total_ms: float

    def __post_init__(self) -> None:
        if self.ttft_ms > self.total_ms:
            raise ValueError("time to first token cannot exceed total time")


TrialSlot = Tuple[int, int]  # (intention index, trial index), both 1-based


@dataclass(frozen=True)
class FixtureSet:
    """On-disk layout of recorded generations.

    One file per trial at ``intention-<i>/trial-<j>.txt`` holding the raw
    model output, with an optional ``trial-<j>.timing`` sidecar of two lines:
    ttft milliseconds and total milliseconds.
    """

    root: Path

    def text_path(self, intention: int, trial: int) -> Path:
        return Path(self.root) / f"intention-{intention}" / f"trial-{trial}.txt"

    def timing_path(self, intention: int, trial: int) -> Path:
        return Path(self.root) / f"intention-{intention}" / f"trial-{trial}.timing"

    def has(self, intention: int, trial: int) -> bool:
        return self.text_path(intention, trial).is_file()

    def read(self, intention: int, trial: int) -> GenerationResult:
        text_path = self.text_path(intention, trial)
        if not text_path.is_file():
            raise FixtureMissingError(text_path)
        raw_text = text_path.read_text(encoding="utf-8")
        ttft_ms, total_ms = 0.0, 0.0
        timing_path = self.timing_path(intention, trial)
        if timing_path.is_file():
            lines = timing_path.read_text(encoding="utf-8").splitlines()
            if len(lines) < 2:
                raise FixtureMissingError(timing_path)
            ttft_ms = float(lines[0])
            total_ms = float(lines[1])
        return GenerationResult(raw_text=raw_text, ttft_ms=ttft_ms, total_ms=total_ms)

    def write(
        self, intention: int, trial: int, raw_text: str, ttft_ms: float, total_ms: float
    ) -> None:
        text_path = self.text_path(intention, trial)
        text_path.parent.mkdir(parents=True, exist_ok=True)
        text_path.write_text(raw_text, encoding="utf-8")
        self.timing_path(intention, trial).write_text(
            f"{ttft_ms}\n{total_ms}\n", encoding="utf-8"
        )


class Backend:
    """Interface: turn a prompt bundle into raw model text with timings."""

    def generate(
        self,
        bundle: PromptBundle,
        params: GenerationParams,
        slot: Optional[TrialSlot] = None,
    ) -> GenerationResult:
        raise NotImplementedError


class ReplayBackend(Backend):
    """Deterministic backend reading recorded fixtures; requires a slot."""

    def __init__(self, fixtures: FixtureSet) -> None:
        self.fixtures = fixtures

    def generate(
        self,
        bundle: PromptBundle,
        params: GenerationParams,
        slot: Optional[TrialSlot] = None,
    ) -> GenerationResult:
        if slot is None:
            raise ValueError("replay backend requires a trial slot")
        intention, trial = slot
        result = self.fixtures.read(intention, trial)
        if not result.raw_text.strip():
            raise EmptyResponseError(
                f"fixture intention-{intention}/trial-{trial} is empty"
            )
        return result


class MockBackend(Backend):
    """Scripted backend with configurable timing.

    With ``simulate_delay`` (the default) it sleeps through the configured
    first-token and total delays and reports measured wall-clock times, which
    is what the timing plumbing tests exercise. Without it, the configured
    numbers are returned directly.
    """

    def __init__(
        self,
        text: str,
        ttft_ms: float = 0.0,
        total_ms: float = 0.0,
        simulate_delay: bool = True,
    ) -> None:
        if ttft_ms > total_ms:
            raise ValueError("ttft cannot exceed total time")
        self.text = text
        self.ttft_ms = ttft_ms
        self.total_ms = total_ms
        self.simulate_delay = simulate_delay
        self.calls = 0

    def generate(
        self,
        bundle: PromptBundle,
        params: GenerationParams,
        slot: Optional[TrialSlot] = None,
    ) -> GenerationResult:
        self.calls += 1
        if not self.text.strip():
            raise EmptyResponseError("mock backend configured with empty text")
        if not self.simulate_delay:
            return GenerationResult(self.text, self.ttft_ms, self.total_ms)
        start = time.perf_counter()
        time.sleep(self.ttft_ms / 1000.0)
        first = time.perf_counter()
        time.sleep(max(self.total_ms - self.ttft_ms, 0.0) / 1000.0)
        end = time.perf_counter()
        return GenerationResult(
            self.text, (first - start) * 1000.0, (end - start) * 1000.0
        )


class HttpBackend(Backend):
    """Streaming client for an OpenAI-compatible chat-completions endpoint.

    The credential is read from the named environment variable at call time
    and never stored in configuration files. The role message travels as the
    system message, the prompt body as the user message.
    """

    def __init__(
        self,
        base_url: str = "https://api.openai.com/v1",
        credential_env: str = "OPENAI_API_KEY",
    ) -> None:
        self.base_url = base_url.rstrip("/")
        self.credential_env = credential_env

    def generate(
        self,
        bundle: PromptBundle,
        params: GenerationParams,
        slot: Optional[TrialSlot] = None,
    ) -> GenerationResult:
        credential = os.environ.get(self.credential_env, "")
        if not credential:
            raise AuthError(
                f"no credential found in environment variable {self.credential_env!r}"
            )
        payload = {
            "model": params.model,
            "temperature": params.temperature,
            "max_tokens": params.max_tokens,
            "stream": True,
            "messages": [
                {"role": "system", "content": bundle.role},
                {"role": "user", "content": bundle.body},
            ],
        }
        headers = {
            "Authorization": f"Bearer {credential}",
            "Content-Type": "application/json",
        }
        start = time.perf_counter()
        first_token_at: Optional[float] = None
        chunks: list = []
        try:
            response = requests.post(
                f"{self.base_url}/chat/completions",
                json=payload,
                headers=headers,
                stream=True,
                timeout=params.timeout_s,
            )
        except requests.RequestException as exc:
            raise NetworkError(f"request failed: {exc}") from exc
        with response:
            if response.status_code in (401, 403):
                raise AuthError(f"endpoint rejected the credential ({response.status_code})")
            if response.status_code != 200:
                raise NetworkError(
                    f"endpoint returned status {response.status_code}: "
                    f"{response.text[:200]}"
                )
            try:
                for line in response.iter_lines(decode_unicode=True):
                    delta = _parse_sse_line(line)
                    if delta is None:
                        continue
                    if delta == _DONE:
                        break
                    if delta:
                        if first_token_at is None:
                            first_token_at = time.perf_counter()
                        chunks.append(delta)
            except requests.RequestException as exc:
                raise NetworkError(f"stream failed: {exc}") from exc
        end = time.perf_counter()
        raw_text = "".join(chunks)
        if not raw_text.strip():
            raise EmptyResponseError("model returned no content")
        ttft = (first_token_at - start) * 1000.0 if first_token_at else 0.0
        return GenerationResult(raw_text, ttft, (end - start) * 1000.0)


_DONE = object()


def _parse_sse_line(line: Optional[str]):
    """Extract the content delta from one server-sent-events line.

    Returns None for non-data lines, the _DONE marker at end of stream, and
    otherwise the (possibly empty) content string.
    """
    if not line or not line.startswith("data:"):
        return None
    data = line[len("data:"):].strip()
    if data == "[DONE]":
        return _DONE
    try:
        parsed = json.loads(data)
    except json.JSONDecodeError:
        return None
    choices = parsed.get("choices") or []
    if not choices:
        return None
    delta = choices[0].get("delta") or {}
    content = delta.get("content")
    return content if isinstance(content, str) else None


def extract_code(raw_text: str) -> str:
    """Pull runnable code out of raw model output.

    The first fenced block wins when one is present (opening fence with an
    optional language tag; an unclosed fence extends to the end). Without a
    fence the whole text is taken. Leading and trailing blank lines are
    stripped either way.
    """
    lines = raw_text.split("\n")
    start = None
    for i, line in enumerate(lines):
        stripped = line.strip()
        if stripped.startswith("```"):
            tag = stripped[3:]
            if tag == "" or tag.isalnum():
                start = i
                break
    if start is not None:
        body_lines = []
        for line in lines[start + 1 :]:
            # Any fence-looking line closes the block; this keeps extraction
            # idempotent (an extracted body never contains a fence line).
            if line.strip().startswith("```"):
                break
            body_lines.append(line)
        body = "\n".join(body_lines)
    else:
        body = raw_text
    body = _strip_blank_edges(body)
    if not body.strip():
        raise NoCodeError("no code found in model output")
    return body


def _strip_blank_edges(text: str) -> str:
    lines = text.split("\n")
    while lines and not lines[0].strip():
        lines.pop(0)
    while lines and not lines[-1].strip():
        lines.pop(-1)
    return "\n".join(lines)
