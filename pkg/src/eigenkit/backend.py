"""Pluggable conditional-generation backends.

Two implementations of one small interface: a deterministic scripted mock
for tests and offline pipelines, and an HTTP client speaking the
POST /generate + GET /health wire protocol.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass
from os import PathLike
from typing import Iterable, Mapping, Protocol

import httpx

from ._jsonl import read_records
from .errors import BackendError, InputError

DEFAULT_STOP_TOKEN = "<|endoftext|>"
FINISH_REASONS = ("stop", "length", "error")


class BackendUnavailable(BackendError):
    """Transport kept failing after the bounded retries."""


class BadRequest(BackendError):
    """The service (or mock) rejected the request."""


class MalformedResponse(BackendError):
    """The service answered with something outside the wire protocol."""


class DuplicatePrompt(InputError):
    """A mock script listed the same prompt twice."""


@dataclass(frozen=True)
class GenerationRequest:
    """One generation call. Defaults match the standard sampling setup."""

    prompt: str
    max_new_tokens: int = 48
    top_p: float = 0.9
    temperature: float = 1.0
    stop_token: str = DEFAULT_STOP_TOKEN

    def __post_init__(self) -> None:
        if not self.prompt:
            raise ValueError("prompt must be nonempty")
        if self.max_new_tokens < 1:
            raise ValueError(f"max_new_tokens must be >= 1, got {self.max_new_tokens}")
        if not 0 < self.top_p <= 1:
            raise ValueError(f"top_p must be in (0, 1], got {self.top_p}")
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if not self.stop_token:
            raise ValueError("stop_token must be nonempty")


@dataclass(frozen=True)
class GenerationResult:
    text: str
    finish_reason: str = "stop"

    def __post_init__(self) -> None:
        if self.finish_reason not in FINISH_REASONS:
            raise ValueError(f"finish_reason must be one of {FINISH_REASONS}, got {self.finish_reason!r}")


class Generator(Protocol):
    def generate(self, request: GenerationRequest) -> GenerationResult: ...


def _strip_stop(text: str, stop_token: str) -> str:
    # Result text never carries the stop token or anything after it.
    if stop_token and stop_token in text:
        return text.split(stop_token, 1)[0]
    return text


class ScriptedGenerator:
    """Generator backed by an exact prompt -> response table.

    Lookups are pure, so pipelines driven by a script are bit-reproducible.
    With no ``fallback`` an unscripted prompt raises BadRequest; with one it
    is answered by the fallback string. Every received request is recorded in
    ``calls`` for instrumentation.
    """

    def __init__(self, script: Mapping[str, str], fallback: str | None = None):
        self._script = dict(script)
        self._fallback = fallback
        self._lock = threading.Lock()
        self.calls: list[GenerationRequest] = []

    def generate(self, request: GenerationRequest) -> GenerationResult:
        with self._lock:
            self.calls.append(request)
        text = self._script.get(request.prompt)
        if text is None:
            if self._fallback is None:
                raise BadRequest(f"mock script has no entry for prompt {request.prompt!r}")
            text = self._fallback
        return GenerationResult(_strip_stop(text, request.stop_token), "stop")


def mock_from_script(
    entries: Iterable[tuple[str, str]],
    *,
    fallback: str | None = None,
) -> ScriptedGenerator:
    """Build a ScriptedGenerator, rejecting duplicate prompts."""
    script: dict[str, str] = {}
    for prompt, response in entries:
        if prompt in script:
            raise DuplicatePrompt(f"prompt scripted twice: {prompt!r}")
        script[prompt] = response
    return ScriptedGenerator(script, fallback=fallback)


def load_mock_script(path: str | PathLike[str]) -> ScriptedGenerator:
    """Read a JSONL script of {"prompt", "response"} records."""
    entries: list[tuple[str, str]] = []
    for lineno, record in read_records(path):
        try:
            entries.append((str(record["prompt"]), str(record["response"])))
        except KeyError as exc:
            raise InputError(f"{path}:{lineno}: script record missing {exc}") from exc
    return mock_from_script(entries)


class RemoteGenerator:
    """HTTP client for a generation service.

    POSTs the request verbatim to <base>/generate and retries transport-level
    failures (and 5xx answers) with exponential backoff, at most
    ``max_attempts`` tries with an identical payload each time. 4xx answers
    raise BadRequest immediately. A semaphore caps in-flight requests, and the
    client object is safe to share across threads.
    """

    def __init__(
        self,
        base_url: str,
        *,
        max_attempts: int = 3,
        backoff: float = 0.5,
        timeout: float = 30.0,
        max_in_flight: int = 4,
        client: httpx.Client | None = None,
    ):
        if max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")
        self._base = base_url.rstrip("/")
        self._max_attempts = max_attempts
        self._backoff = backoff
        self._slots = threading.BoundedSemaphore(max_in_flight)
        self._client = client if client is not None else httpx.Client(timeout=timeout)

    def generate(self, request: GenerationRequest) -> GenerationResult:
        payload = {
            "prompt": request.prompt,
            "max_new_tokens": request.max_new_tokens,
            "top_p": request.top_p,
            "temperature": request.temperature,
            "stop_token": request.stop_token,
        }
        last_error: Exception | str | None = None
        with self._slots:
            for attempt in range(self._max_attempts):
                if attempt:
                    time.sleep(self._backoff * 2 ** (attempt - 1))
                try:
                    response = self._client.post(f"{self._base}/generate", json=payload)
                except httpx.HTTPError as exc:
                    last_error = exc
                    continue
                if response.status_code >= 500:
                    last_error = f"HTTP {response.status_code}"
                    continue
                if response.status_code >= 400:
                    raise BadRequest(
                        f"service rejected request (HTTP {response.status_code}): {response.text[:200]}"
                    )
                return self._parse(response, request)
        raise BackendUnavailable(
            f"{self._base}/generate failed after {self._max_attempts} attempts: {last_error}"
        )

    def _parse(self, response: httpx.Response, request: GenerationRequest) -> GenerationResult:
        try:
            body = response.json()
        except ValueError as exc:
            raise MalformedResponse(f"service returned non-JSON body: {response.text[:200]}") from exc
        if not isinstance(body, dict) or "text" not in body or "finish_reason" not in body:
            raise MalformedResponse(f"service response missing text/finish_reason: {body!r}")
        if not isinstance(body["text"], str):
            raise MalformedResponse(f"service returned non-string text: {body['text']!r}")
        reason = body["finish_reason"]
        if reason not in FINISH_REASONS:
            raise MalformedResponse(f"unknown finish_reason {reason!r}")
        return GenerationResult(_strip_stop(body["text"], request.stop_token), reason)

    def health(self) -> bool:
        """True when GET /health answers 2xx, False on any failure."""
        try:
            response = self._client.get(f"{self._base}/health")
            return response.is_success
        except httpx.HTTPError:
            return False

    def close(self) -> None:
        self._client.close()

    def __enter__(self) -> "RemoteGenerator":
        return self

    def __exit__(self, *exc_info: object) -> None:
        self.close()
