"""Completion backends: an OpenAI-compatible HTTP client and offline mocks.

The HTTP backend POSTs to <endpoint>/completions, reads the API key from
an environment variable, runs a bounded number of concurrent requests,
and retries transient failures (connection errors, 429, 5xx) with
exponential backoff.  A request that keeps failing becomes a per-instance
error record instead of aborting the batch.

The mock backends are pure functions of the prompt record, so batches
rerun bit-identically without any network:

* mock_reference_echo - returns the record's reference
* mock_hint_copier    - returns the first translation of every hint
* mock_map            - returns a canned completion looked up by id
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import httpx

from .prompting import PromptRecord

__all__ = [
    "BACKEND_KINDS",
    "BackendConfig",
    "CompletionResult",
    "complete_batch",
    "extract_hypothesis",
]

BACKEND_KINDS = ("http", "mock_reference_echo", "mock_hint_copier", "mock_map")

DEFAULT_API_KEY_ENV = "LEXHINT_API_KEY"


@dataclass(frozen=True)
class BackendConfig:
    """How to obtain completions.

    api_key_env names the environment variable holding the key; the key
    value itself is never stored or logged.
    """

    kind: str = "http"
    endpoint: str = ""
    model: str = ""
    max_tokens: int = 256
    temperature: float = 0.0
    canned: dict[str, str] | None = None
    max_concurrent: int = 4
    max_attempts: int = 3
    backoff_base: float = 0.5
    timeout: float = 60.0
    api_key_env: str = DEFAULT_API_KEY_ENV

    def __post_init__(self) -> None:
        if self.kind not in BACKEND_KINDS:
            raise ValueError(f"kind must be one of {BACKEND_KINDS}, got {self.kind!r}")
        if self.max_tokens < 1:
            raise ValueError(f"max_tokens must be positive, got {self.max_tokens}")
        if self.max_concurrent < 1:
            raise ValueError(f"max_concurrent must be positive, got {self.max_concurrent}")
        if self.max_attempts < 1:
            raise ValueError(f"max_attempts must be positive, got {self.max_attempts}")
        if self.kind == "http" and not self.endpoint:
            raise ValueError("http backend requires an endpoint")


@dataclass(frozen=True)
class CompletionResult:
    """One completion, successful or not.

    hypothesis is the raw text cut at the stop sequence and stripped.
    error is None on success; on failure raw and hypothesis are empty.
    latency and attempts describe the transport and are not persisted.
    """

    instance_id: str
    raw: str = ""
    hypothesis: str = ""
    latency: float = 0.0
    attempts: int = 1
    error: str | None = None


def extract_hypothesis(raw: str, stop: str) -> str:
    """Cut at the first stop sequence and strip surrounding whitespace."""
    if stop:
        index = raw.find(stop)
        if index != -1:
            raw = raw[:index]
    return raw.strip()


def _mock_complete(record: PromptRecord, config: BackendConfig) -> CompletionResult:
    if config.kind == "mock_reference_echo":
        if record.reference is None:
            return CompletionResult(
                record.instance_id, error="record has no reference to echo"
            )
        raw = record.reference
    elif config.kind == "mock_hint_copier":
        raw = " ".join(hint.translations[0] for hint in record.hints)
    else:
        raw = (config.canned or {}).get(record.instance_id, "")
    return CompletionResult(
        record.instance_id,
        raw=raw,
        hypothesis=extract_hypothesis(raw, record.stop),
    )


def _http_complete(
    record: PromptRecord, config: BackendConfig, client: httpx.Client
) -> CompletionResult:
    url = config.endpoint.rstrip("/") + "/completions"
    headers = {}
    api_key = os.environ.get(config.api_key_env, "")
    if api_key:
        headers["Authorization"] = f"Bearer {api_key}"
    payload = {
        "model": config.model,
        "prompt": record.prompt,
        "max_tokens": config.max_tokens,
        "temperature": config.temperature,
        "stop": record.stop,
    }
    start = time.monotonic()
    last_error = "no attempt made"
    for attempt in range(1, config.max_attempts + 1):
        try:
            response = client.post(url, json=payload, headers=headers)
        except httpx.HTTPError as exc:
            last_error = f"request failed: {exc}"
        else:
            if response.status_code == 200:
                try:
                    raw = response.json()["choices"][0]["text"]
                except (ValueError, LookupError, TypeError) as exc:
                    return CompletionResult(
                        record.instance_id,
                        latency=time.monotonic() - start,
                        attempts=attempt,
                        error=f"malformed response body: {exc}",
                    )
                return CompletionResult(
                    record.instance_id,
                    raw=raw,
                    hypothesis=extract_hypothesis(raw, record.stop),
                    latency=time.monotonic() - start,
                    attempts=attempt,
                )
            if response.status_code == 429 or response.status_code >= 500:
                last_error = f"HTTP {response.status_code}"
            else:
                return CompletionResult(
                    record.instance_id,
                    latency=time.monotonic() - start,
                    attempts=attempt,
                    error=f"HTTP {response.status_code}: {response.text[:200]}",
                )
        if attempt < config.max_attempts:
            time.sleep(config.backoff_base * (2 ** (attempt - 1)))
    return CompletionResult(
        record.instance_id,
        latency=time.monotonic() - start,
        attempts=config.max_attempts,
        error=last_error,
    )


def complete_batch(
    records: list[PromptRecord], config: BackendConfig
) -> list[CompletionResult]:
    """Complete a batch of prompts, preserving input order.

    HTTP requests run on a bounded thread pool; mocks run inline.
    """
    if not records:
        raise ValueError("prompt batch must be non-empty")
    if config.kind != "http":
        return [_mock_complete(record, config) for record in records]
    with httpx.Client(timeout=config.timeout) as client:
        with ThreadPoolExecutor(max_workers=config.max_concurrent) as pool:
            futures = [
                pool.submit(_http_complete, record, config, client)
                for record in records
            ]
            return [future.result() for future in futures]
