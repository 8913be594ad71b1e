"""Pluggable generation backends.

The pipeline talks to a generation model through a tiny wire protocol:

    POST {endpoint_url}/v1/generate
         {"input": str, "max_new_tokens": int, "request_id": str}
      -> 200 {"output": str}
    GET  {endpoint_url}/healthz -> 200

Besides the HTTP client there are three deterministic mock kinds that
need no model: ``oracle`` answers every prompt with the gold answer from
a loaded dataset (forcing perfect scores end to end), ``fixed`` always
returns one configured string, and ``identity`` echoes the parsed
question back.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import httpx

from .dataset import SquadDataset, iter_qas
from .prompting import parse_model_input

GENERATE_PATH = "/v1/generate"
HEALTH_PATH = "/healthz"

DEFAULT_MAX_NEW_TOKENS = 128

# Retry policy: only connect failures and timeouts are retried (the
# request is idempotent); protocol errors are not.
RETRY_BACKOFF_BASE_MS = 250
RETRY_BACKOFF_FACTOR = 2


class BackendError(Exception):
    """Base class for generation failures."""


class GenerationTimeoutError(BackendError):
    """The backend did not answer within timeout_ms, after retries."""


class BackendUnavailableError(BackendError):
    """Could not connect to the backend, after retries."""


class ProtocolError(BackendError):
    """The backend answered with a malformed or non-200 response."""


class OracleMissError(BackendError):
    """Oracle mode: no QA in the dataset matches the prompt."""


class BackendKind(str, Enum):
    HTTP = "http"
    ORACLE = "oracle"
    FIXED = "fixed"
    IDENTITY = "identity"


@dataclass
class GenerationRequest:
    input: str
    max_new_tokens: int = DEFAULT_MAX_NEW_TOKENS
    request_id: str = ""

    def __post_init__(self) -> None:
        if not self.input:
            raise ValueError("generation input must be non-empty")
        if self.max_new_tokens < 1:
            raise ValueError("max_new_tokens must be >= 1")


@dataclass
class GenerationResponse:
    output: str
    latency_ms: float
    backend_name: str


@dataclass
class HealthStatus:
    healthy: bool
    reason: Optional[str] = None


@dataclass
class BackendConfig:
    kind: BackendKind
    endpoint_url: Optional[str] = None
    timeout_ms: int = 10_000
    max_retries: int = 2
    fixed_output: Optional[str] = None
    # Gold table for oracle mode; filled in by the evaluator when absent.
    oracle_dataset: Optional[SquadDataset] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.kind == BackendKind.HTTP and not self.endpoint_url:
            raise ValueError("http backend requires endpoint_url")
        if self.kind == BackendKind.FIXED and self.fixed_output is None:
            raise ValueError("fixed backend requires fixed_output")
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be non-negative")

    @property
    def name(self) -> str:
        if self.kind == BackendKind.HTTP:
            return f"http:{self.endpoint_url}"
        return self.kind.value


def _oracle_lookup(dataset: SquadDataset, question: str, context: str) -> str:
    for _, paragraph, qa in iter_qas(dataset):
        if qa.question == question and paragraph.context == context and qa.answers:
            return qa.answers[0].text
    raise OracleMissError(
        f"no QA matches question {question!r} with the given context"
    )


def _http_generate(cfg: BackendConfig, req: GenerationRequest) -> str:
    url = cfg.endpoint_url.rstrip("/") + GENERATE_PATH
    payload = {
        "input": req.input,
        "max_new_tokens": req.max_new_tokens,
        "request_id": req.request_id,
    }
    timeout = cfg.timeout_ms / 1000.0
    last_error: BackendError | None = None
    for attempt in range(cfg.max_retries + 1):
        if attempt > 0:
            backoff = RETRY_BACKOFF_BASE_MS / 1000.0 * RETRY_BACKOFF_FACTOR ** (attempt - 1)
            time.sleep(backoff)
        try:
            response = httpx.post(url, json=payload, timeout=timeout)
        except httpx.TimeoutException as exc:
            last_error = GenerationTimeoutError(f"no answer within {cfg.timeout_ms} ms: {exc}")
            continue
        except httpx.TransportError as exc:
            last_error = BackendUnavailableError(f"cannot reach {cfg.endpoint_url}: {exc}")
            continue
        if response.status_code != 200:
            raise ProtocolError(f"status {response.status_code}")
        try:
            body = response.json()
        except ValueError as exc:
            raise ProtocolError(f"response body is not JSON: {exc}") from exc
        output = body.get("output") if isinstance(body, dict) else None
        if not isinstance(output, str):
            raise ProtocolError("response body lacks an 'output' string")
        return output
    assert last_error is not None
    raise last_error


def generate(cfg: BackendConfig, req: GenerationRequest) -> GenerationResponse:
    """Run one generation request against the configured backend.

    Raises:
        GenerationTimeoutError: HTTP backend timed out (after retries).
        BackendUnavailableError: HTTP backend unreachable (after retries).
        ProtocolError: HTTP backend answered with a malformed response.
        OracleMissError: oracle mode found no matching QA.
    """
    start = time.perf_counter()
    if cfg.kind == BackendKind.HTTP:
        output = _http_generate(cfg, req)
    elif cfg.kind == BackendKind.ORACLE:
        if cfg.oracle_dataset is None:
            raise ValueError("oracle backend requires oracle_dataset")
        question, context = parse_model_input(req.input)
        output = _oracle_lookup(cfg.oracle_dataset, question, context)
    elif cfg.kind == BackendKind.FIXED:
        output = cfg.fixed_output or ""
    elif cfg.kind == BackendKind.IDENTITY:
        question, _ = parse_model_input(req.input)
        output = question
    else:  # pragma: no cover - exhaustive over BackendKind
        raise ValueError(f"unknown backend kind {cfg.kind!r}")
    latency_ms = (time.perf_counter() - start) * 1000.0
    return GenerationResponse(output=output, latency_ms=latency_ms, backend_name=cfg.name)


def health_check(cfg: BackendConfig) -> HealthStatus:
    """Probe the backend once; mock kinds are always healthy."""
    if cfg.kind != BackendKind.HTTP:
        return HealthStatus(healthy=True)
    url = cfg.endpoint_url.rstrip("/") + HEALTH_PATH
    try:
        response = httpx.get(url, timeout=cfg.timeout_ms / 1000.0)
    except httpx.TimeoutException:
        return HealthStatus(healthy=False, reason="timeout")
    except httpx.ConnectError:
        return HealthStatus(healthy=False, reason="connect refused")
    except httpx.TransportError as exc:
        return HealthStatus(healthy=False, reason=str(exc))
    if response.status_code != 200:
        return HealthStatus(healthy=False, reason=f"status {response.status_code}")
    return HealthStatus(healthy=True)
