"""Compliance checks for the generation wire protocol.

Any server claiming to implement the protocol (the reference stub used
in tests, or a real model server) can be verified with
:func:`run_protocol_checks` pointed at its base URL. Each check raises
``AssertionError`` with a descriptive message on violation.
"""

from __future__ import annotations

import httpx

from .backend import (
    BackendConfig,
    BackendKind,
    GenerationRequest,
    generate,
    health_check,
)

__all__ = ["run_protocol_checks"]


def run_protocol_checks(
    base_url: str,
    *,
    timeout_ms: int = 10_000,
    expect_deterministic: bool = True,
) -> None:
    """Verify a server implements the generation wire protocol.

    Checks, in order: the health endpoint answers 200; a well-formed
    generate request yields 200 with JSON carrying an ``output`` string
    and application/json content type; the HTTP backend client completes
    a round trip against the server; a body missing ``input`` is
    rejected with 400; and (unless disabled) identical inputs produce
    identical outputs within the server process.
    """
    base = base_url.rstrip("/")
    timeout = timeout_ms / 1000.0

    response = httpx.get(f"{base}/healthz", timeout=timeout)
    assert response.status_code == 200, f"healthz returned {response.status_code}"

    payload = {
        "input": "question: q? context: c",
        "max_new_tokens": 32,
        "request_id": "protocol-check-1",
    }
    response = httpx.post(f"{base}/v1/generate", json=payload, timeout=timeout)
    assert response.status_code == 200, f"generate returned {response.status_code}"
    content_type = response.headers.get("content-type", "")
    assert content_type.startswith("application/json"), f"content type {content_type!r}"
    body = response.json()
    assert isinstance(body, dict) and isinstance(body.get("output"), str), (
        f"generate body must be an object with an 'output' string, got {body!r}"
    )

    cfg = BackendConfig(kind=BackendKind.HTTP, endpoint_url=base, timeout_ms=timeout_ms)
    client_response = generate(
        cfg,
        GenerationRequest(input=payload["input"], max_new_tokens=32, request_id="protocol-check-2"),
    )
    assert isinstance(client_response.output, str)

    status = health_check(cfg)
    assert status.healthy, f"health_check reported unhealthy: {status.reason}"

    response = httpx.post(
        f"{base}/v1/generate",
        json={"max_new_tokens": 32, "request_id": "protocol-check-3"},
        timeout=timeout,
    )
    assert response.status_code == 400, (
        f"generate without 'input' must return 400, got {response.status_code}"
    )

    if expect_deterministic:
        first = generate(cfg, GenerationRequest(input=payload["input"], request_id="det-1"))
        second = generate(cfg, GenerationRequest(input=payload["input"], request_id="det-2"))
        assert first.output == second.output, "identical inputs produced different outputs"
