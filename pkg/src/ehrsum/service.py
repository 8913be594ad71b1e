"""HTTP service for clinician-focused summarization.

Exposes two endpoints consumed by the web UI and scripts:

    POST /api/summarize  {"context": str, "query": str}
                      -> {"summary": str, "question_used": str, "latency_ms": num}
    GET  /api/health  -> {"service": "ok", "backend": "healthy"|"unhealthy"}

Each request is stateless: the clinician query is normalized into a
question, combined with the EHR context into a prompt, and dispatched to
the configured generation backend. Field errors come back as 400 with
the offending field named; backend trouble maps to 502/504.
"""

from __future__ import annotations

import json
import threading
import time

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from starlette.concurrency import run_in_threadpool

from .backend import (
    BackendConfig,
    BackendError,
    BackendUnavailableError,
    GenerationRequest,
    GenerationTimeoutError,
    generate,
    health_check,
)
from .prompting import format_model_input, topic_to_question

# Discharge-summary passages are short; the cap protects the backend.
MAX_BODY_BYTES = 1 << 20

LOCALHOST_ORIGIN_REGEX = r"https?://(localhost|127\.0\.0\.1)(:\d+)?"


def _error(status: int, error: str, **extra) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": error, **extra})


def create_app(
    backend: BackendConfig,
    *,
    max_concurrency: int = 4,
    cors_origins: list[str] | None = None,
) -> FastAPI:
    """Build the service application around one backend configuration."""
    app = FastAPI(title="Enhanced EHR Summarization Service")
    if cors_origins:
        app.add_middleware(
            CORSMiddleware, allow_origins=cors_origins, allow_methods=["*"], allow_headers=["*"]
        )
    else:
        app.add_middleware(
            CORSMiddleware,
            allow_origin_regex=LOCALHOST_ORIGIN_REGEX,
            allow_methods=["*"],
            allow_headers=["*"],
        )

    limiter = threading.Semaphore(max(1, max_concurrency))

    def guarded_generate(prompt: str):
        with limiter:
            return generate(backend, GenerationRequest(input=prompt))

    @app.post("/api/summarize")
    async def summarize(request: Request):
        body = await request.body()
        if len(body) > MAX_BODY_BYTES:
            return _error(413, "BodyTooLarge", detail=f"request body exceeds {MAX_BODY_BYTES} bytes")
        try:
            payload = json.loads(body)
        except ValueError:
            return _error(400, "ParseError", detail="request body is not valid JSON")
        if not isinstance(payload, dict):
            return _error(400, "ParseError", detail="request body must be a JSON object")

        for field in ("context", "query"):
            value = payload.get(field)
            if not isinstance(value, str) or not value.strip():
                return _error(400, "MissingField", field=field)

        question = topic_to_question(payload["query"]).normalized_question
        prompt = format_model_input(question, payload["context"]).text

        start = time.perf_counter()
        try:
            response = await run_in_threadpool(guarded_generate, prompt)
        except GenerationTimeoutError as exc:
            return _error(504, "Timeout", detail=str(exc))
        except BackendUnavailableError as exc:
            return _error(502, "BackendUnavailable", detail=str(exc))
        except BackendError as exc:
            return _error(502, type(exc).__name__, detail=str(exc))
        latency_ms = (time.perf_counter() - start) * 1000.0

        return {
            "summary": response.output,
            "question_used": question,
            "latency_ms": latency_ms,
        }

    @app.get("/api/health")
    async def health():
        status = await run_in_threadpool(health_check, backend)
        doc = {"service": "ok", "backend": "healthy" if status.healthy else "unhealthy"}
        if not status.healthy and status.reason:
            doc["reason"] = status.reason
        return doc

    return app
