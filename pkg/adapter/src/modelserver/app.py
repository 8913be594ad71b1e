"""The wire-protocol HTTP application.

Implements exactly the generation protocol that pipeline clients speak:

    POST /v1/generate  {"input": str, "max_new_tokens": int, "request_id": str}
                    -> 200 {"output": str}
    GET  /healthz   -> 200

Requests are serialized through the single model instance; queueing is
acceptable. Malformed bodies get 400, generation failures 500 with an
``error`` string.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from starlette.concurrency import run_in_threadpool

from .model import GenerateFn

DEFAULT_MAX_NEW_TOKENS = 128


def create_app(generate_fn: GenerateFn) -> FastAPI:
    app = FastAPI(title="Sequence-to-sequence model server")
    model_lock = threading.Lock()

    def run_generation(text: str, max_new_tokens: int) -> str:
        with model_lock:
            return generate_fn(text, max_new_tokens)

    @app.post("/v1/generate")
    async def generate(request: Request):
        try:
            payload = await request.json()
        except ValueError:
            return JSONResponse(status_code=400, content={"error": "body is not valid JSON"})
        if not isinstance(payload, dict):
            return JSONResponse(status_code=400, content={"error": "body must be a JSON object"})
        text = payload.get("input")
        if not isinstance(text, str) or not text:
            return JSONResponse(status_code=400, content={"error": "missing 'input' string"})
        max_new_tokens = payload.get("max_new_tokens", DEFAULT_MAX_NEW_TOKENS)
        if not isinstance(max_new_tokens, int) or isinstance(max_new_tokens, bool) or max_new_tokens < 1:
            return JSONResponse(
                status_code=400, content={"error": "'max_new_tokens' must be a positive integer"}
            )
        try:
            output = await run_in_threadpool(run_generation, text, max_new_tokens)
        except Exception as exc:  # noqa: BLE001 - surface any model failure as 500
            return JSONResponse(status_code=500, content={"error": str(exc)})
        return {"output": output}

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok"}

    return app
