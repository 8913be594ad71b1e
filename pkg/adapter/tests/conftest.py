"""Serves the adapter app on a real local socket for wire-level tests."""

from __future__ import annotations

import threading
import time

import pytest
import uvicorn

from modelserver.app import create_app
from modelserver.model import AdapterConfig, echo_model


class ServerThread:
    def __init__(self, app):
        self._server = uvicorn.Server(
            uvicorn.Config(app, host="127.0.0.1", port=0, log_level="warning")
        )
        self._thread = threading.Thread(target=self._server.run, daemon=True)

    def start(self) -> str:
        self._thread.start()
        deadline = time.monotonic() + 10
        while not self._server.started:
            if time.monotonic() > deadline:
                raise RuntimeError("server did not start within 10s")
            time.sleep(0.01)
        port = self._server.servers[0].sockets[0].getsockname()[1]
        return f"http://127.0.0.1:{port}"

    def stop(self) -> None:
        self._server.should_exit = True
        self._thread.join(timeout=5)


@pytest.fixture(scope="session")
def adapter_url():
    config = AdapterConfig(max_input_tokens=64)
    server = ServerThread(create_app(echo_model(config)))
    base_url = server.start()
    yield base_url
    server.stop()
