"""Shared fixtures: sample data and a configurable stub generation server."""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Callable

import pytest

from ehrsum.dataset import SquadDataset, convert_to_squad
from ehrsum.fixtures import load_sample_records


@dataclass
class StubBehavior:
    """Knobs controlling how the stub server answers."""

    status: int = 200
    health_status: int = 200
    sleep_s: float = 0.0
    raw_body: bytes | None = None
    generate_fn: Callable[[dict], str] = lambda payload: "stub output"
    hits: list[tuple[str, str]] = field(default_factory=list)


class _StubHandler(BaseHTTPRequestHandler):
    def log_message(self, *args):  # keep test output clean
        pass

    def _send(self, status: int, body: bytes = b"", content_type: str = "application/json"):
        try:
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)
        except (BrokenPipeError, ConnectionResetError):
            pass  # client gave up (timeout tests)

    def do_GET(self):
        behavior = self.server.behavior
        behavior.hits.append(("GET", self.path))
        if self.path == "/healthz":
            self._send(behavior.health_status)
        else:
            self._send(404)

    def do_POST(self):
        behavior = self.server.behavior
        behavior.hits.append(("POST", self.path))
        if behavior.sleep_s:
            time.sleep(behavior.sleep_s)
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length)
        if self.path != "/v1/generate":
            self._send(404)
            return
        try:
            payload = json.loads(raw)
        except ValueError:
            self._send(400, json.dumps({"error": "body is not JSON"}).encode())
            return
        if not isinstance(payload, dict) or not isinstance(payload.get("input"), str):
            self._send(400, json.dumps({"error": "missing 'input'"}).encode())
            return
        if behavior.raw_body is not None:
            self._send(behavior.status, behavior.raw_body)
            return
        body = json.dumps({"output": behavior.generate_fn(payload)}).encode()
        self._send(behavior.status, body)


class StubServer:
    def __init__(self, behavior: StubBehavior | None = None):
        self.behavior = behavior or StubBehavior()
        self._server = ThreadingHTTPServer(("127.0.0.1", 0), _StubHandler)
        self._server.daemon_threads = True
        self._server.behavior = self.behavior
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()

    @property
    def base_url(self) -> str:
        host, port = self._server.server_address
        return f"http://{host}:{port}"

    def close(self):
        self._server.shutdown()
        self._server.server_close()


@pytest.fixture
def stub_server():
    server = StubServer()
    yield server
    server.close()


@pytest.fixture(scope="session")
def sample_records():
    return load_sample_records()


@pytest.fixture
def sample_dataset(sample_records) -> SquadDataset:
    return convert_to_squad(sample_records)


def free_port() -> int:
    """A TCP port with nothing listening on it."""
    import socket

    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]
