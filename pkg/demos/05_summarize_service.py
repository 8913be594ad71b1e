"""
The summarize HTTP service
===========================

Starts the service on a local port with an oracle backend, then drives
it the way the web UI does: a health probe, a focused summary request,
and a validation failure. The same service runs standalone via
``ehrsum serve --backend oracle --dataset squad.json``.

Run with:  python demos/05_summarize_service.py
"""

import threading
import time

import httpx
import uvicorn

from ehrsum.backend import BackendConfig, BackendKind
from ehrsum.dataset import convert_to_squad
from ehrsum.fixtures import load_sample_records
from ehrsum.service import create_app

dataset = convert_to_squad(load_sample_records())
app = create_app(BackendConfig(kind=BackendKind.ORACLE, oracle_dataset=dataset))

server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=0, log_level="warning"))
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.02)
port = server.servers[0].sockets[0].getsockname()[1]
base = f"http://127.0.0.1:{port}"
print(f"service listening on {base}\n")

print("GET /api/health ->", httpx.get(f"{base}/api/health").json())

context = dataset.data[0].paragraphs[0].context
query = dataset.data[0].paragraphs[0].qas[0].question
print(f"\nclinician query: {query}")
response = httpx.post(f"{base}/api/summarize", json={"context": context, "query": query})
body = response.json()
print(f"POST /api/summarize -> {response.status_code}")
print(f"  summary:       {body['summary']!r}")
print(f"  question_used: {body['question_used']!r}")
print(f"  latency_ms:    {body['latency_ms']:.1f}")

# Field validation: the UI relies on the service naming the blank field.
response = httpx.post(f"{base}/api/summarize", json={"context": context, "query": "  "})
print(f"\nblank query -> {response.status_code} {response.json()}")

server.should_exit = True
thread.join(timeout=5)
print("\nserver stopped")
