"""Command-line launcher: load the model and serve the wire protocol."""

from __future__ import annotations

import argparse
import os
import sys

import uvicorn

from .app import create_app
from .model import DEFAULT_MODEL_ID, AdapterConfig, echo_model, load_seq2seq


def serve(config: AdapterConfig, port: int, *, host: str = "127.0.0.1", self_test: bool = False) -> None:
    """Load the model (or the echo stand-in) and run until interrupted."""
    if self_test:
        generate_fn = echo_model(config)
    else:
        try:
            generate_fn = load_seq2seq(config)
        except Exception as exc:
            print(f"failed to load model {config.model_identifier!r}: {exc}", file=sys.stderr)
            raise SystemExit(1) from exc
    uvicorn.run(create_app(generate_fn), host=host, port=port)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="modelserver",
        description="Serve a seq2seq model behind the generation wire protocol",
    )
    parser.add_argument(
        "--model-id",
        default=os.environ.get("MODEL_ID", DEFAULT_MODEL_ID),
        help="Hugging Face model identifier",
    )
    parser.add_argument(
        "--max-input-tokens",
        type=int,
        default=int(os.environ.get("MAX_INPUT_TOKENS", 512)),
        help="inputs are truncated beyond this many tokens",
    )
    parser.add_argument("--device", default="cpu")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=int(os.environ.get("PORT", 9000)))
    parser.add_argument(
        "--self-test",
        action="store_true",
        help="serve a deterministic echo model instead of loading weights",
    )
    args = parser.parse_args(argv)

    config = AdapterConfig(
        model_identifier=args.model_id,
        max_input_tokens=args.max_input_tokens,
        device=args.device,
    )
    serve(config, args.port, host=args.host, self_test=args.self_test)
    return 0


if __name__ == "__main__":
    sys.exit(main())
