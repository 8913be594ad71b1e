"""Command-line entry points for the pipeline.

Subcommands:
    convert   Why-QA CSV/TSV table -> SQuAD JSON
    split     SQuAD JSON -> deterministic train/validation/test files
    evaluate  score a dataset against a backend and emit a report
    serve     run the summarize HTTP service
    report    render a saved report

Exit codes: 0 success, 1 data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .backend import BackendConfig, BackendError, BackendKind
from .dataset import (
    SquadSchemaError,
    TooFewGroupsError,
    WhyQATableError,
    clean_records,
    convert_to_squad,
    load_squad,
    parse_whyqa_table,
    qa_count,
    save_squad,
    split_dataset,
)
from .evaluator import (
    default_gates,
    format_report_table,
    load_report,
    run_evaluation,
    write_report,
)

DEFAULT_PORT = 8000


def backend_config_from_spec(
    spec: str,
    *,
    timeout_ms: int = 10_000,
    max_retries: int = 2,
    oracle_dataset=None,
) -> BackendConfig:
    """Build a backend config from a CLI spec string.

    Accepted forms: ``oracle``, ``identity``, ``fixed:<text>``, or an
    ``http(s)://...`` endpoint URL.
    """
    if spec == "oracle":
        return BackendConfig(kind=BackendKind.ORACLE, oracle_dataset=oracle_dataset)
    if spec == "identity":
        return BackendConfig(kind=BackendKind.IDENTITY)
    if spec.startswith("fixed:"):
        return BackendConfig(kind=BackendKind.FIXED, fixed_output=spec[len("fixed:"):])
    if spec.startswith(("http://", "https://")):
        return BackendConfig(
            kind=BackendKind.HTTP,
            endpoint_url=spec,
            timeout_ms=timeout_ms,
            max_retries=max_retries,
        )
    raise ValueError(
        f"unknown backend spec {spec!r}; expected oracle, identity, fixed:<text>, or a URL"
    )


def _cmd_convert(args: argparse.Namespace) -> int:
    fmt = args.format or ("tsv" if args.table.suffix.lower() == ".tsv" else "csv")
    with open(args.table, encoding="utf-8", newline="") as f:
        records = parse_whyqa_table(f, fmt=fmt)
    kept, dropped = clean_records(records)
    dataset = convert_to_squad(kept, version=args.version)
    save_squad(dataset, args.output)
    print(
        f"wrote {len(dataset.data)} articles / {qa_count(dataset)} QA pairs to {args.output}"
        + (f" ({len(dropped)} records dropped)" if dropped else "")
    )
    return 0


def _cmd_split(args: argparse.Namespace) -> int:
    dataset = load_squad(args.dataset)
    parts = split_dataset(dataset, seed=args.seed)
    args.output.mkdir(parents=True, exist_ok=True)
    for name, part in (
        ("train", parts.train),
        ("validation", parts.validation),
        ("test", parts.test),
    ):
        path = args.output / f"{name}.json"
        save_squad(part, path)
        print(f"{name}: {qa_count(part)} QA pairs -> {path}")
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    dataset = load_squad(args.dataset)
    backend = backend_config_from_spec(
        args.backend, timeout_ms=args.timeout_ms, max_retries=args.max_retries
    )
    report = run_evaluation(
        dataset,
        backend,
        default_gates(),
        concurrency=args.concurrency,
        strict=args.strict,
        dataset_path=str(args.dataset),
        split=args.split,
    )
    sys.stdout.write(format_report_table(report))
    if report.run_metadata.generation_failures:
        print(f"generation failures: {report.run_metadata.generation_failures}", file=sys.stderr)
    if args.output:
        write_report(report, args.output, fmt="json")
        print(f"report written to {args.output}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    spec = args.backend or _backend_spec_from_env()
    oracle_dataset = load_squad(args.dataset) if args.dataset else None
    backend = backend_config_from_spec(
        spec, timeout_ms=args.timeout_ms, max_retries=args.max_retries, oracle_dataset=oracle_dataset
    )
    app = create_app(backend, max_concurrency=args.max_concurrency)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _backend_spec_from_env() -> str:
    kind = os.environ.get("BACKEND_KIND", "identity")
    if kind == "http":
        url = os.environ.get("BACKEND_URL")
        if not url:
            raise ValueError("BACKEND_KIND=http requires BACKEND_URL")
        return url
    return kind


def _cmd_report(args: argparse.Namespace) -> int:
    report = load_report(args.report)
    if args.format == "table":
        sys.stdout.write(format_report_table(report))
    else:
        import json

        from .evaluator import report_to_dict

        json.dump(report_to_dict(report), sys.stdout, indent=2, ensure_ascii=False)
        sys.stdout.write("\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ehrsum",
        description="Clinician-focused EHR question-answer summarization pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_convert = sub.add_parser("convert", help="convert a Why-QA table to SQuAD JSON")
    p_convert.add_argument("table", type=Path, help="input CSV/TSV file")
    p_convert.add_argument("-o", "--output", type=Path, required=True, help="output JSON path")
    p_convert.add_argument("--format", choices=("csv", "tsv"), help="input format (default: by extension)")
    p_convert.add_argument("--version", default="whyqa-squad-1.0", help="dataset version label")
    p_convert.set_defaults(func=_cmd_convert)

    p_split = sub.add_parser("split", help="split a SQuAD JSON into train/validation/test")
    p_split.add_argument("dataset", type=Path, help="input SQuAD JSON")
    p_split.add_argument("--seed", type=int, required=True, help="shuffle seed")
    p_split.add_argument("-o", "--output", type=Path, required=True, help="output directory")
    p_split.set_defaults(func=_cmd_split)

    p_eval = sub.add_parser("evaluate", help="evaluate a dataset against a backend")
    p_eval.add_argument("dataset", type=Path, help="SQuAD JSON to evaluate")
    p_eval.add_argument("--backend", required=True, help="oracle | identity | fixed:<text> | URL")
    p_eval.add_argument("--strict", action="store_true", help="abort on the first backend failure")
    p_eval.add_argument("-o", "--output", type=Path, help="write the JSON report here")
    p_eval.add_argument("--split", default="all", help="split label recorded in the report")
    p_eval.add_argument("--concurrency", type=int, default=4)
    p_eval.add_argument("--timeout-ms", type=int, default=10_000)
    p_eval.add_argument("--max-retries", type=int, default=2)
    p_eval.set_defaults(func=_cmd_evaluate)

    p_serve = sub.add_parser("serve", help="run the summarize HTTP service")
    p_serve.add_argument("--backend", help="oracle | identity | fixed:<text> | URL (default: env)")
    p_serve.add_argument("--dataset", type=Path, help="SQuAD JSON backing an oracle backend")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=int(os.environ.get("PORT", DEFAULT_PORT)))
    p_serve.add_argument(
        "--max-concurrency", type=int, default=int(os.environ.get("MAX_CONCURRENCY", 4))
    )
    p_serve.add_argument("--timeout-ms", type=int, default=10_000)
    p_serve.add_argument("--max-retries", type=int, default=2)
    p_serve.set_defaults(func=_cmd_serve)

    p_report = sub.add_parser("report", help="render a saved evaluation report")
    p_report.add_argument("report", type=Path, help="report JSON path")
    p_report.add_argument("--format", choices=("table", "json"), default="table")
    p_report.set_defaults(func=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (
        WhyQATableError,
        SquadSchemaError,
        TooFewGroupsError,
        BackendError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
