"""Evaluation harness: dataset -> prompts -> backend -> metrics -> report.

Every QA pair in a dataset is turned into a prompt, sent to the
configured backend, and scored against its gold answers. Corpus scores
are then checked against threshold gates that classify each metric as
Good, Acceptable, or Fail, and everything is assembled into a report
that serializes to JSON or a plain-text table.
"""

from __future__ import annotations

import dataclasses
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence

from .backend import (
    BackendConfig,
    BackendError,
    BackendKind,
    GenerationRequest,
    generate,
)
from .dataset import SquadDataset, iter_qas
from .metrics import METRIC_NAMES, MetricScores, aggregate_corpus, score_example
from .prompting import format_model_input

DEFAULT_CONCURRENCY = 4

# Hyperparameters of the fine-tuning run the default gates were tuned
# against; carried as descriptive metadata only, never computed with.
TRAINING_PROVENANCE = {
    "learning_rate": 1e-5,
    "batch_size_per_device": 1,
    "weight_decay": 0.01,
    "mixed_precision": "fp16",
    "epochs": 3,
}


class Verdict(str, Enum):
    GOOD = "Good"
    ACCEPTABLE = "Acceptable"
    FAIL = "Fail"


@dataclass(frozen=True)
class ThresholdGate:
    """Score bands for one metric: Good above, Fail below minimum."""

    metric: str
    good_above: float
    minimum: float

    def __post_init__(self) -> None:
        if self.metric not in METRIC_NAMES:
            raise ValueError(f"unknown metric {self.metric!r}")
        if not 0.0 <= self.minimum <= self.good_above <= 1.0:
            raise ValueError(
                f"need 0 <= minimum <= good_above <= 1, got {self.minimum}/{self.good_above}"
            )


def gate_verdict(score: float, gate: ThresholdGate) -> Verdict:
    """Classify a score; both band boundaries count as Acceptable."""
    if score > gate.good_above:
        return Verdict.GOOD
    if score < gate.minimum:
        return Verdict.FAIL
    return Verdict.ACCEPTABLE


def default_gates() -> list[ThresholdGate]:
    """The standard gate ledger for all six metrics."""
    return [
        ThresholdGate("exact_match", good_above=0.70, minimum=0.40),
        ThresholdGate("f1", good_above=0.80, minimum=0.50),
        ThresholdGate("rouge1", good_above=0.50, minimum=0.30),
        ThresholdGate("rouge2", good_above=0.40, minimum=0.20),
        ThresholdGate("rougeL", good_above=0.50, minimum=0.30),
        ThresholdGate("bleu", good_above=0.50, minimum=0.30),
    ]


@dataclass
class ExampleResult:
    qa_id: str
    pred: str
    gold: str
    em: float
    f1: float
    rouge1: float
    rouge2: float
    rougeL: float


@dataclass
class RunMetadata:
    backend_name: str
    dataset_path: str = ""
    split: str = "all"
    timestamp: str = ""
    generation_failures: int = 0
    training_provenance: dict = field(default_factory=lambda: dict(TRAINING_PROVENANCE))


@dataclass
class MetricReport:
    scores: MetricScores
    per_example: list[ExampleResult]
    gate_verdicts: dict[str, Verdict]
    run_metadata: RunMetadata
    eval_loss: Optional[float] = None


def _check_gate_uniqueness(gates: Sequence[ThresholdGate]) -> None:
    seen = set()
    for gate in gates:
        if gate.metric in seen:
            raise ValueError(f"duplicate gate for metric {gate.metric!r}")
        seen.add(gate.metric)


def apply_gates(scores: MetricScores, gates: Sequence[ThresholdGate]) -> dict[str, Verdict]:
    _check_gate_uniqueness(gates)
    score_map = scores.as_dict()
    return {gate.metric: gate_verdict(score_map[gate.metric], gate) for gate in gates}


def run_evaluation(
    dataset: SquadDataset,
    backend: BackendConfig,
    gates: Optional[Sequence[ThresholdGate]] = None,
    *,
    concurrency: int = DEFAULT_CONCURRENCY,
    strict: bool = False,
    dataset_path: str = "",
    split: str = "all",
    eval_loss: Optional[float] = None,
) -> MetricReport:
    """Evaluate every QA pair in the dataset against the backend.

    A failed generation normally records an empty prediction and bumps
    the failure counter; with ``strict`` the first failure aborts the
    run. Backend calls may run concurrently, but per-example results
    always follow dataset order.
    """
    gates = default_gates() if gates is None else list(gates)
    _check_gate_uniqueness(gates)
    items = [
        (qa.id, qa.question, paragraph.context, [a.text for a in qa.answers])
        for _, paragraph, qa in iter_qas(dataset)
    ]
    if not items:
        raise ValueError("dataset has no QA pairs to evaluate")

    if backend.kind == BackendKind.ORACLE and backend.oracle_dataset is None:
        backend = dataclasses.replace(backend, oracle_dataset=dataset)

    def generate_one(item: tuple[str, str, str, list[str]]) -> tuple[str, bool]:
        qa_id, question, context, _ = item
        prompt = format_model_input(question, context).text
        try:
            response = generate(backend, GenerationRequest(input=prompt, request_id=qa_id))
            return response.output, False
        except BackendError:
            if strict:
                raise
            return "", True

    with ThreadPoolExecutor(max_workers=max(1, concurrency)) as pool:
        outcomes = list(pool.map(generate_one, items))

    failures = sum(1 for _, failed in outcomes if failed)
    pairs = [(output, golds) for (output, _), (_, _, _, golds) in zip(outcomes, items)]

    per_example = []
    for (qa_id, _, _, golds), (pred, _) in zip(items, outcomes):
        row = score_example(pred, golds)
        per_example.append(
            ExampleResult(
                qa_id=qa_id,
                pred=pred,
                gold=golds[0],
                em=row["em"],
                f1=row["f1"],
                rouge1=row["rouge1"],
                rouge2=row["rouge2"],
                rougeL=row["rougeL"],
            )
        )

    scores = aggregate_corpus(pairs)
    metadata = RunMetadata(
        backend_name=backend.name,
        dataset_path=dataset_path,
        split=split,
        timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        generation_failures=failures,
    )
    return MetricReport(
        scores=scores,
        per_example=per_example,
        gate_verdicts=apply_gates(scores, gates),
        run_metadata=metadata,
        eval_loss=eval_loss,
    )


def report_to_dict(r: MetricReport) -> dict:
    doc = {
        "scores": r.scores.as_dict(),
        "gates": {metric: verdict.value for metric, verdict in r.gate_verdicts.items()},
        "per_example": [dataclasses.asdict(row) for row in r.per_example],
        "run_metadata": dataclasses.asdict(r.run_metadata),
    }
    if r.eval_loss is not None:
        doc["eval_loss"] = r.eval_loss
    return doc


def report_from_dict(doc: dict) -> MetricReport:
    return MetricReport(
        scores=MetricScores.from_dict(doc["scores"]),
        per_example=[ExampleResult(**row) for row in doc["per_example"]],
        gate_verdicts={m: Verdict(v) for m, v in doc["gates"].items()},
        run_metadata=RunMetadata(**doc["run_metadata"]),
        eval_loss=doc.get("eval_loss"),
    )


def format_report_table(r: MetricReport) -> str:
    """Aligned plain-text table of the six corpus scores and verdicts."""
    rows = []
    score_map = r.scores.as_dict()
    for metric in METRIC_NAMES:
        verdict = r.gate_verdicts.get(metric)
        rows.append((metric, f"{score_map[metric]:.4f}", verdict.value if verdict else "-"))
    name_width = max(len(name) for name, _, _ in rows + [("metric", "", "")])
    lines = [f"{'metric':<{name_width}}  {'score':>6}  verdict"]
    for name, score, verdict in rows:
        lines.append(f"{name:<{name_width}}  {score:>6}  {verdict}")
    return "\n".join(lines) + "\n"


def write_report(r: MetricReport, path: str | Path, fmt: str = "json") -> None:
    """Write a report as stable-key-order JSON or a plain-text table."""
    if fmt not in ("json", "table"):
        raise ValueError(f"fmt must be 'json' or 'table', got {fmt!r}")
    with open(path, "w", encoding="utf-8") as f:
        if fmt == "json":
            json.dump(report_to_dict(r), f, indent=2, ensure_ascii=False)
            f.write("\n")
        else:
            f.write(format_report_table(r))


def load_report(path: str | Path) -> MetricReport:
    with open(path, encoding="utf-8") as f:
        return report_from_dict(json.load(f))
