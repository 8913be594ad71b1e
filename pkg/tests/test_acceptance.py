"""Acceptance suite: one test per release criterion.

Each test prints a PASS line when its criterion holds (visible with
``pytest -s`` or in captured output); a failed assertion marks the
criterion red. Timing bounds are asserted where the criterion states
them.
"""

import random
import time

import pytest
from fastapi.testclient import TestClient

from ehrsum.backend import BackendConfig, BackendKind
from ehrsum.dataset import (
    AnswerReasonType,
    QuestionAnchor,
    WhyQACue,
    WhyQARecord,
    convert_to_squad,
    iter_qas,
    load_squad,
    qa_count,
    save_squad,
    split_dataset,
)
from ehrsum.evaluator import Verdict, apply_gates, default_gates, gate_verdict, run_evaluation
from ehrsum.fixtures import load_sample_records
from ehrsum.metrics import (
    METRIC_NAMES,
    MetricScores,
    bleu,
    lcs_length,
    rouge_l_tokens,
    rouge_n_tokens,
    token_f1,
)
from ehrsum.service import create_app

from .bleu_reference import reference_bleu
from .test_dataset import singleton_dataset
from .test_metrics import WORDS, brute_force_lcs

TABLE_CONTEXT = (
    "She was treated briefly with levofloxacin because of the gram-positive cocci in her "
    "sputum culture; however, her symptoms were felt to be consistent with a viral upper "
    "respiratory infection, and levofloxacin was continued at the time of discharge."
)
TABLE_QUERY = "Give me a summary on why she was treated briefly with levofloxacin?"


def synthetic_records(n: int, rng: random.Random) -> list[WhyQARecord]:
    records = []
    group_count = max(3, n // 3)
    for i in range(n):
        cue = rng.choice([WhyQACue.BECAUSE, WhyQACue.DUE_TO])
        answer = " ".join(rng.choices(WORDS, k=rng.randint(1, 5)))
        prefix = " ".join(rng.choices(WORDS, k=rng.randint(1, 4)))
        suffix = " ".join(rng.choices(WORDS, k=rng.randint(0, 4)))
        sentence = f"{prefix} {cue.value} {answer} {suffix}".strip()
        records.append(
            WhyQARecord(
                file_name=f"file{rng.randrange(group_count)}",
                sentence_text=sentence,
                cue=cue,
                derived_question=f"why case {i}?",
                answer=answer,
                answer_begin=sentence.find(answer),
                question_anchor=rng.choice(list(QuestionAnchor)),
                answer_reason_type=rng.choice(list(AnswerReasonType)),
            )
        )
    return records


def test_oracle_end_to_end_on_bundled_fixture():
    start = time.perf_counter()
    records = load_sample_records()
    assert len(records) == 6
    dataset = convert_to_squad(records)
    report = run_evaluation(dataset, BackendConfig(kind=BackendKind.ORACLE), default_gates())
    elapsed = time.perf_counter() - start
    assert report.scores.as_dict() == {name: 1.0 for name in METRIC_NAMES}
    assert elapsed < 1.0, f"took {elapsed:.3f}s"
    print(f"PASS: oracle end-to-end on 6-record fixture, all six metrics 1.0 ({elapsed:.3f}s)")


def test_gate_fixture_reference_scores_and_boundaries():
    scores = MetricScores(
        exact_match=0.8182, f1=0.9546, rouge1=0.9603, rouge2=0.8667, rougeL=0.9610, bleu=0.6310
    )
    verdicts = apply_gates(scores, default_gates())
    assert set(verdicts) == set(METRIC_NAMES)
    assert all(v is Verdict.GOOD for v in verdicts.values())
    for gate in default_gates():
        assert gate_verdict(gate.good_above, gate) is Verdict.ACCEPTABLE
        assert gate_verdict(gate.minimum, gate) is Verdict.ACCEPTABLE
    print("PASS: gate fixture, reference scores all Good; boundary values Acceptable")


def test_metric_hand_derived_cases():
    assert token_f1("volume depletion caused by diarrhea", ["volume depletion"]) == pytest.approx(
        4 / 7, abs=1e-6
    )
    assert rouge_l_tokens(["a", "b", "c", "d"], ["a", "c", "b", "d"]) == pytest.approx(
        0.75, abs=1e-6
    )
    assert rouge_n_tokens(["a", "b", "c"], ["a", "b", "d"], 2) == pytest.approx(0.5, abs=1e-6)
    assert bleu(["the cat sat on mat"], ["the cat sat on the mat"]) == pytest.approx(
        0.5789, abs=1e-4
    )
    print("PASS: hand-derived metric cases (F1 4/7, ROUGE-L 0.75, ROUGE-2 0.5, BLEU 0.5789)")


def test_lcs_matches_exhaustive_enumeration_on_1000_pairs():
    rng = random.Random(0)
    start = time.perf_counter()
    for _ in range(1000):
        x = rng.choices(WORDS[:4], k=rng.randint(0, 8))
        y = rng.choices(WORDS[:4], k=rng.randint(0, 8))
        assert lcs_length(x, y) == brute_force_lcs(x, y)
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"took {elapsed:.3f}s"
    print(f"PASS: LCS equals exhaustive enumeration on 1000 random pairs ({elapsed:.3f}s)")


def correlated_bleu_fixture(seed: int, n_pairs: int = 20) -> tuple[list[str], list[str]]:
    """Random pairs where preds are noisy copies of refs, so n-gram
    overlap (and hence BLEU) lands in a meaningful range."""
    rng = random.Random(seed)
    preds, refs = [], []
    for _ in range(n_pairs):
        ref = rng.choices(WORDS, k=rng.randint(4, 12))
        pred = [w if rng.random() > 0.25 else rng.choice(WORDS) for w in ref]
        if rng.random() < 0.3:
            pred = pred[: max(1, len(pred) - 2)]
        preds.append(" ".join(pred))
        refs.append(" ".join(ref))
    return preds, refs


def test_bleu_matches_independent_reference():
    preds, refs = correlated_bleu_fixture(seed=123)
    ours = bleu(preds, refs)
    theirs = reference_bleu(preds, refs)
    assert 0.1 < ours < 0.9, "fixture should land in a discriminative range"
    assert ours == pytest.approx(theirs, abs=1e-4)
    print(f"PASS: corpus BLEU matches independent reference ({ours:.6f} vs {theirs:.6f})")


def test_conversion_round_trip_and_determinism(tmp_path):
    rng = random.Random(7)
    records = synthetic_records(1000, rng)
    dataset = convert_to_squad(records)
    path = tmp_path / "synthetic.json"
    save_squad(dataset, path)
    loaded = load_squad(path)  # load re-validates every span

    for _, paragraph, qa in iter_qas(loaded):
        answer = qa.answers[0]
        span = paragraph.context[answer.answer_start : answer.answer_start + len(answer.text)]
        assert span == answer.text
    assert qa_count(loaded) == len(records)
    assert len(loaded.data) == len({r.file_name for r in records})

    for run in ("a", "b"):
        split = split_dataset(loaded, seed=0)
        for part_name, part in (
            ("train", split.train),
            ("validation", split.validation),
            ("test", split.test),
        ):
            save_squad(part, tmp_path / f"{run}-{part_name}.json")
    for part_name in ("train", "validation", "test"):
        assert (tmp_path / f"a-{part_name}.json").read_bytes() == (
            tmp_path / f"b-{part_name}.json"
        ).read_bytes()

    start = time.perf_counter()
    small = convert_to_squad(synthetic_records(277, random.Random(1)))
    split_dataset(small, seed=0)
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"took {elapsed:.3f}s"
    print(f"PASS: 1000-record conversion round-trip, byte-identical seed-0 splits ({elapsed:.3f}s at 277 scale)")


def test_split_arithmetic():
    def sizes(split):
        return qa_count(split.train), qa_count(split.validation), qa_count(split.test)

    assert sizes(split_dataset(singleton_dataset(277), seed=0)) == (194, 42, 41)
    assert sizes(split_dataset(singleton_dataset(10), seed=0)) == (7, 2, 1)
    print("PASS: split arithmetic, 277 -> (194, 42, 41) and 10 -> (7, 2, 1)")


def test_service_contract():
    records = load_sample_records()
    dataset = convert_to_squad(records)
    cfg = BackendConfig(kind=BackendKind.ORACLE, oracle_dataset=dataset)
    client = TestClient(create_app(cfg))

    response = client.post("/api/summarize", json={"context": TABLE_CONTEXT, "query": "  "})
    assert response.status_code == 400
    assert response.json()["field"] == "query"

    response = client.post(
        "/api/summarize", json={"context": TABLE_CONTEXT, "query": TABLE_QUERY}
    )
    assert response.status_code == 200
    assert response.json()["summary"] == "gram-positive cocci in her sputum culture"

    response = client.post(
        "/api/summarize",
        content=b"definitely not json",
        headers={"Content-Type": "application/json"},
    )
    assert response.status_code == 400

    import socket

    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        dead_port = s.getsockname()[1]
    down_cfg = BackendConfig(
        kind=BackendKind.HTTP,
        endpoint_url=f"http://127.0.0.1:{dead_port}",
        timeout_ms=300,
        max_retries=0,
    )
    down_client = TestClient(create_app(down_cfg))
    response = down_client.post("/api/summarize", json={"context": "c", "query": "why?"})
    assert response.status_code == 502

    print("PASS: service contract (400 field errors, oracle 200, parse 400, backend-down 502)")
