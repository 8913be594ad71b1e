"""Text-overlap metrics for summary evaluation.

Implements the six scores used by the evaluation harness: Exact Match,
token-level F1, ROUGE-1/2/L (F-measure, no stemming), and corpus-level
BLEU with clipped n-gram precisions and a brevity penalty.

Tokenization conventions differ by metric family and are deliberate:
EM/F1/ROUGE share :func:`tokenize` (lowercase, punctuation stripped,
articles removed); BLEU splits on raw whitespace with no normalization.
"""

from __future__ import annotations

import math
import re
import string
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

__all__ = [
    "METRIC_NAMES",
    "MetricScores",
    "normalize_text",
    "tokenize",
    "exact_match",
    "token_f1",
    "ngram_overlap",
    "rouge_n",
    "rouge_n_tokens",
    "lcs_length",
    "rouge_l",
    "rouge_l_tokens",
    "bleu",
    "score_example",
    "aggregate_corpus",
]

# Canonical metric identifiers, in report order.
METRIC_NAMES = ("exact_match", "f1", "rouge1", "rouge2", "rougeL", "bleu")

# Substituted for a zero n-gram precision inside BLEU's log; keeps the
# geometric mean finite while staying far below any real precision.
BLEU_EPSILON = 1e-9

_PUNCT = set(string.punctuation)
_ARTICLES_RE = re.compile(r"\b(a|an|the)\b")


@dataclass
class MetricScores:
    """Corpus-level values of the six metrics, each in [0, 1]."""

    exact_match: float
    f1: float
    rouge1: float
    rouge2: float
    rougeL: float
    bleu: float

    def __post_init__(self) -> None:
        for name in METRIC_NAMES:
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in METRIC_NAMES}

    @classmethod
    def from_dict(cls, d: dict[str, float]) -> "MetricScores":
        return cls(**{name: float(d[name]) for name in METRIC_NAMES})


def normalize_text(s: str) -> str:
    """Normalize a string for EM/F1/ROUGE comparison.

    Applies, in order: lowercase, strip punctuation characters, drop
    standalone articles (a, an, the), collapse whitespace runs, trim.
    """
    s = s.lower()
    s = "".join(ch for ch in s if ch not in _PUNCT)
    s = _ARTICLES_RE.sub(" ", s)
    return " ".join(s.split())


def tokenize(s: str) -> list[str]:
    """Split normalized text into tokens; empty input yields no tokens."""
    normalized = normalize_text(s)
    return normalized.split(" ") if normalized else []


def _require_golds(golds: Sequence[str]) -> None:
    if not golds:
        raise ValueError("golds must contain at least one reference answer")


def exact_match(pred: str, golds: Sequence[str]) -> float:
    """1.0 if the normalized prediction equals any normalized gold, else 0.0."""
    _require_golds(golds)
    normalized_pred = normalize_text(pred)
    return 1.0 if any(normalize_text(g) == normalized_pred for g in golds) else 0.0


def _f1_pair(pred_tokens: Sequence[str], gold_tokens: Sequence[str]) -> float:
    if not pred_tokens and not gold_tokens:
        return 1.0
    overlap = sum((Counter(pred_tokens) & Counter(gold_tokens)).values())
    if overlap == 0:
        return 0.0
    precision = overlap / len(pred_tokens)
    recall = overlap / len(gold_tokens)
    return 2 * precision * recall / (precision + recall)


def token_f1(pred: str, golds: Sequence[str]) -> float:
    """Best token-multiset F1 of the prediction against any gold answer."""
    _require_golds(golds)
    pred_tokens = tokenize(pred)
    return max(_f1_pair(pred_tokens, tokenize(g)) for g in golds)


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def ngram_overlap(
    pred_tokens: Sequence[str], ref_tokens: Sequence[str], n: int
) -> tuple[int, int, int]:
    """Clipped n-gram overlap count plus each side's total n-gram count."""
    pred_counts = _ngrams(pred_tokens, n)
    ref_counts = _ngrams(ref_tokens, n)
    overlap = sum((pred_counts & ref_counts).values())
    return overlap, sum(pred_counts.values()), sum(ref_counts.values())


def _overlap_f1(overlap: int, n_pred: int, n_ref: int) -> float:
    if n_pred == 0 and n_ref == 0:
        return 1.0
    if n_pred == 0 or n_ref == 0 or overlap == 0:
        return 0.0
    precision = overlap / n_pred
    recall = overlap / n_ref
    return 2 * precision * recall / (precision + recall)


def rouge_n_tokens(
    pred_tokens: Sequence[str], ref_tokens: Sequence[str], n: int
) -> float:
    """ROUGE-N F-measure over already-tokenized sequences."""
    if n not in (1, 2):
        raise ValueError(f"n must be 1 or 2, got {n}")
    return _overlap_f1(*ngram_overlap(pred_tokens, ref_tokens, n))


def rouge_n(pred: str, ref: str, n: int) -> float:
    """ROUGE-N F-measure between two strings (shared tokenization)."""
    return rouge_n_tokens(tokenize(pred), tokenize(ref), n)


def lcs_length(x: Sequence[str], y: Sequence[str]) -> int:
    """Length of the longest common subsequence, O(|x|*|y|) tabulation."""
    if not x or not y:
        return 0
    prev = [0] * (len(y) + 1)
    for xi in x:
        curr = [0]
        for j, yj in enumerate(y, start=1):
            if xi == yj:
                curr.append(prev[j - 1] + 1)
            else:
                curr.append(max(prev[j], curr[j - 1]))
        prev = curr
    return prev[len(y)]


def rouge_l_tokens(pred_tokens: Sequence[str], ref_tokens: Sequence[str]) -> float:
    """ROUGE-L F-measure (LCS-based) over already-tokenized sequences."""
    if not pred_tokens and not ref_tokens:
        return 1.0
    if not pred_tokens or not ref_tokens:
        return 0.0
    lcs = lcs_length(pred_tokens, ref_tokens)
    if lcs == 0:
        return 0.0
    precision = lcs / len(pred_tokens)
    recall = lcs / len(ref_tokens)
    return 2 * precision * recall / (precision + recall)


def rouge_l(pred: str, ref: str) -> float:
    """ROUGE-L F-measure between two strings (shared tokenization)."""
    return rouge_l_tokens(tokenize(pred), tokenize(ref))


def bleu(preds: Sequence[str], refs: Sequence[str], max_n: int = 4) -> float:
    """Corpus-level BLEU with uniform 1/max_n weights.

    Clipped n-gram matches and counts are pooled over all pairs before
    the precisions are computed. Tokenization is raw whitespace splitting
    with no normalization. The brevity penalty uses total token counts:
    BP = 1 when the candidate corpus is longer than the reference corpus,
    exp(1 - r/c) otherwise. A zero pooled precision is replaced by
    ``BLEU_EPSILON`` inside the log; an empty candidate corpus scores 0.

    Raises:
        ValueError: if preds and refs differ in length or are empty.
    """
    if len(preds) != len(refs):
        raise ValueError(f"length mismatch: {len(preds)} preds vs {len(refs)} refs")
    if not preds:
        raise ValueError("bleu requires at least one (pred, ref) pair")

    pred_token_lists = [p.split() for p in preds]
    ref_token_lists = [r.split() for r in refs]
    c = sum(len(t) for t in pred_token_lists)
    r = sum(len(t) for t in ref_token_lists)
    if c == 0:
        return 0.0

    log_sum = 0.0
    for n in range(1, max_n + 1):
        matched = 0
        total = 0
        for pred_tokens, ref_tokens in zip(pred_token_lists, ref_token_lists):
            overlap, n_pred, _ = ngram_overlap(pred_tokens, ref_tokens, n)
            matched += overlap
            total += n_pred
        p_n = matched / total if total > 0 else 0.0
        log_sum += math.log(p_n if p_n > 0.0 else BLEU_EPSILON) / max_n

    brevity_penalty = 1.0 if c > r else math.exp(1 - r / c)
    return brevity_penalty * math.exp(log_sum)


def score_example(pred: str, golds: Sequence[str]) -> dict[str, float]:
    """Per-example EM, F1, and ROUGE scores (ROUGE against the first gold)."""
    _require_golds(golds)
    first = golds[0]
    return {
        "em": exact_match(pred, golds),
        "f1": token_f1(pred, golds),
        "rouge1": rouge_n(pred, first, 1),
        "rouge2": rouge_n(pred, first, 2),
        "rougeL": rouge_l(pred, first),
    }


def aggregate_corpus(pairs: Sequence[tuple[str, Sequence[str]]]) -> MetricScores:
    """Corpus scores for a list of (prediction, gold answers) pairs.

    EM and F1 are means of per-example values (best over golds); ROUGE
    scores are means of per-example F-measures against the first gold;
    BLEU is computed corpus-level over (prediction, first gold) pairs.
    """
    if not pairs:
        raise ValueError("cannot aggregate an empty corpus")
    rows = [score_example(pred, golds) for pred, golds in pairs]

    def mean(key: str) -> float:
        return sum(row[key] for row in rows) / len(rows)

    return MetricScores(
        exact_match=mean("em"),
        f1=mean("f1"),
        rouge1=mean("rouge1"),
        rouge2=mean("rouge2"),
        rougeL=mean("rougeL"),
        bleu=bleu([pred for pred, _ in pairs], [golds[0] for _, golds in pairs]),
    )
