"""Why-QA annotation tables and their SQuAD-format counterpart.

Covers the full data path: parse a delimited Why-QA table, validate and
repair answer offsets, convert to the nested article/paragraph/QA JSON
structure, split deterministically into train/validation/test, and load
or save the JSON files.

Offsets are character-exact: an answer must reproduce byte-for-byte at
``sentence_text[answer_begin : answer_begin + len(answer)]``, and the
same check is enforced on every answer span read from or written to
SQuAD JSON.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import logging
import random
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, TextIO

logger = logging.getLogger(__name__)

DEFAULT_VERSION = "whyqa-squad-1.0"

EXPECTED_COLUMNS = (
    "FileName",
    "SentenceText",
    "WhyQACue",
    "DerivedQuestion",
    "Answer",
    "AnswerBegin",
    "QuestionAnchor",
    "AnswerReasonType",
)

SPLIT_RATIOS = (0.70, 0.15, 0.15)

_NON_LETTER_RE = re.compile(r"[^a-z]")


class WhyQATableError(Exception):
    """Base error for problems in a Why-QA annotation table."""

    def __init__(self, message: str, *, row: int | None = None, column: str | None = None):
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column {column!r}")
        suffix = f" ({', '.join(location)})" if location else ""
        super().__init__(message + suffix)
        self.row = row
        self.column = column


class MissingColumnError(WhyQATableError):
    """Header lacks one or more required columns."""


class BadOffsetError(WhyQATableError):
    """AnswerBegin cell is not a non-negative integer."""


class EmptyFieldError(WhyQATableError):
    """A required cell is blank."""


class BadEnumError(WhyQATableError):
    """A categorical cell holds an unrecognized value."""


class SquadSchemaError(Exception):
    """A SQuAD JSON document violates the schema; carries the JSON path."""

    def __init__(self, message: str, json_path: str):
        super().__init__(f"{message} (at {json_path})")
        self.json_path = json_path


class TooFewGroupsError(ValueError):
    """Splitting needs at least three distinct document groups."""


class AnswerNotFoundError(ValueError):
    """The answer string does not occur anywhere in its sentence."""


class WhyQACue(str, Enum):
    BECAUSE = "because"
    DUE_TO = "due to"


class QuestionAnchor(str, Enum):
    MEDICATION = "medication"
    AVOIDANCE = "avoidance"
    PROCEDURE = "procedure"
    DISPOSITION = "disposition"


class AnswerReasonType(str, Enum):
    ADVERSE_EFFECT = "adverse effect"
    CLINICAL_INDICATION = "clinical indication"


def _enum_key(value: str) -> str:
    return _NON_LETTER_RE.sub("", value.lower())


def _parse_enum(cls, value: str, *, row: int, column: str):
    by_key = {_enum_key(member.value): member for member in cls}
    member = by_key.get(_enum_key(value))
    if member is None:
        expected = ", ".join(m.value for m in cls)
        raise BadEnumError(
            f"unrecognized value {value!r}; expected one of: {expected}",
            row=row,
            column=column,
        )
    return member


@dataclass(frozen=True)
class WhyQARecord:
    """One annotated clinical sentence with its derived question and answer."""

    file_name: str
    sentence_text: str
    cue: WhyQACue
    derived_question: str
    answer: str
    answer_begin: int
    question_anchor: QuestionAnchor
    answer_reason_type: AnswerReasonType


@dataclass
class SquadAnswer:
    text: str
    answer_start: int


@dataclass
class SquadQA:
    id: str
    question: str
    answers: list[SquadAnswer]
    is_impossible: bool = False


@dataclass
class SquadParagraph:
    context: str
    qas: list[SquadQA]


@dataclass
class SquadArticle:
    title: str
    paragraphs: list[SquadParagraph]


@dataclass
class SquadDataset:
    version: str
    data: list[SquadArticle]


@dataclass
class DatasetSplit:
    train: SquadDataset
    validation: SquadDataset
    test: SquadDataset
    seed: int
    ratios: tuple[float, float, float] = SPLIT_RATIOS


def parse_whyqa_table(source: TextIO | Iterable[str], fmt: str = "csv") -> list[WhyQARecord]:
    """Parse a Why-QA annotation table from CSV or TSV text.

    The stream must start with a header row naming all eight required
    columns (see ``EXPECTED_COLUMNS``). Categorical cells are matched
    case-insensitively, ignoring spaces and punctuation. Row numbers in
    errors count the header as row 1.

    Raises:
        MissingColumnError: header lacks a required column.
        EmptyFieldError: a required cell is blank.
        BadOffsetError: AnswerBegin is not a non-negative integer.
        BadEnumError: a categorical cell has an unknown value.
    """
    if fmt.lower() not in ("csv", "tsv"):
        raise ValueError(f"fmt must be 'csv' or 'tsv', got {fmt!r}")
    delimiter = "\t" if fmt.lower() == "tsv" else ","
    reader = csv.DictReader(source, delimiter=delimiter)
    header = reader.fieldnames
    if header is None:
        raise MissingColumnError(
            f"input has no header row; expected columns {', '.join(EXPECTED_COLUMNS)}"
        )
    missing = [c for c in EXPECTED_COLUMNS if c not in header]
    if missing:
        raise MissingColumnError(
            f"header is missing required column(s): {', '.join(missing)}",
            row=1,
            column=missing[0],
        )

    records = []
    for index, row in enumerate(reader):
        records.append(_parse_row(row, row_number=index + 2))
    return records


def _parse_row(row: dict[str, str | None], row_number: int) -> WhyQARecord:
    cells: dict[str, str] = {}
    for column in EXPECTED_COLUMNS:
        value = row.get(column)
        if value is None or not value.strip():
            raise EmptyFieldError("required cell is blank", row=row_number, column=column)
        cells[column] = value

    raw_begin = cells["AnswerBegin"].strip()
    try:
        answer_begin = int(raw_begin)
    except ValueError:
        raise BadOffsetError(
            f"AnswerBegin must be an integer, got {raw_begin!r}",
            row=row_number,
            column="AnswerBegin",
        ) from None
    if answer_begin < 0:
        raise BadOffsetError(
            f"AnswerBegin must be non-negative, got {answer_begin}",
            row=row_number,
            column="AnswerBegin",
        )

    return WhyQARecord(
        file_name=cells["FileName"],
        sentence_text=cells["SentenceText"],
        cue=_parse_enum(WhyQACue, cells["WhyQACue"], row=row_number, column="WhyQACue"),
        derived_question=cells["DerivedQuestion"],
        answer=cells["Answer"],
        answer_begin=answer_begin,
        question_anchor=_parse_enum(
            QuestionAnchor, cells["QuestionAnchor"], row=row_number, column="QuestionAnchor"
        ),
        answer_reason_type=_parse_enum(
            AnswerReasonType,
            cells["AnswerReasonType"],
            row=row_number,
            column="AnswerReasonType",
        ),
    )


def validate_record(r: WhyQARecord) -> list[str]:
    """Return every violated record invariant; an empty list means ok."""
    violations = []
    end = r.answer_begin + len(r.answer)
    if r.answer_begin < 0 or end > len(r.sentence_text) or (
        r.sentence_text[r.answer_begin:end] != r.answer
    ):
        violations.append("offset mismatch")
    if not r.derived_question.strip():
        violations.append("empty question")
    if not r.answer.strip():
        violations.append("empty answer")
    if r.cue.value not in r.sentence_text.lower():
        violations.append("cue not found")
    return violations


def repair_offset(r: WhyQARecord) -> WhyQARecord:
    """Reset answer_begin to the first occurrence of the answer.

    Raises:
        AnswerNotFoundError: the answer is not a substring of the sentence,
            so the record cannot be repaired and should be dropped.
    """
    index = r.sentence_text.find(r.answer)
    if index < 0:
        raise AnswerNotFoundError(
            f"answer {r.answer!r} does not occur in sentence (file {r.file_name!r})"
        )
    return dataclasses.replace(r, answer_begin=index)


def clean_records(
    records: Iterable[WhyQARecord],
) -> tuple[list[WhyQARecord], list[tuple[WhyQARecord, str]]]:
    """Validate records, repairing offsets where possible.

    Records with a repairable offset mismatch are fixed in place; records
    that still violate an invariant afterwards are dropped with a logged
    warning. Returns (kept, dropped-with-reason).
    """
    kept: list[WhyQARecord] = []
    dropped: list[tuple[WhyQARecord, str]] = []
    for record in records:
        violations = validate_record(record)
        if "offset mismatch" in violations:
            try:
                record = repair_offset(record)
            except AnswerNotFoundError:
                pass
            violations = validate_record(record)
        if violations:
            reason = "; ".join(violations)
            logger.warning(
                "dropping record (file %r, question %r): %s",
                record.file_name,
                record.derived_question,
                reason,
            )
            dropped.append((record, reason))
        else:
            kept.append(record)
    return kept, dropped


def convert_to_squad(records: Iterable[WhyQARecord], version: str = DEFAULT_VERSION) -> SquadDataset:
    """Convert validated records to the nested SQuAD structure.

    Records are grouped by file_name in first-appearance order, one
    article per file and one single-QA paragraph per record. QA ids are
    ``{file_name}-{index}`` with a zero-based index within the file.
    """
    groups: dict[str, list[WhyQARecord]] = {}
    for record in records:
        violations = validate_record(record)
        if violations:
            raise ValueError(
                f"record (file {record.file_name!r}) fails validation: "
                + "; ".join(violations)
            )
        groups.setdefault(record.file_name, []).append(record)

    seen_ids: set[str] = set()
    articles = []
    for file_name, group in groups.items():
        paragraphs = []
        for index, record in enumerate(group):
            qa_id = f"{file_name}-{index}"
            assert qa_id not in seen_ids, f"duplicate qa id {qa_id!r}"
            seen_ids.add(qa_id)
            paragraphs.append(
                SquadParagraph(
                    context=record.sentence_text,
                    qas=[
                        SquadQA(
                            id=qa_id,
                            question=record.derived_question,
                            answers=[
                                SquadAnswer(text=record.answer, answer_start=record.answer_begin)
                            ],
                            is_impossible=False,
                        )
                    ],
                )
            )
        articles.append(SquadArticle(title=file_name, paragraphs=paragraphs))
    return SquadDataset(version=version, data=articles)


def iter_qas(d: SquadDataset) -> Iterator[tuple[SquadArticle, SquadParagraph, SquadQA]]:
    """Yield (article, paragraph, qa) triples in document order."""
    for article in d.data:
        for paragraph in article.paragraphs:
            for qa in paragraph.qas:
                yield article, paragraph, qa


def qa_count(d: SquadDataset) -> int:
    return sum(1 for _ in iter_qas(d))


def split_dataset(d: SquadDataset, seed: int) -> DatasetSplit:
    """Deterministic grouped 70/15/15 split.

    Articles (file_name groups) are shuffled with a Mersenne Twister
    seeded by ``seed`` and assigned greedily: to train until the train QA
    count reaches round(0.70 * N), then to validation until it reaches
    round(0.15 * N), remainder to test. Groups never straddle parts, so
    a part may overshoot its target by at most one group.

    Raises:
        TooFewGroupsError: fewer than three articles.
    """
    if len(d.data) < 3:
        raise TooFewGroupsError(
            f"need at least 3 file_name groups to split, got {len(d.data)}"
        )
    total = qa_count(d)
    train_target = round(SPLIT_RATIOS[0] * total)
    validation_target = round(SPLIT_RATIOS[1] * total)

    order = list(d.data)
    random.Random(seed).shuffle(order)

    parts: dict[str, list[SquadArticle]] = {"train": [], "validation": [], "test": []}
    counts = {"train": 0, "validation": 0, "test": 0}
    for article in order:
        size = sum(len(p.qas) for p in article.paragraphs)
        if counts["train"] < train_target:
            part = "train"
        elif counts["validation"] < validation_target:
            part = "validation"
        else:
            part = "test"
        parts[part].append(article)
        counts[part] += size

    return DatasetSplit(
        train=SquadDataset(version=d.version, data=parts["train"]),
        validation=SquadDataset(version=d.version, data=parts["validation"]),
        test=SquadDataset(version=d.version, data=parts["test"]),
        seed=seed,
    )


def squad_to_dict(d: SquadDataset) -> dict:
    """Plain-dict form of a dataset with stable key order."""
    return {
        "version": d.version,
        "data": [
            {
                "title": article.title,
                "paragraphs": [
                    {
                        "context": paragraph.context,
                        "qas": [
                            {
                                "id": qa.id,
                                "question": qa.question,
                                "answers": [
                                    {"text": a.text, "answer_start": a.answer_start}
                                    for a in qa.answers
                                ],
                                "is_impossible": qa.is_impossible,
                            }
                            for qa in paragraph.qas
                        ],
                    }
                    for paragraph in article.paragraphs
                ],
            }
            for article in d.data
        ],
    }


def _expect(condition: bool, message: str, path: str) -> None:
    if not condition:
        raise SquadSchemaError(message, path)


def squad_from_dict(obj) -> SquadDataset:
    """Build a dataset from a plain dict, validating the full schema.

    Every answer span is re-checked character-exactly against its context
    and QA ids must be unique across the dataset. ``is_impossible``
    defaults to false when absent, for compatibility with v1-style files.
    """
    _expect(isinstance(obj, dict), "document must be a JSON object", "$")
    _expect("version" in obj, "missing 'version' key", "$")
    _expect("data" in obj, "missing 'data' key", "$")
    _expect(isinstance(obj["version"], str), "'version' must be a string", "$.version")
    _expect(isinstance(obj["data"], list), "'data' must be a list", "$.data")

    seen_ids: set[str] = set()
    articles = []
    for i, raw_article in enumerate(obj["data"]):
        apath = f"$.data[{i}]"
        _expect(isinstance(raw_article, dict), "article must be an object", apath)
        _expect(isinstance(raw_article.get("title"), str), "'title' must be a string", f"{apath}.title")
        _expect(
            isinstance(raw_article.get("paragraphs"), list),
            "'paragraphs' must be a list",
            f"{apath}.paragraphs",
        )
        paragraphs = []
        for j, raw_paragraph in enumerate(raw_article["paragraphs"]):
            ppath = f"{apath}.paragraphs[{j}]"
            _expect(isinstance(raw_paragraph, dict), "paragraph must be an object", ppath)
            context = raw_paragraph.get("context")
            _expect(isinstance(context, str), "'context' must be a string", f"{ppath}.context")
            _expect(isinstance(raw_paragraph.get("qas"), list), "'qas' must be a list", f"{ppath}.qas")
            qas = []
            for k, raw_qa in enumerate(raw_paragraph["qas"]):
                qpath = f"{ppath}.qas[{k}]"
                _expect(isinstance(raw_qa, dict), "qa must be an object", qpath)
                qa_id = raw_qa.get("id")
                _expect(isinstance(qa_id, str), "'id' must be a string", f"{qpath}.id")
                _expect(
                    qa_id not in seen_ids,
                    f"duplicate qa id {qa_id!r}",
                    f"{qpath}.id",
                )
                seen_ids.add(qa_id)
                _expect(
                    isinstance(raw_qa.get("question"), str),
                    "'question' must be a string",
                    f"{qpath}.question",
                )
                _expect(
                    isinstance(raw_qa.get("answers"), list),
                    "'answers' must be a list",
                    f"{qpath}.answers",
                )
                is_impossible = raw_qa.get("is_impossible", False)
                _expect(
                    isinstance(is_impossible, bool),
                    "'is_impossible' must be a boolean",
                    f"{qpath}.is_impossible",
                )
                answers = []
                for m, raw_answer in enumerate(raw_qa["answers"]):
                    answer_path = f"{qpath}.answers[{m}]"
                    _expect(isinstance(raw_answer, dict), "answer must be an object", answer_path)
                    text = raw_answer.get("text")
                    start = raw_answer.get("answer_start")
                    _expect(isinstance(text, str), "'text' must be a string", f"{answer_path}.text")
                    _expect(
                        isinstance(start, int) and not isinstance(start, bool) and start >= 0,
                        "'answer_start' must be a non-negative integer",
                        f"{answer_path}.answer_start",
                    )
                    _expect(
                        start + len(text) <= len(context)
                        and context[start : start + len(text)] == text,
                        f"answer span does not match context (qa id {qa_id!r})",
                        f"{answer_path}.answer_start",
                    )
                    answers.append(SquadAnswer(text=text, answer_start=start))
                qas.append(
                    SquadQA(id=qa_id, question=raw_qa["question"], answers=answers, is_impossible=is_impossible)
                )
            paragraphs.append(SquadParagraph(context=context, qas=qas))
        articles.append(SquadArticle(title=raw_article["title"], paragraphs=paragraphs))
    return SquadDataset(version=obj["version"], data=articles)


def save_squad(d: SquadDataset, path: str | Path) -> None:
    """Write a dataset as 2-space-indented UTF-8 JSON with stable key order."""
    with open(path, "w", encoding="utf-8") as f:
        json.dump(squad_to_dict(d), f, indent=2, ensure_ascii=False)
        f.write("\n")


def load_squad(path: str | Path) -> SquadDataset:
    """Read and validate a SQuAD JSON file.

    Raises:
        SquadSchemaError: the document violates the schema; the error
            carries the JSON path of the offending node.
    """
    with open(path, encoding="utf-8") as f:
        try:
            obj = json.load(f)
        except json.JSONDecodeError as exc:
            raise SquadSchemaError(f"not valid JSON: {exc}", "$") from exc
    return squad_from_dict(obj)
