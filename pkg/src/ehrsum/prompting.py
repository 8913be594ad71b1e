"""Clinician query normalization and model prompt assembly.

A clinician types either a full question ("Summarize why Neurology was
consulted?") or a bare focus topic ("recent medication changes"). This
module turns either form into a question and builds the literal prompt
string the generation model consumes:

    question: {question} context: {EHR text}
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

logger = logging.getLogger(__name__)

QUESTION_PREFIX = "question: "
CONTEXT_SEPARATOR = " context: "

# A topic starting with one of these (case-insensitive) is already a
# question or an instruction and is passed through untouched.
PASSTHROUGH_KEYWORDS = (
    "what",
    "why",
    "how",
    "when",
    "which",
    "who",
    "summarize",
    "give",
    "inform",
    "tell",
)

TOPIC_TEMPLATE = "What are the {topic} for this patient?"


class EmptyTopicError(ValueError):
    """Raised when the clinician topic is blank."""


class EmptyQuestionError(ValueError):
    """Raised when the prompt question is blank."""


class EmptyContextError(ValueError):
    """Raised when the prompt context is blank."""


class NotAPromptError(ValueError):
    """Raised when a string lacks the prompt literals."""


@dataclass(frozen=True)
class ClinicianQuery:
    raw_topic: str
    normalized_question: str


@dataclass(frozen=True)
class ModelInput:
    text: str
    question: str
    context: str


def topic_to_question(raw: str) -> ClinicianQuery:
    """Turn a clinician focus topic into a question.

    Input already phrased as a question (ends with "?") or starting with
    an interrogative/imperative keyword is passed through verbatim after
    trimming; a bare topic is wrapped as "What are the {topic} for this
    patient?".
    """
    topic = raw.strip()
    if not topic:
        raise EmptyTopicError("clinician topic is empty")
    first_word = topic.split()[0].lower().rstrip(",:;")
    if topic.endswith("?") or first_word in PASSTHROUGH_KEYWORDS:
        question = topic
    else:
        question = TOPIC_TEMPLATE.format(topic=topic)
    return ClinicianQuery(raw_topic=raw, normalized_question=question)


def format_model_input(question: str, context: str) -> ModelInput:
    """Assemble the exact prompt string; no normalization is applied."""
    if not question.strip():
        raise EmptyQuestionError("question is empty")
    if not context.strip():
        raise EmptyContextError("context is empty")
    text = QUESTION_PREFIX + question + CONTEXT_SEPARATOR + context
    return ModelInput(text=text, question=question, context=context)


def parse_model_input(text: str) -> tuple[str, str]:
    """Recover (question, context) from a prompt string.

    Splits at the first occurrence of the context separator after the
    question prefix. A question that itself contains the separator is
    therefore truncated at that point; this ambiguity is inherent to the
    prompt format and is logged.
    """
    if not text.startswith(QUESTION_PREFIX):
        raise NotAPromptError("missing question prefix")
    body = text[len(QUESTION_PREFIX):]
    split_at = body.find(CONTEXT_SEPARATOR)
    if split_at < 0:
        raise NotAPromptError("missing context separator")
    question = body[:split_at]
    context = body[split_at + len(CONTEXT_SEPARATOR):]
    if CONTEXT_SEPARATOR in context:
        logger.debug(
            "prompt contains multiple context separators; split at the first"
        )
    return question, context
