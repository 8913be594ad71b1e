"""Model loading and deterministic generation functions.

A generate function is any ``(text, max_new_tokens) -> str`` callable.
:func:`load_seq2seq` builds one around a Hugging Face seq2seq model with
greedy decoding; :func:`echo_model` is a modelless deterministic
stand-in used for self-tests and protocol verification where no weights
are available.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

GenerateFn = Callable[[str, int], str]

DEFAULT_MODEL_ID = "google/flan-t5-base"

QUESTION_PREFIX = "question: "
CONTEXT_SEPARATOR = " context: "


@dataclass
class AdapterConfig:
    model_identifier: str = DEFAULT_MODEL_ID
    max_input_tokens: int = 512
    device: str = "cpu"

    def __post_init__(self) -> None:
        if self.max_input_tokens < 16:
            raise ValueError("max_input_tokens must be >= 16")


def load_seq2seq(config: AdapterConfig) -> GenerateFn:
    """Load a seq2seq model and tokenizer; decode greedily.

    Inputs longer than ``max_input_tokens`` are truncated by the
    tokenizer. Greedy decoding (no sampling, single beam) makes outputs
    reproducible within a process.
    """
    import torch
    from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

    tokenizer = AutoTokenizer.from_pretrained(config.model_identifier)
    model = AutoModelForSeq2SeqLM.from_pretrained(config.model_identifier)
    model.to(config.device)
    model.eval()

    def generate_fn(text: str, max_new_tokens: int) -> str:
        encoded = tokenizer(
            text,
            return_tensors="pt",
            truncation=True,
            max_length=config.max_input_tokens,
        ).to(config.device)
        with torch.no_grad():
            output_ids = model.generate(
                **encoded,
                max_new_tokens=max_new_tokens,
                do_sample=False,
                num_beams=1,
            )
        return tokenizer.decode(output_ids[0], skip_special_tokens=True)

    return generate_fn


def echo_model(config: AdapterConfig) -> GenerateFn:
    """Deterministic stand-in model for tests and --self-test runs.

    Truncates the input to ``max_input_tokens`` whitespace tokens, then
    answers with the question part of a ``question: ... context: ...``
    prompt (or the leading tokens of a free-form input), capped at
    ``max_new_tokens`` tokens.
    """

    def generate_fn(text: str, max_new_tokens: int) -> str:
        truncated = " ".join(text.split()[: config.max_input_tokens])
        answer = truncated
        if truncated.startswith(QUESTION_PREFIX):
            body = truncated[len(QUESTION_PREFIX):]
            split_at = body.find(CONTEXT_SEPARATOR)
            if split_at >= 0:
                answer = body[:split_at]
        return " ".join(answer.split()[:max_new_tokens])

    return generate_fn
