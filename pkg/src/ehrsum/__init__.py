"""Clinician-focused EHR question-answer summarization pipeline.

Subpackages cover the full path from annotated clinical sentences to a
gated evaluation report: ``dataset`` (Why-QA tables, SQuAD conversion,
splitting), ``prompting`` (query normalization and prompt assembly),
``metrics`` (EM/F1/ROUGE/BLEU), ``backend`` (HTTP and mock generation
backends), ``evaluator`` (orchestration, threshold gates, reports),
``service`` (the summarize HTTP API), and ``cli``.
"""

from .backend import (
    BackendConfig,
    BackendError,
    BackendKind,
    GenerationRequest,
    GenerationResponse,
    generate,
    health_check,
)
from .dataset import (
    DatasetSplit,
    SquadDataset,
    WhyQARecord,
    clean_records,
    convert_to_squad,
    load_squad,
    parse_whyqa_table,
    repair_offset,
    save_squad,
    split_dataset,
    validate_record,
)
from .evaluator import (
    MetricReport,
    ThresholdGate,
    default_gates,
    load_report,
    run_evaluation,
    write_report,
)
from .metrics import (
    MetricScores,
    aggregate_corpus,
    bleu,
    exact_match,
    lcs_length,
    normalize_text,
    rouge_l,
    rouge_n,
    token_f1,
    tokenize,
)
from .prompting import (
    ClinicianQuery,
    ModelInput,
    format_model_input,
    parse_model_input,
    topic_to_question,
)

__version__ = "0.1.0"
