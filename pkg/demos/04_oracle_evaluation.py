"""
End-to-end evaluation with mock backends and threshold gates
=============================================================

Evaluates the bundled dataset twice: once with the oracle backend
(which answers every prompt with the gold answer, so every metric must
be exactly 1.0) and once with a fixed backend that always returns the
same string. Corpus scores are then classified by the default threshold
gates into Good / Acceptable / Fail.

Run with:  python demos/04_oracle_evaluation.py
"""

from ehrsum.backend import BackendConfig, BackendKind
from ehrsum.dataset import convert_to_squad
from ehrsum.evaluator import default_gates, format_report_table, run_evaluation
from ehrsum.fixtures import load_sample_records

dataset = convert_to_squad(load_sample_records())

# The oracle backend parses each prompt back into (question, context)
# and looks up the gold answer, so the pipeline's prompt formatting,
# dispatch, and scoring are all exercised with a known-perfect result.
print("=== oracle backend (gold answers) ===")
report = run_evaluation(dataset, BackendConfig(kind=BackendKind.ORACLE), default_gates())
print(format_report_table(report))
assert all(v == 1.0 for v in report.scores.as_dict().values())

print("per-example rows:")
for row in report.per_example[:3]:
    print(f"  {row.qa_id}: em={row.em} f1={row.f1} pred={row.pred[:40]!r}...")
print()

# A fixed backend ignores the prompt entirely; scores collapse and the
# gates flag the failure.
print("=== fixed backend (always the same string) ===")
fixed = BackendConfig(kind=BackendKind.FIXED, fixed_output="no acute findings")
report = run_evaluation(dataset, fixed, default_gates())
print(format_report_table(report))

print("gate thresholds (Good above / minimum):")
for gate in default_gates():
    print(f"  {gate.metric:<12} {gate.good_above:.2f} / {gate.minimum:.2f}")
