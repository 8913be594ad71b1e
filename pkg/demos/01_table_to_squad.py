"""
From an annotated Why-QA table to a SQuAD-format dataset
=========================================================

Walks the first stage of the pipeline: parse the bundled six-sentence
annotation table, validate each record, convert to the nested
article/paragraph/QA structure, and save it as JSON.

Run with:  python demos/01_table_to_squad.py
"""

import json
import tempfile
from pathlib import Path

from ehrsum.dataset import (
    clean_records,
    convert_to_squad,
    load_squad,
    qa_count,
    save_squad,
    squad_to_dict,
    validate_record,
)
from ehrsum.fixtures import load_sample_records, sample_table_path

# Parse the bundled table. Each row is one clinical sentence containing a
# causal cue ("because", "due to") annotated with a why-question and the
# justification span that answers it.
print(f"reading {sample_table_path()}")
records = load_sample_records()
print(f"parsed {len(records)} records\n")

first = records[0]
print("first record:")
print(f"  file:     {first.file_name}")
print(f"  cue:      {first.cue.value}")
print(f"  question: {first.derived_question}")
print(f"  answer:   {first.answer!r} at offset {first.answer_begin}")

# Every record must satisfy the character-exact offset invariant: the
# answer reproduces verbatim at its recorded position in the sentence.
span = first.sentence_text[first.answer_begin : first.answer_begin + len(first.answer)]
assert span == first.answer
print(f"  span check: {span!r} == answer\n")

# clean_records repairs fixable offsets and drops anything irreparable;
# the bundled table is already clean.
kept, dropped = clean_records(records)
print(f"validation: {len(kept)} kept, {len(dropped)} dropped")
assert all(validate_record(r) == [] for r in kept)

# Conversion groups records by source document: one article per file,
# one single-QA paragraph per sentence.
dataset = convert_to_squad(kept)
print(f"converted: {len(dataset.data)} articles, {qa_count(dataset)} QA pairs")

# The JSON form is 2-space indented with a stable key order.
out = Path(tempfile.mkdtemp()) / "whyqa_squad.json"
save_squad(dataset, out)
print(f"saved to {out}\n")

print("first article as JSON:")
print(json.dumps(squad_to_dict(dataset)["data"][0], indent=2)[:600], "...")

# Loading re-validates every answer span, so save -> load is a safe
# round trip.
assert load_squad(out) == dataset
print("\nround trip: load(save(dataset)) == dataset")
