"""Bundled sample data for demos and tests.

Ships a six-record Why-QA table of discharge-summary sentences plus one
chest x-ray report snippet, so the full pipeline can be exercised
without any external dataset.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .dataset import WhyQARecord, parse_whyqa_table

# One narrative radiology report with a focus query and the summary a
# tuned model is expected to produce for it; used as a fixed-backend demo.
XRAY_REPORT = (
    "Lungs are clear. No pleural effusions or pneumothoraces. Heart and "
    "mediastinum of normal size and contour. Degenerative changes in the spine."
)
XRAY_QUERY = "Give me information about the lungs."
XRAY_SUMMARY = "Lungs are otherwise clear"


def sample_table_path() -> Path:
    """Filesystem path of the bundled Why-QA sample CSV."""
    return Path(resources.files("ehrsum").joinpath("data/whyqa_sample.csv"))


def load_sample_records() -> list[WhyQARecord]:
    """Parse the bundled six-record sample table."""
    with open(sample_table_path(), encoding="utf-8", newline="") as f:
        return parse_whyqa_table(f, fmt="csv")
