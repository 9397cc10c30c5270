"""Evaluation harness: datasets, suite runners, difficulty rating, reports."""

from .datasets import EmptyDataset, PromptDataset, load_dataset
from .report import (
    DIFFICULTY_BUCKETS,
    REFERENCE_BASELINES,
    MetricsReport,
    RunRecord,
    difficulty_bucket,
    emit_report,
    mean_sd,
)
from .runner import (
    AllRepliesUnparseable,
    rate_difficulties_batch,
    rate_difficulty,
    run_sequential_suite,
    run_single_suite,
)

__all__ = [
    "AllRepliesUnparseable",
    "DIFFICULTY_BUCKETS",
    "EmptyDataset",
    "MetricsReport",
    "PromptDataset",
    "REFERENCE_BASELINES",
    "RunRecord",
    "difficulty_bucket",
    "emit_report",
    "load_dataset",
    "mean_sd",
    "rate_difficulties_batch",
    "rate_difficulty",
    "run_sequential_suite",
    "run_single_suite",
]
