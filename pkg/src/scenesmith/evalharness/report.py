"""Metrics aggregation and report rendering.

The report template also carries the published reference baselines
(labeled "paper-reported, GPT-4 + Unity, not reproducible offline") so
offline results are never mistaken for reproductions of them.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

REPORT_SCHEMA = 1

# Published reference results for the same ablation ladder, measured on a
# GPT-4 + Unity system. They depend on that model and engine and are NOT
# reproducible offline; they ship purely as labeled context for readers.
REFERENCE_BASELINES = {
    "label": "paper-reported, GPT-4 + Unity, not reproducible offline",
    "sequential": {
        "GPT-4": {"error_rate": 0.745, "avg_completion": 0.339, "pct_fulfilled": 0.288},
        "GPT-4, few-shot": {"error_rate": 0.452, "avg_completion": 0.624, "pct_fulfilled": 0.500},
        "GPT-4, few-shot with SA": {"error_rate": 0.374, "avg_completion": 0.691, "pct_fulfilled": 0.575},
        "LLMR": {"error_rate": 0.245, "avg_completion": 0.824, "pct_fulfilled": 0.775},
    },
    "single_empty_scene": {
        "GPT-4 (zero shot)": {"error_mean": 0.660, "error_sd": 0.050, "time_mean": 35.240, "time_sd": 6.334},
        "GPT-4 (few shot)": {"error_mean": 0.451, "error_sd": 0.010, "time_mean": 37.820, "time_sd": 6.389},
        "GPT-4 + SA (few shot)": {"error_mean": 0.379, "error_sd": 0.031, "time_mean": 33.900, "time_sd": 3.744},
        "GPT-4 + SA + SL (few shot)": {"error_mean": 0.416, "error_sd": 0.031, "time_mean": 34.460, "time_sd": 4.690},
        "GPT-4 + SA + I (few shot)": {"error_mean": 0.131, "error_sd": 0.029, "time_mean": 94.760, "time_sd": 17.356},
        "LLMR (few shot)": {"error_mean": 0.141, "error_sd": 0.017, "time_mean": 90.980, "time_sd": 24.875},
    },
    "single_existing_scene": {
        "GPT-4 (zero shot)": {"error_mean": 0.848, "error_sd": 0.024, "time_mean": 20.600, "time_sd": 1.925},
        "GPT-4 (few shot)": {"error_mean": 0.643, "error_sd": 0.027, "time_mean": 21.280, "time_sd": 3.726},
        "GPT-4 + SA (few shot)": {"error_mean": 0.412, "error_sd": 0.015, "time_mean": 20.580, "time_sd": 0.567},
        "GPT-4 + SA + SL (few shot)": {"error_mean": 0.405, "error_sd": 0.011, "time_mean": 21.640, "time_sd": 2.432},
        "GPT-4 + SA + I (few shot)": {"error_mean": 0.215, "error_sd": 0.018, "time_mean": 60.220, "time_sd": 8.602},
        "LLMR (few shot)": {"error_mean": 0.212, "error_sd": 0.019, "time_mean": 49.160, "time_sd": 7.871},
    },
    "mean_times_seconds": {
        "GPT-4": {"single_empty": 35.24, "single_existing": 20.60, "sequential": 77.10},
        "GPT-4, few-shot": {"single_empty": 37.82, "single_existing": 21.28, "sequential": 112.50},
        "GPT-4, few-shot with SA": {"single_empty": 33.90, "single_existing": 20.58, "sequential": 69.40},
        "GPT-4, few-shot with SA, SL": {"single_empty": 34.46, "single_existing": 21.64, "sequential": 74.60},
        "LLMR": {"single_empty": 90.98, "single_existing": 49.16, "sequential": 170.90},
    },
}

DIFFICULTY_BUCKETS = (
    ("Easy", 1, 2),
    ("Somewhat Easy", 3, 4),
    ("Medium", 5, 6),
    ("Somewhat Hard", 7, 8),
    ("Hard", 9, 10),
)


def difficulty_bucket(mean_level: float) -> str:
    level = max(1, min(10, round(mean_level)))
    for name, lo, hi in DIFFICULTY_BUCKETS:
        if lo <= level <= hi:
            return name
    raise AssertionError(level)


@dataclass
class RunRecord:
    prompt: str  # full prompt text (';'-joined for sequences)
    config_name: str
    status: str  # overall: Success / CompileFailed / RuntimeFailed / ProviderFailed
    attempts: int
    duration: float
    step_statuses: list[str] = field(default_factory=list)  # per step, sequential runs
    run_index: int = 0
    difficulty: Optional[float] = None

    def __post_init__(self) -> None:
        if self.duration < 0:
            raise ValueError("duration must be >= 0")


@dataclass
class MetricsReport:
    config_name: str
    config_fingerprint: str
    kind: str  # "single" | "sequential"
    runs: int
    run_count: int  # total prompt executions across runs
    error_rate: Optional[float] = None
    error_rate_sd: float = 0.0
    avg_completion: Optional[float] = None  # sequential only
    pct_fulfilled: Optional[float] = None  # sequential only
    mean_time: Optional[float] = None
    time_sd: float = 0.0
    per_difficulty_error: dict = field(default_factory=dict)
    records: list[RunRecord] = field(default_factory=list)

    def __post_init__(self) -> None:
        for rate in (self.error_rate, self.avg_completion, self.pct_fulfilled):
            if rate is not None and not (0.0 <= rate <= 1.0):
                raise ValueError("rates must lie in [0, 1]")

    def to_dict(self, include_records: bool = True) -> dict:
        doc = {
            "schema": REPORT_SCHEMA,
            "config_name": self.config_name,
            "config_fingerprint": self.config_fingerprint,
            "kind": self.kind,
            "runs": self.runs,
            "run_count": self.run_count,
            "error_rate": self.error_rate,
            "error_rate_sd": self.error_rate_sd,
            "avg_completion": self.avg_completion,
            "pct_fulfilled": self.pct_fulfilled,
            "mean_time": self.mean_time,
            "time_sd": self.time_sd,
            "per_difficulty_error": self.per_difficulty_error,
            "reference_baselines": REFERENCE_BASELINES,
        }
        if include_records:
            doc["records"] = [
                {
                    "prompt": r.prompt,
                    "status": r.status,
                    "attempts": r.attempts,
                    "duration": r.duration,
                    "step_statuses": r.step_statuses,
                    "run_index": r.run_index,
                    "difficulty": r.difficulty,
                }
                for r in self.records
            ]
        return doc


def mean_sd(values: list[float]) -> tuple[float, float]:
    """Arithmetic mean and sample standard deviation (0.0 below n=2)."""
    if not values:
        return 0.0, 0.0
    m = sum(values) / len(values)
    if len(values) < 2:
        return m, 0.0
    var = sum((v - m) ** 2 for v in values) / (len(values) - 1)
    return m, math.sqrt(var)


def emit_report(
    reports: list[MetricsReport], fmt: str = "machine", path: Optional[str | Path] = None
) -> str:
    """Render one or more reports; ``machine`` is stable JSON keyed by
    config fingerprint, ``human`` mirrors the published table layout with
    direction arrows on each metric."""
    if fmt == "machine":
        doc = {
            "schema": REPORT_SCHEMA,
            "reports": {r.config_fingerprint: r.to_dict() for r in
                        sorted(reports, key=lambda r: r.config_name)},
        }
        text = json.dumps(doc, indent=1, sort_keys=True)
    elif fmt == "human":
        text = render_human_table(reports)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def render_human_table(reports: list[MetricsReport]) -> str:
    def cell(value: Optional[float]) -> str:
        return "-" if value is None else f"{value:.3f}"

    rows = [
        (
            r.config_name,
            cell(r.error_rate),
            cell(r.avg_completion),
            cell(r.pct_fulfilled),
            cell(r.mean_time),
            str(r.run_count),
        )
        for r in sorted(reports, key=lambda r: r.config_name)
    ]
    headers = (
        "Model",
        "Error rate (↓)",
        "Avg. prompt completion (↑)",
        "% fulfilled (↑)",
        "Mean time s (↓)",
        "Runs",
    )
    widths = [max(len(h), *(len(row[i]) for row in rows)) if rows else len(h)
              for i, h in enumerate(headers)]
    lines = [
        " | ".join(h.ljust(widths[i]) for i, h in enumerate(headers)),
        "-+-".join("-" * w for w in widths),
    ]
    for row in rows:
        lines.append(" | ".join(row[i].ljust(widths[i]) for i in range(len(headers))))
    lines.append("")
    lines.append(f"Reference baselines ({REFERENCE_BASELINES['label']}):")
    for model, vals in REFERENCE_BASELINES["sequential"].items():
        lines.append(
            f"  {model}: error {vals['error_rate']:.3f}, completion {vals['avg_completion']:.3f}, "
            f"fulfilled {vals['pct_fulfilled']:.3f}"
        )
    return "\n".join(lines) + "\n"
