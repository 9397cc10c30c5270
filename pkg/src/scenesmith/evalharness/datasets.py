"""Prompt datasets: one prompt per line; sequences split on ';'."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional


class EmptyDataset(Exception):
    pass


@dataclass
class PromptDataset:
    kind: str  # "single" | "sequential"
    prompts: list  # list[str] for single, list[list[str]] for sequential
    difficulties: Optional[list[float]] = None  # per prompt, when known
    initial_scene: Optional[str] = None  # path to a scene file

    def __post_init__(self) -> None:
        if self.kind not in ("single", "sequential"):
            raise ValueError(f"unknown dataset kind {self.kind!r}")
        if self.kind == "sequential":
            for i, seq in enumerate(self.prompts):
                if not seq:
                    raise ValueError(f"sequence {i} is empty")

    def __len__(self) -> int:
        return len(self.prompts)


def load_dataset(
    path: str | Path,
    kind: Optional[str] = None,
    initial_scene: Optional[str] = None,
) -> PromptDataset:
    """Read a prompt file. Blank lines are skipped. When ``kind`` is not
    given, any ';' in the file marks it sequential."""
    path = Path(path)
    lines = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lines.append((lineno, line))
    if not lines:
        raise EmptyDataset(f"{path} contains no prompts")
    if kind is None:
        kind = "sequential" if any(";" in line for _, line in lines) else "single"
    if kind == "single":
        return PromptDataset(kind="single", prompts=[line for _, line in lines],
                             initial_scene=initial_scene)
    sequences: list[list[str]] = []
    for lineno, line in lines:
        steps = [part.strip() for part in line.split(";")]
        steps = [s for s in steps if s]
        if not steps:
            raise ValueError(f"{path}:{lineno}: sequence has no steps")
        sequences.append(steps)
    return PromptDataset(kind="sequential", prompts=sequences, initial_scene=initial_scene)
