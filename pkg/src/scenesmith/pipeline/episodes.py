"""Episodes and the per-module memory protocol.

An episode is one complete exchange for a single instruction: the
instruction, the scene summary it saw, the generated code, and how
execution went. The episode store keeps the full append-only history
(for the event log and the harness) plus a trimmed per-module view that
context assembly reads, so each module remembers exactly what its
memory mode allows.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from ..script.diagnostics import ExecutionOutcome, ScriptSource
from .config import MODULES, MemoryMode


@dataclass(frozen=True)
class Request:
    text: str
    session: str = ""

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise ValueError("request text must be non-empty")


@dataclass(frozen=True)
class Instruction:
    text: str
    index: int  # 1-based position in the plan
    plan_size: int

    def __post_init__(self) -> None:
        if not (1 <= self.index <= self.plan_size):
            raise ValueError("instruction index out of range")


@dataclass
class SceneSummary:
    text: str
    relevant_entities: list[str] = field(default_factory=list)
    truncated: bool = False


@dataclass(frozen=True)
class Attempt:
    index: int
    code: Optional[str]
    verdict: Optional[str]  # "pass" | "fail" | None (no inspection ran)
    suggestion: str = ""
    source: Optional[str] = None  # "static_check" | "model_critique"
    error: Optional[str] = None  # e.g. builder reply had no code block


@dataclass
class Episode:
    instruction: Instruction
    summary: SceneSummary
    code: Optional[ScriptSource]
    outcome: ExecutionOutcome
    attempts: list[Attempt] = field(default_factory=list)
    unverified: bool = False
    started_at: float = field(default_factory=time.time)
    finished_at: float = 0.0
    duration: float = 0.0


class EpisodeStore:
    """Full history plus trimmed per-module context windows."""

    def __init__(self) -> None:
        self.history: list[Episode] = []
        self._views: dict[str, list[Episode]] = {m: [] for m in MODULES}

    def append(self, episode: Episode) -> None:
        self.history.append(episode)
        for view in self._views.values():
            view.append(episode)

    def visible(self, module: str) -> list[Episode]:
        return list(self._views[module])


def trim_memory(module: str, store: EpisodeStore, mode: MemoryMode) -> None:
    """Apply a module's memory mode to its context window: full keeps
    everything, limited(N) the newest N episodes, memoryless none. The
    metaprompt is assembled separately and always survives."""
    view = store._views[module]
    if mode.kind == "memoryless":
        view.clear()
    elif mode.kind == "limited":
        del view[: max(0, len(view) - mode.n)]
