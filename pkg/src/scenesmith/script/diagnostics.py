"""Error records and outcomes for script compilation and execution."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from ..runtime.entities import Scene


@dataclass(frozen=True)
class CompileError:
    phase: str  # "lex" | "parse" | "check"
    line: int  # 1-based
    column: int  # 1-based
    message: str

    def to_record(self) -> dict:
        return {"phase": self.phase, "line": self.line, "column": self.column, "message": self.message}

    def __str__(self) -> str:
        return f"{self.phase} error at {self.line}:{self.column}: {self.message}"


@dataclass(frozen=True)
class RuntimeFailure:
    statement_index: int  # 0-based index into the unrolled statement list
    kind: str  # EntityNotFound | DuplicateName | CycleError | HandlerError
    message: str

    def to_record(self) -> dict:
        return {"statement_index": self.statement_index, "kind": self.kind, "message": self.message}

    def __str__(self) -> str:
        return f"{self.kind} at statement {self.statement_index}: {self.message}"


class Status(str, enum.Enum):
    SUCCESS = "Success"
    COMPILE_FAILED = "CompileFailed"
    RUNTIME_FAILED = "RuntimeFailed"


@dataclass(frozen=True)
class ScriptSource:
    text: str
    origin: str = "user"  # builder | saved | user
    id: str = ""

    def __post_init__(self) -> None:
        if self.origin == "builder" and not self.text.strip():
            raise ValueError("builder scripts must be non-empty")


@dataclass
class ExecutionOutcome:
    """Classification of one script run. On any failure ``scene_after``
    is the untouched input scene (whole-script atomicity)."""

    status: Status
    scene_after: "Scene"
    errors: list = field(default_factory=list)  # CompileError or RuntimeFailure records
    log: list[str] = field(default_factory=list)  # executed statements, in order

    @property
    def ok(self) -> bool:
        return self.status is Status.SUCCESS

    def error_text(self) -> str:
        return "\n".join(str(e) for e in self.errors)
