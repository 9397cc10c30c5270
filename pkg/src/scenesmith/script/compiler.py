"""compile: text in, checked and unrolled program (or diagnostics) out."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .checker import Program, check
from .diagnostics import CompileError, ScriptSource
from .parser import parse


@dataclass
class CompileResult:
    program: Optional[Program]
    errors: list[CompileError] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.program is not None

    def diagnostics_records(self) -> list[dict]:
        return [e.to_record() for e in self.errors]


def compile_script(source: Union[str, ScriptSource]) -> CompileResult:
    """Compile script text into a flat command program.

    Reports every lex, parse, and check problem together rather than
    stopping at the first. Total: never raises on any input text.
    """
    if isinstance(source, ScriptSource):
        text, source_id = source.text, source.id
    else:
        text, source_id = source, ""
    nodes, errors = parse(text)
    program, check_errors = check(nodes, source_id)
    all_errors = sorted(errors + check_errors, key=lambda e: (e.line, e.column))
    if all_errors:
        return CompileResult(program=None, errors=all_errors)
    return CompileResult(program=program, errors=[])
