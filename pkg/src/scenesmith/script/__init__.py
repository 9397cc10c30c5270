"""Scene script language: lexer, parser, checker, and interpreter."""

from .checker import Program
from .compiler import CompileResult, compile_script
from .diagnostics import CompileError, ExecutionOutcome, RuntimeFailure, ScriptSource, Status
from .executor import execute, run_script

__all__ = [
    "CompileError",
    "CompileResult",
    "ExecutionOutcome",
    "Program",
    "RuntimeFailure",
    "ScriptSource",
    "Status",
    "compile_script",
    "execute",
    "run_script",
]
