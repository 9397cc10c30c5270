"""Program execution against a scene, with whole-script atomicity."""

from __future__ import annotations

from typing import Union

from ..runtime.commands import _apply_into, render_command
from ..runtime.entities import Scene, SceneError
from .checker import Program
from .compiler import compile_script
from .diagnostics import ExecutionOutcome, RuntimeFailure, ScriptSource, Status


def execute(program: Program, scene: Scene) -> ExecutionOutcome:
    """Run a compiled program. The first runtime error aborts the run and
    the outcome carries the *input* scene, untouched."""
    work = scene.clone()
    log: list[str] = []
    for index, cmd in enumerate(program.commands):
        try:
            _apply_into(work, cmd)
        except SceneError as exc:
            failure = RuntimeFailure(statement_index=index, kind=exc.kind, message=str(exc))
            return ExecutionOutcome(status=Status.RUNTIME_FAILED, scene_after=scene,
                                    errors=[failure], log=log)
        log.append(render_command(cmd))
    return ExecutionOutcome(status=Status.SUCCESS, scene_after=work, errors=[], log=log)


def run_script(source: Union[str, ScriptSource], scene: Scene) -> ExecutionOutcome:
    """Compile then execute: every (source, scene) pair lands in exactly
    one of Success / CompileFailed / RuntimeFailed."""
    result = compile_script(source)
    if not result.ok:
        return ExecutionOutcome(status=Status.COMPILE_FAILED, scene_after=scene,
                                errors=list(result.errors), log=[])
    return execute(result.program, scene)
