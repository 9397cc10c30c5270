"""The request pipeline: analyze, plan, pick skills, build, inspect, run.

One Pipeline instance owns a session's episode store and skill registry
and drives every stage against a single chat provider. Each stage gets
its own metaprompt and its own memory mode; the builder additionally
sees its trimmed episode window as prior (instruction, code) turns.
"""

from __future__ import annotations

import json
import logging
import re
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from ..providers.base import (
    ChatContext,
    ChatProvider,
    CompletionParams,
    ContextOverflow,
    Message,
    ProviderError,
    estimate_tokens,
)
from ..runtime.entities import Scene
from ..script.compiler import compile_script
from ..script.diagnostics import CompileError, ExecutionOutcome, ScriptSource, Status
from ..script.executor import execute
from ..runtime.serialize import scene_hash, serialize_hierarchy
from .config import PipelineConfig
from .episodes import Attempt, Episode, EpisodeStore, Instruction, Request, SceneSummary, trim_memory
from .skills import SkillRegistry, load_default_registry

log = logging.getLogger("scenesmith.pipeline")

EventSink = Callable[[str, dict], None]

_FENCE_RE = re.compile(r"```[^\n`]*\n(.*?)```", re.DOTALL)
_STEP_RE = re.compile(r"^\s*\d+[.)]\s*(.+?)\s*$")

NO_CODE_SUGGESTION = (
    "Your previous reply contained no code. Reply with exactly one fenced "
    "code block (``` ... ```) holding the scene script."
)


class NoCodeBlock(Exception):
    """Builder reply carried no extractable fenced code block."""


@dataclass(frozen=True)
class ClarifyingQuestion:
    question: str
    conversation: tuple = ()  # planner exchange so far, as Message pairs


@dataclass(frozen=True)
class Verdict:
    verdict: str  # "pass" | "fail"
    suggestion: str
    source: str  # "static_check" | "model_critique"

    def __post_init__(self) -> None:
        if self.verdict == "fail" and not self.suggestion:
            raise ValueError("a fail verdict must carry a suggestion")


@dataclass
class GenerationResult:
    code: Optional[ScriptSource]
    attempts: list[Attempt]
    unverified: bool  # inspector enabled, every verdict failed


@dataclass
class RunResult:
    final_scene: Scene
    episodes: list[Episode]
    plan: list[str]
    warnings: list[str] = field(default_factory=list)


class Pipeline:
    def __init__(
        self,
        provider: ChatProvider,
        config: Optional[PipelineConfig] = None,
        registry: Optional[SkillRegistry] = None,
        store: Optional[EpisodeStore] = None,
        on_event: Optional[EventSink] = None,
        session: str = "local",
    ):
        self.provider = provider
        self.config = config or PipelineConfig()
        self.registry = registry if registry is not None else load_default_registry()
        self.store = store or EpisodeStore()
        self.on_event = on_event
        self.session = session
        self.provider.window = self.config.window
        self.warnings: list[str] = []

    # -- plumbing --

    def emit(self, stage: str, payload: dict) -> None:
        if self.on_event is not None:
            self.on_event(stage, payload)

    def warn(self, message: str) -> None:
        log.warning("%s", message)
        self.warnings.append(message)

    def params(self) -> CompletionParams:
        return CompletionParams(
            model_id=self.config.model_id,
            temperature=self.config.temperature,
            max_output_tokens=self.config.max_output_tokens,
        )

    def _complete(self, messages: list[Message]) -> str:
        return self.provider.complete(ChatContext(messages), self.params())

    # -- scene analysis --

    def analyze_scene(self, u: Union[str, Request, Instruction], scene: Scene) -> SceneSummary:
        """Summarize the scene relative to the request. Oversized
        hierarchies collapse to top-level entity names."""
        text = u if isinstance(u, str) else u.text
        hierarchy = serialize_hierarchy(scene)
        truncated = False
        if estimate_tokens(hierarchy) > self.config.hierarchy_token_budget:
            top_level = [scene.entities[eid].name for eid in scene.roots]
            hierarchy = json.dumps({"top_level_entities": top_level})
            truncated = True
            if estimate_tokens(hierarchy) > self.config.hierarchy_token_budget:
                raise ContextOverflow(
                    "even the top-level entity listing exceeds the hierarchy token budget"
                )
        reply = self._complete(
            [
                Message("system", self.config.metaprompt("scene_analyzer")),
                Message(
                    "user",
                    f"Scene hierarchy:\n{hierarchy}\n\nRequest: {text}",
                ),
            ]
        )
        summary = self._parse_summary(reply, scene, truncated)
        self.emit(
            "analysis",
            {
                "instruction": text,
                "summary": summary.text,
                "relevant_entities": summary.relevant_entities,
                "truncated": truncated,
            },
        )
        return summary

    def _parse_summary(self, reply: str, scene: Scene, truncated: bool) -> SceneSummary:
        lines = reply.splitlines()
        relevant: Optional[list[str]] = None
        kept: list[str] = []
        for line in lines:
            stripped = line.strip()
            if stripped.upper().startswith("RELEVANT:"):
                names = stripped[len("RELEVANT:"):].strip()
                if names.lower() in ("none", "-", ""):
                    relevant = []
                else:
                    relevant = [n.strip() for n in names.split(",") if n.strip()]
            else:
                kept.append(line)
        if relevant is None:
            self.warn("scene analyzer reply had no RELEVANT line; using raw text")
            return SceneSummary(text=reply.strip(), relevant_entities=[], truncated=truncated)
        existing = [n for n in relevant if scene.has(n)]
        for name in relevant:
            if name not in existing:
                self.warn(f"scene analyzer listed unknown entity {name!r}; dropped")
        return SceneSummary(text="\n".join(kept).strip(), relevant_entities=existing, truncated=truncated)

    # -- planning --

    def plan(
        self, u: Union[str, Request], s: SceneSummary, conversation: tuple = ()
    ) -> Union[list[str], ClarifyingQuestion]:
        """Decompose a request into steps, or come back with a question."""
        text = u if isinstance(u, str) else u.text
        messages = [
            Message("system", self.config.metaprompt("planner")),
            Message("user", f"Scene summary:\n{s.text or '(empty scene)'}\n\nRequest: {text}"),
            *conversation,
        ]
        reply = self._complete(messages)
        stripped = reply.strip()
        if stripped.upper().startswith("QUESTION:"):
            question = stripped[len("QUESTION:"):].strip()
            return ClarifyingQuestion(
                question=question,
                conversation=(*conversation, Message("assistant", reply)),
            )
        steps = [m.group(1) for m in map(_STEP_RE.match, stripped.splitlines()) if m]
        if not steps:
            self.warn("planner reply was neither a numbered list nor a question; "
                      "running the raw request as a single step")
            return [text]
        return steps

    # -- skill retrieval --

    def retrieve_skills(self, u: Union[str, Instruction]) -> tuple[list[str], str]:
        """Show the model only the one-line summaries; expand the chosen
        ids to their full usage details."""
        text = u if isinstance(u, str) else u.text
        system = (
            self.config.metaprompt("skill_library")
            + "\n\nAvailable skills:\n"
            + (self.registry.summary_lines() or "(none)")
        )
        reply = self._complete([Message("system", system), Message("user", text)])
        selected: list[str] = []
        for token in re.split(r"[,\s]+", reply.strip()):
            token = token.strip().strip(".").lower()
            if not token or token == "none":
                continue
            if token in self.registry:
                if token not in selected:
                    selected.append(token)
            else:
                self.warn(f"skill library returned unknown id {token!r}; dropped")
        hint = self.registry.expand(selected)
        self.emit("skills", {"selected": selected, "hint_tokens": estimate_tokens(hint) if hint else 0})
        return selected, hint

    # -- building --

    def build(
        self,
        u: Union[str, Instruction],
        s: SceneSummary,
        h: str = "",
        r: Optional[str] = None,
        attempt: int = 0,
    ) -> ScriptSource:
        """One builder call: metaprompt, remembered episodes, then the
        summary / skill hint / instruction / reviewer suggestion."""
        text = u if isinstance(u, str) else u.text
        messages = [Message("system", self.config.metaprompt("builder"))]
        for episode in self.store.visible("builder"):
            if episode.code is None:
                continue
            messages.append(Message("user", episode.instruction.text))
            messages.append(Message("assistant", episode.code.text))
        sections = [f"Scene summary:\n{s.text or '(empty scene)'}"]
        if h:
            sections.append(f"Skill hints:\n{h}")
        sections.append(f"Instruction:\n{text}")
        if r:
            sections.append(f"Reviewer suggestion:\n{r}")
        messages.append(Message("user", "\n\n".join(sections)))
        reply = self._complete(messages)
        match = _FENCE_RE.search(reply)
        if match is None:
            raise NoCodeBlock("builder reply contained no fenced code block")
        code = match.group(1).strip("\n")
        if not code.strip():
            raise NoCodeBlock("builder reply contained an empty code block")
        return ScriptSource(text=code, origin="builder", id=f"{self.session}-a{attempt}")

    # -- inspection --

    def inspect(
        self, u: Union[str, Instruction], s: SceneSummary, x: ScriptSource, scene: Scene
    ) -> Verdict:
        """Ground truth first: compile diagnostics, then a dry-run of the
        compiled program against the scene (the name/structure check).
        Only clean scripts reach the model critique."""
        text = u if isinstance(u, str) else u.text
        result = compile_script(x)
        if not result.ok:
            return Verdict("fail", "\n".join(str(e) for e in result.errors), "static_check")
        dry = execute(result.program, scene)
        if not dry.ok:
            failure = dry.errors[0]
            return Verdict(
                "fail",
                f"{failure} -- check the entity names this script relies on against the scene",
                "static_check",
            )
        try:
            reply = self._complete(
                [
                    Message("system", self.config.metaprompt("inspector")),
                    Message(
                        "user",
                        f"Scene summary:\n{s.text or '(empty scene)'}\n\n"
                        f"Instruction:\n{text}\n\nScript:\n```\n{x.text}\n```",
                    ),
                ]
            )
        except ProviderError as exc:
            self.warn(f"inspector critique unavailable ({exc}); static checks passed")
            return Verdict("pass", "", "static_check")
        first, _, rest = reply.strip().partition("\n")
        word = first.strip().upper()
        if word.startswith("PASS"):
            return Verdict("pass", "", "model_critique")
        if word.startswith("FAIL"):
            suggestion = rest.strip() or "(no specific suggestion given)"
            return Verdict("fail", suggestion, "model_critique")
        self.warn("inspector reply had no PASS/FAIL header; treating as pass")
        return Verdict("pass", "", "static_check")

    # -- the build-inspect loop --

    def generate_code_with_inspection(
        self, u: Union[str, Instruction], s: SceneSummary, h: str = "", scene: Optional[Scene] = None
    ) -> GenerationResult:
        """Up to T rounds of build + inspect; the first passing script (or
        the last attempt, flagged unverified) wins."""
        scene = scene if scene is not None else Scene()
        attempts: list[Attempt] = []
        code: Optional[ScriptSource] = None
        suggestion: Optional[str] = None
        verdict_pass = False
        t = 0
        if not self.config.enable_inspector:
            try:
                code = self.build(u, s, h, None, attempt=0)
                attempts.append(Attempt(0, code.text, None))
                self.emit("build_attempt", {"attempt": 0, "code": code.text})
            except NoCodeBlock as exc:
                attempts.append(Attempt(0, None, None, error=str(exc)))
                self.emit("build_attempt", {"attempt": 0, "code": None, "error": str(exc)})
            return GenerationResult(code=code, attempts=attempts, unverified=False)
        while t < self.config.max_inspections and not verdict_pass:
            try:
                candidate = self.build(u, s, h, suggestion, attempt=t)
            except NoCodeBlock as exc:
                attempts.append(Attempt(t, None, "fail", NO_CODE_SUGGESTION, "static_check", str(exc)))
                self.emit("build_attempt", {"attempt": t, "code": None, "error": str(exc)})
                suggestion = NO_CODE_SUGGESTION
                t += 1
                continue
            self.emit("build_attempt", {"attempt": t, "code": candidate.text})
            code = candidate
            verdict = self.inspect(u, s, candidate, scene)
            verdict_pass = verdict.verdict == "pass"
            suggestion = verdict.suggestion or None
            attempts.append(Attempt(t, candidate.text, verdict.verdict, verdict.suggestion, verdict.source))
            self.emit(
                "inspect_verdict",
                {
                    "attempt": t,
                    "verdict": verdict.verdict,
                    "source": verdict.source,
                    "suggestion": verdict.suggestion,
                },
            )
            t += 1
        return GenerationResult(code=code, attempts=attempts, unverified=not verdict_pass)

    # -- the full request loop --

    def run_request(
        self,
        u: Union[str, Request],
        scene: Scene,
        ask_user: Optional[Callable[[str], Optional[str]]] = None,
    ) -> RunResult:
        """Analyze, plan, then for each step: analyze, pick skills, build
        with inspection, execute. Failed steps record their outcome and
        (unless halt_on_failure) later steps continue against the last
        good scene."""
        request = u if isinstance(u, Request) else Request(text=u, session=self.session)
        self.warnings = []
        steps = [request.text]
        if self.config.enable_planner:
            overview = (
                self.analyze_scene(request, scene)
                if self.config.enable_scene_analyzer
                else SceneSummary(text="")
            )
            steps = self._plan_with_clarification(request, overview, ask_user)
        self.emit("plan", {"steps": steps})
        episodes: list[Episode] = []
        current = scene
        for i, step_text in enumerate(steps, start=1):
            instruction = Instruction(text=step_text, index=i, plan_size=len(steps))
            started = time.time()
            summary = (
                self.analyze_scene(instruction, current)
                if self.config.enable_scene_analyzer
                else SceneSummary(text="")
            )
            _, hint = (
                self.retrieve_skills(instruction)
                if self.config.enable_skill_library
                else ([], "")
            )
            generation = self.generate_code_with_inspection(instruction, summary, hint, current)
            outcome = self._execute_generation(generation, current)
            finished = time.time()
            episode = Episode(
                instruction=instruction,
                summary=summary,
                code=generation.code,
                outcome=outcome,
                attempts=generation.attempts,
                unverified=generation.unverified,
                started_at=started,
                finished_at=finished,
                duration=finished - started,
            )
            episodes.append(episode)
            self.store.append(episode)
            for module, mode in self.config.memory_modes.items():
                trim_memory(module, self.store, mode)
            if outcome.ok:
                current = outcome.scene_after
            self.emit(
                "execute",
                {
                    "step": i,
                    "status": outcome.status.value,
                    "errors": [str(e) for e in outcome.errors],
                    "scene_hash": scene_hash(current),
                },
            )
            halting = not outcome.ok and self.config.halt_on_failure
            self.emit(
                "episode_closed",
                {
                    "step": i,
                    "instruction": step_text,
                    "status": outcome.status.value,
                    "attempts": len(generation.attempts),
                    "unverified": generation.unverified,
                    "duration": episode.duration,
                    "final": i == len(steps) or halting,
                },
            )
            if halting:
                self.warn(f"halting after failed step {i}")
                break
        return RunResult(final_scene=current, episodes=episodes, plan=steps, warnings=self.warnings)

    def _plan_with_clarification(
        self,
        request: Request,
        overview: SceneSummary,
        ask_user: Optional[Callable[[str], Optional[str]]],
        max_rounds: int = 3,
    ) -> list[str]:
        conversation: tuple = ()
        for _ in range(max_rounds):
            result = self.plan(request, overview, conversation)
            if isinstance(result, list):
                return result
            self.emit("clarify", {"question": result.question})
            answer = ask_user(result.question) if ask_user is not None else None
            if not answer:
                self.warn("planner asked a question but no answer channel exists; "
                          "running the raw request as a single step")
                return [request.text]
            conversation = (*result.conversation, Message("user", answer))
        self.warn("planner kept asking questions; running the raw request as a single step")
        return [request.text]

    def _execute_generation(self, generation: GenerationResult, scene: Scene) -> ExecutionOutcome:
        if generation.code is None:
            return ExecutionOutcome(
                status=Status.COMPILE_FAILED,
                scene_after=scene,
                errors=[CompileError("check", 1, 1, "builder produced no code block")],
            )
        result = compile_script(generation.code)
        if not result.ok:
            return ExecutionOutcome(
                status=Status.COMPILE_FAILED, scene_after=scene, errors=list(result.errors)
            )
        return execute(result.program, scene)
