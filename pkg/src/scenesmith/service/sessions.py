"""Session state: one scene, episode store, event log, and run slot each."""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Callable, Optional

from ..pipeline.config import PipelineConfig
from ..pipeline.episodes import EpisodeStore
from ..pipeline.orchestrate import Pipeline
from ..providers.base import ChatProvider
from ..runtime.entities import Scene
from ..store.generations import GenerationStore

STAGES = (
    "analysis",
    "plan",
    "clarify",
    "skills",
    "build_attempt",
    "inspect_verdict",
    "execute",
    "episode_closed",
    "error",
)


@dataclass
class PipelineEvent:
    session: str
    sequence: int
    stage: str
    payload: dict
    timestamp: float = field(default_factory=time.time)

    def to_dict(self) -> dict:
        return {
            "session": self.session,
            "sequence": self.sequence,
            "stage": self.stage,
            "payload": self.payload,
            "timestamp": self.timestamp,
        }


class UnknownSession(Exception):
    pass


class RunInFlight(Exception):
    pass


class NotAwaitingAnswer(Exception):
    pass


class Session:
    def __init__(self, session_id: str, config: PipelineConfig, provider: ChatProvider,
                 store_root: str):
        self.id = session_id
        self.config = config
        self.scene = Scene()
        self.events: list[PipelineEvent] = []
        self.lock = threading.RLock()
        self.event_cond = threading.Condition(self.lock)
        self.run_thread: Optional[threading.Thread] = None
        self.pending_question: Optional[str] = None
        self.answer: Optional[str] = None
        self.answer_ready = threading.Event()
        self.episode_store = EpisodeStore()
        self.generations = GenerationStore(store_root, session=session_id)
        self.pipeline = Pipeline(
            provider,
            config,
            store=self.episode_store,
            on_event=self.record_event,
            session=session_id,
        )
        self.subscribers = 0

    # -- events --

    def record_event(self, stage: str, payload: dict) -> None:
        with self.event_cond:
            event = PipelineEvent(
                session=self.id, sequence=len(self.events), stage=stage, payload=payload
            )
            self.events.append(event)
            self.event_cond.notify_all()

    def events_from(self, from_sequence: int) -> list[PipelineEvent]:
        with self.lock:
            return self.events[from_sequence:]

    def wait_for_event(self, from_sequence: int, timeout: float) -> list[PipelineEvent]:
        with self.event_cond:
            if len(self.events) <= from_sequence:
                self.event_cond.wait(timeout)
            return self.events[from_sequence:]

    # -- run lifecycle --

    @property
    def running(self) -> bool:
        return self.run_thread is not None and self.run_thread.is_alive()

    def start_run(self, text: str, clarify_timeout: float) -> None:
        with self.lock:
            if self.running:
                raise RunInFlight(f"session {self.id} already has a run in flight")
            scene = self.scene

            def ask_user(question: str) -> Optional[str]:
                with self.lock:
                    self.pending_question = question
                    self.answer = None
                    self.answer_ready.clear()
                got = self.answer_ready.wait(timeout=clarify_timeout)
                with self.lock:
                    self.pending_question = None
                    return self.answer if got else None

            def run() -> None:
                try:
                    result = self.pipeline.run_request(text, scene, ask_user=ask_user)
                    with self.lock:
                        self.scene = result.final_scene
                except Exception as exc:  # surfaced to clients, never silent
                    self.record_event("error", {"message": str(exc)})

            self.run_thread = threading.Thread(target=run, daemon=True, name=f"run-{self.id}")
            self.run_thread.start()

    def respond(self, answer: str) -> None:
        with self.lock:
            if self.pending_question is None:
                raise NotAwaitingAnswer(f"session {self.id} has no pending question")
            self.answer = answer
        self.answer_ready.set()


class SessionManager:
    def __init__(self, provider_factory: Callable[[], ChatProvider], store_root: str,
                 clarify_timeout: float = 120.0):
        self.provider_factory = provider_factory
        self.store_root = store_root
        self.clarify_timeout = clarify_timeout
        self.sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, config: PipelineConfig) -> Session:
        session_id = uuid.uuid4().hex[:12]
        session = Session(session_id, config, self.provider_factory(), self.store_root)
        with self._lock:
            self.sessions[session_id] = session
        return session

    def get(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is None:
            raise UnknownSession(f"unknown session {session_id!r}")
        return session
