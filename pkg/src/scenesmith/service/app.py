"""HTTP surface: commands over plain requests, events over SSE.

Endpoints: create-session, submit-prompt, respond, events (SSE stream +
JSON backfill), snapshot, interact, tick, save/list/reload generations,
scene export/import, health.
"""

from __future__ import annotations

import json
import threading
import time
from typing import Callable, Optional

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse, StreamingResponse
from pydantic import BaseModel, Field

from ..pipeline.config import resolve_config
from ..providers.base import ChatProvider
from ..runtime.commands import interact
from ..runtime.entities import EntityNotFound, HandlerError
from ..runtime.commands import tick as tick_scene
from ..runtime.serialize import scene_hash, serialize_hierarchy
from ..script.diagnostics import ScriptSource
from ..store.generations import SaveRejected, UnknownId
from ..store.scenefile import VersionMismatch, export_scene_text, import_scene_text
from .sessions import NotAwaitingAnswer, RunInFlight, SessionManager, UnknownSession


class CreateSessionBody(BaseModel):
    config: str = "full LLMR"  # preset name or config file path
    scene_file: Optional[str] = None  # inline scene-file text to import
    enable_planner: Optional[bool] = None  # override the preset's planner flag


class PromptBody(BaseModel):
    text: str = Field(min_length=1)


class RespondBody(BaseModel):
    answer: str = Field(min_length=1)


class InteractBody(BaseModel):
    name: str = Field(min_length=1)


class TickBody(BaseModel):
    dt: float = Field(gt=0)


class SaveGenerationBody(BaseModel):
    summary: str = Field(min_length=1)
    source_text: Optional[str] = None
    episode: Optional[int] = None  # index into this session's episode history


class ImportSceneBody(BaseModel):
    scene_file: str


def create_app(
    provider_factory: Callable[[], ChatProvider],
    store_root: str,
    tick_rate: float = 0.0,
    clarify_timeout: float = 120.0,
) -> FastAPI:
    app = FastAPI(title="scenesmith service", version="0.1.0")
    manager = SessionManager(provider_factory, store_root, clarify_timeout)
    app.state.manager = manager

    def get_session(session_id: str):
        try:
            return manager.get(session_id)
        except UnknownSession as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    if tick_rate > 0:
        def auto_tick() -> None:
            # Advance clocks only while someone is watching.
            period = 1.0 / tick_rate
            while True:
                time.sleep(period)
                for session in list(manager.sessions.values()):
                    if session.subscribers > 0 and not session.running:
                        with session.lock:
                            session.scene = tick_scene(session.scene, period)

        threading.Thread(target=auto_tick, daemon=True, name="auto-tick").start()

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "sessions": len(manager.sessions)}

    @app.post("/sessions")
    def create_session(body: CreateSessionBody) -> dict:
        try:
            config = resolve_config(body.config)
        except KeyError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        if body.enable_planner is not None:
            config.enable_planner = body.enable_planner
        session = manager.create(config)
        if body.scene_file:
            try:
                session.scene = import_scene_text(body.scene_file)
            except (VersionMismatch, ValueError) as exc:
                raise HTTPException(status_code=400, detail=str(exc))
        return {"session_id": session.id, "config": config.name}

    @app.post("/sessions/{session_id}/prompt")
    def submit_prompt(session_id: str, body: PromptBody) -> dict:
        session = get_session(session_id)
        if not body.text.strip():
            raise HTTPException(status_code=422, detail="prompt text must be non-empty")
        try:
            session.start_run(body.text, manager.clarify_timeout)
        except RunInFlight as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return {"session_id": session.id, "accepted": True}

    @app.post("/sessions/{session_id}/respond")
    def respond(session_id: str, body: RespondBody) -> dict:
        session = get_session(session_id)
        if not body.answer.strip():
            raise HTTPException(status_code=422, detail="answer must be non-empty")
        try:
            session.respond(body.answer)
        except NotAwaitingAnswer as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return {"accepted": True}

    @app.get("/sessions/{session_id}/events.json")
    def events_backfill(session_id: str, from_sequence: int = 0) -> dict:
        session = get_session(session_id)
        events = session.events_from(from_sequence)
        return {
            "events": [e.to_dict() for e in events],
            "running": session.running,
            "pending_question": session.pending_question,
        }

    @app.get("/sessions/{session_id}/events")
    def events_stream(
        session_id: str, from_sequence: int = 0, until_idle: bool = False
    ) -> StreamingResponse:
        """SSE stream: backfill from ``from_sequence``, then follow live.
        With ``until_idle`` the stream closes once no run is in flight and
        everything has been delivered (one-shot catch-up for tests and
        polling clients)."""
        session = get_session(session_id)

        def stream():
            session.subscribers += 1
            cursor = from_sequence
            try:
                while True:
                    events = session.wait_for_event(cursor, timeout=0.5)
                    if events:
                        for event in events:
                            yield f"data: {json.dumps(event.to_dict())}\n\n"
                        cursor = events[-1].sequence + 1
                    else:
                        if until_idle and not session.running and session.pending_question is None:
                            yield "event: idle\ndata: {}\n\n"
                            return
                        yield ": keepalive\n\n"
            finally:
                session.subscribers -= 1

        return StreamingResponse(stream(), media_type="text/event-stream")

    @app.get("/sessions/{session_id}/snapshot")
    def snapshot(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            return {
                "hierarchy": serialize_hierarchy(session.scene),
                "clock": session.scene.clock,
                "scene_hash": scene_hash(session.scene),
            }

    @app.post("/sessions/{session_id}/interact")
    def interact_entity(session_id: str, body: InteractBody) -> dict:
        session = get_session(session_id)
        with session.lock:
            if session.running:
                raise HTTPException(status_code=409, detail="run in flight")
            try:
                session.scene = interact(session.scene, body.name)
            except EntityNotFound as exc:
                raise HTTPException(status_code=404, detail=str(exc))
            except HandlerError as exc:
                raise HTTPException(
                    status_code=409,
                    detail={"kind": "HandlerError", "handler_index": exc.handler_index,
                            "message": str(exc)},
                )
            return {"ok": True, "scene_hash": scene_hash(session.scene)}

    @app.post("/sessions/{session_id}/tick")
    def tick(session_id: str, body: TickBody) -> dict:
        session = get_session(session_id)
        with session.lock:
            if session.running:
                raise HTTPException(status_code=409, detail="run in flight")
            session.scene = tick_scene(session.scene, body.dt)
            return {"clock": session.scene.clock}

    @app.post("/sessions/{session_id}/generations")
    def save_generation(session_id: str, body: SaveGenerationBody) -> dict:
        session = get_session(session_id)
        text = body.source_text
        if text is None and body.episode is not None:
            history = session.episode_store.history
            if not (0 <= body.episode < len(history)):
                raise HTTPException(status_code=404, detail=f"no episode {body.episode}")
            code = history[body.episode].code
            if code is None:
                raise HTTPException(status_code=409, detail="episode produced no code")
            text = code.text
        if text is None:
            raise HTTPException(status_code=422, detail="provide source_text or episode")
        try:
            gen_id = session.generations.save(ScriptSource(text=text, origin="saved"), body.summary)
        except SaveRejected as exc:
            raise HTTPException(
                status_code=422,
                detail={"message": "generation does not compile",
                        "diagnostics": [e.to_record() for e in exc.errors]},
            )
        return {"generation_id": gen_id}

    @app.get("/sessions/{session_id}/generations")
    def list_generations(session_id: str) -> dict:
        session = get_session(session_id)
        return {
            "generations": [
                {
                    "id": g.id,
                    "summary": g.summary,
                    "created_at": g.created_at,
                    "origin_session": g.origin_session,
                }
                for g in session.generations.list()
            ]
        }

    @app.post("/sessions/{session_id}/generations/{gen_id}/reload")
    def reload_generation(session_id: str, gen_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            if session.running:
                raise HTTPException(status_code=409, detail="run in flight")
            try:
                outcome = session.generations.reload(gen_id, session.scene)
            except UnknownId as exc:
                raise HTTPException(status_code=404, detail=str(exc))
            if outcome.ok:
                session.scene = outcome.scene_after
            return {
                "status": outcome.status.value,
                "errors": [str(e) for e in outcome.errors],
                "scene_hash": scene_hash(session.scene),
            }

    @app.get("/sessions/{session_id}/scene", response_class=PlainTextResponse)
    def export_scene(session_id: str) -> str:
        session = get_session(session_id)
        with session.lock:
            return export_scene_text(session.scene)

    @app.post("/sessions/{session_id}/scene")
    def import_scene(session_id: str, body: ImportSceneBody) -> dict:
        session = get_session(session_id)
        with session.lock:
            if session.running:
                raise HTTPException(status_code=409, detail="run in flight")
            try:
                session.scene = import_scene_text(body.scene_file)
            except (VersionMismatch, ValueError) as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            return {"ok": True, "scene_hash": scene_hash(session.scene)}

    return app
