#!/usr/bin/env python3
"""Capture a real service session into frontend/tests/fixtures/session.json.

Drives the actual HTTP app in-process (clarifying-question run that builds
a clickable cube, then an interaction and a saved generation) and records
every payload the console UI consumes, so the frontend mock server
replays genuine wire data.
"""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from fastapi.testclient import TestClient

from scenesmith.providers import ScriptedProvider
from scenesmith.service import create_app

OUT = ROOT / "frontend" / "tests" / "fixtures" / "session.json"

RESPONSES = [
    "The scene is empty.\nRELEVANT: none",  # overview analysis
    "QUESTION: what color should the cube be?",
    "1. create a red cube named crimson that recolors when clicked",
    "The scene is empty.\nRELEVANT: none",  # step analysis
    "interaction-tools",
    "Attempt with a stray name first:\n```\nset crimson color=#FF0000\n```",  # dry-run FAIL
    "```\ncreate crimson shape=cube\nset crimson color=#FF0000\n"
    "on_interact crimson { set self color=#00FF00 }\n```",
    "PASS",
]


def wait_idle(client, sid, timeout=15.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        body = client.get(f"/sessions/{sid}/events.json").json()
        if not body["running"]:
            return body
        time.sleep(0.02)
    raise RuntimeError("run never went idle")


def wait_question(client, sid, timeout=15.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        body = client.get(f"/sessions/{sid}/events.json").json()
        if body["pending_question"]:
            return body
        time.sleep(0.02)
    raise RuntimeError("no pending question appeared")


def main() -> None:
    app = create_app(lambda: ScriptedProvider(list(RESPONSES)), str(ROOT / "frontend" / ".store"))
    client = TestClient(app)
    sid = client.post("/sessions", json={"config": "full LLMR"}).json()["session_id"]
    client.app.state.manager.get(sid).config.enable_planner = True

    snapshot_initial = client.get(f"/sessions/{sid}/snapshot").json()
    assert client.post(f"/sessions/{sid}/prompt", json={"text": "make me a cube"}).status_code == 200

    body = wait_question(client, sid)
    events_before_answer = body["events"]
    pending_question = body["pending_question"]

    assert client.post(f"/sessions/{sid}/respond", json={"answer": "red"}).status_code == 200
    body = wait_idle(client, sid)
    all_events = body["events"]
    snapshot_final = client.get(f"/sessions/{sid}/snapshot").json()

    interact_before = snapshot_final
    assert client.post(f"/sessions/{sid}/interact", json={"name": "crimson"}).status_code == 200
    interact_after = client.get(f"/sessions/{sid}/snapshot").json()

    episode = 0
    save = client.post(
        f"/sessions/{sid}/generations",
        json={"summary": "A red cube named crimson that turns green when clicked.",
              "episode": episode},
    )
    assert save.status_code == 200, save.text
    generations = client.get(f"/sessions/{sid}/generations").json()["generations"]
    gen_id = generations[0]["id"]
    reload_result = client.post(f"/sessions/{sid}/generations/{gen_id}/reload").json()

    fixture = {
        "session_id": sid,
        "prompt": "make me a cube",
        "pending_question": pending_question,
        "answer": "red",
        "events_before_answer": events_before_answer,
        "events": all_events,
        "snapshot_initial": snapshot_initial,
        "snapshot_final": snapshot_final,
        "interact": {
            "entity": "crimson",
            "before": interact_before,
            "after": interact_after,
        },
        "generations": generations,
        "reload_result": reload_result,
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(fixture, indent=1))
    stages = [e["stage"] for e in all_events]
    print(f"wrote {OUT}")
    print("stages:", stages)


if __name__ == "__main__":
    main()
