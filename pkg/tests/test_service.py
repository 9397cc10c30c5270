"""Service API: sessions, prompts, events, interaction, persistence."""

import json
import time

import pytest
from fastapi.testclient import TestClient

from scenesmith.providers import ScriptedProvider
from scenesmith.service import create_app
from scenesmith.store import export_scene_text

from conftest import build_scene

CODE = "```\ncreate box shape=cube\n```"


def make_client(tmp_path, responses):
    queues = iter(responses)

    def factory():
        return ScriptedProvider(next(queues))

    app = create_app(factory, str(tmp_path / "store"))
    return TestClient(app)


def wait_for_stage(client, session_id, stage, timeout=10.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        body = client.get(f"/sessions/{session_id}/events.json").json()
        events = [e for e in body["events"] if e["stage"] == stage]
        if events:
            return body["events"]
        if not body["running"] and not body["pending_question"]:
            # One more read to avoid racing the final event append.
            body = client.get(f"/sessions/{session_id}/events.json").json()
            events = [e for e in body["events"] if e["stage"] == stage]
            if events:
                return body["events"]
        time.sleep(0.02)
    raise AssertionError(f"stage {stage!r} never appeared")


def wait_until_idle(client, session_id, timeout=10.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        body = client.get(f"/sessions/{session_id}/events.json").json()
        if not body["running"]:
            return body["events"]
        time.sleep(0.02)
    raise AssertionError("run never finished")


class TestSessions:
    def test_fresh_session_snapshot_empty(self, tmp_path):
        client = make_client(tmp_path, [[]])
        sid = client.post("/sessions", json={"config": "full LLMR"}).json()["session_id"]
        snap = client.get(f"/sessions/{sid}/snapshot").json()
        assert snap["hierarchy"] == "[]"
        assert snap["clock"] == 0.0

    def test_two_sessions_distinct(self, tmp_path):
        client = make_client(tmp_path, [[], []])
        a = client.post("/sessions", json={}).json()["session_id"]
        b = client.post("/sessions", json={}).json()["session_id"]
        assert a != b

    def test_create_with_imported_scene(self, tmp_path):
        scene = build_scene("create table shape=cube\ncreate apple shape=sphere parent=table")
        client = make_client(tmp_path, [[]])
        resp = client.post("/sessions", json={"scene_file": export_scene_text(scene)})
        sid = resp.json()["session_id"]
        snap = client.get(f"/sessions/{sid}/snapshot").json()
        doc = json.loads(snap["hierarchy"])
        assert doc[0]["name"] == "table"
        assert doc[0]["children"][0]["name"] == "apple"

    def test_unknown_session_404(self, tmp_path):
        client = make_client(tmp_path, [[]])
        assert client.get("/sessions/nope/snapshot").status_code == 404

    def test_bad_config_400(self, tmp_path):
        client = make_client(tmp_path, [[]])
        assert client.post("/sessions", json={"config": "mystery"}).status_code == 400

    def test_planner_override_flag(self, tmp_path):
        client = make_client(tmp_path, [[]])
        sid = client.post(
            "/sessions", json={"config": "full LLMR", "enable_planner": True}
        ).json()["session_id"]
        assert client.app.state.manager.get(sid).config.enable_planner is True

    def test_health(self, tmp_path):
        client = make_client(tmp_path, [[]])
        assert client.get("/health").json()["status"] == "ok"


class TestPromptFlow:
    def test_run_emits_events_and_updates_snapshot(self, tmp_path):
        responses = [["summary\nRELEVANT: none", "none", CODE, "PASS"]]
        client = make_client(tmp_path, responses)
        sid = client.post("/sessions", json={"config": "full LLMR"}).json()["session_id"]
        r = client.post(f"/sessions/{sid}/prompt", json={"text": "create a box"})
        assert r.status_code == 200
        events = wait_for_stage(client, sid, "episode_closed")
        stages = [e["stage"] for e in events]
        assert stages == ["plan", "analysis", "skills", "build_attempt", "inspect_verdict",
                          "execute", "episode_closed"]
        seqs = [e["sequence"] for e in events]
        assert seqs == list(range(len(events)))  # gapless, monotone
        closed = events[-1]
        assert closed["payload"]["status"] == "Success"
        assert closed["payload"]["final"] is True
        snap = client.get(f"/sessions/{sid}/snapshot").json()
        assert '"box"' in snap["hierarchy"]

    def test_empty_prompt_rejected(self, tmp_path):
        client = make_client(tmp_path, [[]])
        sid = client.post("/sessions", json={}).json()["session_id"]
        assert client.post(f"/sessions/{sid}/prompt", json={"text": "  "}).status_code == 422
        assert client.post(f"/sessions/{sid}/prompt", json={"text": ""}).status_code == 422

    def test_backfill_after_finish_and_two_subscribers_identical(self, tmp_path):
        responses = [["summary\nRELEVANT: none", "none", CODE, "PASS"]]
        client = make_client(tmp_path, responses)
        sid = client.post("/sessions", json={}).json()["session_id"]
        client.post(f"/sessions/{sid}/prompt", json={"text": "box please"})
        wait_until_idle(client, sid)
        first = client.get(f"/sessions/{sid}/events.json?from_sequence=0").json()["events"]
        second = client.get(f"/sessions/{sid}/events.json?from_sequence=0").json()["events"]
        assert first == second and first

    def test_event_log_reconstructs_attempt_trace(self, tmp_path):
        # Attempt 1 fails critique, attempt 2 passes: the stream must carry
        # the same build/inspect counts as the episode's internal trace.
        responses = [[
            "summary\nRELEVANT: none",
            "none",
            "```\ncreate wrong shape=cube\n```",
            "FAIL\nName it box instead.",
            "```\ncreate box shape=cube\n```",
            "PASS",
        ]]
        client = make_client(tmp_path, responses)
        sid = client.post("/sessions", json={"config": "full LLMR"}).json()["session_id"]
        client.post(f"/sessions/{sid}/prompt", json={"text": "create a box"})
        events = wait_for_stage(client, sid, "episode_closed")
        builds = [e for e in events if e["stage"] == "build_attempt"]
        verdicts = [e for e in events if e["stage"] == "inspect_verdict"]
        closed = [e for e in events if e["stage"] == "episode_closed"][0]
        assert len(builds) == 2 and len(verdicts) == 2
        assert closed["payload"]["attempts"] == 2
        assert [v["payload"]["verdict"] for v in verdicts] == ["fail", "pass"]
        session = client.app.state.manager.get(sid)
        assert len(session.episode_store.history[0].attempts) == len(builds)

    def test_from_sequence_beyond_head_empty(self, tmp_path):
        client = make_client(tmp_path, [[]])
        sid = client.post("/sessions", json={}).json()["session_id"]
        events = client.get(f"/sessions/{sid}/events.json?from_sequence=99").json()["events"]
        assert events == []

    def test_sse_stream_backfills(self, tmp_path):
        responses = [["summary\nRELEVANT: none", "none", CODE, "PASS"]]
        client = make_client(tmp_path, responses)
        sid = client.post("/sessions", json={}).json()["session_id"]
        client.post(f"/sessions/{sid}/prompt", json={"text": "box please"})
        wait_until_idle(client, sid)
        seen = []
        with client.stream("GET", f"/sessions/{sid}/events?until_idle=true") as resp:
            for line in resp.iter_lines():
                if line.startswith("data: "):
                    payload = json.loads(line[len("data: "):])
                    if "stage" in payload:
                        seen.append(payload)
        assert [e["stage"] for e in seen][:2] == ["plan", "analysis"]
        assert seen[-1]["stage"] == "episode_closed"


class TestClarify:
    def make_clarifying_client(self, tmp_path):
        responses = [[
            "empty scene\nRELEVANT: none",  # overview analysis
            "QUESTION: what color should the cube be?",
            "1. create a red cube named crimson",  # plan after answer
            "empty scene\nRELEVANT: none",  # step analysis
            "none",
            "```\ncreate crimson shape=cube\nset crimson color=#FF0000\n```",
            "PASS",
        ]]
        client = make_client(tmp_path, responses)
        sid = client.post(
            "/sessions", json={"config": "full LLMR", "enable_planner": True}
        ).json()["session_id"]
        return client, sid

    def test_clarify_roundtrip(self, tmp_path):
        client, sid = self.make_clarifying_client(tmp_path)
        client.post(f"/sessions/{sid}/prompt", json={"text": "make me a cube"})
        wait_for_stage(client, sid, "clarify")
        body = client.get(f"/sessions/{sid}/events.json").json()
        assert body["pending_question"] == "what color should the cube be?"
        r = client.post(f"/sessions/{sid}/respond", json={"answer": "red"})
        assert r.status_code == 200
        events = wait_for_stage(client, sid, "episode_closed")
        stages = [e["stage"] for e in events]
        assert "clarify" in stages and "plan" in stages
        assert stages.index("clarify") < stages.index("plan")

    def test_submit_while_awaiting_answer_is_run_in_flight(self, tmp_path):
        client, sid = self.make_clarifying_client(tmp_path)
        client.post(f"/sessions/{sid}/prompt", json={"text": "make me a cube"})
        wait_for_stage(client, sid, "clarify")
        resp = client.post(f"/sessions/{sid}/prompt", json={"text": "another"})
        assert resp.status_code == 409
        client.post(f"/sessions/{sid}/respond", json={"answer": "red"})
        wait_until_idle(client, sid)

    def test_respond_while_idle_409(self, tmp_path):
        client = make_client(tmp_path, [[]])
        sid = client.post("/sessions", json={}).json()["session_id"]
        assert client.post(f"/sessions/{sid}/respond", json={"answer": "hello"}).status_code == 409

    def test_empty_answer_422(self, tmp_path):
        client = make_client(tmp_path, [[]])
        sid = client.post("/sessions", json={}).json()["session_id"]
        assert client.post(f"/sessions/{sid}/respond", json={"answer": " "}).status_code == 422


class TestInteract:
    def test_handler_effect_visible_in_next_snapshot(self, tmp_path):
        scene = build_scene(
            "create button shape=cube\non_interact button { set self color=#00FF00 }"
        )
        client = make_client(tmp_path, [[]])
        sid = client.post("/sessions", json={"scene_file": export_scene_text(scene)}).json()[
            "session_id"
        ]
        before = json.loads(client.get(f"/sessions/{sid}/snapshot").json()["hierarchy"])
        assert before[0]["color"] == "#FFFFFF"
        r = client.post(f"/sessions/{sid}/interact", json={"name": "button"})
        assert r.status_code == 200
        after = json.loads(client.get(f"/sessions/{sid}/snapshot").json()["hierarchy"])
        assert after[0]["color"] == "#00FF00"

    def test_interact_absent_entity_404(self, tmp_path):
        client = make_client(tmp_path, [[]])
        sid = client.post("/sessions", json={}).json()["session_id"]
        assert client.post(f"/sessions/{sid}/interact", json={"name": "ghost"}).status_code == 404

    def test_tick_advances_clock(self, tmp_path):
        client = make_client(tmp_path, [[]])
        sid = client.post("/sessions", json={}).json()["session_id"]
        clock = client.post(f"/sessions/{sid}/tick", json={"dt": 0.5}).json()["clock"]
        assert clock == pytest.approx(0.5)


class TestGenerations:
    def test_save_list_reload(self, tmp_path):
        client = make_client(tmp_path, [[]])
        sid = client.post("/sessions", json={}).json()["session_id"]
        save = client.post(
            f"/sessions/{sid}/generations",
            json={"summary": "one cube", "source_text": "create keepsake shape=cube"},
        )
        assert save.status_code == 200
        gen_id = save.json()["generation_id"]
        listed = client.get(f"/sessions/{sid}/generations").json()["generations"]
        assert listed[0]["id"] == gen_id and listed[0]["summary"] == "one cube"
        reload_resp = client.post(f"/sessions/{sid}/generations/{gen_id}/reload")
        assert reload_resp.json()["status"] == "Success"
        assert '"keepsake"' in client.get(f"/sessions/{sid}/snapshot").json()["hierarchy"]

    def test_save_non_compiling_422(self, tmp_path):
        client = make_client(tmp_path, [[]])
        sid = client.post("/sessions", json={}).json()["session_id"]
        resp = client.post(
            f"/sessions/{sid}/generations",
            json={"summary": "bad", "source_text": "create x shape=whatnot"},
        )
        assert resp.status_code == 422
        assert resp.json()["detail"]["diagnostics"]

    def test_reload_unknown_404(self, tmp_path):
        client = make_client(tmp_path, [[]])
        sid = client.post("/sessions", json={}).json()["session_id"]
        assert client.post(f"/sessions/{sid}/generations/nope/reload").status_code == 404


class TestSceneTransfer:
    def test_export_import_round_trip(self, tmp_path):
        scene = build_scene("create relic shape=capsule\nset relic color=#ABCDEF")
        client = make_client(tmp_path, [[], []])
        a = client.post("/sessions", json={"scene_file": export_scene_text(scene)}).json()[
            "session_id"
        ]
        exported = client.get(f"/sessions/{a}/scene").text
        b = client.post("/sessions", json={}).json()["session_id"]
        r = client.post(f"/sessions/{b}/scene", json={"scene_file": exported})
        assert r.status_code == 200
        assert (
            client.get(f"/sessions/{b}/snapshot").json()["hierarchy"]
            == client.get(f"/sessions/{a}/snapshot").json()["hierarchy"]
        )

    def test_import_bad_version_400(self, tmp_path):
        client = make_client(tmp_path, [[]])
        sid = client.post("/sessions", json={}).json()["session_id"]
        r = client.post(
            f"/sessions/{sid}/scene",
            json={"scene_file": '{"scene_format": 42, "hierarchy": []}'},
        )
        assert r.status_code == 400
